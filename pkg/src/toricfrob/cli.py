"""Command-line front end emitting reproducible JSON certificate reports.

Exit codes: 0 all checks pass, 1 a verification failed (witnesses in the
report), 2 usage or input error.  Stdout is deterministic for fixed
inputs (timing goes to stderr); TORICFROB_MMAX overrides the
stabilization cap.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from importlib.metadata import PackageNotFoundError, version

from . import atlas
from . import collections as coll
from . import cohomology as coh
from . import frobenius as fr
from . import intersection_nef as nef
from . import lattice_fan as lf
from .divisor_pic import class_of

try:
    VERSION = version("toricfrob")
except PackageNotFoundError:
    VERSION = "0.1.0"


class InputError(Exception):
    pass


def _load_fan(spec: str) -> lf.Fan:
    """A variety id from the atlas, or a path to a fan JSON file."""
    try:
        return atlas.get(spec).fan
    except atlas.AtlasError:
        pass
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return lf.fan_from_json(data)
    except FileNotFoundError:
        raise InputError(f"no such variety id or file: {spec!r}")
    except (json.JSONDecodeError, lf.FanError, ValueError) as exc:
        raise InputError(f"cannot read fan from {spec!r}: {exc}")


def _parse_coeffs(text: str, n: int, what: str):
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"{what} must be a comma-separated integer list")
    if len(vals) != n:
        raise InputError(f"{what} needs {n} entries, got {len(vals)}")
    return vals


def _emit(args, payload: dict, inputs: dict, ok: bool, t0: float) -> int:
    body = json.dumps(payload, sort_keys=True)
    report = {
        "command": args._echo,
        "input_hash": hashlib.sha256(
            json.dumps(inputs, sort_keys=True).encode()
        ).hexdigest(),
        "version": VERSION,
        "ok": ok,
        "result": payload,
        "result_hash": hashlib.sha256(body.encode()).hexdigest(),
    }
    print(json.dumps(report, sort_keys=True, indent=2))
    print(f"toricfrob: {1000 * (time.time() - t0):.0f} ms", file=sys.stderr)
    return 0 if ok else 1


def _summands_payload(fan: lf.Fan, name: str, w, m_arg, threads: int) -> dict:
    if m_arg == "auto":
        s = fr.stable_summands(fan, w, threads=threads)
    else:
        try:
            m = int(m_arg)
        except ValueError:
            raise InputError("--m must be an integer or 'auto'")
        if m < 1:
            raise InputError("--m must be >= 1")
        s = fr.summands(fan, w, m, threads=threads)
    return {
        "variety": name,
        "w": list(w),
        "m_used": s.m_used,
        "classes": [
            {"coeffs": list(c), "mult": s.multiplicities[c]}
            for c in s.sorted_classes()
        ],
    }


def _collection_payload(fan: lf.Fan, classes, subset_search: bool) -> tuple[dict, bool]:
    rep = coll.check_collection(fan, classes)
    payload = {
        "classes": [list(c) for c in rep.classes],
        "exceptional": all(rep.is_exceptional_each),
        "strong": rep.strong,
        "strong_failures": [
            {"pair": list(f.pair), "degree": f.degree, "dim": f.dim}
            for f in rep.strong_failures
        ],
        "order": list(rep.order) if rep.order is not None else None,
        "order_cycle": list(rep.order_cycle) if rep.order_cycle else None,
        "size_matches_rank": rep.size_matches_rank,
        "rank": rep.rank,
        "passed": rep.passed,
    }
    ok = rep.passed
    if subset_search:
        subs = coll.find_strong_subsets(fan, classes, rep.rank)
        payload["strong_subsets"] = [[list(c) for c in s] for s in subs]
    return payload, ok


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="toricfrob",
        description="Frobenius push-forward summands and exceptional-collection "
        "certificates on smooth complete toric varieties",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for residue enumeration "
                        "(results are independent of this)")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_atlas = sub.add_parser("atlas", help="built-in variety database")
    atlas_sub = p_atlas.add_subparsers(dest="atlas_cmd", required=True)
    atlas_sub.add_parser("list", help="list ids with rho, cone count, Fano flag")
    p_export = atlas_sub.add_parser("export", help="write the fan JSON of an entry")
    p_export.add_argument("id")

    p_val = sub.add_parser("validate", help="validate a fan (id or JSON file)")
    p_val.add_argument("fan")

    p_walls = sub.add_parser("walls", help="wall table with double Z-weights")
    p_walls.add_argument("fan")
    p_walls.add_argument("--tsv", action="store_true")

    p_frob = sub.add_parser("frobenius", help="Frobenius push-forward summands")
    p_frob.add_argument("fan")
    p_frob.add_argument("--w", default=None, help="divisor coefficients a1,a2,...")
    p_frob.add_argument("--m", default="auto", help="residue order, or 'auto'")

    p_coh = sub.add_parser("cohomology", help="cohomology of a line bundle")
    p_coh.add_argument("fan")
    p_coh.add_argument("--d", required=True, help="divisor coefficients a1,a2,...")

    p_coll = sub.add_parser("collection", help="exceptional-collection report "
                            "for the stable summand classes")
    p_coll.add_argument("fan")
    p_coll.add_argument("--subset-search", action="store_true")

    p_full = sub.add_parser("fullness", help="fullness certificate for the "
                            "stable summand classes")
    p_full.add_argument("fan")
    p_full.add_argument("--coeff-bound", type=int, default=coll.DEFAULT_COEFF_BOUND)
    p_full.add_argument("--twist-bound", type=int, default=coll.DEFAULT_TWIST_BOUND)

    sub.add_parser("flop-check", help="compare the two contractions of ray v2 "
                   "of fano3-18")

    p_push = sub.add_parser("pushforward-check", help="summand pushforward "
                            "check along a blowdown")
    p_push.add_argument("src")
    p_push.add_argument("dst")

    sub.add_parser("enumerate-fano3", help="blowdown closure of the maximal "
                   "Fano 3-folds")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    raw = list(argv) if argv is not None else sys.argv[1:]
    # thread count is execution configuration, not an input: results and
    # reports must be byte-identical across thread counts
    echo = []
    skip = False
    for tok in raw:
        if skip:
            skip = False
            continue
        if tok == "--threads":
            skip = True
            continue
        if tok.startswith("--threads="):
            continue
        echo.append(tok)
    args._echo = echo
    t0 = time.time()

    try:
        return _dispatch(args, t0)
    except InputError as exc:
        print(f"toricfrob: error: {exc}", file=sys.stderr)
        return 2
    except (fr.StabilizationError, coh.BoxCertificationError, lf.FanError,
            atlas.AtlasError) as exc:
        print(f"toricfrob: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, t0: float) -> int:
    threads = max(1, args.threads)

    if args.cmd == "atlas" and args.atlas_cmd == "list":
        entries = [
            {
                "id": e.id,
                "rho": e.rho,
                "max_cones": e.n_max_cones,
                "fano": e.fano,
                "dim": e.fan.dim,
                "note": e.note,
            }
            for e in (atlas.get(i) for i in atlas.list_ids())
        ]
        payload = {"entries": entries, "build_notes": atlas.build_notes()}
        return _emit(args, payload, {"cmd": "atlas-list"}, True, t0)

    if args.cmd == "atlas" and args.atlas_cmd == "export":
        try:
            entry = atlas.get(args.id)
        except atlas.AtlasError as exc:
            raise InputError(str(exc))
        print(json.dumps(lf.fan_to_json(entry.fan), sort_keys=True, indent=2))
        return 0

    if args.cmd == "validate":
        fan = _load_fan(args.fan)
        rep = lf.validate(fan)
        payload = {
            "smooth": rep.smooth,
            "complete": rep.complete,
            "simplicial": rep.simplicial,
            "errors": list(rep.errors),
            "ok": rep.ok,
        }
        return _emit(args, payload, {"cmd": "validate", "fan": lf.fan_to_json(fan)},
                     rep.ok, t0)

    if args.cmd == "walls":
        fan = _load_fan(args.fan)
        table = nef.double_weight_table(fan)
        if args.tsv:
            sys.stdout.write(nef.double_weight_tsv(fan))
            return 0
        payload = {"variety": fan.name or args.fan, "walls": table}
        return _emit(args, payload, {"cmd": "walls", "fan": lf.fan_to_json(fan)},
                     True, t0)

    if args.cmd == "frobenius":
        fan = _load_fan(args.fan)
        w = (
            _parse_coeffs(args.w, fan.n_rays, "--w")
            if args.w is not None
            else (0,) * fan.n_rays
        )
        payload = _summands_payload(fan, fan.name or args.fan, w, args.m, threads)
        inputs = {"cmd": "frobenius", "fan": lf.fan_to_json(fan), "w": list(w),
                  "m": args.m}
        return _emit(args, payload, inputs, True, t0)

    if args.cmd == "cohomology":
        fan = _load_fan(args.fan)
        d = _parse_coeffs(args.d, fan.n_rays, "--d")
        table = coh.cohomology(fan, d)
        payload = {
            "variety": fan.name or args.fan,
            "d": list(d),
            "h": list(table.dims),
            "support_size": table.support_size,
            "euler": table.euler,
        }
        inputs = {"cmd": "cohomology", "fan": lf.fan_to_json(fan), "d": list(d)}
        return _emit(args, payload, inputs, True, t0)

    if args.cmd == "collection":
        fan = _load_fan(args.fan)
        classes = fr.stable_summands_cached(fan, (0,) * fan.n_rays).sorted_classes()
        payload, ok = _collection_payload(fan, classes, args.subset_search)
        inputs = {"cmd": "collection", "fan": lf.fan_to_json(fan)}
        return _emit(args, payload, inputs, ok, t0)

    if args.cmd == "fullness":
        fan = _load_fan(args.fan)
        classes = fr.stable_summands_cached(fan, (0,) * fan.n_rays).sorted_classes()
        cert = coll.fullness_certificate(
            fan, classes, coeff_bound=args.coeff_bound, twist_bound=args.twist_bound
        )
        payload = {
            "variety": fan.name or args.fan,
            "classes": [list(c) for c in classes],
            "status": cert.status,
            "missing": [list(c) for c in cert.missing],
            "closure_size": cert.closure_size,
            "moves": len(cert.trace),
            "coeff_bound": cert.coeff_bound,
            "twist_bound": cert.twist_bound,
            "generator_m": list(cert.generator_m),
        }
        inputs = {"cmd": "fullness", "fan": lf.fan_to_json(fan),
                  "bounds": [args.coeff_bound, args.twist_bound]}
        return _emit(args, payload, inputs, cert.certified, t0)

    if args.cmd == "flop-check":
        xp, xm = atlas.flop_pair()
        sp = fr.stable_summands_cached(xp.fan, (0,) * xp.fan.n_rays)
        sm = fr.stable_summands_cached(xm.fan, (0,) * xm.fan.n_rays)
        cp = sorted(sp.classes)
        transported = [class_of(xm.fan, c) for c in cp]
        hp = coh.hom_matrix(xp.fan, cp)
        hm = coh.hom_matrix(xm.fan, transported)
        same_sets = {tuple(c) for c in transported} == set(sm.classes)
        ok = (
            lf.validate(xp.fan).ok
            and lf.validate(xm.fan).ok
            and same_sets
            and hp == hm
        )
        payload = {
            "plus": {"id": xp.id, "cones": [list(c) for c in xp.fan.max_cones]},
            "minus": {"id": xm.id, "cones": [list(c) for c in xm.fan.max_cones]},
            "shared_rays": [list(r) for r in xp.fan.rays],
            "summand_count": [len(sp.classes), len(sm.classes)],
            "classes_correspond": same_sets,
            "hom_matrix_equal": hp == hm,
            "hom_matrix": hp,
            "fans_isomorphic": lf.isomorphic(xp.fan, xm.fan) is not None,
        }
        return _emit(args, payload, {"cmd": "flop-check"}, ok, t0)

    if args.cmd == "pushforward-check":
        src = atlas.get(args.src) if args.src in atlas.list_ids() else None
        dst = atlas.get(args.dst) if args.dst in atlas.list_ids() else None
        if src is None or dst is None:
            raise InputError("pushforward-check needs two atlas variety ids")
        key_dst = lf.canonical_key(dst.fan)
        edges = [
            bd for bd in lf.blowdowns(src.fan)
            if lf.canonical_key(bd.result) == key_dst
        ]
        if not edges:
            raise InputError(f"no blowdown from {args.src} to {args.dst}")
        results = [coll.pushforward_collection_check(src.fan, bd) for bd in edges]
        payload = {
            "src": args.src,
            "dst": args.dst,
            "edges": [
                {"ray": bd.ray, "center": list(bd.center), "ok": okk}
                for bd, okk in zip(edges, results)
            ],
        }
        return _emit(args, payload, {"cmd": "pushforward-check",
                                     "pair": [args.src, args.dst]},
                     all(results), t0)

    if args.cmd == "enumerate-fano3":
        enum = atlas.enumerate_fano3()
        ok = len(enum.entries) == 18 and all(
            e.n_max_cones == 2 * e.rho + 2 and e.fano for e in enum.entries
        )
        payload = {
            "count": len(enum.entries),
            "entries": [
                {"id": e.id, "rho": e.rho, "max_cones": e.n_max_cones,
                 "rays": [list(r) for r in e.fan.rays]}
                for e in enum.entries
            ],
            "blowdown_edges": sorted({(s, d) for s, d, _, _ in enum.edges}),
            "notes": enum.notes,
        }
        return _emit(args, payload, {"cmd": "enumerate-fano3"}, ok, t0)

    raise InputError(f"unknown command {args.cmd!r}")


if __name__ == "__main__":
    sys.exit(main())
