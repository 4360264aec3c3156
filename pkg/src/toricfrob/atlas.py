"""Built-in variety database: projective spaces, Hirzebruch surfaces, del
Pezzo surfaces, the explicitly given Fano 3-folds, the Fano 4-fold, and the
full enumeration of the 18 smooth toric Fano 3-folds by blowdown closure
from the three birationally maximal ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._intlinalg import mat_inverse_unimodular, mat_vec, solve_rational, transpose
from .intersection_nef import is_fano
from .lattice_fan import (
    Blowdown,
    Fan,
    blowdowns,
    canonical_key,
    product,
    validate,
    walls,
)


class AtlasError(RuntimeError):
    pass


@dataclass(frozen=True)
class VarietyEntry:
    id: str
    fan: Fan
    rho: int
    n_max_cones: int
    note: str = ""

    @property
    def fano(self) -> bool:
        return is_fano(self.fan)


# -- explicit ray data -----------------------------------------------------

_FANO8_RAYS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, -1), (1, -1, 0), (-1, 0, 0))
_FANO11_RAYS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, -1), (0, 0, -1), (-1, -1, 2))
_FANO18_RAYS = (
    (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, -1, 1),
    (0, -1, 0), (0, 0, -1), (0, 1, -1), (-1, 1, 0),
)
_V4_RAYS = (
    (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
    (-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1),
    (1, 1, 1, 1), (-1, -1, -1, -1),
)

# Blowup/blowdown incidences among the 18 Fano 3-folds, decoded from the
# published birational-relations diagram: (source, target) means the source
# contracts onto the target. Used as a cross-check and to name the
# blowup-only varieties (12), (14), (15), (16).
FIG1_EDGES = frozenset({
    (17, 13), (13, 6), (13, 9),
    (18, 15), (18, 14), (18, 16),
    (16, 10), (15, 10), (14, 9), (15, 9), (15, 8), (14, 7), (15, 12),
    (9, 2), (10, 3), (11, 4), (12, 5), (8, 5), (10, 5),
    (12, 3), (11, 3), (12, 2),
    (5, 1), (3, 1),
})


def fan_from_convex_rays(rays, name: str = "", base_first: bool = True) -> Fan:
    """Reconstruct the (face-fan) cone structure from rays in convex position.

    The rays must be the vertices of a lattice polytope with the origin in
    its interior; every facet must be a unimodular simplex.  Non-simplicial
    facets are reported instead of silently resolved.
    """
    rays = tuple(tuple(r) for r in rays)
    n = len(rays[0])
    ones = (1,) * n
    facets = set()
    for subset in itertools.combinations(range(len(rays)), n):
        u = solve_rational(tuple(rays[i] for i in subset), ones)
        if u is None:
            continue
        vals = [sum(Fraction(x) * y for x, y in zip(u, v)) for v in rays]
        if any(val > 1 for val in vals):
            continue
        flat = frozenset(i for i, val in enumerate(vals) if val == 1)
        if flat != frozenset(subset):
            raise AtlasError(
                f"non-simplicial facet {sorted(flat)} while reconstructing {name!r}"
            )
        facets.add(subset)
    cones = tuple(sorted(facets))
    base = 0
    if base_first:
        first = tuple(range(n))
        if first in cones:
            base = cones.index(first)
    fan = Fan(n, rays, cones, base, name)
    rep = validate(fan)
    if not rep.ok:
        raise AtlasError(f"reconstructed fan for {name!r} is invalid: {rep}")
    return fan


# -- standard constructors --------------------------------------------------


def projective_space(n: int) -> Fan:
    rays = tuple(
        tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
    ) + ((-1,) * n,)
    cones = tuple(itertools.combinations(range(n + 1), n))
    return Fan(n, rays, cones, 0, f"p{n}")


def hirzebruch(d: int) -> Fan:
    rays = ((1, 0), (0, 1), (-1, d), (0, -1))
    cones = ((0, 1), (1, 2), (2, 3), (0, 3))
    return Fan(2, rays, cones, 0, f"hirzebruch-{d}")


def del_pezzo_y2() -> Fan:
    rays = ((1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1))
    cones = ((0, 1), (1, 3), (2, 3), (2, 4), (0, 4))
    return Fan(2, rays, cones, 0, "y2")


def del_pezzo_y3() -> Fan:
    rays = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
    cones = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5))
    return Fan(2, rays, cones, 0, "y3")


def p1_bundle(base: Fan, d, name: str = "") -> Fan:
    """P(O + O(D)) over a toric base: rays lift by the coefficients of D,
    plus the two fiber rays."""
    d = tuple(d)
    rays = tuple(v + (a,) for v, a in zip(base.rays, d))
    up = (0,) * base.dim + (1,)
    down = (0,) * base.dim + (-1,)
    rays = rays + (up, down)
    l = base.n_rays
    cones = tuple(c + (l,) for c in base.max_cones) + tuple(
        c + (l + 1,) for c in base.max_cones
    )
    fan = Fan(base.dim + 1, rays, cones, base.base_cone, name)
    rep = validate(fan)
    if not rep.ok:
        raise AtlasError(f"projectivized bundle fan invalid: {rep}")
    return fan


def _p2_bundle_over_p1_twist1() -> Fan:
    # P(O + O + O(1)) over P^1
    rays = ((1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (1, 0, -1))
    cones = ((0, 1, 3), (1, 2, 3), (0, 2, 3), (0, 1, 4), (1, 2, 4), (0, 2, 4))
    return Fan(3, rays, cones, 0)


def normalize_convention(fan: Fan) -> Fan:
    """Relabel rays (base cone first) and change lattice coordinates so the
    base cone's rays become the standard basis."""
    base = fan.base_rays()
    m = transpose(mat_inverse_unimodular(fan.cone_matrix(base)))
    order = list(base) + [i for i in range(fan.n_rays) if i not in base]
    pos = {old: new for new, old in enumerate(order)}
    rays = tuple(mat_vec(m, fan.rays[i]) for i in order)
    cones = tuple(tuple(sorted(pos[i] for i in c)) for c in fan.max_cones)
    return Fan(fan.dim, rays, cones, fan.base_cone, fan.name)


# -- Fano 3-fold enumeration -------------------------------------------------


def fano3_explicit_11() -> Fan:
    return fan_from_convex_rays(_FANO11_RAYS, "fano3-11")


def fano3_explicit_18() -> Fan:
    return fan_from_convex_rays(_FANO18_RAYS, "fano3-18")


def fano3_explicit_8() -> Fan:
    return fan_from_convex_rays(_FANO8_RAYS, "fano3-8")


def v4_fourfold() -> Fan:
    return fan_from_convex_rays(_V4_RAYS, "v4", base_first=False)


def _reference_models() -> dict[int, Fan]:
    p1 = projective_space(1)
    p2 = projective_space(2)
    p1p1 = product(p1, p1)
    sigma1 = hirzebruch(1)
    return {
        1: projective_space(3),
        2: product(p2, p1),
        3: p1_bundle(p2, (0, 0, 1)),
        4: p1_bundle(p2, (0, 0, 2)),
        5: _p2_bundle_over_p1_twist1(),
        6: product(p1p1, p1),
        7: p1_bundle(p1p1, (1, 0, 1, 0)),
        8: fano3_explicit_8(),
        9: product(sigma1, p1),
        10: p1_bundle(sigma1, (1, 1, 0, 0)),
        11: fano3_explicit_11(),
        13: product(del_pezzo_y2(), p1),
        17: product(del_pezzo_y3(), p1),
        18: fano3_explicit_18(),
    }


@dataclass
class Fano3Enumeration:
    entries: list[VarietyEntry]
    edges: list[tuple[str, str, Blowdown, Fan]]  # (src id, dst id, blowdown, src fan)
    notes: list[str]


@lru_cache(maxsize=None)
def enumerate_fano3() -> Fano3Enumeration:
    """Closure of {(11), (17), (18)} under Fano blowdowns.

    Deduplicates by fan isomorphism and yields exactly 18 classes, labeled
    by matching against reference models and blowdown incidences; anything
    ambiguous would be labeled `fano3-unlabeled-k` and flagged in the notes.
    """
    notes: list[str] = []
    seeds = [fano3_explicit_11(), product(del_pezzo_y3(), projective_space(1)),
             fano3_explicit_18()]
    reps: dict = {}
    down: dict = {}  # canonical key -> set of canonical keys of Fano blowdown targets
    bds: dict = {}   # canonical key -> list of Blowdown
    work = []
    for f in seeds:
        k = canonical_key(f)
        if k not in reps:
            reps[k] = f
            work.append(k)
    while work:
        k = work.pop()
        fan = reps[k]
        down[k] = set()
        bds[k] = []
        for bd in blowdowns(fan):
            if not is_fano(bd.result):
                continue
            k2 = canonical_key(bd.result)
            down[k].add(k2)
            bds[k].append(bd)
            if k2 not in reps:
                reps[k2] = bd.result
                work.append(k2)

    labels = _label(reps, down, notes)

    # present each labeled class by its reference model (the explicit ray
    # data or the named product/bundle construction) when there is one
    models = _reference_models()
    entries = []
    for k, fan in reps.items():
        label = labels[k]
        eid = f"fano3-{label}" if isinstance(label, int) else label
        fan = models[label] if label in models else fan
        fan = fan.with_name(eid)
        entries.append(
            VarietyEntry(
                id=eid,
                fan=fan,
                rho=fan.picard_rank,
                n_max_cones=len(fan.max_cones),
                note=_NOTES.get(label, "derived by blowdown closure"),
            )
        )
    entries.sort(key=lambda e: (e.rho, _weight_multiset(e.fan), canonical_key(e.fan)))

    edges = []
    id_by_key = {canonical_key(e.fan): e.id for e in entries}
    for k, bdlist in bds.items():
        src = id_by_key[k]
        for bd in bdlist:
            edges.append((src, id_by_key[canonical_key(bd.result)], bd, reps[k]))

    _cross_check_fig1(entries, edges, notes)
    return Fano3Enumeration(entries, edges, notes)


def _weight_multiset(fan: Fan):
    return tuple(sorted(tuple(sorted(w.alphas)) for w in walls(fan)))


_NOTES = {
    1: "projective 3-space",
    2: "P2 x P1",
    3: "P(O + O(1)) over P2",
    4: "P(O + O(2)) over P2",
    5: "P(O + O + O(1)) over P1",
    6: "P1 x P1 x P1",
    7: "P(O + O(f1+f2)) over P1 x P1",
    8: "P(O + O(f1-f2)) over P1 x P1, explicit rays",
    9: "P1 x Hirzebruch-1",
    10: "P(O + O(s+f)) over Hirzebruch-1",
    11: "explicit rays",
    12: "blowup-only variety, named via blowdown incidences",
    13: "P1 x Y2",
    14: "blowup-only variety, named via blowdown incidences",
    15: "blowup-only variety, named via blowdown incidences",
    16: "blowup-only variety, named via blowdown incidences",
    17: "P1 x Y3",
    18: "explicit rays",
}


def _label(reps, down, notes):
    labels: dict = {}
    taken: dict[int, object] = {}
    models = _reference_models()
    for k, fan in reps.items():
        for num, model in models.items():
            if num in taken:
                continue
            if canonical_key(model) == k:
                labels[k] = num
                taken[num] = k
                break
    # (12): the unique rho=3 class not matching any explicit model
    rho3_left = [k for k, f in reps.items() if f.picard_rank == 3 and k not in labels]
    if len(rho3_left) == 1:
        labels[rho3_left[0]] = 12
        taken[12] = rho3_left[0]
    # (14), (15), (16): rho=4 blowups of (18), separated by which labeled
    # rho=3 varieties they contract to ((14) hits (7), (15) hits (12))
    rho4_left = [k for k, f in reps.items() if f.picard_rank == 4 and k not in labels]
    if 12 in taken and len(rho4_left) == 3:
        def targets(k):
            return {labels[t] for t in down.get(k, ()) if t in labels}

        has7 = [k for k in rho4_left if 7 in targets(k)]
        has12 = [k for k in rho4_left if 12 in targets(k)]
        if len(has7) == 1 and len(has12) == 1 and has7[0] != has12[0]:
            labels[has7[0]] = 14
            labels[has12[0]] = 15
            rest = next(k for k in rho4_left if k not in (has7[0], has12[0]))
            labels[rest] = 16
        else:
            notes.append(
                "could not separate the rho=4 blowup varieties (14)/(15)/(16)"
            )
    counter = itertools.count(1)
    for k in reps:
        if k not in labels:
            labels[k] = f"fano3-unlabeled-{next(counter)}"
            notes.append(f"unlabeled enumeration class with rho={reps[k].picard_rank}")
    return labels


def _cross_check_fig1(entries, edges, notes):
    numeric = {}
    for e in entries:
        if e.id.startswith("fano3-") and e.id[6:].isdigit():
            numeric[e.id] = int(e.id[6:])
    computed = set()
    for src, dst, _, _ in edges:
        if src in numeric and dst in numeric:
            computed.add((numeric[src], numeric[dst]))
    missing = FIG1_EDGES - computed
    if missing:
        notes.append(f"blowdown relations in the published diagram not found: {sorted(missing)}")
    extra = computed - FIG1_EDGES
    if extra:
        notes.append(f"blowdown relations beyond the published diagram: {sorted(extra)}")


# -- flop pair ---------------------------------------------------------------


@lru_cache(maxsize=None)
def flop_pair():
    """The two contractions of ray v2 of fano3-18 (centers {v1,v8} and
    {v3,v7}); both sides share the same 7-ray list, so divisor classes are
    transported by the identity on coefficient vectors."""
    f18 = fano3_explicit_18()
    bds = [bd for bd in blowdowns(f18) if bd.ray == 1]
    if len(bds) != 2:
        raise AtlasError(f"expected two contractions of v2 on fano3-18, got {len(bds)}")
    bds.sort(key=lambda bd: bd.center)
    plus, minus = bds
    if plus.result.rays != minus.result.rays:
        raise AtlasError("flop sides do not share their ray list")
    x_plus = VarietyEntry(
        "flop-plus", plus.result.with_name("flop-plus"),
        plus.result.picard_rank, len(plus.result.max_cones),
        f"fano3-18 contracted along center {plus.center}",
    )
    x_minus = VarietyEntry(
        "flop-minus", minus.result.with_name("flop-minus"),
        minus.result.picard_rank, len(minus.result.max_cones),
        f"fano3-18 contracted along center {minus.center}",
    )
    return x_plus, x_minus


# -- registry ----------------------------------------------------------------


def _fixed_entry(eid: str, fan: Fan, note: str) -> VarietyEntry:
    return VarietyEntry(eid, fan.with_name(eid), fan.picard_rank,
                        len(fan.max_cones), note)


@lru_cache(maxsize=None)
def _registry() -> dict[str, VarietyEntry]:
    reg: dict[str, VarietyEntry] = {}
    for n in (1, 2, 3):
        f = projective_space(n)
        reg[f"p{n}"] = _fixed_entry(f"p{n}", f, f"projective {n}-space")
    for d in (0, 1, 2, 3):
        reg[f"hirzebruch-{d}"] = _fixed_entry(
            f"hirzebruch-{d}", hirzebruch(d), "Hirzebruch surface"
        )
    reg["y2"] = _fixed_entry("y2", del_pezzo_y2(), "del Pezzo, P2 blown up in 2 points")
    reg["y3"] = _fixed_entry("y3", del_pezzo_y3(), "del Pezzo, P2 blown up in 3 points")
    reg["v4"] = _fixed_entry("v4", v4_fourfold(), "Fano 4-fold, explicit rays")
    for e in enumerate_fano3().entries:
        reg[e.id] = e
    xp, xm = flop_pair()
    reg[xp.id] = xp
    reg[xm.id] = xm
    return reg


def get(eid: str) -> VarietyEntry:
    """Look up a variety by id ('p3', 'hirzebruch-2', 'y3', 'fano3-11', ...).

    `hirzebruch-<d>` and `p<n>` are accepted for any d >= 0, n >= 1.
    """
    reg = _registry()
    if eid in reg:
        return reg[eid]
    if eid.startswith("hirzebruch-"):
        try:
            d = int(eid.split("-", 1)[1])
        except ValueError:
            raise AtlasError(f"unknown variety id {eid!r}") from None
        if d >= 0:
            return _fixed_entry(eid, hirzebruch(d), "Hirzebruch surface")
    if eid.startswith("p") and eid[1:].isdigit() and int(eid[1:]) >= 1:
        return _fixed_entry(eid, projective_space(int(eid[1:])), "projective space")
    raise AtlasError(f"unknown variety id {eid!r}")


def list_ids() -> list[str]:
    return sorted(_registry())


def build_notes() -> list[str]:
    return list(enumerate_fano3().notes)
