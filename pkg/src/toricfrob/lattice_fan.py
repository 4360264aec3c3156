"""Rational simplicial fans with exact integer arithmetic.

A fan is given by its rays (primitive integer vectors) and the list of
maximal cones (index tuples into the ray list), together with a
distinguished maximal cone used as the base for divisor normal forms.
All maximal cones are full-dimensional and, on valid fans, unimodular.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from ._intlinalg import (
    det,
    is_primitive,
    mat_inverse_unimodular,
    mat_mul,
    mat_vec,
    solve_rational,
    transpose,
)


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    base_cone: int = 0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        )
        for r in self.rays:
            if len(r) != self.dim:
                raise FanError(f"ray {r} has wrong length (dim={self.dim})")
        for c in self.max_cones:
            if len(set(c)) != self.dim:
                raise FanError(f"maximal cone {c} is not full-dimensional")
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise FanError(f"cone {c} has out-of-range ray index")
        if not (0 <= self.base_cone < len(self.max_cones)):
            raise FanError("base_cone index out of range")

    # -- basic accessors -------------------------------------------------

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @property
    def picard_rank(self) -> int:
        return len(self.rays) - self.dim

    def cone_matrix(self, cone):
        """Rows are the generators of the given cone (tuple of ray indices)."""
        return tuple(self.rays[i] for i in cone)

    def base_rays(self) -> tuple[int, ...]:
        return self.max_cones[self.base_cone]

    def base_matrix_inv(self):
        return _base_matrix_inv(self)

    def contains(self, cone, v):
        """Coordinates of v in the cone's generator basis (exact rationals),
        or None if v is outside or the cone is degenerate."""
        lam = solve_rational(transpose(self.cone_matrix(cone)), v)
        if lam is None:
            return None
        return lam if all(x >= 0 for x in lam) else None

    def locate(self, v):
        """Indices of all maximal cones containing v."""
        return [k for k, c in enumerate(self.max_cones) if self.contains(c, v) is not None]

    def with_name(self, name: str) -> "Fan":
        return Fan(self.dim, self.rays, self.max_cones, self.base_cone, name)

    def with_base_cone(self, k: int) -> "Fan":
        return Fan(self.dim, self.rays, self.max_cones, k, self.name)


@lru_cache(maxsize=None)
def _base_matrix_inv(fan: Fan):
    return mat_inverse_unimodular(fan.cone_matrix(fan.base_rays()))


@dataclass(frozen=True)
class Wall:
    """Codimension-1 cone shared by two maximal cones.

    The integer relation  v_a + v_b + sum_j alphas[j] * v_ridge[j] = 0
    holds exactly; alphas are the double Z-weights, alphas[j] sitting on
    the side of ridge[j].
    """

    ridge: tuple[int, ...]
    apex_a: int
    apex_b: int
    alphas: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    smooth: bool
    complete: bool
    simplicial: bool
    errors: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete and self.simplicial and not self.errors


@dataclass(frozen=True)
class Blowdown:
    """A contraction removing ray `ray`, with v_ray = sum of center rays."""

    ray: int
    center: tuple[int, ...]
    result: Fan

    def push_index(self, i: int) -> int:
        """Ray index on the source mapped to the result (i != ray)."""
        if i == self.ray:
            raise ValueError("contracted ray has no image index")
        return i if i < self.ray else i - 1

    @property
    def center_in_result(self) -> tuple[int, ...]:
        """The blowup center as a cone of the result fan."""
        return tuple(self.push_index(i) for i in self.center)


# -- validation ----------------------------------------------------------


def _wall_pairing(fan: Fan):
    """Map (n-1)-subset -> list of maximal-cone indices containing it."""
    pairing: dict[tuple[int, ...], list[int]] = {}
    for k, c in enumerate(fan.max_cones):
        for sub in itertools.combinations(c, fan.dim - 1):
            pairing.setdefault(sub, []).append(k)
    return pairing


def _probe_points(fan: Fan):
    for signs in itertools.product((-1, 1), repeat=fan.dim):
        yield signs
    for r in fan.rays:
        yield tuple(-x for x in r)


def validate(fan: Fan) -> ValidationReport:
    """Check smoothness and completeness of the fan; collects all errors."""
    errors = []
    if len(set(fan.rays)) != len(fan.rays):
        errors.append("duplicated rays")
    for r in fan.rays:
        if not is_primitive(r):
            errors.append(f"non-primitive ray {r}")
    used = {i for c in fan.max_cones for i in c}
    if used != set(range(fan.n_rays)):
        errors.append("rays not covered by maximal cones")
    if len(set(fan.max_cones)) != len(fan.max_cones):
        errors.append("duplicated maximal cones")

    simplicial = True
    smooth = True
    for c in fan.max_cones:
        d = det(fan.cone_matrix(c))
        if d == 0:
            simplicial = False
            smooth = False
            errors.append(f"degenerate cone {c}")
        elif d not in (1, -1):
            smooth = False

    complete = simplicial and not errors
    if complete:
        # every wall candidate shared by exactly two maximal cones
        pairing = _wall_pairing(fan)
        unpaired = [sub for sub, ks in pairing.items() if len(ks) != 2]
        if unpaired:
            complete = False
        else:
            # facet connectivity of the dual graph
            adj: dict[int, set[int]] = {k: set() for k in range(len(fan.max_cones))}
            for ks in pairing.values():
                adj[ks[0]].add(ks[1])
                adj[ks[1]].add(ks[0])
            seen = {0}
            stack = [0]
            while stack:
                for nb in adj[stack.pop()]:
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            if len(seen) != len(fan.max_cones):
                complete = False
        if complete:
            # deterministic probe set must land inside the support
            for p in _probe_points(fan):
                hits = fan.locate(p)
                if not hits:
                    complete = False
                    break
                interior = [
                    k for k in hits
                    if all(x > 0 for x in fan.contains(fan.max_cones[k], p))
                ]
                if len(interior) > 1:
                    errors.append(f"overlapping cones at probe {p}")
                    complete = False
                    break
        if complete:
            # a ray lying inside a foreign cone signals an overlap
            for i, r in enumerate(fan.rays):
                for c in fan.max_cones:
                    if i not in c and fan.contains(c, r) is not None:
                        errors.append(f"ray {i} lies inside foreign cone {c}")
                        complete = False
                        break
                if not complete:
                    break

    return ValidationReport(smooth, complete, simplicial, tuple(errors))


# -- walls ---------------------------------------------------------------


@lru_cache(maxsize=None)
def walls(fan: Fan) -> tuple[Wall, ...]:
    """All codimension-1 walls with their double Z-weights.

    Requires a smooth complete fan.  For each wall, the relation
    v_a + v_b + sum alphas[j] v_j = 0 is solved exactly and verified.
    """
    rep = validate(fan)
    if not rep.ok:
        raise FanError(f"walls() needs a smooth complete fan: {rep}")
    pairing = _wall_pairing(fan)
    out = []
    for sub in sorted(pairing):
        ka, kb = pairing[sub]
        ca, cb = fan.max_cones[ka], fan.max_cones[kb]
        a = next(i for i in ca if i not in sub)
        b = next(i for i in cb if i not in sub)
        if a > b:
            a, b = b, a
            ca = cb
        # coordinates of v_b in the basis given by cone (sub + {a})
        lam = mat_vec(
            transpose(mat_inverse_unimodular(fan.cone_matrix(ca))), fan.rays[b]
        )
        pos = {i: k for k, i in enumerate(ca)}
        if lam[pos[a]] != -1:
            raise FanError(f"inconsistent wall relation at ridge {sub}")
        alphas = tuple(-lam[pos[j]] for j in sub)
        # the defining identity, checked exactly
        for t in range(fan.dim):
            s = fan.rays[a][t] + fan.rays[b][t]
            s += sum(al * fan.rays[j][t] for al, j in zip(alphas, sub))
            if s != 0:
                raise FanError(f"wall relation failed at ridge {sub}")
        out.append(Wall(sub, a, b, alphas))
    return tuple(out)


# -- star subdivision and blowdowns --------------------------------------


def star_subdivide(fan: Fan, tau) -> tuple[Fan, int]:
    """Star subdivision at the cone spanned by ray indices tau (|tau| >= 2).

    The new ray is the sum of tau's primitive generators; every maximal
    cone containing tau is replaced by its star subdivision.
    """
    tau = tuple(sorted(tau))
    if len(tau) < 2:
        raise FanError("subdivision center must have dimension >= 2")
    if not any(set(tau) <= set(c) for c in fan.max_cones):
        raise FanError(f"{tau} is not a face of any maximal cone")
    v_new = tuple(sum(fan.rays[i][t] for i in tau) for t in range(fan.dim))
    if not is_primitive(v_new):
        raise FanError(f"new ray {v_new} is not primitive")
    e = fan.n_rays
    new_cones = []
    for c in fan.max_cones:
        if set(tau) <= set(c):
            for j in tau:
                new_cones.append(tuple(sorted((set(c) - {j}) | {e})))
        else:
            new_cones.append(c)
    old_base = fan.max_cones[fan.base_cone]
    base = new_cones.index(old_base) if old_base in new_cones else _lex_base(new_cones)
    out = Fan(fan.dim, fan.rays + (v_new,), tuple(new_cones), base, fan.name)
    rep = validate(out)
    if not rep.ok:
        raise FanError(f"star subdivision produced an invalid fan: {rep}")
    return out, e


def _lex_base(cones) -> int:
    return min(range(len(cones)), key=lambda k: cones[k])


def blowdowns(fan: Fan) -> list[Blowdown]:
    """All contractions of a ray e with v_e = sum of an adjacent cone tau.

    Each returned result is a validated smooth complete fan obtained by
    replacing every maximal cone containing e with (cone - e) + tau.
    """
    found = []
    for e in range(fan.n_rays):
        star = [c for c in fan.max_cones if e in c]
        neighbors = sorted({i for c in star for i in c if i != e})
        for size in range(2, fan.dim + 1):
            for tau in itertools.combinations(neighbors, size):
                if any(
                    sum(fan.rays[i][t] for i in tau) != fan.rays[e][t]
                    for t in range(fan.dim)
                ):
                    continue
                bd = _try_contract(fan, e, tau)
                if bd is not None:
                    found.append(bd)
    return found


def _try_contract(fan: Fan, e: int, tau) -> Blowdown | None:
    new_cones = []
    seen = set()
    for c in fan.max_cones:
        if e in c:
            merged = tuple(sorted((set(c) - {e}) | set(tau)))
            if len(merged) != fan.dim:
                return None
        else:
            merged = c
        if merged not in seen:
            seen.add(merged)
            new_cones.append(merged)
    # drop ray e and reindex
    def reindex(i):
        return i if i < e else i - 1

    rays = fan.rays[:e] + fan.rays[e + 1:]
    cones = tuple(tuple(reindex(i) for i in c) for c in new_cones)
    old_base = fan.max_cones[fan.base_cone]
    if e not in old_base:
        base = cones.index(tuple(reindex(i) for i in old_base))
    else:
        base = _lex_base(cones)
    try:
        out = Fan(fan.dim, rays, cones, base, "")
    except FanError:
        return None
    if not validate(out).ok:
        return None
    return Blowdown(e, tuple(sorted(tau)), out)


# -- products and primitive collections ----------------------------------


def product(f1: Fan, f2: Fan) -> Fan:
    """Product fan: rays embedded block-diagonally, cones are pairwise unions."""
    z1, z2 = (0,) * f1.dim, (0,) * f2.dim
    rays = tuple(r + z2 for r in f1.rays) + tuple(z1 + r for r in f2.rays)
    off = f1.n_rays
    cones = tuple(
        c1 + tuple(i + off for i in c2)
        for c1 in f1.max_cones
        for c2 in f2.max_cones
    )
    base = f1.base_cone * len(f2.max_cones) + f2.base_cone
    name = f"{f1.name} x {f2.name}" if f1.name and f2.name else ""
    out = Fan(f1.dim + f2.dim, rays, cones, base, name)
    rep = validate(out)
    if not rep.ok:
        raise FanError(f"product fan invalid: {rep}")
    return out


@lru_cache(maxsize=None)
def primitive_collections(fan: Fan) -> tuple[tuple[int, ...], ...]:
    """Minimal sets of rays spanning no cone of the fan."""
    faces = set()
    for c in fan.max_cones:
        for k in range(len(c) + 1):
            faces.update(itertools.combinations(c, k))
    out = []
    for k in range(2, fan.n_rays + 1):
        for s in itertools.combinations(range(fan.n_rays), k):
            if s in faces:
                continue
            if all(sub in faces for sub in itertools.combinations(s, k - 1)):
                out.append(s)
    return tuple(out)


# -- fan isomorphism and canonical form -----------------------------------


def isomorphic(f1: Fan, f2: Fan):
    """A unimodular matrix M with M @ v mapping rays of f1 bijectively onto
    rays of f2 and maximal cones onto maximal cones, or None.

    The search enumerates images of f1's base-cone ray basis over all
    maximal cones and ray orderings of f2.
    """
    if f1.dim != f2.dim or f1.n_rays != f2.n_rays:
        return None
    if len(f1.max_cones) != len(f2.max_cones):
        return None
    base = f1.base_rays()
    a0_inv_t = transpose(mat_inverse_unimodular(f1.cone_matrix(base)))
    ray_index = {r: i for i, r in enumerate(f2.rays)}
    cones2 = set(f2.max_cones)
    for c2 in f2.max_cones:
        for perm in itertools.permutations(c2):
            w = tuple(f2.rays[i] for i in perm)
            m = mat_mul(transpose(w), a0_inv_t)
            phi = []
            ok = True
            for v in f1.rays:
                img = mat_vec(m, v)
                j = ray_index.get(img)
                if j is None:
                    ok = False
                    break
                phi.append(j)
            if not ok or len(set(phi)) != len(phi):
                continue
            mapped = {tuple(sorted(phi[i] for i in c)) for c in f1.max_cones}
            if mapped == cones2:
                return m
    return None


@lru_cache(maxsize=None)
def canonical_key(fan: Fan):
    """A canonical invariant of the fan under GL(n,Z) x ray relabeling.

    Two fans have equal keys iff they are isomorphic; the key also gives a
    deterministic ordering for fan collections.
    """
    best = None
    for c in fan.max_cones:
        for perm in itertools.permutations(c):
            m = mat_inverse_unimodular(transpose(tuple(fan.rays[i] for i in perm)))
            new_rays = sorted(mat_vec(m, v) for v in fan.rays)
            index = {r: i for i, r in enumerate(new_rays)}
            cones = tuple(sorted(
                tuple(sorted(index[mat_vec(m, fan.rays[i])] for i in cone))
                for cone in fan.max_cones
            ))
            key = (tuple(new_rays), cones)
            if best is None or key < best:
                best = key
    return best


# -- JSON wire format ------------------------------------------------------


def fan_to_json(fan: Fan) -> dict:
    return {
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
        "base_cone": fan.base_cone,
        "name": fan.name,
    }


def fan_from_json(data) -> Fan:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return Fan(
            dim=int(data["dim"]),
            rays=tuple(tuple(int(x) for x in r) for r in data["rays"]),
            max_cones=tuple(tuple(int(i) for i in c) for c in data["max_cones"]),
            base_cone=int(data.get("base_cone", 0)),
            name=str(data.get("name", "")),
        )
    except (KeyError, TypeError) as exc:
        raise FanError(f"malformed fan JSON: {exc}") from exc
