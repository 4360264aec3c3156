"""Decomposition of Frobenius push-forwards of line bundles into summands.

The multiplication map F_m comes from the lattice inclusion N -> (1/m)N;
for a smooth complete toric variety, F_m* of a line bundle splits into
line bundles whose classes are computed by an exact floor formula over
the residue box P_m^n.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache

from ._intlinalg import dot, mat_inverse_unimodular, mat_vec
from .divisor_pic import class_of
from .lattice_fan import Fan

DEFAULT_M0 = 6
DEFAULT_M_MAX = 768


class StabilizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ResidueVector:
    """A residue vector u in P_m^n, 0 <= u_i < m."""

    u: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(int(x) for x in self.u))
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if any(x < 0 or x >= self.m for x in self.u):
            raise ValueError(f"residue vector {self.u} out of bounds for m={self.m}")


@dataclass(frozen=True)
class SummandSet:
    """Summand classes of F_m* O(sum w_i D_i) with multiplicities."""

    classes: frozenset[tuple[int, ...]]
    multiplicities: dict[tuple[int, ...], int] = field(compare=False, hash=False)
    m_used: int = 1
    w: tuple[int, ...] = ()

    def sorted_classes(self):
        return sorted(self.classes)

    def total(self) -> int:
        return sum(self.multiplicities.values())


def q_vector(fan: Fan, cone, rv: ResidueVector, w) -> tuple[int, ...]:
    """The integer vector q in A A_sigma^{-1}(u - w_sigma) + w = m q + r with
    r in P_m^l: q_i = floor((<v_i, A_sigma^{-1}(u - w_sigma)> + w_i) / m),
    computed with exact integer floor division."""
    cone = tuple(cone)
    u, m = rv.u, rv.m
    if len(u) != fan.dim:
        raise ValueError("residue vector has wrong length")
    inv = mat_inverse_unimodular(fan.cone_matrix(cone))
    s = mat_vec(inv, tuple(u[k] - w[i] for k, i in enumerate(cone)))
    return tuple((dot(v, s) + wi) // m for v, wi in zip(fan.rays, w))


def summands(fan: Fan, w, m: int, cone=None, threads: int = 1) -> SummandSet:
    """Summand classes of F_m* O(D), D = sum w_i D_i, with multiplicities.

    Iterates u over the residue box P_m^n with the base cone (or the given
    maximal cone); the multiset of q-vectors has size m^n.  The result is
    independent of the partitioning used for parallel evaluation.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    w = tuple(w)
    if len(w) != fan.n_rays:
        raise ValueError("w has wrong length")
    cone = fan.base_rays() if cone is None else tuple(cone)
    inv = mat_inverse_unimodular(fan.cone_matrix(cone))
    rays = fan.rays
    n = fan.dim
    w_cone = tuple(w[i] for i in cone)

    def count_chunk(chunk):
        counts: dict[tuple[int, ...], int] = {}
        for u in chunk:
            s = mat_vec(inv, tuple(a - b for a, b in zip(u, w_cone)))
            q = tuple((dot(v, s) + wi) // m for v, wi in zip(rays, w))
            c = class_of(fan, q)
            counts[c] = counts.get(c, 0) + 1
        return counts

    box = itertools.product(range(m), repeat=n)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        chunks = []
        it = iter(box)
        while True:
            chunk = list(itertools.islice(it, 4096))
            if not chunk:
                break
            chunks.append(chunk)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(count_chunk, chunks))
        mult: dict[tuple[int, ...], int] = {}
        for p in partials:
            for k, v in p.items():
                mult[k] = mult.get(k, 0) + v
    else:
        mult = count_chunk(box)
    assert sum(mult.values()) == m**n
    return SummandSet(frozenset(mult), mult, m, w)


def stable_summands(
    fan: Fan, w, m0: int = DEFAULT_M0, m_max: int | None = None, threads: int = 1
) -> SummandSet:
    """Stable summand set: double m from m0 until two consecutive class sets
    agree.  Termination is guaranteed by finiteness of the full summand set;
    aborts with a diagnostic if no stabilization occurs below m_max."""
    if m_max is None:
        m_max = int(os.environ.get("TORICFROB_MMAX", DEFAULT_M_MAX))
    w = tuple(w)
    prev = summands(fan, w, m0, threads=threads)
    m = 2 * m0
    while m <= m_max:
        cur = summands(fan, w, m, threads=threads)
        if cur.classes == prev.classes:
            return cur
        prev = cur
        m *= 2
    raise StabilizationError(
        f"summand set did not stabilize below m_max={m_max} (w={w})"
    )


@lru_cache(maxsize=None)
def stable_summands_cached(fan: Fan, w: tuple) -> SummandSet:
    return stable_summands(fan, w)


def dual_identity_check(fan: Fan, w, m: int) -> bool:
    """(F_m* L)^dual = F_m*(L^dual x omega^(1-m)) at the level of class sets:
    the negated classes of summands(w, m) must equal summands(-w+(m-1)*1, m)."""
    w = tuple(w)
    left = {
        class_of(fan, tuple(-x for x in c))
        for c in summands(fan, w, m).classes
    }
    w_dual = tuple(-x + (m - 1) for x in w)
    right = summands(fan, w_dual, m).classes
    return left == set(right)


def sigma_independence_check(fan: Fan, w, m: int) -> bool:
    """Recompute the summand multiset with every maximal cone as base; the
    normalized class multisets must all agree."""
    ref = None
    for cone in fan.max_cones:
        s = summands(fan, w, m, cone=cone)
        if ref is None:
            ref = s.multiplicities
        elif s.multiplicities != ref:
            return False
    return True


def divisibility_check(fan: Fan, w, l: int, m: int) -> bool:
    """Class-set inclusion of summands(w, m) in summands(l*w, l*m)."""
    small = summands(fan, w, m).classes
    big = summands(fan, tuple(l * x for x in w), l * m).classes
    return small <= big


def bondal_reduce(d) -> tuple[int, ...]:
    """Reduce coefficients to 0 (if >= 0) or -1 (if < 0)."""
    return tuple(0 if x >= 0 else -1 for x in d)
