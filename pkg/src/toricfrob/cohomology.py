"""Exact sheaf cohomology of line bundles on smooth complete toric varieties.

For each lattice degree u, the contribution to h^p is the reduced rational
(co)homology in degree p-1 of the subcomplex of the fan's boundary complex
induced on the rays with <u, v_i> < -a_i; the conventions are
H~^{-1}(empty) = 1 and H~^{-1}(nonempty) = 0, so h^0 counts the lattice
points of the divisor polytope.  Contributing degrees are enumerated over
a box around the Cartier vertices, certified by a zero boundary shell.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ._intlinalg import dot, mat_inverse_unimodular, mat_vec, rank
from .divisor_pic import class_of
from .intersection_nef import is_nef
from .lattice_fan import Fan

DEFAULT_MAX_ENLARGE = 5


class BoxCertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class DegreeBox:
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def points(self):
        return itertools.product(
            *(range(lo, hi + 1) for lo, hi in zip(self.lower, self.upper))
        )

    def shell_points(self):
        for u in self.points():
            if any(x == lo or x == hi for x, lo, hi in zip(u, self.lower, self.upper)):
                yield u

    def expand(self, margin: int) -> "DegreeBox":
        return DegreeBox(
            tuple(x - margin for x in self.lower),
            tuple(x + margin for x in self.upper),
        )


@dataclass(frozen=True)
class CohomologyTable:
    dims: tuple[int, ...]
    support_size: int
    box: DegreeBox

    def h(self, i: int) -> int:
        return self.dims[i]

    @property
    def euler(self) -> int:
        return sum((-1) ** i * d for i, d in enumerate(self.dims))


@lru_cache(maxsize=None)
def _fan_faces(fan: Fan) -> frozenset:
    faces = set()
    for c in fan.max_cones:
        for k in range(len(c) + 1):
            faces.update(itertools.combinations(c, k))
    return frozenset(faces)


@lru_cache(maxsize=None)
def _reduced_betti(fan: Fan, vertices: frozenset) -> tuple[int, ...]:
    """Reduced rational Betti numbers (b~_{-1}, b~_0, ..., b~_{n-1}) of the
    subcomplex of the fan's boundary complex induced on `vertices`."""
    n = fan.dim
    out = [0] * (n + 1)
    if not vertices:
        out[0] = 1  # H~^{-1} of the void complex
        return tuple(out)
    # faces_by_dim[k] holds the k-dimensional faces ((k+1)-element subsets)
    faces_by_dim: list[set] = [set() for _ in range(n)]
    for c in fan.max_cones:
        inner = tuple(i for i in c if i in vertices)
        for k in range(1, len(inner) + 1):
            faces_by_dim[k - 1].update(itertools.combinations(inner, k))
    verts = sorted(faces_by_dim[0])
    parent = {v[0]: v[0] for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if n >= 2:
        for a, b in faces_by_dim[1]:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    comps = len({find(v[0]) for v in verts})
    out[1] = comps - 1
    # ranks[k] = rank of the boundary map C_k -> C_{k-1};
    # rank d_1 = #vertices - #components, full matrices only above that
    ranks = [0] * (n + 1)
    ranks[1] = len(verts) - comps
    for k in range(2, n):
        ranks[k] = _boundary_rank(
            sorted(faces_by_dim[k - 1]), sorted(faces_by_dim[k])
        )
    for k in range(1, n):
        out[k + 1] = len(faces_by_dim[k]) - ranks[k] - ranks[k + 1]
    return tuple(out)


def _boundary_rank(lower_faces, upper_faces) -> int:
    if not upper_faces or not lower_faces:
        return 0
    index = {f: i for i, f in enumerate(lower_faces)}
    rows = []
    for f in upper_faces:
        row = [0] * len(lower_faces)
        for i in range(len(f)):
            sub = f[:i] + f[i + 1:]
            row[index[sub]] = (-1) ** i
        rows.append(row)
    return rank(tuple(tuple(r) for r in rows))


def _cartier_vertices(fan: Fan, d):
    for c in fan.max_cones:
        inv = mat_inverse_unimodular(fan.cone_matrix(c))
        yield mat_vec(inv, tuple(-d[i] for i in c))


def seed_box(fan: Fan, d, margin: int = 1) -> DegreeBox:
    """Bounding box of the Cartier vertices, expanded by the margin."""
    verts = list(_cartier_vertices(fan, d))
    lower = tuple(min(v[k] for v in verts) for k in range(fan.dim))
    upper = tuple(max(v[k] for v in verts) for k in range(fan.dim))
    return DegreeBox(lower, upper).expand(margin)


def _negative_rays(fan: Fan, d, u) -> frozenset:
    return frozenset(
        i for i, v in enumerate(fan.rays) if dot(u, v) < -d[i]
    )


def _contribution(fan: Fan, d, u) -> tuple[int, ...]:
    return _reduced_betti(fan, _negative_rays(fan, d, u))


def cohomology(
    fan: Fan, d, max_enlarge: int = DEFAULT_MAX_ENLARGE, with_support: bool = False
):
    """Cohomology table (h^0, ..., h^n) of O(D), D = sum d_i D_i.

    The degree box is certified by checking that its boundary shell
    contributes nothing; on failure the box is enlarged and retried, and a
    BoxCertificationError is raised past the enlargement limit.
    """
    d = class_of(fan, d)
    box = seed_box(fan, d)
    for _ in range(max_enlarge + 1):
        if all(
            not any(_contribution(fan, d, u)) for u in box.shell_points()
        ):
            break
        box = box.expand(max(1, max(box.upper) - min(box.lower)))
    else:
        raise BoxCertificationError(
            f"degree box failed to certify after {max_enlarge} enlargements"
        )
    dims = [0] * (fan.dim + 1)
    support = []
    for u in box.points():
        contrib = _contribution(fan, d, u)
        if any(contrib):
            support.append(u)
            for p, b in enumerate(contrib):
                dims[p] += b
    table = CohomologyTable(tuple(dims), len(support), box)
    if with_support:
        return table, tuple(support)
    return table


@lru_cache(maxsize=None)
def _cohomology_cached(fan: Fan, d) -> CohomologyTable:
    return cohomology(fan, d)


def ext_dims(fan: Fan, l1, l2) -> CohomologyTable:
    """Hom^i(L1, L2) = H^i(L2 - L1) for line bundles, as a cohomology table."""
    diff = tuple(b - a for a, b in zip(l1, l2))
    return _cohomology_cached(fan, class_of(fan, diff))


def hom_matrix(fan: Fan, classes) -> list[list[int]]:
    """Matrix of Hom^0 dimensions, entry [i][j] = h^0(c_j - c_i)."""
    classes = [tuple(c) for c in classes]
    return [
        [ext_dims(fan, ci, cj).h(0) for cj in classes]
        for ci in classes
    ]


def euler_pairing(fan: Fan, l1, l2) -> int:
    return ext_dims(fan, l1, l2).euler


def gram_matrix(fan: Fan, classes) -> list[list[int]]:
    classes = [tuple(c) for c in classes]
    return [
        [euler_pairing(fan, ci, cj) for cj in classes]
        for ci in classes
    ]


def nef_vanishing_check(fan: Fan, d) -> bool:
    """If D is nef, its higher cohomology must vanish (toric vanishing)."""
    if not is_nef(fan, d):
        return True
    table = _cohomology_cached(fan, class_of(fan, d))
    return all(x == 0 for x in table.dims[1:])
