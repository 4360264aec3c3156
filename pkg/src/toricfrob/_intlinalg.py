"""Exact integer/rational linear algebra helpers.

Everything here works on plain Python ints (arbitrary precision) or
fractions.Fraction; no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


def gcd_vec(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def is_primitive(v) -> bool:
    return gcd_vec(v) == 1


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m):
    return tuple(zip(*m))


def det(m) -> int:
    """Exact determinant of a square integer matrix (Bareiss, fraction-free)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_inverse_unimodular(m) -> Mat:
    """Integer inverse of a matrix with determinant +-1."""
    d = det(m)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det={d})")
    n = len(m)
    # adjugate via cofactors; n <= 4 in practice so this stays cheap
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(m[r][c] for c in range(n) if c != j)
                for r in range(n)
                if r != i
            )
            cof[i][j] = (-1) ** (i + j) * det(minor)
    # inverse = adj / det = cof^T / det; 1/det = det for det = +-1
    return tuple(tuple(cof[j][i] * d for j in range(n)) for i in range(n))


def solve_unimodular(m, b) -> Vec:
    """Solve m @ x = b exactly for unimodular integer m."""
    return mat_vec(mat_inverse_unimodular(m), b)


def solve_rational(m, b):
    """Solve m @ x = b over Q for a nonsingular square matrix. Returns
    a tuple of Fractions, or None if m is singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return None
        a[k], a[piv] = a[piv], a[k]
        inv = a[k][k]
        a[k] = [x / inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return tuple(a[i][n] for i in range(n))


def rank(m) -> int:
    """Rank over Q of an integer matrix (fraction-free elimination)."""
    if not m or not m[0]:
        return 0
    a = [list(row) for row in m]
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            if a[i][c] != 0:
                p, q = a[r][c], a[i][c]
                a[i] = [p * x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r
