"""Independent oracles used to freeze expected values.

Everything here is deliberately written against the raw definitions
(explicit floor formulas, brute-force lattice enumeration, rational
elimination) without going through the package's own linear algebra or
fan machinery.
"""

from fractions import Fraction
from itertools import product


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def lattice_points_box(radius, dim):
    return product(range(-radius, radius + 1), repeat=dim)


def polytope_point_count(rays, coeffs):
    """Number of u with <u, v_i> >= -a_i for all i, by brute force over a
    box grown until no solution touches its boundary (so it cannot clip)."""
    dim = len(rays[0])
    radius = sum(abs(a) for a in coeffs) + 2
    while True:
        count = 0
        clipped = False
        for u in lattice_points_box(radius, dim):
            if all(dot(u, v) >= -a for v, a in zip(rays, coeffs)):
                count += 1
                if any(abs(x) == radius for x in u):
                    clipped = True
        if not clipped:
            return count
        radius *= 2


def h1_p1_sum(*degrees):
    """h^1 of a direct sum of line bundles on the projective line."""
    return sum(max(0, -d - 1) for d in degrees)


def rational_solve(rows, rhs):
    """Gaussian elimination over Q; returns None when singular."""
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        aug[col] = [x / aug[col][col] for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def wall_alphas_rational(rays, ridge, apex_a, apex_b):
    """Solve v_a + v_b + sum alpha_j v_j = 0 by least-assumption elimination:
    treats the alphas as unknowns of an overdetermined system and verifies
    consistency row by row."""
    dim = len(rays[0])
    unknowns = len(ridge)
    rows = [[Fraction(rays[j][t]) for j in ridge] for t in range(dim)]
    rhs = [Fraction(-(rays[apex_a][t] + rays[apex_b][t])) for t in range(dim)]
    # pick an invertible square subsystem, then verify the remaining rows
    for subset in product(range(dim), repeat=unknowns):
        if len(set(subset)) != unknowns:
            continue
        sol = rational_solve([rows[t] for t in subset], [rhs[t] for t in subset])
        if sol is None:
            continue
        if all(
            sum(rows[t][k] * sol[k] for k in range(unknowns)) == rhs[t]
            for t in range(dim)
        ):
            assert all(x.denominator == 1 for x in sol)
            return tuple(int(x) for x in sol)
    raise AssertionError("wall relation has no consistent solution")


# explicit floor formulas as displayed for the worked examples, with the
# base-cone residues running over [0, m)^n


def hirzebruch_q_classes(d, m, w=(0, 0, 0, 0)):
    out = set()
    for x, y in product(range(m), repeat=2):
        out.add((
            0,
            0,
            (-(x - w[0]) + d * (y - w[1]) + w[2]) // m,
            (-(y - w[1]) + w[3]) // m,
        ))
    return out


def fano11_q_classes(m, shift=0):
    """Summand classes of F_m* of (-K)^shift on the Fano 3-fold (11),
    straight from the displayed floor formulas."""
    s = shift
    out = set()
    for x, y, z in product(range(m), repeat=3):
        out.add((
            0, 0, 0,
            (x - z + s) // m,
            (-z + 2 * s) // m,
            (-x - y + 2 * z + s) // m,
        ))
    return out


def fano18_q_classes(m, shift=0):
    s = shift
    out = set()
    for x, y, z in product(range(m), repeat=3):
        out.add((
            0, 0, 0,
            (-y + z + s) // m,
            (-y + 2 * s) // m,
            (-z + 2 * s) // m,
            (y - z + s) // m,
            (-x + y + s) // m,
        ))
    return out


def fano8_q_classes(m):
    out = set()
    for x, y, z in product(range(m), repeat=3):
        out.add((0, 0, 0, (-x - z) // m, (x - y) // m, (-x) // m))
    return out


def v4_q_classes(m):
    out = set()
    for x, y, z, w in product(range(m), repeat=4):
        s = x + y + z + w
        out.add((
            0, 0, 0, 0,
            (-x) // m, (-y) // m, (-z) // m, (-w) // m,
            s // m, (-s) // m,
        ))
    return out
