"""Torus-invariant divisors, linear equivalence and divisor classes.

A T-invariant divisor is an integer coefficient vector over the rays;
its class is the unique linearly equivalent divisor with zeros on the
base cone's rays.  Rational divisors (for rounding) are vectors of
Fractions.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ._intlinalg import dot, mat_vec
from .lattice_fan import Blowdown, Fan, FanError

Divisor = tuple[int, ...]


def _check_len(fan: Fan, d) -> tuple:
    d = tuple(d)
    if len(d) != fan.n_rays:
        raise ValueError(f"divisor length {len(d)} != number of rays {fan.n_rays}")
    return d


def class_of(fan: Fan, d) -> Divisor:
    """Normal form of the divisor class: subtract div(chi^u) for the unique
    u with <u, v_i> = a_i on the base cone's rays."""
    d = _check_len(fan, d)
    base = fan.base_rays()
    u = mat_vec(fan.base_matrix_inv(), tuple(d[i] for i in base))
    out = tuple(a - dot(v, u) for a, v in zip(d, fan.rays))
    assert all(out[i] == 0 for i in base)
    return out


def linearly_equivalent(fan: Fan, d1, d2) -> bool:
    return class_of(fan, d1) == class_of(fan, d2)


def canonical(fan: Fan) -> Divisor:
    """The canonical divisor: -1 on every ray."""
    return (-1,) * fan.n_rays


def round_up(d) -> Divisor:
    return tuple(math.ceil(Fraction(x)) for x in d)


def round_down(d) -> Divisor:
    return tuple(math.floor(Fraction(x)) for x in d)


def support_value(fan: Fan, d, v) -> int:
    """Value <u_sigma, v> of the Cartier data of D at the lattice point v,
    where u_sigma solves <u_sigma, v_i> = -a_i on a maximal cone containing v."""
    d = _check_len(fan, d)
    hits = fan.locate(v)
    if not hits:
        raise FanError(f"{v} is not in the support of the fan")
    cone = fan.max_cones[hits[0]]
    from ._intlinalg import mat_inverse_unimodular

    u = mat_vec(
        mat_inverse_unimodular(fan.cone_matrix(cone)),
        tuple(-d[i] for i in cone),
    )
    return dot(u, v)


def pushforward(bd: Blowdown, d) -> Divisor:
    """Divisor pushforward along a blowdown: drop the contracted coefficient."""
    d = tuple(d)
    return d[: bd.ray] + d[bd.ray + 1:]


def pullback(fan_x: Fan, bd: Blowdown, d) -> Divisor:
    """Pullback of a divisor on the contraction target: coefficients are
    copied, and the exceptional coefficient is -support_value at v_e."""
    d = _check_len(bd.result, d)
    v_e = fan_x.rays[bd.ray]
    coeff_e = -support_value(bd.result, d, v_e)
    out = list(d[: bd.ray]) + [coeff_e] + list(d[bd.ray:])
    return tuple(out)
