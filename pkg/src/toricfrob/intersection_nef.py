"""Intersection with torus-invariant curves, nef/ample/Fano predicates.

Each wall tau carries the relation v_a + v_b + sum alphas[j] v_j = 0; the
alphas are the intersection numbers of the ridge divisors with the curve
C_tau, so D . C_tau = a_a + a_b + sum alphas[j] a_j.  Nef and ample are
decided wall by wall (toric Kleiman criterion), exactly the reading of
the weighted-triangulation figures.
"""

from __future__ import annotations

from .divisor_pic import canonical
from .lattice_fan import Fan, Wall, walls


def curve_degree(fan: Fan, wall: Wall, d) -> int:
    """D . C_tau for the torus-invariant curve of the wall; a class invariant."""
    d = tuple(d)
    s = d[wall.apex_a] + d[wall.apex_b]
    s += sum(al * d[j] for al, j in zip(wall.alphas, wall.ridge))
    return s


def degree_profile(fan: Fan, d) -> tuple[int, ...]:
    """Per-wall degrees of a divisor, in the canonical wall order."""
    return tuple(curve_degree(fan, w, d) for w in walls(fan))


def is_nef(fan: Fan, d) -> bool:
    return all(curve_degree(fan, w, d) >= 0 for w in walls(fan))


def is_ample(fan: Fan, d) -> bool:
    return all(curve_degree(fan, w, d) > 0 for w in walls(fan))


def is_fano(fan: Fan) -> bool:
    minus_k = tuple(-x for x in canonical(fan))
    return is_ample(fan, minus_k)


def normal_bundle_degrees(fan: Fan, wall: Wall) -> tuple[int, ...]:
    """Degrees (alpha_j) of the splitting of the normal bundle of C_tau.

    For n=3 the curve C_tau is a P^1 with normal bundle
    O(alphas[0]) + O(alphas[1]); a standard-flop curve gives (-1, -1) and
    the fiber wall of a curve blowup gives (-1, 0).
    """
    return wall.alphas


def double_weight_table(fan: Fan) -> list[dict]:
    """All walls with apexes and double Z-weights, machine readable."""
    out = []
    for w in walls(fan):
        out.append(
            {
                "ridge": list(w.ridge),
                "apexes": [w.apex_a, w.apex_b],
                "alphas": list(w.alphas),
                "anticanonical_degree": curve_degree(
                    fan, w, tuple(1 for _ in fan.rays)
                ),
            }
        )
    return out


def double_weight_tsv(fan: Fan) -> str:
    lines = ["ridge\tapexes\talphas\tminus_K_degree"]
    for row in double_weight_table(fan):
        lines.append(
            "{}\t{}\t{}\t{}".format(
                ",".join(map(str, row["ridge"])),
                ",".join(map(str, row["apexes"])),
                ",".join(map(str, row["alphas"])),
                row["anticanonical_degree"],
            )
        )
    return "\n".join(lines) + "\n"
