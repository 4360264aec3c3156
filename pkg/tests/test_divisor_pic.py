from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricfrob import atlas
from toricfrob import divisor_pic as dp
from toricfrob import lattice_fan as lf
from toricfrob._intlinalg import dot

from oracles import rational_solve


class TestClassOf:
    def test_p2_hyperplane(self):
        p2 = atlas.projective_space(2)
        assert dp.class_of(p2, (1, 0, 0)) == (0, 0, 1)
        assert dp.class_of(p2, (0, 0, 1)) == (0, 0, 1)

    def test_hirzebruch_section_relation(self):
        # D2 ~ D4 - d D3
        for d in range(4):
            fan = atlas.hirzebruch(d)
            assert dp.class_of(fan, (0, 1, 0, 0)) == (0, 0, -d, 1)

    def test_fano18_d1_equivalent_d8(self):
        fan = atlas.fano3_explicit_18()
        d1 = (1, 0, 0, 0, 0, 0, 0, 0)
        d8 = (0, 0, 0, 0, 0, 0, 0, 1)
        assert dp.class_of(fan, d1) == dp.class_of(fan, d8) == d8

    def test_idempotent(self):
        fan = atlas.fano3_explicit_11()
        d = (3, -2, 5, 1, 0, -4)
        assert dp.class_of(fan, dp.class_of(fan, d)) == dp.class_of(fan, d)

    def test_additivity(self):
        fan = atlas.del_pezzo_y3()
        d1, d2 = (1, 2, -1, 0, 3, -2), (0, -5, 2, 2, -1, 1)
        lhs = dp.class_of(fan, tuple(a + b for a, b in zip(d1, d2)))
        rhs = dp.class_of(
            fan, tuple(a + b for a, b in zip(dp.class_of(fan, d1), dp.class_of(fan, d2)))
        )
        assert lhs == rhs

    @settings(max_examples=40, deadline=None)
    @given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
    def test_kernel_is_exactly_the_character_lattice(self, u):
        fan = atlas.hirzebruch(2)
        principal = tuple(dot(v, u) for v in fan.rays)
        assert dp.class_of(fan, principal) == (0, 0, 0, 0)

    def test_nonprincipal_has_nonzero_class(self):
        fan = atlas.projective_space(2)
        assert dp.class_of(fan, (1, 0, 0)) != (0, 0, 0)

    def test_class_lattice_rank_is_picard_rank(self, fano3_entries):
        from toricfrob._intlinalg import rank

        for entry in fano3_entries[:6]:
            fan = entry.fan
            basis = [
                dp.class_of(fan, tuple(1 if j == i else 0 for j in range(fan.n_rays)))
                for i in range(fan.n_rays)
            ]
            assert rank(tuple(basis)) == fan.picard_rank


class TestLinearEquivalence:
    def test_p2(self):
        p2 = atlas.projective_space(2)
        assert dp.linearly_equivalent(p2, (1, 0, 0), (0, 0, 1))

    def test_y3_relation(self):
        # D2 + D3 ~ D5 + D6
        y3 = atlas.del_pezzo_y3()
        assert dp.linearly_equivalent(y3, (0, 1, 1, 0, 0, 0), (0, 0, 0, 0, 1, 1))

    def test_sigma1_sections_differ(self):
        fan = atlas.hirzebruch(1)
        assert not dp.linearly_equivalent(fan, (0, 0, 1, 0), (0, 0, 0, 1))


class TestCanonical:
    def test_all_minus_one(self):
        fan = atlas.projective_space(2)
        assert dp.canonical(fan) == (-1, -1, -1)

    def test_p2_class_is_minus_3h(self):
        p2 = atlas.projective_space(2)
        assert dp.class_of(p2, dp.canonical(p2)) == (0, 0, -3)


class TestRounding:
    def test_examples(self):
        assert dp.round_up((Fraction(1, 2), Fraction(-1, 2))) == (1, 0)
        assert dp.round_down((Fraction(1, 2), Fraction(-1, 2))) == (0, -1)

    def test_integer_fixed(self):
        assert dp.round_up((3, -2, 0)) == (3, -2, 0)
        assert dp.round_down((3, -2, 0)) == (3, -2, 0)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.fractions(max_denominator=30), min_size=1, max_size=5))
    def test_duality_and_oracle(self, vals):
        vals = tuple(vals)
        up = dp.round_up(vals)
        down = dp.round_down(vals)
        assert up == tuple(-x for x in dp.round_down(tuple(-v for v in vals)))
        for v, hi, lo in zip(vals, up, down):
            assert lo <= v <= hi
            assert hi - v < 1 and v - lo < 1


class TestSupportValue:
    def test_p2_hyperplane_at_e1(self):
        p2 = atlas.projective_space(2)
        assert dp.support_value(p2, (0, 0, 1), (1, 0)) == 0

    def test_anticanonical_at_rays(self, fano3_entries):
        for entry in fano3_entries[:5]:
            fan = entry.fan
            minus_k = tuple(1 for _ in fan.rays)
            for v in fan.rays:
                assert dp.support_value(fan, minus_k, v) == -1

    def test_agreement_on_wall_rays(self):
        # the Cartier data of the two cones adjacent to a wall agree on it
        fan = atlas.fano3_explicit_11()
        d = (0, 0, 0, -1, -1, 1)
        for wall in lf.walls(fan):
            probe = tuple(
                sum(fan.rays[j][t] for j in wall.ridge) for t in range(fan.dim)
            )
            values = set()
            for apex in (wall.apex_a, wall.apex_b):
                cone = tuple(sorted(set(wall.ridge) | {apex}))
                u = rational_solve(
                    [fan.rays[i] for i in cone], [-d[i] for i in cone]
                )
                values.add(sum(Fraction(a) * b for a, b in zip(u, probe)))
            assert len(values) == 1
            assert dp.support_value(fan, d, probe) == values.pop()

    def test_outside_support_rejected(self):
        fan = lf.Fan(2, ((1, 0), (0, 1)), ((0, 1),), 0)
        with pytest.raises(lf.FanError):
            dp.support_value(fan, (0, 0), (-1, -1))


class TestPushPull:
    def _sigma1_to_p2(self):
        bds = lf.blowdowns(atlas.hirzebruch(1))
        assert len(bds) == 1
        return atlas.hirzebruch(1), bds[0]

    def test_roundtrip_classes(self):
        fan_x, bd = self._sigma1_to_p2()
        y = bd.result
        for d in ((1, 0, 0), (0, 2, -1), (-1, -1, -1)):
            pulled = dp.pullback(fan_x, bd, d)
            back = dp.pushforward(bd, pulled)
            assert dp.class_of(y, back) == dp.class_of(y, d)

    def test_pull_then_push_differs_only_at_exceptional(self):
        fan_x, bd = self._sigma1_to_p2()
        d = (2, -1, 0, 3)
        pushed = dp.pushforward(bd, d)
        again = dp.pullback(fan_x, bd, pushed)
        for i in range(fan_x.n_rays):
            if i != bd.ray:
                assert again[i] == d[i]

    def test_exceptional_multiplier_nonnegative_on_summands(self, fano3_enum):
        from toricfrob import collections as coll

        for _, _, bd, src in fano3_enum.edges:
            assert coll.blowdown_thomsen_check(src, bd, 4)
