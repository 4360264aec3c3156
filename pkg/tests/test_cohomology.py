import itertools

from toricfrob import atlas
from toricfrob import cohomology as coh
from toricfrob import divisor_pic as dp
from toricfrob import frobenius as fr

import oracles


class TestBasics:
    def test_p2_twists(self):
        p2 = atlas.projective_space(2)
        assert coh.cohomology(p2, (0, 0, 2)).dims == (6, 0, 0)
        assert coh.cohomology(p2, (0, 0, 0)).dims == (1, 0, 0)
        assert coh.cohomology(p2, (0, 0, -3)).dims == (0, 0, 1)
        assert coh.cohomology(p2, (0, 0, -1)).dims == (0, 0, 0)

    def test_structure_sheaf_on_atlas(self, fano3_entries):
        for entry in fano3_entries:
            fan = entry.fan
            table = coh.cohomology(fan, (0,) * fan.n_rays)
            assert table.dims == (1,) + (0,) * fan.dim
            assert table.euler == 1

    def test_hirzebruch2_fiber_twist(self):
        # h^0 = 1 by the lattice-point oracle, h^1 = 1 by the P1-bundle
        # pushforward O(0) + O(-2)
        fan = atlas.hirzebruch(2)
        d = (0, 0, -2, 1)
        assert oracles.polytope_point_count(fan.rays, d) == 1
        assert oracles.h1_p1_sum(0, -2) == 1
        assert coh.cohomology(fan, d).dims == (1, 1, 0)

    def test_hirzebruch3_strongness_obstructions(self):
        fan = atlas.hirzebruch(3)
        # Hom^1(O(i D3 - D4), O(-D3)) = h^1 of (-(i+1)) D3 + D4
        for i in (1, 2):
            d = (0, 0, -(i + 1), 1)
            expected = oracles.h1_p1_sum(3 - i - 1, -i - 1)
            assert coh.cohomology(fan, d).dims[1] == expected

    def test_h0_matches_polytope_oracle(self, fano3_entries):
        fan = fano3_entries[0].fan  # P3
        samples = [
            (0, 0, 0, 0), (1, 0, 0, 1), (0, 0, 0, 3), (-1, -1, 2, 0),
            (2, -1, 0, 0), (-1, -1, -1, -1),
        ]
        for d in samples:
            assert coh.cohomology(fan, d).h(0) == oracles.polytope_point_count(
                fan.rays, d
            )

    def test_h0_oracle_surfaces(self):
        for d in range(4):
            fan = atlas.hirzebruch(d)
            for coeffs in itertools.product((-2, -1, 0, 1), repeat=2):
                div = (0, 0) + coeffs
                assert coh.cohomology(fan, div).h(0) == \
                    oracles.polytope_point_count(fan.rays, div)


class TestSerreDuality:
    def test_on_samples(self, fano3_entries):
        for entry in fano3_entries[:6]:
            fan = entry.fan
            n = fan.dim
            k = dp.canonical(fan)
            s = fr.stable_summands_cached(fan, (0,) * fan.n_rays)
            for c in sorted(s.classes)[:4]:
                h = coh.cohomology(fan, c).dims
                kd = tuple(a - b for a, b in zip(k, c))
                hk = coh.cohomology(fan, kd).dims
                assert h == tuple(reversed(hk))

    def test_canonical_top(self, fano3_entries):
        for entry in fano3_entries[:6]:
            fan = entry.fan
            table = coh.cohomology(fan, dp.canonical(fan))
            assert table.dims == (0,) * fan.dim + (1,)


class TestExtAndMatrices:
    def test_self_ext(self):
        fan = atlas.del_pezzo_y3()
        c = (0, 0, 0, -1, -1, 0)
        assert coh.ext_dims(fan, c, c).dims == (1, 0, 0)

    def test_fano18_pairwise_higher_ext_vanishes(self):
        fan = atlas.fano3_explicit_18()
        classes = sorted(fr.stable_summands_cached(fan, (0,) * 8).classes)
        for a, b in itertools.product(classes, repeat=2):
            assert all(x == 0 for x in coh.ext_dims(fan, a, b).dims[1:])

    def test_nef_dual_summands_have_no_higher_ext_into_summands(self):
        # on (11) the unique non-nef dual is the only source of higher Ext
        from toricfrob import intersection_nef as nef

        fan = atlas.fano3_explicit_11()
        classes = sorted(fr.stable_summands_cached(fan, (0,) * 6).classes)
        for a in classes:
            if not nef.is_nef(fan, tuple(-x for x in a)):
                continue
            for b in classes:
                assert all(x == 0 for x in coh.ext_dims(fan, a, b).dims[1:])

    def test_p1_hom_matrix(self):
        p1 = atlas.projective_space(1)
        assert coh.hom_matrix(p1, [(0, 0), (0, -1)]) == [[1, 0], [2, 1]]

    def test_hom_matrix_unit_diagonal(self):
        fan = atlas.del_pezzo_y3()
        classes = sorted(fr.stable_summands_cached(fan, (0,) * 6).classes)
        m = coh.hom_matrix(fan, classes)
        assert all(m[i][i] == 1 for i in range(len(classes)))

    def test_euler_self_pairing(self):
        fan = atlas.fano3_explicit_8()
        c = (0, 0, 0, -1, 0, 0)
        assert coh.euler_pairing(fan, c, c) == 1

    def test_y3_gram_determinant_unit(self):
        fan = atlas.del_pezzo_y3()
        classes = sorted(fr.stable_summands_cached(fan, (0,) * 6).classes)
        g = coh.gram_matrix(fan, classes)
        from toricfrob._intlinalg import det

        assert det(tuple(tuple(row) for row in g)) in (1, -1)

    def test_gram_upper_triangular_in_order(self):
        from toricfrob import collections as coll

        fan = atlas.del_pezzo_y3()
        classes = sorted(fr.stable_summands_cached(fan, (0,) * 6).classes)
        rep = coll.check_collection(fan, classes)
        assert rep.order is not None
        g = coh.gram_matrix(fan, classes)
        perm = list(rep.order)
        for a in range(len(perm)):
            for b in range(a):
                assert g[perm[a]][perm[b]] == 0
            assert g[perm[a]][perm[a]] == 1


class TestBoxCertification:
    def test_enlarging_box_is_stable(self):
        fan = atlas.hirzebruch(2)
        for d in ((0, 0, -2, 1), (0, 0, 1, 1), (0, 0, -1, -2)):
            base = coh.cohomology(fan, d)
            bigger = coh.seed_box(fan, dp.class_of(fan, d), margin=3)
            dims = [0] * (fan.dim + 1)
            for u in bigger.points():
                for p, b in enumerate(coh._contribution(fan, dp.class_of(fan, d), u)):
                    dims[p] += b
            assert tuple(dims) == base.dims

    def test_support_size_counts_contributing_degrees(self):
        p2 = atlas.projective_space(2)
        assert coh.cohomology(p2, (0, 0, 2)).support_size == 6


class TestNefVanishing:
    def test_nef_classes_have_no_higher_cohomology(self, fano3_entries):
        for entry in fano3_entries[:8]:
            fan = entry.fan
            assert coh.nef_vanishing_check(fan, (1,) * fan.n_rays)
            assert coh.nef_vanishing_check(fan, (0,) * fan.n_rays)
            s = fr.stable_summands_cached(fan, (0,) * fan.n_rays)
            for c in s.classes:
                dual = tuple(-x for x in c)
                assert coh.nef_vanishing_check(fan, dual)
