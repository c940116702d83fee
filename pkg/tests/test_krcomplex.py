from itertools import product

import pytest

from krmf.mf import arc_mf, circle_mf, empty_mf, mf_from_factors, tensor, \
    wide_edge_factors, wide_edge_mf, PolyMatrix
from krmf.mfmorph import (
    compose,
    identity_mor,
    oriented_pair_factors,
    oriented_pair_mf,
    permute_factors,
    regroup_iso,
    tensor_id,
    tensor_mor,
    unzip_mor,
    zip_mor,
    MorphError,
)
from krmf.planar import ResolvedDiagram, TangleDiagram, from_braid
from krmf.polyring import Polynomial
from krmf.krcomplex import (
    ComplexError,
    GrothendieckClass,
    MFComplex,
    Summand,
    calibrated_shifts,
    complex_tensor,
    crossing_complex,
    crossing_degree,
    crossing_is_wide,
    crossing_shift,
    cube_layout,
    euler_characteristic,
    gaussian_eliminate,
    outer_factor_list,
    prefix_diagram,
    single_complex,
    skein_check,
    tangle_complex,
    tangle_disjoint_union,
    vertex_factors,
    _mf_key,
    _series_inverse,
)


def strand_diagram():
    outer = ResolvedDiagram.build(
        (("p", "q"),), {"p": -1, "q": 1}, [("p", "q")], (), 0)
    return TangleDiagram(outer, ())


class TestCalibration:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_shift_pairs(self, n):
        cs = calibrated_shifts(n)
        assert cs[1] == {"oriented": (n - 1, 1), "wide": (n, 1)}
        assert cs[-1] == {"oriented": (1 - n, 1), "wide": (-n, 1)}

    def test_degrees_and_kinds(self):
        assert crossing_degree(1, 0) == -1 and crossing_degree(1, 1) == 0
        assert crossing_degree(-1, 0) == 0 and crossing_degree(-1, 1) == 1
        assert crossing_is_wide(1, 0) and not crossing_is_wide(1, 1)
        assert not crossing_is_wide(-1, 0) and crossing_is_wide(-1, 1)
        assert crossing_shift("+", 0, 2) == (2, 1)
        assert crossing_shift("-", 1, 2) == (-2, 1)

    def test_sign_spellings_agree(self):
        assert crossing_complex("+", 2) == crossing_complex(1, 2)
        assert crossing_complex("-", 2) == crossing_complex(-1, 2)

    def test_bad_sign_rejected(self):
        with pytest.raises(ComplexError):
            crossing_complex(2, 2)

    def test_small_n_rejected(self):
        with pytest.raises(ComplexError):
            calibrated_shifts(1)


class TestCrossingComplex:
    @pytest.mark.parametrize("n", [2, 3])
    def test_positive(self, n):
        c = crossing_complex(1, n)
        assert (c.lo, c.hi) == (-1, 0)
        assert c.objects[0] == (Summand(wide_edge_mf("x1", "x2", "x3", "x4", n), n, 1),)
        assert c.objects[1] == (Summand(oriented_pair_mf("x1", "x2", "x3", "x4", n), n - 1, 1),)
        assert c.diffs[0] == {(0, 0): unzip_mor(n)}

    @pytest.mark.parametrize("n", [2, 3])
    def test_negative(self, n):
        c = crossing_complex(-1, n)
        assert (c.lo, c.hi) == (0, 1)
        assert c.objects[0][0].q == 1 - n and c.objects[1][0].q == -n
        assert c.diffs[0] == {(0, 0): zip_mor(n)}

    @pytest.mark.parametrize("n", [2, 3])
    def test_euler_decomposition(self, n):
        ori = _mf_key(oriented_pair_mf("x1", "x2", "x3", "x4", n))
        wide = _mf_key(wide_edge_mf("x1", "x2", "x3", "x4", n))
        assert euler_characteristic(crossing_complex(1, n)) == \
            GrothendieckClass({(ori, n - 1, 1): 1, (wide, n, 1): -1})
        assert euler_characteristic(crossing_complex(-1, n)) == \
            GrothendieckClass({(ori, 1 - n, 1): 1, (wide, -n, 1): -1})


class TestGrothendieck:
    def test_s_squares_to_one(self):
        g = euler_characteristic(crossing_complex(1, 2))
        assert g.mul_qs(0, 1).mul_qs(0, 1) == g
        assert g.mul_qs(0, 2) == g

    def test_group_laws(self):
        g = euler_characteristic(crossing_complex(1, 2))
        h = euler_characteristic(crossing_complex(-1, 2))
        assert (g - g).is_zero() and (g + (-g)).is_zero()
        assert g + h == h + g
        assert (g + h) - h == g

    def test_zero_coefficients_dropped(self):
        key = _mf_key(empty_mf(2))
        assert GrothendieckClass({(key, 0, 0): 0}).is_zero()
        assert GrothendieckClass({(key, 0, 0): 1, (key, 0, 2): -1}).is_zero()

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_skein_identity(self, n):
        assert skein_check(n)

    def test_shift_breaks_the_identity(self):
        c = crossing_complex(1, 2)
        assert euler_characteristic(c.shift(1, 0)) != euler_characteristic(c)
        assert euler_characteristic(c.shift(0, 1)) != euler_characteristic(c)
        assert euler_characteristic(c.shift(2, 2)) == \
            euler_characteristic(c).mul_qs(2)


class TestTangleComplex:
    def test_zero_crossings(self):
        c = tangle_complex(strand_diagram(), 2)
        assert (c.lo, c.hi) == (0, 0)
        assert c.objects == ((Summand(arc_mf("q", "p", 2), 0, 0),),)

    def test_circle_and_empty_vertices(self):
        outer = ResolvedDiagram.build(((),), {}, [], (), 1)
        c = tangle_complex(TangleDiagram(outer, ()), 2)
        assert c.objects[0][0].mf == circle_mf("y0", 2)
        outer0 = ResolvedDiagram.build(((),), {}, [], (), 0)
        c0 = tangle_complex(TangleDiagram(outer0, ()), 2)
        assert c0.objects[0][0].mf == empty_mf(2)

    @pytest.mark.parametrize("n", [2, 3])
    def test_single_positive_crossing(self, n):
        T = from_braid([1])
        c = tangle_complex(T, n, validate=False).validate(deep=True)
        assert (c.lo, c.hi) == (-1, 0)
        assert [sm.q for sm in (c.objects[0][0], c.objects[1][0])] == [n, n - 1]
        assert [sm.s for sm in (c.objects[0][0], c.objects[1][0])] == [1, 1]
        hole = T.outer.boundary[1]
        base = len(outer_factor_list(T.outer, n))
        raw = tensor_id(vertex_factors(T, (0,), n), vertex_factors(T, (1,), n),
                        base, 2, unzip_mor(n, xs=hole), n)
        assert c.diffs[0] == {(0, 0): raw}

    def test_single_negative_crossing(self):
        c = tangle_complex(from_braid([-1]), 2)
        assert (c.lo, c.hi) == (0, 1)
        assert [sm.q for sm in (c.objects[0][0], c.objects[1][0])] == [-1, -2]

    def test_braid_pair_layout(self):
        c = tangle_complex(from_braid([1, -1]), 2)
        assert (c.lo, c.hi) == (-1, 1)
        assert [len(row) for row in c.objects] == [1, 2, 1]
        # both crossings contribute s = 1, so all vertices agree mod 2
        assert {sm.s for row in c.objects for sm in row} == {0}

    def test_hopf_cube(self):
        T = from_braid([1, 1], closed=True)
        c = tangle_complex(T, 2, validate=False).validate(deep=True)
        assert (c.lo, c.hi) == (-2, 0)
        assert [len(row) for row in c.objects] == [1, 2, 1]
        assert [sorted(sm.q for sm in row) for row in c.objects] == \
            [[4], [3, 3], [2, 2]][:2] + [[2]]
        for row in c.objects:
            for sm in row:
                assert not sm.mf.pot

    def test_hopf_cube_signs(self):
        # the edge flipping the second crossing out of (0, 0) is the one
        # after a degree -1 crossing, so it carries the minus sign
        T = from_braid([1, 1], closed=True)
        c = tangle_complex(T, 2, validate=False)
        n = 2
        lo, index = cube_layout(T.crossing_signs)
        base = len(outer_factor_list(T.outer, n))

        def raw(pos, j):
            tpos = pos[:j] + (1,) + pos[j + 1:]
            return tensor_id(vertex_factors(T, pos, n),
                             vertex_factors(T, tpos, n),
                             base + 2 * j, 2,
                             unzip_mor(n, xs=T.outer.boundary[j + 1]), n)

        d, col = index[(0, 0)]
        assert c.diffs[d - c.lo][(index[(1, 0)][1], col)] == raw((0, 0), 0)
        assert c.diffs[d - c.lo][(index[(0, 1)][1], col)] == raw((0, 0), 1).scale(-1)
        d, col = index[(1, 0)]
        assert c.diffs[d - c.lo][(index[(1, 1)][1], col)] == raw((1, 0), 1)

    def test_validate_rejects_broken_sign(self):
        c = tangle_complex(from_braid([1, 1], closed=True), 2, validate=False)
        bad0 = dict(c.diffs[0])
        (key, phi), = [kv for kv in bad0.items() if kv[0][0] == 0]
        bad0[key] = phi.scale(-1)
        broken = MFComplex(c.n, c.lo, c.objects, (bad0, c.diffs[1]))
        with pytest.raises(ComplexError):
            broken.validate()

    def test_validate_rejects_wrong_shift(self):
        c = tangle_complex(from_braid([1]), 2)
        sm = c.objects[0][0]
        broken = MFComplex(c.n, c.lo,
                           ((Summand(sm.mf, sm.q + 1, sm.s),), c.objects[1]),
                           c.diffs)
        with pytest.raises(ComplexError):
            broken.validate()

    def test_shift_keeps_validity(self):
        c = tangle_complex(from_braid([1]), 2)
        s = c.shift(3, 1).validate()
        assert s.objects[0][0].q == c.objects[0][0].q + 3
        assert euler_characteristic(s) == euler_characteristic(c).mul_qs(3, 1)


class TestTensorAndUnion:
    def test_tensor_of_crossing_complexes(self):
        a = crossing_complex(1, 2)
        b = crossing_complex(-1, 2, xs=("z1", "z2", "z3", "z4"))
        c = complex_tensor(a, b)
        assert (c.lo, c.hi) == (-1, 1)
        assert [len(row) for row in c.objects] == [1, 2, 1]
        # summands in total degree 0 are ordered by the degree of the
        # a-part: (wide x oriented-of-b at a-degree -1) comes first
        assert c.objects[1][0].mf == tensor(a.objects[0][0].mf, b.objects[1][0].mf)
        assert c.objects[1][1].mf == tensor(a.objects[1][0].mf, b.objects[0][0].mf)
        # the b-differential under the odd a-degree picks up the sign
        expected = tensor_mor(identity_mor(a.objects[0][0].mf),
                              b.diffs[0][(0, 0)]).scale(-1)
        assert c.diffs[0][(0, 0)] == expected
        expected = tensor_mor(identity_mor(a.objects[1][0].mf),
                              b.diffs[0][(0, 0)])
        assert c.diffs[1][(0, 1)] == expected

    def test_tensor_mismatched_n_rejected(self):
        with pytest.raises(ComplexError):
            complex_tensor(crossing_complex(1, 2), crossing_complex(1, 3))

    def test_disjoint_union_diagram(self):
        U = tangle_disjoint_union(from_braid([1]), from_braid([-1]))
        assert U.crossing_signs == (1, -1)
        assert U.n_crossings == 2 and not U.is_closed()

    def test_union_complex_matches_tensor(self):
        # the union cube and the tensor product of the two cubes list
        # the same elementary tensors in different block orders; the
        # factor permutation followed by the regrouping isomorphism
        # intertwines the differentials, signs included
        n = 2
        t1, t2 = from_braid([1]), from_braid([-1])
        U = tangle_disjoint_union(t1, t2)
        Ta = TangleDiagram(prefix_diagram("a.", t1.outer), t1.crossing_signs)
        Tb = TangleDiagram(prefix_diagram("b.", t2.outer), t2.crossing_signs)
        CU = tangle_complex(U, n, validate=False)
        CT = complex_tensor(tangle_complex(Ta, n, validate=False),
                            tangle_complex(Tb, n, validate=False),
                            validate=False)
        assert (CU.lo, CU.hi) == (CT.lo, CT.hi)
        assert [len(r) for r in CU.objects] == [len(r) for r in CT.objects]
        na = len(outer_factor_list(Ta.outer, n))
        nb = len(outer_factor_list(Tb.outer, n))
        base = na + nb
        perm = list(range(na)) + list(range(base, base + 2)) + \
            list(range(na, na + nb)) + list(range(base + 2, base + 4))
        _, index = cube_layout(U.crossing_signs)
        isos = {}
        for pos in product((0, 1), repeat=2):
            d, r = index[pos]
            su = CU.summands(d)[r]
            st = CT.summands(d)[r]
            assert (su.q, su.s) == (st.q, st.s)
            _, piso = permute_factors(su.mf, perm)
            greg = regroup_iso([vertex_factors(Ta, pos[:1], n),
                                vertex_factors(Tb, pos[1:], n)], n).validate()
            iso = compose(greg, piso)
            assert iso.tgt == st.mf
            isos[pos] = iso
        back = {index[pos]: pos for pos in isos}
        for k, d in enumerate(CU.diffs):
            for (r, c), phi in d.items():
                src = back[(CU.lo + k, c)]
                tgt = back[(CU.lo + k + 1, r)]
                lhs = compose(isos[tgt], phi)
                rhs = compose(CT.diffs[k][(r, c)], isos[src])
                assert (lhs - rhs).is_zero(), (src, tgt)

    def test_regroup_single_part_is_identity(self):
        facs = vertex_factors(from_braid([1]), (0,), 2)
        iso = regroup_iso([facs], 2).validate()
        assert iso == identity_mor(mf_from_factors(facs, 2, validate=False))

    def test_regroup_mixed_parts(self):
        from krmf.mf import arc_factor
        A = [arc_factor("a1", "a0", 2), arc_factor("a3", "a2", 2)]
        B = [arc_factor("b1", "b0", 2), ("circle", "y", 0)]
        iso = regroup_iso([A, B], 2).validate()
        assert iso.tgt == tensor(mf_from_factors(A, 2), mf_from_factors(B, 2))

    def test_regroup_rejects_empty_part(self):
        with pytest.raises(MorphError):
            regroup_iso([[], [("empty", 0)]], 2)


class TestGaussianElimination:
    def test_series_inverse_unipotent(self):
        x = Polynomial.var("x")
        m = PolyMatrix(2, 2, {(0, 0): Polynomial.const(1), (0, 1): x,
                              (1, 1): Polynomial.const(1)})
        inv = _series_inverse(m, {})
        assert m * inv == PolyMatrix.identity(2)
        assert inv * m == PolyMatrix.identity(2)

    def test_series_inverse_singular(self):
        x = Polynomial.var("x")
        assert _series_inverse(PolyMatrix(1, 1, {(0, 0): x}), {}) is None
        assert _series_inverse(PolyMatrix(1, 2), {}) is None

    def test_series_inverse_nilpotent_truncation(self):
        y = Polynomial.var("y")
        m = PolyMatrix(1, 1, {(0, 0): Polynomial.const(1) - y})
        inv = _series_inverse(m, {"y": 3})
        assert (m * inv).truncate({"y": 3}) == PolyMatrix.identity(1)

    def test_identity_pair_cancels(self):
        M = oriented_pair_mf("x1", "x2", "x3", "x4", 2)
        c = MFComplex(2, 0, ((Summand(M, 0, 0),), (Summand(M, 0, 0),)),
                      ({(0, 0): identity_mor(M)},)).validate()
        r = gaussian_eliminate(c)
        assert all(not row for row in r.objects)

    def test_scalar_iso_cancels(self):
        M = oriented_pair_mf("x1", "x2", "x3", "x4", 2)
        c = MFComplex(2, 0, ((Summand(M, 0, 0),), (Summand(M, 0, 0),)),
                      ({(0, 0): identity_mor(M).scale(3)},))
        assert all(not row for row in gaussian_eliminate(c).objects)

    def test_correction_term(self):
        # [[id, id], [id, id]] has rank one: a single cancellation with
        # the -gamma phi^{-1} delta correction must clear the rest
        M = oriented_pair_mf("x1", "x2", "x3", "x4", 2)
        i = identity_mor(M)
        sm = Summand(M, 0, 0)
        c = MFComplex(2, 0, ((sm, sm), (sm, sm)),
                      ({(0, 0): i, (0, 1): i, (1, 0): i, (1, 1): i},)).validate()
        r = gaussian_eliminate(c)
        assert [len(row) for row in r.objects] == [1, 1]
        assert r.diffs == ({},)

    def test_three_term_contraction(self):
        M = oriented_pair_mf("x1", "x2", "x3", "x4", 2)
        i = identity_mor(M)
        sm = Summand(M, 0, 0)
        c = MFComplex(2, 0, ((sm,), (sm, sm), (sm,)),
                      ({(0, 0): i, (1, 0): i},
                       {(0, 0): i, (0, 1): i.scale(-1)})).validate()
        r = gaussian_eliminate(c)
        assert all(not row for row in r.objects)

    def test_crossing_complex_is_already_reduced(self):
        c = crossing_complex(1, 2)
        assert gaussian_eliminate(c) == c
        c2 = tangle_complex(from_braid([1, -1]), 2)
        assert gaussian_eliminate(c2) == c2

    def test_idempotent(self):
        M = oriented_pair_mf("x1", "x2", "x3", "x4", 2)
        i = identity_mor(M)
        sm = Summand(M, 0, 0)
        c = MFComplex(2, 0, ((sm, sm), (sm, sm)),
                      ({(0, 0): i, (0, 1): i, (1, 0): i, (1, 1): i},))
        once = gaussian_eliminate(c)
        assert gaussian_eliminate(once) == once

    def test_keeps_euler_characteristic_of_matched_pairs(self):
        # cancelling summands with equal presentation and shifts in
        # neighbouring degrees leaves the alternating sum unchanged
        M = oriented_pair_mf("x1", "x2", "x3", "x4", 2)
        c = MFComplex(2, 0, ((Summand(M, 0, 0),), (Summand(M, 0, 0),)),
                      ({(0, 0): identity_mor(M)},))
        assert euler_characteristic(c).is_zero()
        assert euler_characteristic(gaussian_eliminate(c)).is_zero()


class TestSingleComplex:
    def test_single(self):
        m = empty_mf(3)
        c = single_complex(m, q=2, s=1, degree=4).validate()
        assert (c.lo, c.hi) == (4, 4)
        assert c.objects == ((Summand(m, 2, 1),),)

    def test_euler_sign_follows_degree(self):
        m = empty_mf(2)
        even = euler_characteristic(single_complex(m, degree=0))
        odd = euler_characteristic(single_complex(m, degree=1))
        assert even == -odd
        assert even == euler_characteristic(single_complex(m, degree=-2))
