"""Closed cobordism words, pants maps, and the local relation suite."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from krmf.mf import tensor
from krmf.mfmorph import (
    MFMorphism,
    MorphError,
    PolyMatrix,
    cap_mor,
    circle_dot_mor,
    circle_restricted,
    compose,
    cup_mor,
    dot_mor,
    identity_mor,
    oriented_pair_mf,
    solve_composite_equations,
    tensor_mor,
    unzip_mor,
    zip_mor,
)
from krmf.relations import (
    FAILS,
    HOLDS,
    HOLDS_SIGN,
    NOT_TRANSCRIBED,
    CobordismWord,
    RelationError,
    Step,
    disjoint_union,
    evaluate_closed,
    merge_mor,
    realize,
    relation_ids,
    sign_table,
    sphere_word,
    split_mor,
    torus_word,
    verify_all,
    verify_relation,
)


def relabel_from(src, n, lbl):
    # identity matrices onto the circle carrying lbl; valid because the
    # restricted models share shifts
    return MFMorphism(src, circle_restricted(lbl, n), 0, 0,
                      PolyMatrix(0, 0, {}), PolyMatrix.identity(n))


def relabel_to(tgt, n, lbl):
    return MFMorphism(circle_restricted(lbl, n), tgt, 0, 0,
                      PolyMatrix(0, 0, {}), PolyMatrix.identity(n))


class TestPantsMaps:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cylinder_identities(self, n):
        m = merge_mor(n)
        s = split_mor(n)
        idu = identity_mor(circle_restricted("u", n))
        idv = identity_mor(circle_restricted("v", n))
        lhs = compose(m, tensor_mor(cup_mor(n, "u"), idv))
        assert (lhs - relabel_from(lhs.src, n, "w")).is_zero()
        # a cup crossing the odd circle picks up the Koszul sign
        lhs = compose(m, tensor_mor(idu, cup_mor(n, "v")))
        assert (lhs + relabel_from(lhs.src, n, "w")).is_zero()
        lhs = compose(tensor_mor(cap_mor(n, "u"), idv), s)
        assert (lhs - relabel_to(lhs.tgt, n, "w")).is_zero()
        lhs = compose(tensor_mor(idu, cap_mor(n, "v")), s)
        assert (lhs + relabel_to(lhs.tgt, n, "w")).is_zero()

    @pytest.mark.parametrize("n", [2, 3])
    def test_dot_slides(self, n):
        m = merge_mor(n)
        s = split_mor(n)
        idu = identity_mor(circle_restricted("u", n))
        idv = identity_mor(circle_restricted("v", n))
        du = tensor_mor(circle_dot_mor(n, "u"), idv)
        dv = tensor_mor(idu, circle_dot_mor(n, "v"))
        dw = circle_dot_mor(n, "w")
        assert (compose(m, du) - compose(dw, m)).is_zero()
        assert (compose(m, dv) - compose(dw, m)).is_zero()
        assert (compose(du, s) - compose(s, dw)).is_zero()
        assert (compose(dv, s) - compose(s, dw)).is_zero()

    @pytest.mark.parametrize("n", [2, 3])
    def test_pants_pinned_by_isotopies(self, n):
        # the cylinder identities plus the dot slides leave exactly one
        # chain map in the slice, and it is the one written down
        cw = circle_restricted("w", n)
        src2 = tensor(circle_restricted("u", n), circle_restricted("v", n))
        idu = identity_mor(circle_restricted("u", n))
        idv = identity_mor(circle_restricted("v", n))
        du = tensor_mor(circle_dot_mor(n, "u"), idv)
        dv = tensor_mor(idu, circle_dot_mor(n, "v"))
        dw = circle_dot_mor(n, "w")
        cupid = tensor_mor(cup_mor(n, "u"), idv)
        idcup = tensor_mor(idu, cup_mor(n, "v"))
        m = solve_composite_equations(
            src2, cw, 1, n - 1,
            [([(1, None, cupid)], relabel_from(cupid.src, n, "w")),
             ([(-1, None, idcup)], relabel_from(idcup.src, n, "w")),
             ([(1, None, du), (-1, dw, None)], None),
             ([(1, None, dv), (-1, dw, None)], None)],
            require_unique=True)
        assert (m - merge_mor(n)).is_zero()
        capid = tensor_mor(cap_mor(n, "u"), idv)
        idcap = tensor_mor(idu, cap_mor(n, "v"))
        s = solve_composite_equations(
            cw, src2, 1, n - 1,
            [([(1, capid, None)], relabel_to(capid.tgt, n, "w")),
             ([(-1, idcap, None)], relabel_to(idcap.tgt, n, "w")),
             ([(1, du, None), (-1, None, dw)], None),
             ([(1, dv, None), (-1, None, dw)], None)],
            require_unique=True)
        assert (s - split_mor(n)).is_zero()

    def test_uniqueness_guard_trips_without_pins(self):
        # dropping the cup equations leaves dot-slide solutions free
        n = 2
        cw = circle_restricted("w", n)
        src2 = tensor(circle_restricted("u", n), circle_restricted("v", n))
        du = tensor_mor(circle_dot_mor(n, "u"),
                        identity_mor(circle_restricted("v", n)))
        dw = circle_dot_mor(n, "w")
        with pytest.raises(MorphError):
            solve_composite_equations(
                src2, cw, 1, n - 1,
                [([(1, None, du), (-1, dw, None)], None)],
                require_unique=True)


class TestWords:
    def test_trace_and_diagrams(self):
        w = torus_word()
        assert [d.circles for d in w.diagrams()] == [0, 1, 2, 1, 0]
        assert w.is_closed()
        assert not CobordismWord((Step("cup", 0),)).is_closed()

    def test_inconsistent_words_rejected(self):
        with pytest.raises(RelationError):
            CobordismWord((Step("cap", 0),))
        with pytest.raises(RelationError):
            CobordismWord((Step("merge", 0),), 1)
        with pytest.raises(RelationError):
            CobordismWord((Step("cup", 2),), 1)
        with pytest.raises(RelationError):
            CobordismWord((Step("zip", 0),), 1)
        with pytest.raises(RelationError):
            CobordismWord((Step("cup", 0),), "arcs")
        with pytest.raises(RelationError):
            CobordismWord((Step("unzip", 0),), "arcs")

    @pytest.mark.parametrize("n", [2, 3])
    def test_identity_words(self, n):
        m = realize(CobordismWord((), 2), n)
        obj = tensor(circle_restricted("c0", n), circle_restricted("c1", n))
        assert (m - identity_mor(obj)).is_zero()
        m = realize(CobordismWord((), "arcs"), n)
        assert (m - identity_mor(oriented_pair_mf("x1", "x2", "x3", "x4",
                                                  n))).is_zero()

    @pytest.mark.parametrize("n", [2, 3])
    def test_sheet_words(self, n):
        w = CobordismWord((Step("zip"), Step("unzip")), "arcs")
        assert [d.strands and len(d.strands) or len(d.wides)
                for d in w.diagrams()] == [2, 1, 2]
        got = realize(w, n)
        want = compose(unzip_mor(n), zip_mor(n))
        assert (got - want).is_zero()
        wd = CobordismWord((Step("bdot", 2, 2),), "arcs")
        pair = oriented_pair_mf("x1", "x2", "x3", "x4", n)
        assert (realize(wd, n) - dot_mor(pair, "x2", 2)).is_zero()

    def test_evaluate_requires_closed(self):
        with pytest.raises(RelationError):
            evaluate_closed(CobordismWord((Step("cup", 0),)), 2)
        with pytest.raises(RelationError):
            evaluate_closed(CobordismWord((), "arcs"), 2)

    def test_then_builder(self):
        w = CobordismWord(()).then("cup").then("dot", 0, 1).then("cap")
        assert w == sphere_word(1)


def frobenius_eval(word: CobordismWord, n: int) -> Fraction:
    """Independent oracle for closed words: the circle algebra with
    basis y^0..y^(n-1), product truncation, coproduct with factor n,
    counit reading the top coefficient over n, and the sign (-1)^slot
    whenever an odd generator acts past the circles to its left."""
    state = {(): Fraction(1)}
    for s in word.steps:
        new = {}

        def put(key, c):
            if c:
                new[key] = new.get(key, Fraction(0)) + c

        for key, c in state.items():
            i = s.slot
            sgn = -1 if (s.gen != "dot" and i % 2) else 1
            if s.gen == "cup":
                put(key[:i] + (0,) + key[i:], c * sgn)
            elif s.gen == "cap":
                if key[i] == n - 1:
                    put(key[:i] + key[i + 1:], c * sgn / n)
            elif s.gen == "dot":
                if key[i] + s.power < n:
                    put(key[:i] + (key[i] + s.power,) + key[i + 1:], c)
            elif s.gen == "merge":
                if key[i] + key[i + 1] < n:
                    put(key[:i] + (key[i] + key[i + 1],) + key[i + 2:],
                        c * sgn)
            else:
                for a in range(n):
                    b = n - 1 + key[i] - a
                    if 0 <= b < n:
                        put(key[:i] + (a, b) + key[i + 1:], c * sgn * n)
        state = {k: v for k, v in new.items() if v}
    return state.get((), Fraction(0))


def closed_word_steps(data, n, length):
    steps = []
    k = 0
    for _ in range(length):
        ops = ["cup"]
        if k:
            ops += ["cap", "dot", "split"]
        if k >= 2:
            ops.append("merge")
        op = data.draw(st.sampled_from(ops))
        top = {"cup": k, "cap": k - 1, "dot": k - 1, "split": k - 1,
               "merge": k - 2}[op]
        slot = data.draw(st.integers(0, top))
        power = data.draw(st.integers(1, n - 1)) if op == "dot" else 1
        steps.append(Step(op, slot, power))
        k += {"cup": 1, "cap": -1, "dot": 0, "split": 1, "merge": -1}[op]
    while k:
        steps.append(Step("cap", 0))
        k -= 1
    return CobordismWord(tuple(steps))


class TestClosedEvaluation:
    # scalar anchors
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_sphere_values(self, n):
        for l in range(n):
            want = Fraction(1, n) if l == n - 1 else Fraction(0)
            assert evaluate_closed(sphere_word(l), n) == want

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_torus_value(self, n):
        assert evaluate_closed(torus_word(), n) == n

    @pytest.mark.parametrize("n", [2, 3])
    def test_genus_two_vanishes(self, n):
        w = CobordismWord((Step("cup"), Step("split"), Step("merge"),
                           Step("split"), Step("merge"), Step("cap")))
        # the handle operator lands in the top power, so a second
        # handle annihilates it
        assert evaluate_closed(w, n) == 0
        assert frobenius_eval(w, n) == 0

    @pytest.mark.parametrize("n", [2, 3])
    def test_interleaved_union_is_multiplicative(self, n):
        # two dotted spheres built strictly side by side
        w = CobordismWord((Step("cup", 0), Step("cup", 1),
                           Step("dot", 0, n - 1), Step("dot", 1, n - 1),
                           Step("cap", 1), Step("cap", 0)))
        assert evaluate_closed(w, n) == Fraction(1, n * n)

    @settings(max_examples=60, deadline=None)
    @given(data=st.data())
    def test_random_closed_words_match_oracle(self, data):
        n = data.draw(st.sampled_from([2, 3]))
        w = closed_word_steps(data, n, data.draw(st.integers(0, 5)))
        assert evaluate_closed(w, n) == frobenius_eval(w, n)

    @settings(max_examples=25, deadline=None)
    @given(data=st.data())
    def test_disjoint_union_multiplicative(self, data):
        n = data.draw(st.sampled_from([2, 3]))
        a = closed_word_steps(data, n, data.draw(st.integers(0, 4)))
        b = closed_word_steps(data, n, data.draw(st.integers(0, 4)))
        assert evaluate_closed(disjoint_union(a, b), n) == \
            evaluate_closed(a, n) * evaluate_closed(b, n)


class TestRelationSuite:
    @pytest.mark.parametrize("n", [2, 3])
    def test_all_transcribed_relations_hold(self, n):
        reports = verify_all(n)
        assert {r.rid for r in reports} == set(relation_ids(n))
        for r in reports:
            assert r.status in (HOLDS, HOLDS_SIGN), (r.rid, r.detail)
            assert r.ok

    def test_recorded_signs(self):
        # the sphere and neck-cut references carry (-1)^(n-1)
        assert verify_relation("R2a", 2).sign == -1
        assert verify_relation("R3a", 2).sign == -1
        assert verify_relation("R2a", 3).sign == 1
        assert verify_relation("R3a", 3).sign == 1
        for n in (2, 3):
            assert verify_relation("Rd", n).sign == 1
            assert verify_relation("R4", n).sign == 1

    @pytest.mark.parametrize("n", [2, 3])
    def test_sign_table_consistent(self, n):
        table = sign_table(n)
        assert table["consistent"], table
        assert table["signs"]["Rd"] == \
            table["signs"]["R2a"] * table["signs"]["R3a"]

    def test_r14_scope(self):
        assert "R14" in relation_ids(2)
        assert "R14" not in relation_ids(3)
        r = verify_relation("R14", 2)
        assert r.status == HOLDS
        with pytest.raises(RelationError):
            verify_relation("R14", 3)

    def test_untranscribed_and_unknown_ids(self):
        assert "R5" in NOT_TRANSCRIBED
        with pytest.raises(RelationError):
            verify_relation("R5", 2)
        with pytest.raises(RelationError):
            verify_relation("R99", 2)

    def test_no_relation_fails_silently(self):
        # FAILS reports exist as a status and would surface through ok
        from krmf.relations import RelationReport
        bad = RelationReport("X", 2, FAILS, 0, "synthetic")
        assert not bad.ok
