import pytest

from wgk.coxeter import CoxeterGroup, WeightFunction
from wgk.hecke import HeckeAlgebra
from wgk.ideal import (SIDE_M, SIDE_MT, NotFree, NotSuffixClosed, PosViolation, SeedNotBarInvariant,
                       act_ts, build_ideal, eta, ideal_from_element, module_bar, realize_from_seed,
                       theta)
from wgk.laurent import q


def A2():
    W = CoxeterGroup.named("A2")
    return W, HeckeAlgebra(W, WeightFunction.equal(W))


def test_regular_ideal_has_no_weak_cases():
    W, _ = A2()
    I = build_ideal(W, W.elements, ())
    assert all(I.cls(s, w) in ("-", "+") for s in range(2) for w in I.E)


def test_deodhar_classification_a2():
    W, _ = A2()
    p = W.parse_word
    J = W.parse_gens(["s2"])
    I = build_ideal(W, [p("1"), p("s1"), p("s2.s1")], J)
    assert I.cls(1, p("s2.s1")) == "-"
    assert I.cls(1, p("s1")) == "+"
    assert I.cls(0, p("s1")) == "-"
    assert I.cls(0, p("s2.s1")) == "0-"
    assert I.WD(p("s2.s1")) == frozenset({0})


def test_ideal_errors():
    W, _ = A2()
    p = W.parse_word
    with pytest.raises(NotSuffixClosed):
        build_ideal(W, [p("1"), p("s2.s1")], ())
    with pytest.raises(PosViolation):
        build_ideal(W, [p("1"), p("s1")], W.parse_gens(["s1"]))


def test_ideal_from_element():
    W, _ = A2()
    p = W.parse_word
    assert sorted(ideal_from_element(W, p("s2.s1"))) == sorted([p("1"), p("s1"), p("s2.s1")])


def test_regular_realization_is_the_algebra():
    W, H = A2()
    rlz = realize_from_seed(build_ideal(W, W.elements, ()), H, H.one())
    assert rlz.self_dual
    for w in W.elements:
        for s in range(2):
            assert rlz.to_hecke(act_ts(s, rlz.unit(w), rlz)) == H.T(w).mul_ts_left(s)


@pytest.mark.parametrize("c", [1, 2])
def test_deodhar_seed_sides(c):
    W = CoxeterGroup.named("A2")
    H = HeckeAlgebra(W, WeightFunction.equal(W, 1) if c == 1 else WeightFunction.from_ints([c, c]))
    p = W.parse_word
    J = W.parse_gens(["s2"])
    I = build_ideal(W, [p("1"), p("s1"), p("s2.s1")], J)
    C, Cp = H.parabolic_kl_elements([1])
    # psi-type seed (C') realizes the dual pattern, phi-type (C) the primary one
    m_t = realize_from_seed(I, H, Cp)
    m = realize_from_seed(I, H, C)
    assert m_t.side == SIDE_MT and m.side == SIDE_M
    w = p("s2.s1")
    assert m_t.action[0, w] == {w: q(c)}
    assert m.action[0, w] == {w: -q(-c)}
    assert all(not v for v in m.r.values()) and all(not v for v in m_t.r.values())
    assert m.action[1, p("s1")] == {w: H.one_poly}


def test_seed_must_be_bar_invariant():
    W, H = A2()
    with pytest.raises(SeedNotBarInvariant):
        realize_from_seed(build_ideal(W, W.elements, ()), H, H.Tword([0]))


def test_basis_must_be_free():
    W, H = A2()
    C, _ = H.parabolic_kl_elements([1])
    with pytest.raises(NotFree):
        # s2 * C_{s2} is proportional to C_{s2}, so {T_w C} over all of W is dependent
        realize_from_seed(build_ideal(W, W.elements, ()), H, C)


def test_rank_one_bar_and_duality():
    W = CoxeterGroup.named("A1")
    for c in (1, 3):
        H = HeckeAlgebra(W, WeightFunction.from_ints([c]))
        rlz = realize_from_seed(build_ideal(W, W.elements, ()), H, H.one())
        e, s = 0, W.parse_word("s1")
        assert module_bar(rlz.unit(e), rlz) == rlz.unit(e)
        assert module_bar(rlz.unit(s), rlz) == {s: H.one_poly, e: q(-c) - q(c)}
        assert eta(rlz.unit(e), rlz, rlz) == rlz.unit(e)
        assert eta(rlz.unit(s), rlz, rlz) == {s: -H.one_poly, e: -(q(-c) - q(c))}


def test_eta_theta_inverse_a2():
    W, H = A2()
    rlz = realize_from_seed(build_ideal(W, W.elements, ()), H, H.one())
    for w in W.elements:
        v = rlz.unit(w)
        assert theta(eta(v, rlz, rlz), rlz, rlz) == v
