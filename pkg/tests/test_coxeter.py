import math

import pytest

from wgk.coxeter import (INF, CapExceeded, ConjugacyViolation, CoxeterGroup, WeightFunction,
                         coxeter_matrix)


@pytest.mark.parametrize("name,order", [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("B3", 48),
                                        ("I2(5)", 10), ("G2", 12), ("A1xA1", 4)])
def test_orders(name, order):
    assert CoxeterGroup.named(name).order == order


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_type_a_orders(n):
    assert CoxeterGroup.named(f"A{n}").order == math.factorial(n + 1)


def test_infinite_dihedral_hits_cap():
    with pytest.raises(CapExceeded):
        CoxeterGroup([[1, INF], [INF, 1]], cap=1000)


def test_bruhat_and_weak_order_a2():
    W = CoxeterGroup.named("A2")
    p = W.parse_word
    e = W.identity
    assert all(W.bruhat_leq(e, w) and W.bruhat_leq(w, w) for w in W.elements)
    assert W.bruhat_leq(p("s1"), p("s2.s1"))
    assert not W.bruhat_leq(p("s1"), p("s2"))
    assert all(W.weak_leq(e, w) for w in W.elements)
    assert W.weak_leq(p("s1"), p("s2.s1"))
    assert not W.weak_leq(p("s1"), p("s1.s2"))


def test_bruhat_matches_subword_oracle():
    W = CoxeterGroup.named("B2")
    from itertools import combinations
    for y in W.elements:
        word = W.word[y]
        below = {W.from_word([word[i] for i in idx]) for r in range(len(word) + 1)
                 for idx in combinations(range(len(word)), r)}
        assert below == {x for x in W.elements if W.bruhat_leq(x, y)}


def test_parabolic_quotient():
    W = CoxeterGroup.named("A2")
    s2 = W.parse_gens(["s2"])
    D = W.parabolic(s2)
    assert sorted(map(W.word_str, D.elements)) == sorted(["1", "s1", "s2.s1"])
    assert W.parabolic(frozenset()).elements == list(W.elements)


def test_parabolic_trichotomy():
    # s D^+ = D^- and w^-1 s w in J on D^0
    for name in ("A3", "B2"):
        W = CoxeterGroup.named(name)
        for mask in range(1 << W.rank):
            J = frozenset(s for s in range(W.rank) if mask >> s & 1)
            D = W.parabolic(J)
            for s in range(W.rank):
                sw = lambda w: W.left[w][s]
                assert sorted(sw(w) for w in D.plus(s)) == sorted(D.minus(s))
                for w in D.zero(s):
                    assert D.twist[s, w] in J


def test_pos_set():
    W = CoxeterGroup.named("A2")
    p = W.parse_word
    assert W.pos_set([W.identity]) == frozenset(range(2))
    assert W.pos_set(W.elements) == frozenset()
    assert W.pos_set([W.identity, p("s1")]) == frozenset({1})


def test_longest_and_pi():
    for name, ln in (("A1", 1), ("A2", 3), ("B2", 4)):
        W = CoxeterGroup.named(name)
        assert W.length[W.longest_element()] == ln
    A2 = CoxeterGroup.named("A2")
    assert A2.pi_map(A2.identity) == A2.identity
    assert A2.pi_gen(0) == 1
    B2 = CoxeterGroup.named("B2")
    assert B2.pi_gen(0) == 0
    for w in B2.elements:
        assert B2.length[B2.pi_map(w)] == B2.length[w]


def test_weight_conjugacy():
    with pytest.raises(ConjugacyViolation):
        WeightFunction.from_ints([1, 2]).validate(CoxeterGroup.named("A2"))
    WeightFunction.from_ints([1, 2]).validate(CoxeterGroup.named("B2"))
    WeightFunction.from_ints([1, 1, 1]).validate(CoxeterGroup.named("A3"))


def test_config_round_trip():
    W = CoxeterGroup.from_config({"type": "matrix", "m": coxeter_matrix("B2")})
    assert W.order == 8
    L = WeightFunction.from_config(W, {"gamma_rank": 2, "L": {"s1": [1, 0], "s2": [0, 1]}})
    assert WeightFunction.from_config(W, L.to_config(W)).to_config(W) == L.to_config(W)
