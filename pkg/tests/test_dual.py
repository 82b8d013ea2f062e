import pytest

from wgk.dual import (D_basis, D_prime, D_prime_literal, check_duality_maps, check_parabolic_dual,
                      dual_bar, dual_space, pairing)
from wgk.klpoly import compute_C, compute_C_prime, compute_mu


def bases(t):
    C = compute_C(t.M, t.P)
    Ct = compute_C(t.Mt, t.Pt)
    Cp, Ctp = compute_C_prime(t.M, t.Mt, C, Ct)
    return C, Ct, Cp, Ctp


@pytest.mark.parametrize("group,weights,name", [("A2", "equal", "regular"),
                                                ("A2", "equal", "deodhar:psi:J=s2"),
                                                ("B2", "1,2", "deodhar:phi:J=s2"),
                                                ("B2", "1,2", "regular")])
def test_dual_suite(get_tables, group, weights, name):
    t = get_tables(group, weights, name)
    C, Ct, Cp, Ctp = bases(t)
    mu = compute_mu(t.M, t.P, t.Q)
    rep = dual_space(t.M, t.Mt, t.R, t.P, t.Q, t.Qt, mu, Ctp)
    assert rep.ok, rep.summary()
    assert check_duality_maps(t.M, t.Mt).ok


def test_D_pairs_with_C(get_tables):
    t = get_tables("A2", "equal", "regular")
    C = compute_C(t.M, t.P)
    D = D_basis(t.Q)
    one, zero = t.H.one_poly, t.H.zero_poly
    for z in t.M.E:
        for w in t.M.E:
            assert pairing(D[z], C[w], t.H.rank) == (one if z == w else zero)
        # D_z(Gamma_y) = Q_{z,y}
        for y in t.M.E:
            assert pairing(D[z], t.M.unit(y), t.H.rank) == t.Q.get(z, y)


def test_literal_D_prime_is_not_bar_invariant(get_tables):
    t = get_tables("A1", "1", "regular")
    lit = D_prime_literal(t.Qt, t.W)
    assert any(dual_bar(f, t.M) != f for f in lit.values())
    for f in D_prime(t.Q, t.W).values():
        assert dual_bar(f, t.Mt) == f


def test_parabolic_identification(get_tables):
    t = get_tables("A2", "equal", "deodhar:psi:J=s2:rel=empty")
    mu = compute_mu(t.M, t.P, t.Q)
    rep = check_parabolic_dual(t.M, t.Q, mu, t.instance.ideal.J)
    assert rep.ok, rep.summary()
