import pytest

from wgk.finite import (IndexReversalMismatch, build_pi_basis, check_dual_twist, compute_R_pi,
                        run_finite)
from wgk.klpoly import PolyMatrix, compute_mu


def finite(t):
    return run_finite(t.M, t.Mt, t.R, t.Rt, t.P, t.Pt, t.Q, t.Qt, compute_mu(t.M, t.P, t.Q))


@pytest.mark.parametrize("group,weights", [("A2", "equal"), ("B2", "equal"), ("B2", "1,2"),
                                           ("I2(5)", "equal")])
def test_inversion_suite(get_tables, group, weights):
    t = get_tables(group, weights, "regular")
    out = finite(t)
    rep = out["report"]
    assert rep.ok, rep.summary()
    assert rep.info["finite_applicable"]
    one = t.H.one_poly
    assert all(out["Rpi"].get(y, y) == one and out["Ppi"].get(y, y) == one for y in t.M.E)
    names = [c.name for c in rep.checks]
    assert any("mu" in n for n in names)


def test_twisted_R_is_transposed_R(get_tables):
    t = get_tables("A2", "equal", "regular")
    pi = build_pi_basis(t.M)
    Rpi, rep = compute_R_pi(pi, t.R)
    assert rep.ok
    for y in t.M.E:
        for w in t.M.E:
            assert Rpi.get(w, y) == t.R.get(y, w)


def test_index_reversal_mismatch_is_raised(get_tables):
    t = get_tables("A2", "equal", "regular")
    pi = build_pi_basis(t.M)
    wrong = PolyMatrix.identity("R", t.R.index, t.H.rank)
    with pytest.raises(IndexReversalMismatch):
        compute_R_pi(pi, wrong, strict=True)


def test_twist_on_parabolic_instance(get_tables):
    t = get_tables("A2", "equal", "deodhar:psi:J=s2:rel=empty")
    out = finite(t)
    assert out["report"].ok, out["report"].summary()
    rep = check_dual_twist(out["pi"], out["pi_t"], t.Q, t.Qt, out["Ppi"], out["Ptpi"])
    assert rep.ok, rep.summary()


def test_solomon_is_not_applicable(get_tables):
    t = get_tables("A2", "equal", "solomon:J=s2")
    rep = finite(t)["report"]
    assert rep.info["finite_applicable"] is False
    assert "finite_reason" in rep.info
