"""
One PASS/FAIL line per acceptance criterion.  Every comparison is exact
equality of integer Laurent polynomials; there is no tolerance to tune.

Run directly (``python tests/test_acceptance.py``) or through pytest, which
also prints the lines in its terminal summary.
"""

import json
import random
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import pytest

from wgk.checks import Report
from wgk.cli import main as cli_main
from wgk.dual import check_parabolic_dual, dual_space
from wgk.finite import check_dual_twist, run_finite
from wgk.ideal import act_ts, module_bar
from wgk.klpoly import (PolyMatrix, assemble_wgraph, chain_Q, check_Q_bar_relations, compute_C,
                        compute_C_prime, compute_mu, compute_P, compute_Q, compute_R,
                        compute_R_tilde, oracle_P, oracle_R, sign_conjugate, verify_wgraph,
                        zero_weight_bijection)
from wgk.laurent import LaurentPoly
from wgk.pipeline import compute_tables, hecke_soundness, make_instance

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

EQUAL_GROUPS = ["A1", "A2", "B2", "A3", "I2(5)", "B3"]
UNEQUAL = [("B2", "1,2"), ("I2(6)", "1,2"), ("B3", "1,2,2")]
ALL_REGULAR = [(g, "equal") for g in EQUAL_GROUPS] + UNEQUAL

_tables = {}


def tables(group, weights, name="regular"):
    key = (group, weights, name)
    if key not in _tables:
        _tables[key] = compute_tables(make_instance(group, weights, name))
    return _tables[key]


def same(rep, name, A, B, W):
    d = A.diff(B)
    rep.compare(name, [(None if d is None else [W.word_str(d[0]), W.word_str(d[1])],
                        None if d is None else d[2], None if d is None else d[3])])


def record(num, title, fn, budget):
    start = time.perf_counter()
    rep = fn()
    secs = time.perf_counter() - start
    bad = [c for c in rep.checks if not c.passed]
    checks = sum(c.count for c in rep.checks)
    status = "PASS" if not bad else "FAIL"
    line = f"{status} [{num}] {title}: {len(rep.checks)} identities, {checks} checked items, {secs:.2f}s (budget {budget}s)"
    if bad:
        line += f"; first failure: {bad[0].name} at {json.dumps(bad[0].counterexample)}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return rep


# -- 1 ------------------------------------------------------------------------------

def hecke_criterion():
    rep = Report("Hecke soundness")
    for g, w in ALL_REGULAR:
        H = make_instance(g, w, "regular").H
        rep.extend(hecke_soundness(H, pairs=150 if H.W.order > 24 else None), f"{g} L={w}: ")
    return rep


# -- 2 ------------------------------------------------------------------------------

def r_criterion():
    rep = Report("R layer")
    for g, w in ALL_REGULAR:
        inst = make_instance(g, w, "regular")
        W = inst.W
        M, Mt = inst.pair()
        R = compute_R(M)
        Rt = compute_R_tilde(Mt, R)
        ident = PolyMatrix.identity("I", R.index, inst.H.rank)
        p = f"{g} L={w}: "
        same(rep, p + "recursion R = bar-in-H R", R, oracle_R(M), W)
        same(rep, p + "bar(R) R = I", R.bar() @ R, ident, W)
        same(rep, p + "R~ = eps eps bar(R)", Rt, sign_conjugate(R.bar(), W), W)
        same(rep, p + "R~ = bar-in-H R~ on the dual side", Rt, oracle_R(Mt), W)
    return rep


# -- 3 ------------------------------------------------------------------------------

def pq_criterion():
    rep = Report("P/Q layer")
    for g, w in [("A2", "equal"), ("B2", "1,2"), ("A3", "equal"), ("B2", "equal")]:
        t = tables(g, w)
        W = t.W
        p = f"{g} L={w}: "
        ident = PolyMatrix.identity("I", t.P.index, t.H.rank)
        if (g, w) != ("B2", "equal"):
            same(rep, p + "P = direct bar-fixed solve", t.P,
                 oracle_P(t.R, lambda x: t.H.L.of(W, x)), W)
        same(rep, p + "P Q = I", t.P @ t.Q, ident, W)
        same(rep, p + "Q P = I", t.Q @ t.P, ident, W)
        rep.extend(check_Q_bar_relations(t.Q, t.R, t.Rt, W), p)
    t = tables("B2", "equal")
    rep.compare("B2: chain-sum Q covers all 64 pairs", [("pairs", len(t.Q.index) ** 2, 64)])
    same(rep, "B2: Q from inversion = chain-sum Q", t.Q, chain_Q(t.P, t.W.bruhat_lt), t.W)
    return rep


# -- 4 ------------------------------------------------------------------------------

WGRAPH_CASES = ([("A3", "equal", "regular"), ("A2", "equal", "solomon:J=s2")]
                + [(g, w, f"deodhar:{v}:J={J}") for g, w in (("A2", "equal"), ("B2", "equal"), ("B2", "1,2"))
                   for v in ("psi", "phi") for J in ("s1", "s2")])


def wgraph_criterion():
    rep = Report("W-graphs")
    for g, w, name in WGRAPH_CASES:
        t = tables(g, w, name)
        mu = compute_mu(t.M, t.P, t.Q)
        graph = assemble_wgraph(t.M, mu, bijection=zero_weight_bijection(t.M, t.P, t.Q))
        rep.extend(verify_wgraph(graph, t.W.m), f"{g} L={w} {name}: ")
    return rep


# -- 5 ------------------------------------------------------------------------------

def duality_criterion():
    rep = Report("duality")
    for name in ("regular", "deodhar:psi:J=s2", "deodhar:phi:J=s2"):
        t = tables("A2", "equal", name)
        W = t.W
        C = compute_C(t.M, t.P, check=False)
        Ct = compute_C(t.Mt, t.Pt, check=False)
        Cp, Ctp = compute_C_prime(t.M, t.Mt, C, Ct, check=False)
        p = f"A2 {name}: "
        for label, B, r in (("C", C, t.M), ("C~", Ct, t.Mt), ("C'", Cp, t.M), ("C~'", Ctp, t.Mt)):
            rep.compare(p + f"bar({label}) = {label}",
                        ((W.word_str(x), module_bar(v, r), v) for x, v in B.items()))
        rep.extend(dual_space(t.M, t.Mt, t.R, t.P, t.Q, t.Qt, compute_mu(t.M, t.P, t.Q), Ctp), p)
    return rep


# -- 6 ------------------------------------------------------------------------------

def finite_criterion():
    rep = Report("finite inversion")
    for g, w in [("A2", "equal"), ("B2", "equal"), ("B2", "1,2"), ("A3", "equal"), ("I2(5)", "equal")]:
        t = tables(g, w)
        out = run_finite(t.M, t.Mt, t.R, t.Rt, t.P, t.Pt, t.Q, t.Qt, compute_mu(t.M, t.P, t.Q))
        fr = out["report"]
        p = f"{g} L={w}: "
        rep.extend(fr, p)
        if g in ("A2", "B2"):
            mu_check = next(c for c in fr.checks if c.name.startswith("m^s_{y,w}"))
            rep.assert_all(p + "mu relation is exercised", [("defined triples", mu_check.count > 0,
                                                              mu_check.count)])
    for name in ("deodhar:psi:J=s2:rel=empty", "deodhar:phi:J=s2:rel=empty"):
        t = tables("A2", "equal", name)
        out = run_finite(t.M, t.Mt, t.R, t.Rt, t.P, t.Pt, t.Q, t.Qt, compute_mu(t.M, t.P, t.Q))
        rep.extend(check_dual_twist(out["pi"], out["pi_t"], t.Q, t.Qt, out["Ppi"], out["Ptpi"]),
                   f"A2 {name}: ")
    return rep


# -- 7 ------------------------------------------------------------------------------

def parabolic_criterion():
    rep = Report("parabolic")
    for g, w, name in [("A2", "equal", "deodhar:psi:J=s2"), ("A2", "equal", "deodhar:phi:J=s2"),
                       ("B2", "1,2", "deodhar:psi:J=s1"), ("B2", "1,2", "deodhar:phi:J=s2"),
                       ("A3", "equal", "deodhar:phi:J=s1.s2")]:
        t = tables(g, w, name)
        I = t.M.ideal
        p = f"{g} L={w} {name}: "
        rep.assert_all(p + "no weak ascents", (((s, x), I.kind[s, x] != "0+", None)
                                               for s in range(t.W.rank) for x in I.E))
        rep.assert_all(p + "r = 0", ((k, not v, v) for k, v in list(t.M.r.items()) + list(t.Mt.r.items())))
    for g, w, name in [("A2", "equal", "deodhar:psi:J=s2:rel=empty"),
                       ("B2", "1,2", "deodhar:phi:J=s1:rel=empty")]:
        t = tables(g, w, name)
        rep.extend(check_parabolic_dual(t.M, t.Q, compute_mu(t.M, t.P, t.Q), t.instance.ideal.J),
                   f"{g} L={w} {name}: ")
    return rep


# -- 8 ------------------------------------------------------------------------------

def rank_one_criterion():
    rep = Report("rank one")
    for weights, c in (("1", (1,)), ({"gamma_rank": 2, "L": {"s1": [1, 0]}}, (1, 0))):
        t = compute_tables(make_instance("A1", weights, "regular"))
        e, s = t.W.identity, t.W.parse_word("s1")
        qc = LaurentPoly.monomial(c)
        qmc = qc.bar()
        one = LaurentPoly.const(1, len(c))
        C = compute_C(t.M, t.P)
        p = f"c={c}: "
        rep.compare(p + "R_{1,s} = q^-c - q^c", [("R", t.R.get(e, s), qmc - qc)])
        rep.compare(p + "P_{1,s} = -q^c", [("P", t.P.get(e, s), -qc)])
        rep.compare(p + "Q_{1,s} = q^c", [("Q", t.Q.get(e, s), qc)])
        rep.compare(p + "C_s = Gamma_s - q^c Gamma_1", [("C", C[s], {s: one, e: -qc})])
        rep.compare(p + "T_s C_s = -q^-c C_s",
                    [("TC", act_ts(0, C[s], t.M), {x: a * -qmc for x, a in C[s].items()})])
    return rep


# -- 9 ------------------------------------------------------------------------------

def _quiet(argv):
    import contextlib
    import io
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli_main(argv)
    return code, out.getvalue(), err.getvalue()


def plumbing_criterion():
    rep = Report("determinism and cache")
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        base = ["--instance", "A2-deodhar-psi-s2", "--cache-dir", str(tmp / "cache"),
                "--export", "json,csv,dot"]
        runs = []
        for d in ("a", "b"):
            code, _, err = _quiet(["export", *base, "--dir", str(tmp / d)])
            runs.append((code, err.strip().split(": ")[-1]))
        rep.compare("exit codes", [("runs", [r[0] for r in runs], [0, 0])])
        rep.compare("second run served from cache", [("source", [r[1] for r in runs],
                                                      ["computed", "cached"])])
        names = sorted(p.name for p in (tmp / "a").iterdir())
        rep.compare("byte-identical exports", ((n, (tmp / "a" / n).read_bytes(),
                                                (tmp / "b" / n).read_bytes()) for n in names))
        fresh = tmp / "fresh"
        _quiet(["export", "--instance", "A2-deodhar-psi-s2", "--export", "json,csv,dot",
                "--dir", str(fresh)])
        rep.compare("cache round trip preserves tables",
                    ((n, (tmp / "a" / n).read_bytes(), (fresh / n).read_bytes()) for n in names))

        cache = tmp / "cache2"
        cfg = ["--instance", "regular", "--group", "A2", "--cache-dir", str(cache)]
        _quiet(["compute", *cfg])
        (path,) = list(cache.glob("*.json"))
        data = json.loads(path.read_text())
        entry = next(e for e in data["tables"]["P"]["entries"] if e["x"] != e["y"])
        entry["poly"][0][1] = str(int(entry["poly"][0][1]) + 1)
        path.write_text(json.dumps(data))
        code, out, _ = _quiet(["verify", *cfg, "--json"])
        report = json.loads(out)
        pq = next(c for c in report["checks"] if c["name"] == "P Q = I")
        rep.compare("corrupted cached P: verify exits 1", [("exit", code, 1)])
        rep.compare("corrupted cached P: P Q = I fails at the corrupted entry",
                    [("PQ", (pq["passed"], pq.get("counterexample", {}).get("at")),
                      (False, [entry["x"], entry["y"]]))])
    return rep


CRITERIA = [
    (1, "Hecke soundness", hecke_criterion, 5),
    (2, "R layer", r_criterion, 10),
    (3, "P/Q layer", pq_criterion, 60),
    (4, "W-graph representations", wgraph_criterion, 60),
    (5, "duality", duality_criterion, 30),
    (6, "finite inversion", finite_criterion, 120),
    (7, "parabolic degeneration", parabolic_criterion, 10),
    (8, "rank one closed forms", rank_one_criterion, 1),
    (9, "determinism and plumbing", plumbing_criterion, 5),
]


@pytest.mark.parametrize("num,title,fn,budget", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, budget):
    rep = record(num, title, fn, budget)
    assert rep.ok, rep.summary()


if __name__ == "__main__":
    results = [record(*c).ok for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
