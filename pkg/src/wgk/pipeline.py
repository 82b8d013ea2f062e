"""
End-to-end computation and verification for one instance.

``compute_tables`` builds the realizations and every table in dependency order.
``verify_tables`` runs all applicable identity suites against a (possibly
cached) set of tables and returns one Report.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .checks import Report
from .coxeter import CoxeterGroup, WeightFunction
from .dual import check_parabolic_dual, dual_space
from .finite import check_dual_twist, run_finite
from .hecke import HeckeAlgebra
from .ideal import module_bar
from .instances import Instance, parse_instance
from .klpoly import (PolyMatrix, assemble_wgraph, chain_Q, check_Q_bar_relations,
                     check_weak_R_relations, compute_C, compute_C_prime, compute_mu,
                     compute_P, compute_Q, compute_R, compute_R_tilde, oracle_P, oracle_R,
                     sign_conjugate, verify_wgraph, zero_weight_bijection)

__all__ = ["Tables", "make_instance", "compute_tables", "verify_tables", "hecke_soundness",
           "TABLE_NAMES",
           "CHAIN_LIMIT", "ORACLE_P_LIMIT"]

TABLE_NAMES = ("R", "Rt", "P", "Pt", "Q", "Qt")
# chain enumeration and the direct P solve grow quickly; skip them beyond these sizes
CHAIN_LIMIT = 24
ORACLE_P_LIMIT = 24


@dataclass
class Tables:
    instance: Instance
    M: object
    Mt: object
    R: PolyMatrix
    Rt: PolyMatrix
    P: PolyMatrix
    Pt: PolyMatrix
    Q: PolyMatrix
    Qt: PolyMatrix
    mu: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def W(self):
        return self.instance.W

    @property
    def H(self):
        return self.instance.H

    def matrices(self) -> dict:
        return {k: getattr(self, k) for k in TABLE_NAMES}


def make_instance(group: str | dict, weights: str | dict, name: str) -> Instance:
    """group: a name like 'B2' or a config dict; weights: 'equal', '1,2' or a config dict."""
    W = CoxeterGroup.from_config(group) if isinstance(group, dict) else CoxeterGroup.named(group)
    if isinstance(weights, dict):
        L = WeightFunction.from_config(W, weights)
    elif weights in ("equal", "", None):
        L = WeightFunction.equal(W)
    else:
        L = WeightFunction.from_ints(int(v) for v in str(weights).split(","))
    return parse_instance(name, HeckeAlgebra(W, L))


def compute_tables(inst: Instance, given: dict | None = None) -> Tables:
    """Every table for ``inst``; matrices in ``given`` (e.g. from a cache) are reused."""
    given = given or {}
    M, Mt = inst.pair()
    R = given.get("R") or compute_R(M)
    Rt = given.get("Rt") or compute_R_tilde(Mt, R)
    P = given.get("P") or compute_P(R)
    Pt = given.get("Pt") or compute_P(Rt, "Pt")
    Q = given.get("Q") or compute_Q(P)
    Qt = given.get("Qt") or compute_Q(Pt, "Qt")
    return Tables(inst, M, Mt, R, Rt, P, Pt, Q, Qt)


def hecke_soundness(H: HeckeAlgebra, pairs: int | None = None) -> Report:
    """
    Quadratic and braid relations on the T-basis, bar and Phi involutive and
    commuting, bar multiplicative.  ``pairs`` caps the (x, y) products checked
    for multiplicativity by taking an even stride; by default every pair is
    used up to |W| = 24 and 400 pairs beyond.
    """
    W = H.W
    rep = Report(f"Hecke algebra {W.name} L={H.L.to_config(W)['L']}")
    zero = H.zero()
    rep.compare("(T_s - q^L)(T_s + q^-L) = 0",
                ((W.gens[s], (H.Tword([s]) - H.scalar(H.qL[s])) * (H.Tword([s]) + H.scalar(H.qmL[s])),
                  zero) for s in range(W.rank)))

    def braid(s, t, m):
        word = [s if i % 2 == 0 else t for i in range(m)]
        return H.Tword(word)

    rep.compare("braid relations",
                (((W.gens[s], W.gens[t]), braid(s, t, W.m[s][t]), braid(t, s, W.m[s][t]))
                 for s in range(W.rank) for t in range(s + 1, W.rank) if W.m[s][t]))
    rep.compare("T_x T_y = T_xy when lengths add",
                (((W.word_str(x), W.word_str(y)), H.T(x) * H.T(y), H.T(W.mul(x, y)))
                 for x in W.elements for y in W.elements
                 if W.length[W.mul(x, y)] == W.length[x] + W.length[y]))
    rep.compare("bar(bar(T_w)) = T_w", ((W.word_str(w), H.bar_T(w).bar(), H.T(w)) for w in W.elements))
    rep.compare("Phi(Phi(T_w)) = T_w", ((W.word_str(w), H.T(w).phi().phi(), H.T(w)) for w in W.elements))
    rep.compare("Phi(bar(T_w)) = bar(Phi(T_w))",
                ((W.word_str(w), H.bar_T(w).phi(), H.T(w).phi().bar()) for w in W.elements))
    els = [(x, y) for x in W.elements for y in W.elements]
    if pairs is None and W.order > 24:
        pairs = 400
    if pairs is not None:
        els = els[:: max(1, len(els) // pairs)]
    rep.compare("bar(T_x T_y) = bar(T_x) bar(T_y)",
                (((W.word_str(x), W.word_str(y)), (H.T(x) * H.T(y)).bar(), H.bar_T(x) * H.bar_T(y))
                 for x, y in els))
    return rep


def _mu(t: Tables) -> dict:
    if t.mu is None:
        t.mu = compute_mu(t.M, t.P, t.Q)
    return t.mu


def wgraph(t: Tables):
    bij = zero_weight_bijection(t.M, t.P, t.Q)
    return assemble_wgraph(t.M, _mu(t), bijection=bij)


def _matrix_checks(t: Tables, rep: Report, oracles: bool) -> None:
    W, H = t.W, t.H
    M, Mt = t.M, t.Mt
    ident = PolyMatrix.identity("I", t.R.index, H.rank)

    def same(name, A, B):
        d = A.diff(B)
        rep.compare(name, [(None if d is None else [W.word_str(d[0]), W.word_str(d[1])],
                            None if d is None else d[2], None if d is None else d[3])])

    same("R = R from the descent recursion", t.R, compute_R(M))
    same("R = bar in H, re-expressed", t.R, oracle_R(M))
    same("R~ = bar in H, re-expressed (dual side)", t.Rt, oracle_R(Mt))
    same("R~ = eps eps bar(R)", t.Rt, sign_conjugate(t.R.bar(), W))
    rep.extend(check_weak_R_relations(M, t.R))
    if Mt is not M:
        rep.extend(check_weak_R_relations(Mt, t.Rt), "dual: ")
    same("bar(P) = bar(R) P", t.P.bar(), t.R.bar() @ t.P)
    same("bar(P~) = bar(R~) P~", t.Pt.bar(), t.Rt.bar() @ t.Pt)
    z = tuple(0 for _ in range(H.rank))
    rep.assert_all("P, P~, Q, Q~ off-diagonal support in positive degrees",
                   ((A.kind, all(e > z for e in a.support()), [W.word_str(x), W.word_str(y)])
                    for A in (t.P, t.Pt, t.Q, t.Qt) for x, y, a in A.entries() if x != y))
    if oracles and len(M.E) <= ORACLE_P_LIMIT:
        L_of = lambda w: H.L.of(W, w)
        same("P = direct bar-fixed solve", t.P, oracle_P(t.R, L_of))
        same("P~ = direct bar-fixed solve", t.Pt, oracle_P(t.Rt, L_of))
    same("P Q = I", t.P @ t.Q, ident)
    same("Q P = I", t.Q @ t.P, ident)
    same("P~ Q~ = I", t.Pt @ t.Qt, ident)
    if oracles and len(M.E) <= CHAIN_LIMIT:
        same("Q = chain sum", t.Q, chain_Q(t.P, W.bruhat_lt))
    qrel = check_Q_bar_relations(t.Q, t.R, t.Rt, W)
    rep.extend(qrel)
    Qp = sign_conjugate(t.Q, W)
    rep.info["bar(Q') = Q' R~ (unbarred R~)"] = Qp.bar().diff(Qp @ t.Rt) is None


def _basis_checks(t: Tables, rep: Report) -> dict:
    M, Mt = t.M, t.Mt
    W = t.W
    C = compute_C(M, t.P, check=False)
    Ct = compute_C(Mt, t.Pt, check=False)
    Cp, Ctp = compute_C_prime(M, Mt, C, Ct, check=False)
    for name, B, r in (("C", C, M), ("C~", Ct, Mt), ("C'", Cp, M), ("C~'", Ctp, Mt)):
        rep.compare(f"bar({name}_w) = {name}_w",
                    ((W.word_str(w), module_bar(v, r), v) for w, v in B.items()))
    return {"C": C, "Ct": Ct, "Cp": Cp, "Ctp": Ctp}


def verify_tables(t: Tables, oracles: bool = True, finite: bool = True) -> Report:
    inst = t.instance
    W, H = t.W, t.H
    rep = Report(f"{inst.name} on {W.name} L={H.L.to_config(W)['L']}")
    times = {}
    clock = time.perf_counter()

    def lap(name):
        nonlocal clock
        now = time.perf_counter()
        times[name] = round(now - clock, 4)
        clock = now

    M = t.M
    rep.info["E"] = [W.word_str(w) for w in M.E]
    rep.info["side"] = "self-dual" if M.self_dual else "paired"
    rep.info["r_cones"] = M.cone_report + ([] if t.Mt is M else t.Mt.cone_report)
    bases = {}

    def stage(name, fn):
        try:
            fn()
        except Exception as exc:  # a corrupted table may break any later stage
            rep.assert_all(f"{name} stage", [(type(exc).__name__, False, str(exc))])
        lap(name)

    stage("matrices", lambda: _matrix_checks(t, rep, oracles))
    stage("bases", lambda: bases.update(_basis_checks(t, rep)))
    stage("wgraph", lambda: rep.extend(verify_wgraph(wgraph(t), W.m)))
    stage("dual", lambda: rep.extend(dual_space(M, t.Mt, t.R, t.P, t.Q, t.Qt, _mu(t),
                                                bases["Ctp"])))
    kind = inst.kind

    def parabolic():
        I = M.ideal
        rel_J = inst.params.get("relative") != "empty"
        rep.assert_all("no weak ascents on D_J" if rel_J else "no weak ascents on D_J (vacuous)",
                       (((W.gens[s], W.word_str(w)), I.kind[s, w] != "0+", None)
                        for s in range(W.rank) for w in I.E if rel_J))
        rep.assert_all("r = 0 on D_J", ((k, not v, v) for k, v in
                                        list(M.r.items()) + list(t.Mt.r.items())))
        if not rel_J:
            rep.extend(check_parabolic_dual(M, t.Q, _mu(t), inst.ideal.J))

    if kind.startswith("deodhar"):
        stage("parabolic", parabolic)

    def fin():
        out = run_finite(M, t.Mt, t.R, t.Rt, t.P, t.Pt, t.Q, t.Qt, _mu(t))
        rep.extend(out["report"])
        t.extra["finite"] = out
        twist_ok = kind == "regular" or (kind.startswith("deodhar")
                                         and inst.params.get("relative") == "empty")
        if twist_ok and out.get("Ptpi") is not None:
            rep.extend(check_dual_twist(out["pi"], out["pi_t"], t.Q, t.Qt,
                                        out["Ppi"], out["Ptpi"]))

    if finite:
        stage("finite", fin)
    rep.info["seconds"] = times
    return rep
