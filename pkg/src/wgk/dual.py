"""
The dual modules Hom(M, A) and Hom(Mt, A).

A functional f is stored by its values on the Gamma basis, ``{y: f(Gamma_y)}``,
i.e. in the coordinates of the dual basis Gamma^_y.  The Hecke action is
(T_s f)(m) = f(T_s m) and the bar operator is bar(f)(m) = bar(f(bar(m))), both
evaluated through the realization's own action and bar tables.

Two families of D' are provided.  ``D_prime_literal`` is the signed-Q~
combination inside Hom(M, A).  ``D_prime`` lives in Hom(Mt, A) and is the basis
with D'_z(C~'_w) = eps_z delta_{z,w}; it is the one that is bar-invariant and
carries the D'-type action.
"""

from __future__ import annotations

from typing import Mapping

from .checks import Report
from .ideal import ModuleRealization, act_ts, eta, module_bar, theta
from .klpoly import PolyMatrix
from .linalg import vec_add

__all__ = ["dual_act_ts", "dual_bar", "pairing", "D_basis", "D_prime", "D_prime_literal",
           "check_dual_action", "check_dual_pairing", "check_d_action", "check_dprime_action",
           "check_zero_weight_duality", "check_parabolic_dual", "check_duality_maps", "dual_space",
           "ActionMismatch"]


class ActionMismatch(ValueError):
    def __init__(self, report):
        bad = next(c for c in report.checks if not c.passed)
        super().__init__(f"{bad.name}: {bad.counterexample}")
        self.report = report


def pairing(f: Mapping, v: Mapping, rank) -> object:
    from .laurent import LaurentPoly
    out = LaurentPoly.zero(rank)
    for y, a in v.items():
        b = f.get(y)
        if b is not None:
            out = out + a * b
    return out


def dual_act_ts(s: int, f: Mapping, rlz: ModuleRealization) -> dict:
    out = {}
    for y in rlz.E:
        acc = rlz.H.zero_poly
        for x, a in rlz.action[s, y].items():
            b = f.get(x)
            if b is not None:
                acc = acc + a * b
        if acc:
            out[y] = acc
    return out


def dual_bar(f: Mapping, rlz: ModuleRealization) -> dict:
    out = {}
    for x in rlz.E:
        acc = rlz.H.zero_poly
        for y, a in rlz.bar_gamma(x).items():
            b = f.get(y)
            if b is not None:
                acc = acc + a * b
        if acc:
            out[x] = acc.bar()
    return out


def D_basis(Q: PolyMatrix) -> dict:
    """D_z = sum_y Q_{z,y} Gamma^_y, so that D_z(C_w) = delta."""
    return {z: dict(Q.row(z)) for z in Q.index}


def D_prime(Q: PolyMatrix, W) -> dict:
    """In Hom(Mt, A): D'_z = sum_y eps_z eps_y bar(Q_{z,y}) Gamma~^_y."""
    return {z: {y: a.bar() * (W.sign(z) * W.sign(y)) for y, a in Q.row(z).items()}
            for z in Q.index}


def D_prime_literal(Qt: PolyMatrix, W) -> dict:
    """In Hom(M, A): sum_y eps_y Q~_{z,y} Gamma^_y."""
    return {z: {y: a * W.sign(y) for y, a in Qt.row(z).items()} for z in Qt.index}


def _lin(basis: Mapping, coeffs: Mapping) -> dict:
    out: dict = {}
    for u, a in coeffs.items():
        out = vec_add(out, basis[u], a)
    return out


def check_dual_action(rlz: ModuleRealization, R: PolyMatrix) -> Report:
    """bar(Gamma^_y) = sum_{w >= y} bar(R_{y,w}) Gamma^_w, bar taken via the pairing."""
    rep = Report("dual bar of Gamma^")
    one = rlz.H.one_poly

    def items():
        for y in rlz.E:
            lhs = dual_bar({y: one}, rlz)
            rhs = {w: a.bar() for w, a in R.row(y).items()}
            yield rlz.W.word_str(y), lhs, rhs
    rep.compare("bar(Gamma^_y) = sum bar(R_{y,w}) Gamma^_w", items())
    return rep


def check_dual_pairing(rlz, P, Q) -> Report:
    rep = Report("D basis")
    D = D_basis(Q)
    W = rlz.W
    rep.compare("D_z(C_w) = delta", (((W.word_str(z), W.word_str(w)),
                                     pairing(D[z], P.col(w), rlz.H.rank),
                                     rlz.H.one_poly if z == w else rlz.H.zero_poly)
                                    for z in rlz.E for w in rlz.E))
    rep.compare("bar(D_z) = D_z", ((W.word_str(z), dual_bar(D[z], rlz), D[z]) for z in rlz.E))
    return rep


def _mu_terms(mu, s, z, members, sign=None):
    out = {}
    for (t, x, u), m in mu.items():
        if t == s and x == z and u in members:
            out[u] = m * sign(z, u) if sign else m
    return out


def check_d_action(rlz: ModuleRealization, Q: PolyMatrix, mu: Mapping) -> Report:
    """T_s D_z against the D-basis formula, for every s with L(s) > 0."""
    rep = Report("D-basis action")
    H, W, I = rlz.H, rlz.W, rlz.ideal
    D = D_basis(Q)

    def items():
        for s in range(W.rank):
            if not any(H.L.of_gen(s)):
                continue
            asc = {u for u in I.E if s in I.A(u)}
            for z in I.E:
                lhs = dual_act_ts(s, D[z], rlz)
                if s in I.A(z):
                    coeffs = {z: H.qL[s]}
                else:
                    coeffs = {z: -H.qmL[s]}
                    if s in I.SD(z):
                        coeffs[W.left[z][s]] = H.one_poly
                    for u, m in _mu_terms(mu, s, z, asc).items():
                        coeffs[u] = coeffs.get(u, H.zero_poly) + m
                yield (W.gens[s], W.word_str(z)), lhs, _lin(D, coeffs)
    rep.compare("T_s D_z formula", items())
    return rep


def check_dprime_action(rlz: ModuleRealization, rlz_t: ModuleRealization, Q: PolyMatrix,
                Qt: PolyMatrix, mu: Mapping, Ctp: Mapping) -> Report:
    """
    D' in Hom(Mt, A): pairing with C~', bar-invariance and the action formula.
    The mu-terms enter with sign -eps_z eps_u; ``info["mu_sign_always_plus"]``
    records whether that sign is +1 on every nonzero term.  The literal signed-Q~ combination in
    Hom(M, A) is tested for bar-invariance as well.
    """
    rep = Report("D'-basis")
    H, W, I = rlz.H, rlz.W, rlz.ideal
    Dp = D_prime(Q, W)
    rep.compare("D'_z(C~'_w) = eps_z delta", (((W.word_str(z), W.word_str(w)),
                                               pairing(Dp[z], Ctp[w], H.rank),
                                               H.one_poly * W.sign(z) if z == w else H.zero_poly)
                                              for z in I.E for w in I.E))
    rep.compare("bar(D'_z) = D'_z", ((W.word_str(z), dual_bar(Dp[z], rlz_t), Dp[z])
                                     for z in I.E))

    def sign(z, u):
        return -W.sign(z) * W.sign(u)

    def items():
        for s in range(W.rank):
            if not any(H.L.of_gen(s)):
                continue
            asc = {u for u in I.E if s in I.A(u)}
            for z in I.E:
                lhs = dual_act_ts(s, Dp[z], rlz_t)
                if s in I.A(z):
                    coeffs = {z: -H.qmL[s]}
                else:
                    coeffs = {z: H.qL[s]}
                    if s in I.SD(z):
                        coeffs[W.left[z][s]] = H.one_poly
                    for u, m in _mu_terms(mu, s, z, asc, sign).items():
                        coeffs[u] = coeffs.get(u, H.zero_poly) + m
                yield (W.gens[s], W.word_str(z)), lhs, _lin(Dp, coeffs)
    rep.compare("T_s D'_z formula (mu-terms signed -eps_z eps_u)", items())
    rep.info["mu_sign_always_plus"] = all(sign(z, u) == 1 for (s, z, u), m in mu.items() if m)
    lit = D_prime_literal(Qt, W)
    rep.info["literal_bar_invariant"] = all(dual_bar(lit[z], rlz) == lit[z] for z in I.E)
    return rep


def check_zero_weight_duality(rlz: ModuleRealization, Q: PolyMatrix) -> Report:
    """Generators with L(s) = 0 permute or negate the D basis."""
    rep = Report("D-basis action, weight-zero generators")
    H, W, I = rlz.H, rlz.W, rlz.ideal
    D = D_basis(Q)

    def items():
        for s in range(W.rank):
            if any(H.L.of_gen(s)):
                continue
            for z in I.E:
                k = I.kind[s, z]
                lhs = dual_act_ts(s, D[z], rlz)
                if k in ("-", "+"):
                    rhs = D[W.left[z][s]]
                elif k == "0-":
                    rhs = {y: -a for y, a in D[z].items()}
                else:
                    rhs = D[z]
                yield (W.gens[s], W.word_str(z)), lhs, rhs
    rep.compare("T_s D_z for L(s) = 0", items())
    return rep


def check_parabolic_dual(rlz: ModuleRealization, Q: PolyMatrix, mu: Mapping, J) -> Report:
    """
    For E = D_J viewed relative to the empty set (side M): the dual action on
    Gamma^ coincides with the action on Gamma, and D_z = sum Q_{z,y} Gamma_y,
    read inside M, carries the D_J-restricted D-basis action.
    """
    rep = Report("parabolic self-duality")
    H, W, I = rlz.H, rlz.W, rlz.ideal
    J = frozenset(J)
    one = H.one_poly

    def dkind(s, w):
        sw = W.left[w][s]
        if W.length[sw] < W.length[w]:
            return "-"
        return "+" if sw in I else "0"

    def table():
        for s in range(W.rank):
            for w in I.E:
                lhs = dual_act_ts(s, {w: one}, rlz)
                k = dkind(s, w)
                if k == "+":
                    rhs = {W.left[w][s]: one}
                elif k == "-":
                    rhs = {W.left[w][s]: one}
                    if H.qdiff[s]:
                        rhs[w] = H.qdiff[s]
                else:
                    rhs = {w: H.qL[s]}
                yield (W.gens[s], W.word_str(w)), lhs, rhs
    rep.compare("T_s Gamma^_w table (weak case q^L Gamma^_w)", table())
    rep.compare("dual action = module action",
                (((W.gens[s], W.word_str(w)), dual_act_ts(s, {w: one}, rlz), rlz.action[s, w])
                 for s in range(W.rank) for w in I.E))

    D = {z: dict(Q.row(z)) for z in I.E}

    def cor():
        for s in range(W.rank):
            if not any(H.L.of_gen(s)):
                continue
            up = {u for u in I.E if dkind(s, u) in ("+", "0")}
            for z in I.E:
                lhs = act_ts(s, D[z], rlz)
                if dkind(s, z) == "-":
                    coeffs = {z: -H.qmL[s], W.left[z][s]: one}
                    for u, m in _mu_terms(mu, s, z, up).items():
                        coeffs[u] = coeffs.get(u, H.zero_poly) + m
                else:
                    coeffs = {z: H.qL[s]}
                yield (W.gens[s], W.word_str(z)), lhs, _lin(D, coeffs)
    rep.compare("D_z action inside M(D_J)", cor())
    return rep


def check_duality_maps(rlz: ModuleRealization, rlz_t: ModuleRealization) -> Report:
    """eta and theta are mutually inverse, commute with bar and twist T_s by Phi."""
    rep = Report("duality maps")
    W, H = rlz.W, rlz.H
    one = H.one_poly
    rep.compare("theta(eta(Gamma_w)) = Gamma_w",
                ((W.word_str(w), theta(eta({w: one}, rlz, rlz_t), rlz_t, rlz), {w: one})
                 for w in rlz.E))
    rep.compare("eta(theta(Gamma~_w)) = Gamma~_w",
                ((W.word_str(w), eta(theta({w: one}, rlz_t, rlz), rlz, rlz_t), {w: one})
                 for w in rlz.E))
    rep.compare("bar(eta(Gamma_w)) = eta(bar(Gamma_w))",
                ((W.word_str(w), module_bar(eta({w: one}, rlz, rlz_t), rlz_t),
                  eta(module_bar({w: one}, rlz), rlz, rlz_t)) for w in rlz.E))

    def phi_items():
        # Phi(T_s) = -bar(T_s) = -T_s + (q^L - q^-L)
        for s in range(W.rank):
            for w in rlz.E:
                lhs = eta(act_ts(s, {w: one}, rlz), rlz, rlz_t)
                e = eta({w: one}, rlz, rlz_t)
                rhs = vec_add({y: -a for y, a in act_ts(s, e, rlz_t).items()}, e, H.qdiff[s])
                yield (W.gens[s], W.word_str(w)), lhs, rhs
    rep.compare("eta(T_s m) = Phi(T_s) eta(m)", phi_items())
    return rep


def dual_space(rlz, rlz_t, R, P, Q, Qt, mu, Ctp, strict: bool = False) -> Report:
    """All dual-module identities in one report; ``strict`` raises ActionMismatch."""
    rep = Report("dual modules")
    rep.extend(check_duality_maps(rlz, rlz_t))
    rep.extend(check_dual_action(rlz, R))
    rep.extend(check_dual_pairing(rlz, P, Q))
    rep.extend(check_d_action(rlz, Q, mu))
    rep.extend(check_dprime_action(rlz, rlz_t, Q, Qt, mu, Ctp))
    if any(not any(rlz.H.L.of_gen(s)) for s in range(rlz.W.rank)):
        rep.extend(check_zero_weight_duality(rlz, Q))
    if strict and not rep.ok:
        raise ActionMismatch(rep)
    return rep
