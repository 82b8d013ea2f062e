"""
Finite groups: the w0-twisted basis and the inversion formulas.

For w in E put w' = w0 w, used only as a label (the set w0 E need not be an
ideal).  The twisted basis is Gamma^pi_{w'} = T_{w0} bar(Gamma_w).  Since
T_{pi(s)} T_{w0} = T_{w0} T_s, the generator T_{pi(s)} acts on it exactly like
T_s acts on bar(Gamma_w); tables here are keyed by s and always mean the
action of T_{pi(s)}.  Labels are stored as the underlying w, and the index order
of every pi-table is the reverse of the order on E.

When the seed is an eigenvector of a parabolic T_{w_K} (the Deodhar seeds),
T_{w0} Gamma_1 = lam Gamma_m for a unit lam, and the raw vectors have a bar
matrix with constant diagonal bar(lam)/lam.  The basis used for the tables is
therefore lam^-1 T_{w0} bar(Gamma_w), which makes the twisted R unitriangular;
``raw`` keeps the unscaled vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import SimpleNamespace

from .checks import Report
from .dual import dual_act_ts
from .ideal import SIDE_M, ModuleRealization, PatternMismatch, act_ts, eta, module_bar, theta
from .klpoly import (AntisymmetryViolation, PolyMatrix, assemble_wgraph,
                     check_weak_R_relations, compute_mu, compute_P, compute_Q, verify_wgraph)
from .linalg import NotFree, SpanBasis, vec_add

__all__ = ["PiBasisTable", "build_pi_basis", "compute_R_pi", "compute_P_pi", "pi_mu",
           "check_pi_order", "inversion_suite", "check_dual_twist", "IndexReversalMismatch",
           "PI_SWAP"]

# the class of (pi(s), w') in terms of the class of (s, w)
PI_SWAP = {"-": "+", "+": "-", "0-": "0-", "0+": "0+"}


class IndexReversalMismatch(ValueError):
    pass


@dataclass
class PiBasisTable:
    rlz: ModuleRealization
    w0: int
    index: tuple
    vectors: dict
    basis: SpanBasis = field(repr=False)
    action: dict = field(repr=False)
    raw: dict = field(repr=False, default_factory=dict)
    scale: object = None
    report: Report = field(default_factory=lambda: Report("twisted basis"))

    @property
    def W(self):
        return self.rlz.W

    @property
    def H(self):
        return self.rlz.H

    def label(self, w) -> str:
        return f"({self.W.word_str(w)})'"

    def kind(self, s, w) -> str:
        return PI_SWAP[self.rlz.ideal.kind[s, w]]

    def descents(self, w) -> frozenset:
        """Descents of w' in the twisted module, on the realization's side."""
        wk = "0-" if self.rlz.side == SIDE_M else "0+"
        return frozenset(s for s in range(self.W.rank) if self.kind(s, w) in ("-", wk))

    def strong_partner(self, s, w):
        return self.W.left[w][s] if self.kind(s, w) == "+" else None

    def act(self, s, v) -> dict:
        """T_{pi(s)} on a vector in Gamma^pi coordinates."""
        out: dict = {}
        for w, a in v.items():
            out = vec_add(out, self.action[s, w], a)
        return out

    def to_gamma(self, v, raw: bool = False) -> dict:
        vecs = self.raw if raw else self.vectors
        out: dict = {}
        for w, a in v.items():
            out = vec_add(out, vecs[w], a)
        return out

    def r(self) -> dict:
        """Weak-ascent r-polynomials of the twisted action, same sign convention."""
        out = {}
        M = self.rlz.side == SIDE_M
        for (s, w), v in self.action.items():
            if self.kind(s, w) == "0+":
                rest = {z: (-a if M else a) for z, a in v.items() if z != w}
                if rest:
                    out[s, w] = rest
        return out

    def view(self):
        """Duck-typed realization for the generic klpoly checks."""
        ideal = SimpleNamespace(E=self.index, kind={k: PI_SWAP[v] for k, v in
                                                    self.rlz.ideal.kind.items()})
        return SimpleNamespace(ideal=ideal, H=self.H, W=self.W, side=self.rlz.side,
                               r=self.r(), E=self.index, descents=self.descents)


def build_pi_basis(rlz: ModuleRealization) -> PiBasisTable:
    """
    Gamma^pi_{w'} = T_{w0} bar(Gamma_w), computed in H and re-expressed in the
    Gamma basis.  Freeness is asserted, and the T_{pi(s)} action is checked
    against the four-case rule obtained from T_s bar(Gamma_w).
    """
    W, H = rlz.W, rlz.H
    w0 = W.longest_element()
    Tw0 = H.T(w0)
    index = tuple(reversed(rlz.E))
    raw = {}
    for w in rlz.E:
        raw[w] = rlz.from_hecke(Tw0 * (H.bar_T(w) * rlz.seed))
    lead = raw[0]
    scale = H.one_poly
    if len(lead) == 1:
        (lam,) = lead.values()
        if lam.is_unit():
            scale = lam.unit_inverse()
    vectors = {w: {y: a * scale for y, a in v.items()} for w, v in raw.items()}
    basis = SpanBasis(H.rank)
    for w in index:
        try:
            basis.add(w, vectors[w])
        except NotFree as exc:
            raise NotFree(f"twisted vector at {W.word_str(w)} is dependent") from exc
    pi = [W.pi_gen(s) for s in range(W.rank)]
    action = {}
    for s in range(W.rank):
        for w in rlz.E:
            action[s, w] = basis.coords(act_ts(pi[s], vectors[w], rlz))
    t = PiBasisTable(rlz, w0, index, vectors, basis, action, raw, scale)
    rep = t.report
    rep.assert_all("L(pi(s)) = L(s)", ((W.gens[s], H.L.of_gen(pi[s]) == H.L.of_gen(s), pi[s])
                                      for s in range(W.rank)))

    def table():
        one = H.one_poly
        for s in range(W.rank):
            d = H.qdiff[s]
            for w in rlz.E:
                k = rlz.ideal.kind[s, w]
                sw = W.left[w][s]
                if k == "+":
                    want = {sw: one}
                    if d:
                        want[w] = d
                elif k == "-":
                    want = {sw: one}
                else:
                    # weak: T_s bar(Gamma_w) = bar(T_s Gamma_w) + (q^L - q^-L) bar(Gamma_w)
                    want = {z: a.bar() for z, a in rlz.action[s, w].items()}
                    want[w] = want[w] + d
                    want = {z: a for z, a in want.items() if a}
                yield (W.gens[pi[s]], t.label(w)), action[s, w], want
    rep.compare("T_pi(s) Gamma^pi table (strong classes swapped, r barred)", table())
    return t


def check_eta_twist(t: PiBasisTable, tt: PiBasisTable) -> Report:
    """
    eta(Gamma^pi_{w'}) against eps_{w0 w} bar(Gamma~^pi_{w'}), and the variant
    without the outer bar recorded in ``info``.
    """
    rlz, rlz_t = t.rlz, tt.rlz
    W = rlz.W
    rep = Report("eta on the twisted basis")
    e0 = W.sign(t.w0)

    def items(with_bar):
        for w in rlz.E:
            lhs = eta(t.raw[w], rlz, rlz_t)
            g = tt.raw[w]
            rhs = module_bar(g, rlz_t) if with_bar else dict(g)
            sgn = e0 * W.sign(w)
            yield t.label(w), lhs, {y: a * sgn for y, a in rhs.items()}
    rep.compare("eta(Gamma^pi_w') = eps_{w0 w} bar(Gamma~^pi_w')", items(True))
    rep.info["eta_twist_without_bar_holds"] = all(l == r for _, l, r in items(False))
    return rep


def compute_R_pi(t: PiBasisTable, R: PolyMatrix,
                 strict: bool = False) -> tuple[PolyMatrix, Report]:
    """
    bar(Gamma^pi_{y'}) = bar(lam^-1) bar(T_{w0}) Gamma_y re-expressed in the twisted basis.
    Checks triangularity, the weak-case relations and R^pi_{w',y'} = R_{y,w};
    with ``strict`` a failure of the last raises IndexReversalMismatch.
    """
    rlz, W, H = t.rlz, t.W, t.H
    barw0 = H.bar_T(t.w0)
    c = t.scale.bar()
    cols = {}
    for y in rlz.E:
        v = rlz.from_hecke(barw0 * rlz.gamma[y])
        cols[y] = {x: a * c for x, a in t.basis.coords(v).items()}
    Rpi = PolyMatrix("Rpi", t.index, H.rank, cols)
    rep = Report("twisted R")
    pos = Rpi.pos
    rep.assert_all("R^pi unitriangular in reversed order",
                   ((t.label(y), Rpi.get(y, y) == H.one_poly
                     and all(pos[x] <= pos[y] for x in Rpi.col(y)), Rpi.col(y))
                    for y in t.index))
    rev = rep.compare("R^pi_{w',y'} = R_{y,w}",
                      (((t.label(w), t.label(y)), Rpi.get(w, y), R.get(y, w))
                       for y in rlz.E for w in rlz.E))
    if strict and not rev.passed:
        raise IndexReversalMismatch(rev.counterexample)
    rep.extend(check_weak_R_relations(t.view(), Rpi))
    return Rpi, rep


def compute_P_pi(t: PiBasisTable, Rpi: PolyMatrix, kind: str = "Ppi") -> tuple[PolyMatrix, Report]:
    """P^pi by the same positive-part construction on the reversed index."""
    rep = Report("twisted P")
    try:
        Ppi = compute_P(Rpi, kind)
    except AntisymmetryViolation as exc:
        rep.assert_all("P^pi construction", [("antisymmetry", False, str(exc))])
        return None, rep

    def items():
        for y in t.index:
            C = t.to_gamma(Ppi.col(y))
            yield t.label(y), module_bar(C, t.rlz), C
    rep.compare("bar(C^pi_y') = C^pi_y'", items())
    return Ppi, rep


def pi_mu(t: PiBasisTable, Ppi: PolyMatrix, Qpi: PolyMatrix) -> dict:
    """mu-coefficients of the C^pi basis, keyed (s, z, v) for the action of T_pi(s)."""
    return compute_mu(t.view(), Ppi, Qpi, descents=t.descents, action=t.act,
                      label=t.label, strong_partner=t.strong_partner)


def check_pi_order(W, E) -> Report:
    """y <=_L w iff w' <=_L y' on E."""
    w0 = W.longest_element()
    rep = Report("twisted weak order")
    rep.assert_all("y <=_L w iff w0 w <=_L w0 y",
                   (((W.word_str(y), W.word_str(w)),
                     W.weak_leq(y, w) == W.weak_leq(W.mul(w0, w), W.mul(w0, y)), None)
                    for y in E for w in E))
    return rep


def check_dual_twist(t: PiBasisTable, tt: PiBasisTable, Q: PolyMatrix, Qt: PolyMatrix,
                     Ppi: PolyMatrix, Ptpi: PolyMatrix) -> Report:
    """
    For E = D_J relative to the empty set, where Hom(M, A) carries the same action
    table as M: T_{w0}^{-1} D_z = eps_{w0 z} theta(C~^pi_{z'}) and its twin
    T_{w0}^{-1} D~_z = eps_{w0 z} eta(C^pi_{z'}), with Gamma^_y read as Gamma_y.
    Here C^pi_{z'} = sum P^pi_{x',z'} T_{w0} bar(Gamma_x) is taken on the raw
    (unscaled) twisted vectors.  The same identities with T_{w0} in place of its
    inverse are recorded in ``info``.
    """
    rlz, rlz_t = t.rlz, tt.rlz
    W, H = rlz.W, rlz.H
    w0 = t.w0
    word = W.word[w0]
    rep = Report("twisted dual bases")

    def dual_w0(f, r, inverse):
        # T_{w0} on Hom(M, A); T_{w0}^{-1} = T_{w0^-1}^{-1} acts as bar(T_{w0}) does
        if not inverse:
            for s in reversed(word):
                f = dual_act_ts(s, f, r)
            return f
        out: dict = {}
        for x, a in H.bar_T(w0).terms.items():
            g = f
            for s in reversed(W.word[x]):
                g = dual_act_ts(s, g, r)
            out = vec_add(out, g, a)
        return out

    def items(inverse):
        for z in rlz.E:
            sgn = W.sign(w0) * W.sign(z)
            lhs = dual_w0(dict(Q.row(z)), rlz, inverse)
            Ct_pi = tt.to_gamma(Ptpi.col(z), raw=True)
            rhs = {y: a * sgn for y, a in theta(Ct_pi, rlz_t, rlz).items()}
            yield ("D", W.word_str(z)), lhs, rhs
            lhs = dual_w0(dict(Qt.row(z)), rlz_t, inverse)
            C_pi = t.to_gamma(Ppi.col(z), raw=True)
            rhs = {y: a * sgn for y, a in eta(C_pi, rlz, rlz_t).items()}
            yield ("D~", W.word_str(z)), lhs, rhs
    rep.compare("T_w0^-1 D_z = eps theta(C~^pi_z') and twin", items(True))
    rep.info["with_T_w0_instead_of_inverse"] = all(l == r for _, l, r in items(False))
    return rep


def inversion_suite(P, Pt, Q, Qt, Ppi, Ptpi, W, mu=None, mu_pi=None, t=None) -> Report:
    """
    Q against P~^pi, the two orthogonality sums, and the mu reversal.  The mu
    comparison runs over triples (s, y, w) with s a descent of y but not of w and
    s a twisted descent of w' but not of y'; strong-ascent partners are skipped
    on both sides, their coefficient being fixed at 1.
    """
    rep = Report("inversion formulas")
    E = P.index
    one, zero = P.get(E[0], E[0]), P.get(E[0], E[0]) * 0
    lab = W.word_str

    def prop(Qm, Pm):
        for y in E:
            for w in E:
                yield (lab(y), lab(w)), Qm.get(y, w), Pm.get(w, y) * (W.sign(y) * W.sign(w))
    rep.compare("Q_{y,w} = eps_y eps_w P~^pi_{w',y'}", prop(Q, Ptpi))
    rep.compare("Q~_{y,w} = eps_y eps_w P^pi_{w',y'}", prop(Qt, Ppi))

    def ortho(A, Bpi):
        for x in E:
            for w in E:
                acc = zero
                for z, a in A.row(x).items():
                    b = Bpi.get(w, z)
                    if b:
                        acc = acc + a * b * (W.sign(w) * W.sign(z))
                yield (lab(x), lab(w)), acc, one if x == w else zero
    rep.compare("sum_z eps_w eps_z P_{x,z} P~^pi_{w',z'} = delta", ortho(P, Ptpi))
    rep.compare("sum_z eps_w eps_z P~_{x,z} P^pi_{w',z'} = delta", ortho(Pt, Ppi))

    if mu is not None and mu_pi is not None and t is not None:
        rlz = t.rlz

        def keys():
            for s in range(W.rank):
                for y in E:
                    for w in E:
                        if not (s in rlz.descents(y) and s not in rlz.descents(w)
                                and s in t.descents(w) and s not in t.descents(y)):
                            continue
                        if rlz.ideal.kind[s, w] == "+" and W.left[w][s] == y:
                            continue
                        if t.kind(s, y) == "+" and W.left[y][s] == w:
                            continue
                        yield s, y, w

        def mus():
            for s, y, w in keys():
                lhs = mu.get((s, y, w), zero)
                rhs = -mu_pi.get((s, w, y), zero) * (W.sign(y) * W.sign(w))
                yield (W.gens[s], lab(y), lab(w)), lhs, rhs
        rep.compare("m^s_{y,w} = -eps_{w0 y} eps_{w0 w} m^pi_{w',y'}", mus())
    return rep


def pi_wgraph_report(t: PiBasisTable, mu_pi: dict) -> Report:
    g = assemble_wgraph(t.view(), mu_pi, descents=t.descents, index=t.index,
                        label=t.label, strong_partner=t.strong_partner)
    return verify_wgraph(g, t.W.m)


def run_finite(rlz, rlz_t, R, Rt, P, Pt, Q, Qt, mu=None) -> dict:
    """
    The full twisted pipeline; returns tables and one combined report.  When the
    twisted R is not unitriangular the remaining identities are not evaluated
    and ``info["finite_applicable"]`` is False.
    """
    W = rlz.W
    rep = Report("finite inversion")
    t = build_pi_basis(rlz)
    tt = t if rlz_t is rlz else build_pi_basis(rlz_t)
    rep.extend(t.report)
    if tt is not t:
        rep.extend(tt.report, "dual: ")
    rep.extend(check_eta_twist(t, tt))
    Rpi, r1 = compute_R_pi(t, R)
    Rtpi, r2 = compute_R_pi(tt, Rt)
    out = {"pi": t, "pi_t": tt, "Rpi": Rpi, "Rtpi": Rtpi, "Ppi": None, "Ptpi": None,
           "report": rep}
    tri = "R^pi unitriangular in reversed order"
    for r in (r1, r2):
        if not r.get(tri).passed:
            # the twisted formulas presuppose a triangular twisted basis
            rep.info["finite_applicable"] = False
            rep.info["finite_reason"] = {"check": tri, **r.get(tri).counterexample}
            return out
    rep.info["finite_applicable"] = True
    rep.extend(r1)
    rep.extend(r2, "dual: ")
    Ppi, r3 = compute_P_pi(t, Rpi)
    rep.extend(r3)
    Ptpi, r4 = compute_P_pi(tt, Rtpi, "Ptpi")
    rep.extend(r4, "dual: ")
    out.update(Ppi=Ppi, Ptpi=Ptpi)
    if Ppi is None or Ptpi is None:
        return out
    Qpi = compute_Q(Ppi, "Qpi")
    mu_pi = None
    if mu is not None and rlz.side == SIDE_M and rlz.H.L.is_positive():
        try:
            mu_pi = pi_mu(t, Ppi, Qpi)
        except PatternMismatch as exc:
            rep.assert_all("twisted mu extraction", [("pattern", False, str(exc))])
        else:
            rep.extend(pi_wgraph_report(t, mu_pi), "twisted ")
    rep.extend(check_pi_order(W, rlz.E))
    rep.extend(inversion_suite(P, Pt, Q, Qt, Ppi, Ptpi, W, mu, mu_pi, t))
    out.update(Qpi=Qpi, mu_pi=mu_pi)
    return out
