"""
R, P and Q tables, the C / C' bases, mu-coefficients and W-graphs.

Tables are :class:`PolyMatrix` objects indexed by a tuple of labels listed in
a linear extension of the triangularity order (for the ordinary tables:
element ids, which are sorted by length).  The P construction only needs that
order, so the same code serves the pi-twisted tables whose order is reversed.

Independent oracles live next to the recursions they check:

* :func:`oracle_R` re-expresses bar(Gamma_y) computed in H,
* :func:`oracle_P` solves the bar-fixed conditions as one linear system over Q,
* :func:`chain_Q` sums signed products over explicit Bruhat chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping

from .checks import Report
from .ideal import SIDE_M, SIDE_MT, ModuleRealization, act_ts, eta, module_bar, theta
from .laurent import LaurentPoly, gamma_zero, poly_to_json
from .linalg import solve_rational, vec_add

__all__ = [
    "PolyMatrix", "WGraphData", "compute_R", "compute_R_tilde", "oracle_R",
    "compute_P", "oracle_P", "compute_Q", "chain_Q", "compute_C",
    "compute_C_prime", "compute_mu", "zero_weight_bijection", "assemble_wgraph", "verify_wgraph",
    "check_weak_R_relations", "check_Q_bar_relations", "sign_conjugate",
    "DualityMismatch", "AntisymmetryViolation", "InversionFailure",
    "NotBarInvariant", "RelationViolation",
]


class DualityMismatch(ValueError):
    pass


class AntisymmetryViolation(ValueError):
    pass


class InversionFailure(ValueError):
    pass


class NotBarInvariant(ValueError):
    pass


class RelationViolation(ValueError):
    pass


@dataclass
class PolyMatrix:
    """Sparse square matrix over A; ``cols[y][x]`` is the (x, y) entry."""

    kind: str
    index: tuple
    rank: int
    cols: dict = field(repr=False)

    def __post_init__(self):
        self.pos = {x: i for i, x in enumerate(self.index)}
        self._rows = None

    @classmethod
    def identity(cls, kind, index, rank):
        one = LaurentPoly.const(1, rank)
        return cls(kind, tuple(index), rank, {x: {x: one} for x in index})

    def get(self, x, y) -> LaurentPoly:
        a = self.cols.get(y, {}).get(x)
        return a if a is not None else LaurentPoly.zero(self.rank)

    def col(self, y) -> dict:
        return self.cols.get(y, {})

    @property
    def rows(self) -> dict:
        if self._rows is None:
            rows = {x: {} for x in self.index}
            for y, c in self.cols.items():
                for x, a in c.items():
                    rows[x][y] = a
            self._rows = rows
        return self._rows

    def row(self, x) -> dict:
        return self.rows.get(x, {})

    def entries(self):
        for y in self.index:
            for x, a in sorted(self.cols.get(y, {}).items(), key=lambda t: self.pos[t[0]]):
                yield x, y, a

    def map(self, f: Callable[[LaurentPoly], LaurentPoly], kind=None) -> "PolyMatrix":
        cols = {}
        for y, c in self.cols.items():
            cols[y] = {x: b for x, a in c.items() if (b := f(a))}
        return PolyMatrix(kind or self.kind, self.index, self.rank, cols)

    def bar(self) -> "PolyMatrix":
        return self.map(lambda a: a.bar(), kind="bar " + self.kind)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        cols = {}
        for y in other.index:
            acc: dict = {}
            for z, b in other.col(y).items():
                acc = vec_add(acc, self.col(z), b)
            cols[y] = acc
        return PolyMatrix(f"{self.kind}*{other.kind}", other.index, self.rank, cols)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.diff(other) is None

    def diff(self, other: "PolyMatrix"):
        """First (x, y, mine, theirs) where the matrices differ, else None."""
        for y in self.index:
            a, b = self.col(y), other.col(y)
            if a != b:
                for x in self.index:
                    if a.get(x) != b.get(x):
                        return x, y, self.get(x, y), other.get(x, y)
        return None

    def is_identity(self) -> bool:
        return self.diff(PolyMatrix.identity("I", self.index, self.rank)) is None

    def reindexed(self, index, kind=None) -> "PolyMatrix":
        return PolyMatrix(kind or self.kind, tuple(index), self.rank, self.cols)

    def to_json(self, label: Callable = str) -> dict:
        return {"kind": self.kind,
                "entries": [{"x": label(x), "y": label(y), "poly": poly_to_json(a)}
                            for x, y, a in self.entries()]}

    @classmethod
    def from_json(cls, data: dict, index, rank, parse: Callable) -> "PolyMatrix":
        from .laurent import poly_from_json
        cols = {y: {} for y in index}
        for e in data["entries"]:
            a = poly_from_json(e["poly"], rank)
            if a:
                cols[parse(e["y"])][parse(e["x"])] = a
        return cls(data["kind"], tuple(index), rank, cols)


def sign_conjugate(M: PolyMatrix, W, kind=None) -> PolyMatrix:
    """S M S with S = diag(eps_x)."""
    cols = {}
    for y, c in M.cols.items():
        cols[y] = {x: a * (W.sign(x) * W.sign(y)) for x, a in c.items()}
    return PolyMatrix(kind or M.kind + "'", M.index, M.rank, cols)


# -- R ----------------------------------------------------------------------------

def _r_recursion(rlz: ModuleRealization, tilde: bool) -> PolyMatrix:
    I, H, W = rlz.ideal, rlz.H, rlz.W
    one, zero = H.one_poly, H.zero_poly
    cols = {}
    r_by_s: dict = {}
    for (s, w), r in rlz.r.items():
        r_by_s.setdefault(s, []).append((w, r))
    for y in I.E:
        if y == 0:
            cols[y] = {0: one}
            continue
        s = min(W.left_descents(y))
        R1 = cols[W.left[y][s]]
        qL, qmL = H.qL[s], H.qmL[s]
        c0m = qmL if tilde else -qL      # x weak descent
        c0p = -qL if tilde else qmL      # x weak ascent
        col: dict = {}
        for x in I.E:
            k = I.kind[s, x]
            sx = W.left[x][s]
            if k == "-":
                a = R1.get(sx, zero)
            elif k == "+":
                a = R1.get(sx, zero) + (qmL - qL) * R1.get(x, zero)
            elif k == "0-":
                a = c0m * R1.get(x, zero)
            else:
                a = c0p * R1.get(x, zero)
            if a:
                col[x] = a
        # weak-ascent columns feed back through their r-polynomials
        for w, r in r_by_s.get(s, ()):
            b = R1.get(w)
            if b:
                col = vec_add(col, r, b if tilde else -b)
        cols[y] = col
    return PolyMatrix("Rt" if tilde else "R", I.E, H.rank, cols)


def compute_R(rlz: ModuleRealization) -> PolyMatrix:
    """
    R from the descent recursion: for y with sy < y,
    bar(Gamma_y) = bar(T_s) bar(Gamma_sy), expanded case by case.
    """
    if rlz.side != SIDE_M and not rlz.self_dual:
        raise ValueError("compute_R needs a side-M realization")
    return _r_recursion(rlz, tilde=False)


def compute_R_tilde(rlz_t: ModuleRealization, R: PolyMatrix | None = None) -> PolyMatrix:
    """R~ by the same recursion on the dual side; checked against R if given."""
    if rlz_t.side != SIDE_MT and not rlz_t.self_dual:
        raise ValueError("compute_R_tilde needs a side-Mt realization")
    Rt = _r_recursion(rlz_t, tilde=True)
    if R is not None:
        W = rlz_t.W
        for x, y, a in _all_pairs(R, Rt):
            want = R.get(x, y).bar() * (W.sign(x) * W.sign(y))
            if Rt.get(x, y) != want:
                raise DualityMismatch(f"R~[{W.word_str(x)},{W.word_str(y)}] = "
                                      f"{Rt.get(x, y)}, expected {want}")
    return Rt


def _all_pairs(A: PolyMatrix, B: PolyMatrix):
    for y in A.index:
        for x in set(A.col(y)) | set(B.col(y)):
            yield x, y, None


def oracle_R(rlz: ModuleRealization) -> PolyMatrix:
    """R by computing bar(T_y * seed) in H and re-expressing it."""
    cols = {y: dict(rlz.bar_gamma(y)) for y in rlz.E}
    return PolyMatrix("R_oracle", rlz.E, rlz.H.rank, cols)


def check_weak_R_relations(rlz: ModuleRealization, R: PolyMatrix,
                           with_r_terms: bool = True) -> Report:
    """
    The weak-case column relations for R: bar(T_s Gamma_y) = bar(T_s) bar(Gamma_y)
    read off at Gamma_x for y weak and x a strong descent or ascent.  The r-terms
    vanish whenever no weak ascent carries a nonzero r.
    """
    I, H, W = rlz.ideal, rlz.H, rlz.W
    tilde = rlz.side == SIDE_MT
    rep = Report("weak-case R relations")

    def rterm(s, x, y):
        acc = H.zero_poly
        for (s2, w), r in rlz.r.items():
            if s2 == s and x in r:
                acc = acc + r[x] * R.get(w, y)
        return acc if tilde else -acc

    def items():
        for s in range(W.rank):
            qL, qmL = H.qL[s], H.qmL[s]
            for y in I.E:
                ky = I.kind[s, y]
                if ky not in ("0-", "0+"):
                    continue
                # eigenvalue of T_s on Gamma_y, barred
                lam = (-qmL if ky == "0-" else qL) if not tilde else (qL if ky == "0-" else -qmL)
                lam_bar = lam.bar()
                for x in I.E:
                    kx = I.kind[s, x]
                    if kx not in ("-", "+"):
                        continue
                    sx = W.left[x][s]
                    extra = rterm(s, x, y) if with_r_terms else H.zero_poly
                    # coefficient of Gamma_x in bar(T_s) bar(Gamma_y), minus the
                    # r-feedback from weak ascents; must equal lam_bar * R[x,y]
                    if kx == "-":
                        lhs = R.get(sx, y) + extra
                    else:
                        lhs = R.get(sx, y) + (qmL - qL) * R.get(x, y) + extra
                    rhs = lam_bar * R.get(x, y)
                    if ky == "0+" and with_r_terms:
                        # T_s Gamma_y also carries -+ sum_z r_{z,y} Gamma_z
                        own = H.zero_poly
                        for z, r in rlz.r.get((s, y), {}).items():
                            own = own + r.bar() * R.get(x, z)
                        rhs = rhs + (own if tilde else -own)
                    yield (W.gens[s], W.word_str(x), W.word_str(y)), lhs, rhs

    rep.compare("bar(T_s Gamma_y) = bar(T_s) bar(Gamma_y) on weak columns", items())
    return rep


# -- P --------------------------------------------------------------------------------

def compute_P(R: PolyMatrix, kind: str = "P") -> PolyMatrix:
    """
    The unique unitriangular P with off-diagonal support in positive degrees and
    bar(P) = bar(R) P, built column by column from the top down.
    """
    idx = R.index
    one = LaurentPoly.const(1, R.rank)
    barR_rows = {x: {y: a.bar() for y, a in R.row(x).items()} for x in idx}
    cols = {}
    for j, w in enumerate(idx):
        col = {w: one}
        for y in reversed(idx[:j]):
            f = LaurentPoly.zero(R.rank)
            row = barR_rows[y]
            for x, p in col.items():
                b = row.get(x)
                if b is not None:
                    f = f + b * p
            if not f:
                continue
            if f.bar() != -f:
                raise AntisymmetryViolation(f"column {w}, row {y}: {f}")
            p = -f.positive_part()
            if p:
                col[y] = p
        cols[w] = col
    return PolyMatrix(kind, idx, R.rank, cols)


def _exp_box(bound: tuple) -> list:
    """Exponents e with 0 < e (lex) and |e_i| <= bound_i."""
    z = tuple(0 for _ in bound)
    rng = [range(-b, b + 1) for b in bound]
    return [e for e in product(*rng) if e > z]


def oracle_P(R: PolyMatrix, L_of: Callable, kind: str = "P_oracle") -> PolyMatrix:
    """
    P solved directly: unknown integer coefficients of every P[y,w] (y before w)
    over a box of positive exponents bounded by |L(w)|, subject to P = R bar(P),
    one exact rational linear system per column.  No recursion is used.
    """
    idx = R.index
    rank = R.rank
    one = LaurentPoly.const(1, rank)
    cols = {}
    for j, w in enumerate(idx):
        bound = tuple(abs(c) for c in L_of(w))
        box = _exp_box(bound)
        unknown_rows = list(idx[:j])
        # a linear form is {exp: {var or None: coeff}}; None marks constants
        def P_form(x):
            if x == w:
                return {gamma_zero(rank): {None: 1}}
            return {e: {(x, e): 1} for e in box}

        eqs: dict = {}
        for y in unknown_rows:
            # P[y,w] - sum_x R[y,x] bar(P[x,w]) = 0
            form = {}

            def acc(e, var, c):
                d = form.setdefault(e, {})
                d[var] = d.get(var, 0) + c

            for e, lin in P_form(y).items():
                for var, c in lin.items():
                    acc(e, var, c)
            for x, rpoly in R.row(y).items():
                if x != w and x not in unknown_rows:
                    continue
                for e, lin in P_form(x).items():
                    for g, rc in rpoly.items():
                        ee = tuple(a - b for a, b in zip(g, e))
                        for var, c in lin.items():
                            acc(ee, var, -rc * c)
            for e, lin in form.items():
                eqs[(y, e)] = lin
        rows, rhs = [], []
        for lin in eqs.values():
            const = lin.pop(None, 0)
            if not any(lin.values()) and not const:
                continue
            rows.append(lin)
            rhs.append(-const)
        # make every unknown appear even if unconstrained, so uniqueness is tested
        allvars = {(y, e) for y in unknown_rows for e in box}
        seen = set()
        for r in rows:
            seen.update(k for k, v in r.items() if v)
        if allvars - seen:
            raise InversionFailure(f"oracle_P: column {w} has unconstrained coefficients")
        sol = solve_rational(rows, rhs) if rows else {}
        if sol is None:
            raise InversionFailure(f"oracle_P: column {w} has no solution in the box")
        col = {w: one}
        terms: dict = {}
        for (y, e), v in sol.items():
            if v:
                if v.denominator != 1:
                    raise InversionFailure(f"oracle_P: non-integral coefficient at {y}")
                terms.setdefault(y, {})[e] = int(v)
        for y, t in terms.items():
            col[y] = LaurentPoly(t, rank=rank)
        cols[w] = col
    return PolyMatrix(kind, idx, rank, cols)


# -- Q ------------------------------------------------------------------------------------

def compute_Q(P: PolyMatrix, kind: str = "Q") -> PolyMatrix:
    """Q_{y,w} = -P_{y,w} - sum_{y<z<w} Q_{y,z} P_{z,w}, row by row."""
    idx = P.index
    one = LaurentPoly.const(1, P.rank)
    rows = {}
    for i, y in enumerate(idx):
        row = {y: one}
        for w in idx[i + 1:]:
            pc = P.col(w)
            a = LaurentPoly.zero(P.rank)
            for z, p in pc.items():
                if z == w:
                    continue
                q = row.get(z)
                if q is not None:
                    a = a + q * p
            # the z = y term of the sum is P_{y,w} itself, with Q_{y,y} = 1
            a = -a
            if a:
                row[w] = a
        rows[y] = row
    cols = {w: {} for w in idx}
    for y, row in rows.items():
        for w, a in row.items():
            cols[w][y] = a
    Q = PolyMatrix(kind, idx, P.rank, cols)
    if not (P @ Q).is_identity() or not (Q @ P).is_identity():
        raise InversionFailure("PQ != I")
    return Q


def chain_Q(P: PolyMatrix, less: Callable[[object, object], bool],
            max_chains: int = 2_000_000) -> PolyMatrix:
    """Q_{y,w} = sum over chains y = z0 < ... < zn = w of (-1)^n P_{z0,z1}...P_{z(n-1),zn}."""
    idx = P.index
    one = LaurentPoly.const(1, P.rank)
    zero = LaurentPoly.zero(P.rank)
    above = {x: [z for z in idx if less(x, z)] for x in idx}
    cols = {w: {w: one} for w in idx}
    budget = [max_chains]

    for y in idx:
        for w in idx:
            if not less(y, w):
                continue
            total = zero
            stack = [(y, one, 0)]
            while stack:
                cur, prod, n = stack.pop()
                for z in above[cur]:
                    if z != w and not less(z, w):
                        continue
                    p = P.get(cur, z)
                    if not p:
                        continue
                    budget[0] -= 1
                    if budget[0] < 0:
                        raise RuntimeError("chain enumeration budget exhausted")
                    nxt = prod * p
                    if z == w:
                        total = total + (nxt if (n + 1) % 2 == 0 else -nxt)
                    else:
                        stack.append((z, nxt, n + 1))
            if total:
                cols[w][y] = total
    return PolyMatrix("Q_chain", idx, P.rank, cols)


def check_Q_bar_relations(Q: PolyMatrix, R: PolyMatrix, Rt: PolyMatrix, W) -> Report:
    """bar(Q) = Q R, and the sign-conjugated form bar(Q') = Q' bar(R~)."""
    rep = Report("Q/R identities")
    ident = PolyMatrix.identity("I", R.index, R.rank)
    d = (R.bar() @ R).diff(ident)
    rep.compare("bar(R) R = I", [(d[:2] if d else None, d is None, True)])
    d = (Q.bar()).diff(Q @ R)
    rep.compare("bar(Q) = Q R", [(d[:2] if d else None, d is None, True)])
    Qp = sign_conjugate(Q, W)
    d = Qp.bar().diff(Qp @ Rt.bar())
    rep.compare("bar(Q') = Q' bar(R~)", [(d[:2] if d else None, d is None, True)])
    return rep


# -- bases C, C' ---------------------------------------------------------------------------

def compute_C(rlz: ModuleRealization, P: PolyMatrix, check: bool = True) -> dict:
    """C_w = sum_y P_{y,w} Gamma_y; bar-invariance asserted."""
    C = {w: dict(P.col(w)) for w in rlz.E}
    if check:
        for w, v in C.items():
            if module_bar(v, rlz) != v:
                raise NotBarInvariant(f"C_{rlz.W.word_str(w)}")
    return C


def compute_C_prime(rlz: ModuleRealization, rlz_t: ModuleRealization,
                    C: dict, Ct: dict, check: bool = True) -> tuple[dict, dict]:
    """C'_w = theta(C~_w) in M and C~'_w = eta(C_w) in Mt."""
    Cp = {w: theta(v, rlz_t, rlz) for w, v in Ct.items()}
    Ctp = {w: eta(v, rlz, rlz_t) for w, v in C.items()}
    if check:
        for w, v in Cp.items():
            if module_bar(v, rlz) != v:
                raise NotBarInvariant(f"C'_{rlz.W.word_str(w)}")
        for w, v in Ctp.items():
            if module_bar(v, rlz_t) != v:
                raise NotBarInvariant(f"C~'_{rlz.W.word_str(w)}")
    return Cp, Ctp


# -- mu and W-graphs -------------------------------------------------------------------------

def compute_mu(rlz: ModuleRealization, P: PolyMatrix, Q: PolyMatrix,
               descents: Callable | None = None, action: Callable | None = None,
               label: Callable | None = None,
               strong_partner: Callable | None = None) -> dict:
    """
    m^s_{z,v} read off from T_s C_v re-expressed in the C basis.

    For s a descent of v the expansion must be -q^-L C_v.  Otherwise it must be
    q^L C_v (+ C_{sv} for a strong ascent) plus terms at z below v having s as
    a descent; those coefficients are returned as ``mu[s, z, v]``.

    ``descents`` and ``action`` default to the realization's own; the pi-twisted
    basis passes its own versions.
    """
    from .ideal import PatternMismatch
    H, W = rlz.H, rlz.W
    descents = descents or rlz.descents
    action = action or (lambda s, v: act_ts(s, v, rlz))
    label = label or W.word_str
    if strong_partner is None:
        def strong_partner(s, v):
            return W.left[v][s] if rlz.ideal.kind[s, v] == "+" else None
    idx = P.index
    pos = P.pos
    mu = {}
    for v in idx:
        Cv = P.col(v)
        Dv = descents(v)
        for s in range(W.rank):
            if not any(H.L.of_gen(s)):
                continue
            u = action(s, Cv)
            c: dict = {}
            for y, a in u.items():
                for x, qq in Q.col(y).items():
                    b = qq * a
                    if b:
                        nb = c.get(x, H.zero_poly) + b
                        if nb:
                            c[x] = nb
                        else:
                            c.pop(x, None)
            if s in Dv:
                if c != {v: -H.qmL[s]}:
                    raise PatternMismatch(s, v, f"(descent: T_s C_v = {c})")
                continue
            if c.get(v) != H.qL[s]:
                raise PatternMismatch(s, v, "(ascent diagonal)")
            rest = {z: a for z, a in c.items() if z != v}
            x = strong_partner(s, v)
            if x is not None:
                if rest.pop(x, None) != H.one_poly:
                    raise PatternMismatch(s, v, "(strong ascent partner)")
            for z, a in rest.items():
                if s not in descents(z) or pos[z] > pos[v]:
                    raise PatternMismatch(s, v, f"(term at {label(z)})")
                mu[s, z, v] = a
    return mu


@dataclass
class WGraphData:
    """Vertices, descent sets I(x) and edge weights mu[s, x, y] (s in I(x), s not in I(y))."""

    vertices: tuple
    I: dict
    mu: dict
    L: list
    rank: int
    labels: dict = field(default_factory=dict)
    bijection: dict = field(default_factory=dict)

    def rho(self, s: int) -> dict:
        """Columns of rho_s: rho[y] = {x: coeff}."""
        one = LaurentPoly.const(1, self.rank)
        if not any(self.L[s]):
            # weight-zero generator: T_s C_y = sign * C_x
            return {y: {x: one * sgn} for y, (x, sgn) in self.bijection[s].items()}
        qL = LaurentPoly.monomial(self.L[s])
        qmL = LaurentPoly.monomial(tuple(-c for c in self.L[s]))
        cols = {y: {} for y in self.vertices}
        for y in self.vertices:
            if s in self.I[y]:
                cols[y] = {y: -qmL}
            else:
                cols[y] = {y: qL}
        for (t, x, y), m in self.mu.items():
            if t == s and m:
                cols[y][x] = cols[y].get(x, LaurentPoly.zero(self.rank)) + m
        return cols

    def to_json(self) -> dict:
        lab = lambda v: self.labels.get(v, str(v))
        return {
            "vertices": [{"id": lab(v), "I": sorted(f"s{s + 1}" for s in self.I[v])}
                         for v in self.vertices],
            "mu": [{"s": f"s{s + 1}", "x": lab(x), "y": lab(y), "poly": poly_to_json(m)}
                   for (s, x, y), m in sorted(self.mu.items(),
                                              key=lambda t: (t[0][0], self.vertices.index(t[0][1]),
                                                             self.vertices.index(t[0][2])))],
        }

    def to_dot(self) -> str:
        lab = lambda v: self.labels.get(v, str(v))
        lines = ["graph wgraph {"]
        for v in self.vertices:
            I = ",".join(f"s{s + 1}" for s in sorted(self.I[v]))
            lines.append(f'  "{lab(v)}" [label="{lab(v)}\\n{{{I}}}"];')
        edges: dict = {}
        order = {v: i for i, v in enumerate(self.vertices)}
        for (s, x, y), m in self.mu.items():
            key = tuple(sorted((x, y), key=order.get))
            edges.setdefault(key, []).append((s, x, y, m))
        for (a, b), items in sorted(edges.items(), key=lambda t: (order[t[0][0]], order[t[0][1]])):
            text = "; ".join(f"s{s + 1}:{lab(x)}<-{lab(y)}:{m!r}" for s, x, y, m in
                             sorted(items, key=lambda t: (t[0], order[t[1]])))
            lines.append(f'  "{lab(a)}" -- "{lab(b)}" [label="{text}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def zero_weight_bijection(rlz: ModuleRealization, P: PolyMatrix, Q: PolyMatrix) -> dict:
    """
    For each s with L(s) = 0, the signed permutation y -> (x, sign) with
    T_s C_y = sign * C_x, read off from the C-basis expansion.
    """
    from .ideal import PatternMismatch
    H, W = rlz.H, rlz.W
    out = {}
    for s in range(W.rank):
        if any(H.L.of_gen(s)):
            continue
        perm = {}
        for v in P.index:
            c: dict = {}
            for y, a in act_ts(s, P.col(v), rlz).items():
                c = vec_add(c, Q.col(y), a)
            if len(c) != 1:
                raise PatternMismatch(s, v, f"(weight zero: T_s C_v = {c})")
            (x, a), = c.items()
            if a not in (H.one_poly, -H.one_poly):
                raise PatternMismatch(s, v, f"(weight zero coefficient {a})")
            perm[v] = (x, 1 if a == H.one_poly else -1)
        out[s] = perm
    return out


def assemble_wgraph(rlz: ModuleRealization, mu: Mapping, descents: Callable | None = None,
                    index: Iterable | None = None, label: Callable | None = None,
                    strong_partner: Callable | None = None,
                    bijection: Mapping | None = None) -> WGraphData:
    """
    (Lambda, I, mu) from a realization and its mu-coefficients.  The strong-ascent
    partner x = sv of a vertex v contributes mu^s_{x,v} = 1.
    """
    W = rlz.W
    descents = descents or rlz.descents
    vertices = tuple(index if index is not None else rlz.E)
    label = label or W.word_str
    one = rlz.H.one_poly
    I = {v: frozenset(descents(v)) for v in vertices}
    if strong_partner is None:
        def strong_partner(s, v):
            return W.left[v][s] if rlz.ideal.kind[s, v] == "+" else None
    edges = {}
    for v in vertices:
        for s in range(W.rank):
            if s in I[v] or not any(rlz.H.L.of_gen(s)):
                continue
            x = strong_partner(s, v)
            if x is not None:
                edges[s, x, v] = one
    for (s, z, v), m in mu.items():
        if m:
            edges[s, z, v] = edges.get((s, z, v), rlz.H.zero_poly) + m
    return WGraphData(vertices, I, edges, [rlz.H.L.of_gen(s) for s in range(W.rank)],
                      rlz.H.rank, {v: label(v) for v in vertices}, dict(bijection or {}))


def _apply(cols: dict, v: dict) -> dict:
    out: dict = {}
    for y, a in v.items():
        out = vec_add(out, cols[y], a)
    return out


def verify_wgraph(g: WGraphData, m: list[list[int]] | None = None) -> Report:
    """Conditions on mu (bar-invariance and degree), then the quadratic and braid relations for rho."""
    from .coxeter import INF
    rep = Report("W-graph")
    z = gamma_zero(g.rank)

    def mu_items():
        for (s, x, y), mval in g.mu.items():
            key = (f"s{s + 1}", g.labels.get(x, x), g.labels.get(y, y))
            ok = (mval.bar() == mval
                  and all(e > z for e in (mval * LaurentPoly.monomial(g.L[s])).support())
                  and s in g.I[x] and s not in g.I[y])
            yield key, ok, mval
    rep.assert_all("mu bar-invariant, q^L mu in Z[Gamma>0], s in I(x) \\ I(y)", mu_items())

    rho = {s: g.rho(s) for s in range(len(g.L))}
    basis = [{y: LaurentPoly.const(1, g.rank)} for y in g.vertices]

    def quad():
        for s, cols in rho.items():
            if not any(g.L[s]):
                for y in g.vertices:
                    e = {y: LaurentPoly.const(1, g.rank)}
                    yield (f"s{s + 1}", g.labels.get(y, y)), _apply(cols, _apply(cols, e)), e
                continue
            qL = LaurentPoly.monomial(g.L[s])
            qmL = LaurentPoly.monomial(tuple(-c for c in g.L[s]))
            for e in basis:
                y = next(iter(e))
                v2 = _apply(cols, _apply(cols, e))
                rhs = vec_add(dict(e), _apply(cols, e), qL - qmL)
                yield (f"s{s + 1}", g.labels.get(y, y)), v2, rhs
    rep.compare("quadratic relation (rho_s - q^L)(rho_s + q^-L) = 0", quad())

    def braid():
        if m is None:
            return
        n = len(g.L)
        for s in range(n):
            for t in range(s + 1, n):
                k = m[s][t]
                if k == INF:
                    continue
                for e in basis:
                    y = next(iter(e))
                    a, b = dict(e), dict(e)
                    for i in range(k):
                        a = _apply(rho[(s, t)[i % 2]], a)
                        b = _apply(rho[(t, s)[i % 2]], b)
                    yield (f"s{s + 1}", f"s{t + 1}", g.labels.get(y, y)), a, b
    rep.compare("braid relations", braid())
    return rep
