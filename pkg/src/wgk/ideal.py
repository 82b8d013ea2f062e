"""
W-graph ideals and the modules they carry.

An ideal is a suffix-closed subset E of D_J.  Each pair (s, w) with w in E
falls in exactly one of four classes, written here as

    "-"   sw < w            (strong descent, sw in E)
    "+"   sw > w, sw in E   (strong ascent)
    "0-"  sw > w, sw not in D_J          (weak descent)
    "0+"  sw > w, sw in D_J but not in E (weak ascent)

A module is never taken on faith: :func:`realize_from_seed` builds
Gamma_w = T_w * seed inside the Hecke algebra, checks freeness, reads off the
action of every T_s in the Gamma basis, matches it against the two admissible
patterns (side "M" or its dual side "Mt") and extracts the r-polynomials.

Module vectors are plain dicts ``{w: LaurentPoly}`` in the Gamma basis of a
given realization.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .coxeter import CoxeterGroup
from .hecke import HeckeAlgebra, HeckeElement
from .laurent import Cone, LaurentPoly, gamma_neg
from .linalg import NotFree, NotInSpan, SpanBasis, vec_add

__all__ = [
    "IdealData", "ModuleRealization", "build_ideal", "ideal_from_element",
    "realize_from_seed", "act_ts", "act_hecke", "module_bar", "eta", "theta",
    "NotSuffixClosed", "PosViolation", "PatternMismatch", "ContainerViolation",
    "SeedNotBarInvariant", "NotFree", "SIDE_M", "SIDE_MT",
]

SIDE_M = "M"
SIDE_MT = "Mt"
KINDS = ("-", "+", "0-", "0+")


class NotSuffixClosed(ValueError):
    def __init__(self, u, w):
        super().__init__(f"{u} is a suffix of {w} but is not in the set")
        self.u, self.w = u, w


class PosViolation(ValueError):
    def __init__(self, s):
        super().__init__(f"generator {s} is in J but not in Pos(E)")
        self.s = s


class PatternMismatch(ValueError):
    def __init__(self, s, w, detail=""):
        super().__init__(f"T_s{s + 1} Gamma_{w} fits neither action pattern {detail}")
        self.s, self.w = s, w


class ContainerViolation(UserWarning):
    pass


class SeedNotBarInvariant(ValueError):
    pass


@dataclass(frozen=True)
class IdealData:
    """A suffix-closed E inside D_J with its four-way classification."""

    W: CoxeterGroup
    E: tuple
    J: frozenset
    kind: dict = field(repr=False)
    twist: dict = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "pos", {w: i for i, w in enumerate(self.E)})

    def __contains__(self, w):
        return w in self.pos

    def __len__(self):
        return len(self.E)

    def cls(self, s: int, w: int) -> str:
        return self.kind[s, w]

    def _gens_of_kind(self, w, k):
        return frozenset(s for s in range(self.W.rank) if self.kind[s, w] == k)

    def SD(self, w):
        return self._gens_of_kind(w, "-")

    def SA(self, w):
        return self._gens_of_kind(w, "+")

    def WD(self, w):
        return self._gens_of_kind(w, "0-")

    def WA(self, w):
        return self._gens_of_kind(w, "0+")

    def D(self, w):
        return self.SD(w) | self.WD(w)

    def A(self, w):
        return self.SA(w) | self.WA(w)

    def of_kind(self, s, k) -> list:
        return [w for w in self.E if self.kind[s, w] == k]

    def label(self, w) -> str:
        return self.W.word_str(w)


def ideal_from_element(W: CoxeterGroup, w: int) -> list:
    """{u : u <=_L w}."""
    return W.weak_ideal(w)


def build_ideal(W: CoxeterGroup, E: Iterable[int], J: Iterable[int]) -> IdealData:
    E = tuple(sorted(set(E)))
    J = frozenset(J)
    Eset = set(E)
    for w in E:
        for s in W.left_descents(w):
            u = W.left[w][s]
            if u not in Eset:
                raise NotSuffixClosed(W.word_str(u), W.word_str(w))
    pos = W.pos_set(E)
    for s in sorted(J):
        if s not in pos:
            raise PosViolation(W.gens[s])

    def in_DJ(x):
        return not any(W.length[W.right[x][j]] < W.length[x] for j in J)

    kind, twist = {}, {}
    for w in E:
        for s in range(W.rank):
            sw = W.left[w][s]
            if W.length[sw] < W.length[w]:
                kind[s, w] = "-"
            elif sw in Eset:
                kind[s, w] = "+"
            else:
                t = W.mul(W.inverse[w], sw)
                twist[s, w] = t
                kind[s, w] = "0+" if in_DJ(sw) else "0-"
    return IdealData(W, E, J, kind, twist)


@dataclass
class ModuleRealization:
    """
    Gamma_w = T_w * seed for w in E, with the T_s action in the Gamma basis.

    ``action[s, w]`` is the dict expansion of T_s Gamma_w.  ``r[s, w]`` maps
    z to the r-polynomial of a weak-ascent pair, normalized so that side M
    reads T_s Gamma_w = q^L Gamma_w - sum r_z Gamma_z and side Mt reads
    T_s Gamma_w = -q^-L Gamma_w + sum r_z Gamma_z.
    """

    ideal: IdealData
    H: HeckeAlgebra
    seed: HeckeElement
    side: str
    gamma: dict
    basis: SpanBasis = field(repr=False)
    action: dict = field(repr=False)
    r: dict = field(repr=False)
    self_dual: bool = False
    cone_report: list = field(default_factory=list, repr=False)
    _bar_cols: dict = field(default_factory=dict, repr=False)

    @property
    def W(self):
        return self.ideal.W

    @property
    def E(self):
        return self.ideal.E

    def descents(self, w) -> frozenset:
        """Generators acting on C_w by -q^-L: SD + WD on side M, SD + WA on side Mt."""
        I = self.ideal
        return I.SD(w) | (I.WD(w) if self.side == SIDE_M else I.WA(w))

    def unit(self, w) -> dict:
        return {w: self.H.one_poly}

    def to_hecke(self, v: Mapping) -> HeckeElement:
        out = self.H.zero()
        for w, a in v.items():
            out = out + self.gamma[w] * a
        return out

    def from_hecke(self, h: HeckeElement) -> dict:
        return self.basis.coords(h.terms)

    def bar_gamma(self, w) -> dict:
        """bar(Gamma_w) in the Gamma basis, via bar in H (seed is bar-invariant)."""
        hit = self._bar_cols.get(w)
        if hit is None:
            hit = self.from_hecke(self.H.bar_T(w) * self.seed)
            self._bar_cols[w] = hit
        return hit


def _detect_side(ideal: IdealData, H: HeckeAlgebra, action) -> tuple[str, bool]:
    for k in ("0-", "0+"):
        for s in range(ideal.W.rank):
            for w in ideal.of_kind(s, k):
                d = action[s, w].get(w, H.zero_poly)
                m_val = -H.qmL[s] if k == "0-" else H.qL[s]
                t_val = H.qL[s] if k == "0-" else -H.qmL[s]
                if d == m_val and d != t_val:
                    return SIDE_M, False
                if d == t_val and d != m_val:
                    return SIDE_MT, False
                if d != m_val:
                    raise PatternMismatch(s, w, f"(diagonal {d})")
    return SIDE_M, True


def realize_from_seed(ideal: IdealData, H: HeckeAlgebra, seed: HeckeElement,
                      side: str | None = None, check_bar: bool = True) -> ModuleRealization:
    """Realize the module H*seed on the basis {T_w seed : w in E} and verify it."""
    if check_bar and seed.bar() != seed:
        raise SeedNotBarInvariant("seed must be bar-invariant in H")
    W = ideal.W
    basis = SpanBasis(H.rank)
    gamma = {}
    for w in ideal.E:
        # ideal is sorted by length, so a left descent sw precedes w
        if w == 0:
            g = seed
        else:
            s = min(W.left_descents(w))
            g = gamma[W.left[w][s]].mul_ts_left(s)
        gamma[w] = g
        basis.add(w, g.terms)
    action = {}
    for w in ideal.E:
        for s in range(W.rank):
            try:
                action[s, w] = basis.coords(gamma[w].mul_ts_left(s).terms)
            except NotInSpan:
                # the span of {T_w seed : w in E} is not an H-submodule
                raise PatternMismatch(s, W.word_str(w), "(T_s Gamma_w leaves the span of E)") from None
    detected, self_dual = _detect_side(ideal, H, action)
    if side is None:
        side = detected
    elif not self_dual and side != detected:
        raise PatternMismatch(-1, -1, f"(requested side {side}, found {detected})")
    rlz = ModuleRealization(ideal, H, seed, side, gamma, basis, action, {}, self_dual)
    _verify_pattern(rlz)
    return rlz


def _verify_pattern(rlz: ModuleRealization) -> None:
    I, H, W = rlz.ideal, rlz.H, rlz.W
    one = H.one_poly
    M = rlz.side == SIDE_M
    for (s, w), v in rlz.action.items():
        k = I.kind[s, w]
        sw = W.left[w][s]
        if k == "-":
            want = {sw: one}
            if H.qdiff[s]:
                want[w] = H.qdiff[s]
        elif k == "+":
            want = {sw: one}
        elif k == "0-":
            want = {w: -H.qmL[s] if M else H.qL[s]}
        else:
            diag = H.qL[s] if M else -H.qmL[s]
            if v.get(w) != diag:
                raise PatternMismatch(s, w, "(weak ascent diagonal)")
            rest = {z: a for z, a in v.items() if z != w}
            for z in rest:
                if not W.bruhat_lt(z, w):
                    raise PatternMismatch(s, w, f"(term at {W.word_str(z)} not below)")
            r = {z: (-a if M else a) for z, a in rest.items()}
            if r:
                rlz.r[s, w] = r
            _check_cone(rlz, s, w, r)
            continue
        if v != want:
            raise PatternMismatch(s, w, f"(got {v}, want {want})")


def _check_cone(rlz, s, w, r):
    L = rlz.H.L.of_gen(s)
    z0 = tuple(0 for _ in L)
    cone = Cone(">", z0, shift=L) if rlz.side == SIDE_M else Cone("<", z0, shift=gamma_neg(L))
    for z, a in r.items():
        ok = cone.contains(a)
        rlz.cone_report.append({"s": rlz.W.gens[s], "z": rlz.W.word_str(z),
                                "w": rlz.W.word_str(w), "r": repr(a),
                                "cone": str(cone), "inside": ok})
        if not ok:
            warnings.warn(ContainerViolation(
                f"r^{rlz.W.gens[s]}_{{{rlz.W.word_str(z)},{rlz.W.word_str(w)}}} = {a} "
                f"lies outside {cone}"))


# -- module operations ---------------------------------------------------------

def act_ts(s: int, v: Mapping, rlz: ModuleRealization) -> dict:
    """T_s v using the extracted action table."""
    out: dict = {}
    for w, a in v.items():
        out = vec_add(out, rlz.action[s, w], a)
    return out


def act_word(word: Iterable[int], v: Mapping, rlz: ModuleRealization) -> dict:
    """T_{s1} ... T_{sk} v."""
    for s in reversed(tuple(word)):
        v = act_ts(s, v, rlz)
    return dict(v)


def act_hecke(h: HeckeElement, v: Mapping, rlz: ModuleRealization) -> dict:
    out: dict = {}
    for x, a in h.terms.items():
        out = vec_add(out, act_word(rlz.W.word[x], v, rlz), a)
    return out


def module_bar(v: Mapping, rlz: ModuleRealization) -> dict:
    """bar(sum a_w Gamma_w) = sum bar(a_w) bar(Gamma_w)."""
    out: dict = {}
    for w, a in v.items():
        out = vec_add(out, rlz.bar_gamma(w), a.bar())
    return out


def eta(v: Mapping, rlz: ModuleRealization, rlz_t: ModuleRealization) -> dict:
    """The duality M -> Mt: A-linear with eta(Gamma_w) = eps_w bar(Gamma~_w)."""
    W = rlz.W
    out: dict = {}
    for w, a in v.items():
        out = vec_add(out, rlz_t.bar_gamma(w), a * W.sign(w))
    return out


def theta(v: Mapping, rlz_t: ModuleRealization, rlz: ModuleRealization) -> dict:
    """Inverse of eta: theta(Gamma~_w) = eps_w bar(Gamma_w)."""
    return eta(v, rlz_t, rlz)
