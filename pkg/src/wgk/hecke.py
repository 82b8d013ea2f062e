"""
The generic Hecke algebra H(W, S, L) over A = Z[Gamma] in the T-basis.

Multiplication follows the rule T_s T_w = T_sw if sw > w and
T_sw + (q^L(s) - q^-L(s)) T_w otherwise; general products fold that rule
over a reduced word of the left factor.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .coxeter import CoxeterGroup, WeightFunction
from .laurent import LaurentPoly, gamma_neg, gamma_zero, poly_from_json, poly_to_json

__all__ = ["HeckeAlgebra", "HeckeElement", "InvalidWeights"]


class InvalidWeights(ValueError):
    pass


class HeckeAlgebra:
    """H(W, S, L).  Holds the group, the weights and a cache of bar(T_w)."""

    def __init__(self, W: CoxeterGroup, L: WeightFunction, validate: bool = True):
        if validate:
            L.validate(W)
        self.W = W
        self.L = L
        self.rank = L.rank
        self.one_poly = LaurentPoly.const(1, self.rank)
        self.zero_poly = LaurentPoly.zero(self.rank)
        # q^L(s), q^-L(s), q^L(s) - q^-L(s)
        self.qL = [LaurentPoly.monomial(L.of_gen(s)) for s in range(W.rank)]
        self.qmL = [LaurentPoly.monomial(gamma_neg(L.of_gen(s))) for s in range(W.rank)]
        self.qdiff = [self.qL[s] - self.qmL[s] for s in range(W.rank)]
        self._bar_T: dict[int, HeckeElement] = {}

    def __repr__(self):
        return f"HeckeAlgebra({self.W.name}, L={[list(v) for v in self.L.values]})"

    # -- constructors --------------------------------------------------------

    def element(self, terms: Mapping[int, LaurentPoly | int] | None = None) -> "HeckeElement":
        return HeckeElement(self, terms or {})

    def zero(self) -> "HeckeElement":
        return HeckeElement(self, {})

    def one(self) -> "HeckeElement":
        return self.T(0)

    def T(self, w: int) -> "HeckeElement":
        return HeckeElement._raw(self, {w: self.one_poly})

    def Tword(self, word: Iterable[int]) -> "HeckeElement":
        h = self.one()
        for s in word:
            h = h.mul_ts_right(s)
        return h

    def scalar(self, a: LaurentPoly | int) -> "HeckeElement":
        return self.one() * a

    def poly(self, a: LaurentPoly | int) -> LaurentPoly:
        if isinstance(a, int):
            return LaurentPoly.const(a, self.rank)
        return a

    def qpow(self, g) -> LaurentPoly:
        return LaurentPoly.monomial(tuple(g))

    def qL_of(self, w: int) -> LaurentPoly:
        return LaurentPoly.monomial(self.L.of(self.W, w))

    # -- the named operations ----------------------------------------------

    def ts_mul_left(self, s: int, h: "HeckeElement") -> "HeckeElement":
        return h.mul_ts_left(s)

    def t_mul(self, h1: "HeckeElement", h2: "HeckeElement") -> "HeckeElement":
        return h1 * h2

    def bar_T(self, w: int) -> "HeckeElement":
        """bar(T_w) = bar(T_s1) ... bar(T_sk) for the canonical reduced word."""
        hit = self._bar_T.get(w)
        if hit is not None:
            return hit
        return self.bar_T_word(self.W.word[w], cache_as=w)

    def bar_T_word(self, word, cache_as: int | None = None) -> "HeckeElement":
        """bar(T_w) along an arbitrary reduced word (for word-independence checks)."""
        word = tuple(word)
        h = self.one()
        # build right-to-left so every step is a left multiplication
        for s in reversed(word):
            h = h.mul_ts_left(s) + h * (self.qmL[s] - self.qL[s])
        if cache_as is not None:
            self._bar_T[cache_as] = h
        return h

    def hecke_bar(self, h: "HeckeElement") -> "HeckeElement":
        return h.bar()

    def phi(self, h: "HeckeElement") -> "HeckeElement":
        return h.phi()

    def parabolic_kl_elements(self, K: Iterable[int]) -> tuple["HeckeElement", "HeckeElement"]:
        """
        (C_{w_K}, C'_{w_K}) for the parabolic subgroup W_K = <K>:

            C_{w_K}  = eps(w_K) q^L(w_K) sum_{w in W_K} eps(w) q^-L(w) T_w
            C'_{w_K} = q^-L(w_K) sum_{w in W_K} q^L(w) T_w
        """
        K = frozenset(K)
        z = gamma_zero(self.rank)
        if any(not self.L.of_gen(s) > z for s in K):
            raise InvalidWeights("parabolic KL elements need L(s) > 0 on K")
        W = self.W
        sub = W.parabolic_subgroup(K)
        wK = max(sub, key=lambda w: W.length[w])
        LwK = self.L.of(W, wK)
        C, Cp = {}, {}
        for w in sub:
            Lw = self.L.of(W, w)
            C[w] = LaurentPoly.monomial(tuple(a - b for a, b in zip(LwK, Lw)),
                                        W.sign(wK) * W.sign(w))
            Cp[w] = LaurentPoly.monomial(tuple(b - a for a, b in zip(LwK, Lw)))
        return self.element(C), self.element(Cp)

    # -- serialization -----------------------------------------------------------

    def to_json(self, h: "HeckeElement") -> dict:
        return {self.W.word_str(w): poly_to_json(a) for w, a in sorted(h.terms.items())}

    def from_json(self, data: Mapping[str, list]) -> "HeckeElement":
        return self.element({self.W.parse_word(k): poly_from_json(v, self.rank)
                             for k, v in data.items()})


class HeckeElement:
    """Immutable sum_w a_w T_w with nonzero a_w."""

    __slots__ = ("H", "terms")

    def __init__(self, H: HeckeAlgebra, terms: Mapping[int, LaurentPoly | int]):
        self.H = H
        clean = {}
        for w, a in terms.items():
            a = H.poly(a)
            if a:
                clean[w] = a
        self.terms = clean

    @classmethod
    def _raw(cls, H, terms):
        h = object.__new__(cls)
        h.H = H
        h.terms = terms
        return h

    # -- linear structure ------------------------------------------------------

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        t = dict(self.terms)
        for w, a in other.terms.items():
            v = t.get(w)
            if v is None:
                t[w] = a
            else:
                v = v + a
                if v:
                    t[w] = v
                else:
                    del t[w]
        return HeckeElement._raw(self.H, t)

    def __neg__(self):
        return HeckeElement._raw(self.H, {w: -a for w, a in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return self.mul(other)
        a = self.H.poly(other)
        if not a:
            return self.H.zero()
        return HeckeElement._raw(self.H, {w: c * a for w, c in self.terms.items()
                                          if c * a})

    def __rmul__(self, other):
        # scalars are central
        return self * other

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, w: int) -> LaurentPoly:
        return self.terms.get(w, self.H.zero_poly)

    # -- multiplication -----------------------------------------------------------

    def mul_ts_left(self, s: int) -> "HeckeElement":
        H = self.H
        W = H.W
        left = W.left
        length = W.length
        d = H.qdiff[s]
        t: dict[int, LaurentPoly] = {}

        def acc(w, a):
            v = t.get(w)
            if v is None:
                t[w] = a
            else:
                v = v + a
                if v:
                    t[w] = v
                else:
                    del t[w]

        for w, a in self.terms.items():
            sw = left[w][s]
            acc(sw, a)
            if length[sw] < length[w] and d:
                acc(w, a * d)
        return HeckeElement._raw(H, t)

    def mul_ts_right(self, s: int) -> "HeckeElement":
        H = self.H
        W = H.W
        right = W.right
        length = W.length
        d = H.qdiff[s]
        t: dict[int, LaurentPoly] = {}
        for w, a in self.terms.items():
            for x, b in ((right[w][s], a), (w, a * d if length[right[w][s]] < length[w] else None)):
                if b is None or not b:
                    continue
                v = t.get(x)
                if v is None:
                    t[x] = b
                else:
                    v = v + b
                    if v:
                        t[x] = v
                    else:
                        del t[x]
        return HeckeElement._raw(H, t)

    def mul(self, other: "HeckeElement") -> "HeckeElement":
        H = self.H
        out = H.zero()
        for x, a in self.terms.items():
            h = other
            for s in reversed(H.W.word[x]):
                h = h.mul_ts_left(s)
            out = out + h * a
        return out

    # -- involutions -----------------------------------------------------------------

    def _twisted_sum(self, coeff) -> "HeckeElement":
        """sum_w coeff(w, a_w) bar(T_w), accumulated in one dict."""
        H = self.H
        acc: dict = {}
        for w, a in self.terms.items():
            c = coeff(w, a)
            for x, b in H.bar_T(w).terms.items():
                v = acc.get(x)
                acc[x] = b * c if v is None else v + b * c
        return HeckeElement._raw(H, {x: v for x, v in acc.items() if v})

    def bar(self) -> "HeckeElement":
        return self._twisted_sum(lambda w, a: a.bar())

    def phi(self) -> "HeckeElement":
        """A-linear, Phi(T_w) = eps_w bar(T_w)."""
        sign = self.H.W.sign
        return self._twisted_sum(lambda w, a: a * sign(w))

    # -- display -----------------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        W = self.H.W
        parts = []
        for w in sorted(self.terms):
            parts.append(f"({self.terms[w]})T[{W.word_str(w)}]")
        return " + ".join(parts)
