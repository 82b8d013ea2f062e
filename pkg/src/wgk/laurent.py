"""
Exact arithmetic in the group ring A = Z[Gamma], Gamma = Z^k with the
lexicographic order (first coordinate dominant).

A polynomial is a finite map exponent -> nonzero integer.  Exponents are
plain tuples of ints, so Python's tuple comparison *is* the order on Gamma.

>>> p = q(1) + 2
>>> p * p
q^2 + 4q + 4
>>> (q(1) - q(-1)).bar()
-q + q^-1
>>> deg(LaurentPoly.zero(1)) is NEG_INF
True
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Gamma", "NEG_INF", "LaurentPoly", "Cone",
    "gamma_add", "gamma_neg", "gamma_sub", "gamma_zero",
    "q", "deg", "poly_add", "poly_mul", "poly_bar", "poly_deg",
    "cone_member", "poly_to_json", "poly_from_json", "poly_to_csv",
]

Gamma = tuple  # tuple[int, ...], ordered lexicographically


def gamma_zero(k: int) -> Gamma:
    return (0,) * k


def gamma_add(a: Gamma, b: Gamma) -> Gamma:
    if len(a) == 1:
        return (a[0] + b[0],)
    return tuple(x + y for x, y in zip(a, b))


def gamma_neg(a: Gamma) -> Gamma:
    return tuple(-x for x in a)


def gamma_sub(a: Gamma, b: Gamma) -> Gamma:
    return tuple(x - y for x, y in zip(a, b))


@total_ordering
class _NegInf:
    """Degree of the zero polynomial; below every exponent."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __hash__(self):
        return hash("-inf")

    def __repr__(self):
        return "-inf"


NEG_INF = _NegInf()

Scalar = Union["LaurentPoly", int]


class LaurentPoly:
    """
    Immutable sparse Laurent polynomial with exponents in Z^rank.

    Zero coefficients are never stored, so two polynomials are equal
    exactly when their term maps are equal.
    """

    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, terms: Mapping[Gamma, int] | Iterable[tuple[Gamma, int]] = (),
                 rank: int | None = None):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        clean: dict[Gamma, int] = {}
        for e, c in items:
            e = tuple(e)
            if c:
                c = clean.get(e, 0) + c
                if c:
                    clean[e] = c
                else:
                    del clean[e]
        if rank is None:
            if not clean:
                raise ValueError("rank is required for the zero polynomial")
            rank = len(next(iter(clean)))
        for e in clean:
            if len(e) != rank:
                raise ValueError(f"exponent {e} does not have rank {rank}")
        self.rank = rank
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, rank: int) -> "LaurentPoly":
        # terms must already be pruned
        p = object.__new__(cls)
        p.rank = rank
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls._raw({}, rank)

    @classmethod
    def const(cls, c: int, rank: int) -> "LaurentPoly":
        return cls._raw({gamma_zero(rank): c} if c else {}, rank)

    @classmethod
    def monomial(cls, e: Gamma, c: int = 1) -> "LaurentPoly":
        e = tuple(e)
        return cls._raw({e: c} if c else {}, len(e))

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> dict[Gamma, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Gamma]:
        return sorted(self._terms)

    def coeff(self, e: Gamma) -> int:
        return self._terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Gamma, int]]:
        return iter(sorted(self._terms.items()))

    def deg(self):
        return max(self._terms) if self._terms else NEG_INF

    def low_deg(self):
        """Smallest exponent in the support (None for zero)."""
        return min(self._terms) if self._terms else None

    def is_unit(self) -> bool:
        """Units of Z[Gamma] are exactly +-q^g."""
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c in (1, -1)

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {gamma_zero(self.rank)}

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.rank != self.rank:
                raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other, self.rank)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        t = dict(self._terms)
        for e, c in other._terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                del t[e]
        return LaurentPoly._raw(t, self.rank)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self.rank)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return LaurentPoly.zero(self.rank)
        t: dict[Gamma, int] = {}
        if self.rank == 1:
            for (a,), c in self._terms.items():
                for (b,), d in other._terms.items():
                    e = (a + b,)
                    t[e] = t.get(e, 0) + c * d
        else:
            for a, c in self._terms.items():
                for b, d in other._terms.items():
                    e = tuple(x + y for x, y in zip(a, b))
                    t[e] = t.get(e, 0) + c * d
        return LaurentPoly._raw({e: c for e, c in t.items() if c}, self.rank)

    __rmul__ = __mul__

    def shift(self, g: Gamma) -> "LaurentPoly":
        """Multiply by q^g."""
        g = tuple(g)
        return LaurentPoly._raw(
            {gamma_add(e, g): c for e, c in self._terms.items()}, self.rank)

    def scale(self, c: int) -> "LaurentPoly":
        if not c:
            return LaurentPoly.zero(self.rank)
        return LaurentPoly._raw({e: c * v for e, v in self._terms.items()}, self.rank)

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw(
            {gamma_neg(e): c for e, c in self._terms.items()}, self.rank)

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of A")
        ((e, c),) = self._terms.items()
        return LaurentPoly._raw({gamma_neg(e): c}, self.rank)

    def part(self, pred) -> "LaurentPoly":
        """Sum of the terms whose exponent satisfies ``pred``."""
        return LaurentPoly._raw(
            {e: c for e, c in self._terms.items() if pred(e)}, self.rank)

    def positive_part(self) -> "LaurentPoly":
        z = gamma_zero(self.rank)
        return self.part(lambda e: e > z)

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """
        Return self/other if the quotient lies in A, else None.

        Leading-term division; terminates because the quotient's support is
        confined between deg(self)-deg(other) and low(self)-low(other).
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        lo = gamma_sub(self.low_deg(), other.low_deg())
        lead_e = other.deg()
        lead_c = other._terms[lead_e]
        rem = self
        quot: dict[Gamma, int] = {}
        while rem:
            e = rem.deg()
            c = rem._terms[e]
            if c % lead_c:
                return None
            qe = gamma_sub(e, lead_e)
            if qe < lo:
                return None
            qc = c // lead_c
            quot[qe] = qc
            rem = rem - other.shift(qe).scale(qc)
        return LaurentPoly._raw(quot, self.rank)

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            return self._terms == ({gamma_zero(self.rank): other} if other else {})
        if isinstance(other, LaurentPoly):
            return self.rank == other.rank and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self._terms.items())))
        return self._hash

    # -- display ----------------------------------------------------------

    def _fmt_exp(self, e: Gamma) -> str:
        return str(e[0]) if self.rank == 1 else "(" + ",".join(map(str, e)) + ")"

    def __repr__(self):
        if not self._terms:
            return "0"
        z = gamma_zero(self.rank)
        out = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == z:
                body = str(a)
            else:
                mono = "q" if (self.rank == 1 and e[0] == 1) else f"q^{self._fmt_exp(e)}"
                body = mono if a == 1 else f"{a}{mono}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    __str__ = __repr__


def q(*e: int) -> LaurentPoly:
    """The monomial q^e; ``q(2)`` for rank 1, ``q(1, 0)`` for rank 2."""
    if len(e) == 1 and isinstance(e[0], tuple):
        e = e[0]
    return LaurentPoly.monomial(tuple(e))


def deg(p: LaurentPoly):
    return p.deg()


# functional aliases for the named operations

def poly_add(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p + r


def poly_mul(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p * r


def poly_bar(p: LaurentPoly) -> LaurentPoly:
    return p.bar()


def poly_deg(p: LaurentPoly):
    return p.deg()


_CONE_KINDS = {
    ">=": lambda e, t: e >= t,
    ">": lambda e, t: e > t,
    "<=": lambda e, t: e <= t,
    "<": lambda e, t: e < t,
}


@dataclass(frozen=True)
class Cone:
    """
    The set q^shift * A_{kind threshold}, e.g. ``Cone(">", (0,), shift=(2,))``
    is q^2 A_{>0}.
    """
    kind: str
    threshold: Gamma
    shift: Gamma | None = None

    def __post_init__(self):
        if self.kind not in _CONE_KINDS:
            raise ValueError(f"unknown cone kind {self.kind!r}")

    def contains(self, p: LaurentPoly) -> bool:
        test = _CONE_KINDS[self.kind]
        t = tuple(self.threshold)
        for e in p._terms:
            if self.shift is not None:
                e = gamma_sub(e, self.shift)
            if not test(e, t):
                return False
        return True

    def __str__(self):
        base = f"A_{{{self.kind}{t if len(t := tuple(self.threshold)) > 1 else t[0]}}}"
        if self.shift is None or not any(self.shift):
            return base
        return f"q^{self.shift}·{base}"


def cone_member(p: LaurentPoly, c: Cone) -> bool:
    return c.contains(p)


# -- serialization ------------------------------------------------------------

def poly_to_json(p: LaurentPoly) -> list:
    return [[list(e), str(c)] for e, c in sorted(p._terms.items())]


def poly_from_json(data: list, rank: int) -> LaurentPoly:
    return LaurentPoly(((tuple(e), int(c)) for e, c in data), rank=rank)


def poly_to_csv(p: LaurentPoly) -> str:
    """Fixed '±c·q^(g)' rendering, descending exponent."""
    if not p:
        return "0"
    return "".join(
        f"{'-' if c < 0 else '+'}{abs(c)}·q^({','.join(map(str, e))})"
        for e, c in sorted(p._terms.items(), reverse=True))


def dumps_poly(p: LaurentPoly) -> str:
    return json.dumps(poly_to_json(p))
