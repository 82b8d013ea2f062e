"""
Exact linear algebra over A = Z[Gamma].

:class:`SpanBasis` keeps a list of vectors (sparse maps key -> LaurentPoly) in
reduced row echelon form whose pivots are units +-q^g of A.  With unit pivots
the A-span and the fraction-field span intersect A^n in the same set, so
membership, independence and coordinates are all decided exactly without
leaving A.  Vectors that admit no unit pivot push the basis onto a sympy
fraction-field solve.

:func:`solve_rational` is a plain sparse Gauss-Jordan over Q used by the
independent P oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .laurent import LaurentPoly

__all__ = ["SpanBasis", "NotFree", "NotInSpan", "solve_rational", "vec_add", "vec_scale"]

Vec = dict  # key -> LaurentPoly


class NotFree(ValueError):
    """The vectors are linearly dependent."""


class NotInSpan(ValueError):
    """A vector is not an A-combination of the basis."""

    def __init__(self, msg, remainder=None):
        super().__init__(msg)
        self.remainder = remainder


def vec_add(u: Mapping, v: Mapping, scale: LaurentPoly | None = None) -> dict:
    """u + scale*v (new dict)."""
    out = dict(u)
    for k, a in v.items():
        if scale is not None:
            a = a * scale
            if not a:
                continue
        b = out.get(k)
        if b is None:
            out[k] = a
        else:
            b = b + a
            if b:
                out[k] = b
            else:
                del out[k]
    return out


def _iadd(out: dict, v: Mapping, scale: LaurentPoly) -> None:
    for k, a in v.items():
        a = a * scale
        if not a:
            continue
        b = out.get(k)
        if b is None:
            out[k] = a
        else:
            b = b + a
            if b:
                out[k] = b
            else:
                del out[k]


def vec_scale(v: Mapping, a: LaurentPoly) -> dict:
    out = {}
    for k, b in v.items():
        c = b * a
        if c:
            out[k] = c
    return out


class SpanBasis:
    """
    A-basis {v_label} of a free submodule, with exact coordinates.

    ``order_key`` ranks candidate pivot keys; the largest unit entry is taken,
    which makes T_w * seed style bases triangular.
    """

    def __init__(self, rank: int, order_key=None):
        self.rank = rank
        self.order_key = order_key or (lambda k: k)
        self.labels: list[Hashable] = []
        self.vectors: dict[Hashable, Vec] = {}
        # RREF rows: pivot key -> (unit, row vec, combo: label -> poly)
        self._rows: dict[Hashable, tuple[LaurentPoly, Vec, Vec]] = {}
        self._fallback = False

    def __len__(self):
        return len(self.labels)

    @property
    def triangular(self) -> bool:
        return not self._fallback

    def _reduce(self, v: Mapping) -> tuple[Vec, Vec]:
        """Return (remainder, combo) with v = remainder + sum combo[label] v_label."""
        rem = dict(v)
        combo: Vec = {}
        for p, (u, row, rc) in self._rows.items():
            a = rem.get(p)
            if a is None:
                continue
            c = a * u.unit_inverse()
            _iadd(rem, row, -c)
            _iadd(combo, rc, c)
        return rem, combo

    def add(self, label: Hashable, v: Mapping) -> None:
        if label in self.vectors:
            raise ValueError(f"duplicate label {label!r}")
        v = {k: a for k, a in v.items() if a}
        if self._fallback:
            self._add_fallback(label, v)
            return
        rem, combo = self._reduce(v)
        if not rem:
            raise NotFree(f"vector {label!r} is dependent on the basis")
        units = [k for k, a in rem.items() if a.is_unit()]
        if not units:
            self._fallback = True
            self._add_fallback(label, v)
            return
        p = max(units, key=self.order_key)
        u = rem[p]
        # row = v - sum combo*basis ; as a combination: label - combo
        rc = {lab: -c for lab, c in combo.items()}
        rc[label] = LaurentPoly.const(1, self.rank)
        uinv = u.unit_inverse()
        for q_, (u2, row2, rc2) in list(self._rows.items()):
            a = row2.get(p)
            if a is None:
                continue
            c = -(a * uinv)
            row2 = vec_add(row2, rem, c)
            rc2 = vec_add(rc2, rc, c)
            self._rows[q_] = (u2, row2, rc2)
        self._rows[p] = (u, rem, rc)
        self.labels.append(label)
        self.vectors[label] = v

    def contains(self, v: Mapping) -> bool:
        try:
            self.coords(v)
            return True
        except NotInSpan:
            return False

    def coords(self, v: Mapping) -> Vec:
        """Coordinates of v in the basis; NotInSpan if v is not in the A-span."""
        if self._fallback:
            return self._coords_fallback(v)
        rem, combo = self._reduce(v)
        if rem:
            raise NotInSpan("vector not in span", remainder=rem)
        return combo

    # -- fraction-field fallback -------------------------------------------------

    def _sym(self):
        import sympy
        syms = sympy.symbols(f"q0:{self.rank}")

        def to_sym(a: LaurentPoly):
            expr = 0
            for e, c in a.items():
                term = sympy.Integer(c)
                for x, k in zip(syms, e):
                    term *= x ** k
                expr += term
            return expr
        return sympy, syms, to_sym

    def _matrix(self, extra=None):
        sympy, syms, to_sym = self._sym()
        keys = set()
        for v in self.vectors.values():
            keys.update(v)
        if extra is not None:
            keys.update(extra)
        keys = sorted(keys, key=self.order_key)
        cols = [[to_sym(self.vectors[lab].get(k, LaurentPoly.zero(self.rank)))
                 for k in keys] for lab in self.labels]
        M = sympy.Matrix(cols).T if cols else sympy.zeros(len(keys), 0)
        return sympy, syms, to_sym, keys, M

    def _add_fallback(self, label, v):
        self.labels.append(label)
        self.vectors[label] = v
        _, _, _, _, M = self._matrix()
        if M.rank() < len(self.labels):
            self.labels.pop()
            del self.vectors[label]
            raise NotFree(f"vector {label!r} is dependent on the basis")

    def _coords_fallback(self, v: Mapping) -> Vec:
        sympy, syms, to_sym, keys, M = self._matrix(extra=v)
        b = sympy.Matrix([to_sym(v.get(k, LaurentPoly.zero(self.rank))) for k in keys])
        try:
            sol, params = M.gauss_jordan_solve(b)
        except ValueError:
            raise NotInSpan("vector not in span (fraction field)")
        if params.shape[0]:
            raise NotFree("basis is not independent")
        out = {}
        for lab, expr in zip(self.labels, sol):
            a = _sym_to_laurent(sympy, syms, expr, self.rank)
            if a is None:
                raise NotInSpan(f"coordinate on {lab!r} is not in A")
            if a:
                out[lab] = a
        return out


def _sym_to_laurent(sympy, syms, expr, rank) -> LaurentPoly | None:
    expr = sympy.cancel(sympy.together(expr))
    num, den = sympy.fraction(expr)
    dp = sympy.Poly(den, *syms)
    if len(dp.terms()) != 1:
        return None
    (dmon, dc), = dp.terms()
    np_ = sympy.Poly(num, *syms)
    terms = {}
    for mon, c in np_.terms():
        c = sympy.Rational(c) / sympy.Rational(dc)
        if c.q != 1:
            return None
        terms[tuple(a - b for a, b in zip(mon, dmon))] = int(c)
    return LaurentPoly(terms, rank=rank)


def solve_rational(rows: Iterable[Mapping[Hashable, int | Fraction]],
                   rhs: Iterable[int | Fraction]) -> dict | None:
    """
    Solve sparse linear equations sum_j rows[i][j] x_j = rhs[i] over Q.

    Returns a solution dict (free variables set to 0), or None if inconsistent.
    Raises ValueError if the solution is not unique.
    """
    eqs = [(dict((k, Fraction(v)) for k, v in r.items() if v), Fraction(b))
           for r, b in zip(rows, rhs)]
    pivots: dict[Hashable, tuple[dict, Fraction]] = {}
    unknowns = set()
    for r, _ in eqs:
        unknowns.update(r)
    for r, b in eqs:
        r = dict(r)
        for p, (pr, pb) in pivots.items():
            a = r.get(p)
            if a:
                for k, v in pr.items():
                    nv = r.get(k, 0) - a * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
                b -= a * pb
        if not r:
            if b:
                return None
            continue
        p = min(r, key=repr)
        a = r[p]
        r = {k: v / a for k, v in r.items()}
        b = b / a
        for q_, (qr, qb) in list(pivots.items()):
            c = qr.get(p)
            if c:
                for k, v in r.items():
                    nv = qr.get(k, 0) - c * v
                    if nv:
                        qr[k] = nv
                    else:
                        qr.pop(k, None)
                pivots[q_] = (qr, qb - c * b)
        pivots[p] = (r, b)
    if set(pivots) != unknowns:
        raise ValueError("linear system does not have a unique solution")
    return {p: b for p, (r, b) in pivots.items()}
