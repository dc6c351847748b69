"""Exact truncated power series in ``q`` with polynomial-in-``x`` coefficients.

A :class:`QSeries` is an element of ``Q[x][[q]]`` known modulo ``q^(N+1)``.
Coefficients are Python ints or :class:`fractions.Fraction`; nothing is ever
rounded.  Values are immutable and every operation returns a new series.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

Coeff = Union[int, Fraction]


class NotAUnit(ArithmeticError):
    """Raised when inverting a series whose constant term is not a nonzero rational."""


class OutOfRange(IndexError):
    """Raised when asking for a coefficient beyond the truncation order."""


def as_rational(c) -> Coeff:
    """Coerce ``c`` to an exact rational, keeping integers as ``int``."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return as_rational(Fraction(c.numerator, c.denominator))
    raise TypeError(f"exact rational expected, got {type(c).__name__}")


def _norm(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _poly_mul(p: Mapping[int, Coeff], r: Mapping[int, Coeff], out: Dict[int, Coeff]) -> None:
    for e1, c1 in p.items():
        for e2, c2 in r.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2


def _clean(poly: Dict[int, Coeff]) -> Dict[int, Coeff]:
    return {e: _norm(c) for e, c in sorted(poly.items()) if c != 0}


class XPoly:
    """A polynomial in ``x`` with rational coefficients.

    ``degree`` is ``-1`` for the zero polynomial.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Union[Mapping[int, Coeff], Iterable[Coeff], Coeff] = ()):
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        elif isinstance(coeffs, (int, Fraction)):
            items = [(0, coeffs)]
        else:
            items = enumerate(coeffs)
        c: Dict[int, Coeff] = {}
        for e, v in items:
            if e < 0:
                raise ValueError("negative x-degree")
            v = as_rational(v)
            if v:
                c[e] = v
        self._c = dict(sorted(c.items()))

    @classmethod
    def _wrap(cls, c: Dict[int, Coeff]) -> "XPoly":
        p = cls.__new__(cls)
        p._c = c
        return p

    @property
    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def is_zero(self) -> bool:
        return not self._c

    def coefficients(self) -> list:
        """Dense coefficient list, lowest degree first (empty for zero)."""
        return [self._c.get(e, 0) for e in range(self.degree + 1)]

    def items(self):
        return self._c.items()

    def __getitem__(self, e: int) -> Coeff:
        return self._c.get(e, 0)

    def __call__(self, x) -> Coeff:
        return _norm(sum((c * x**e for e, c in self._c.items()), 0))

    def __add__(self, other: "XPoly") -> "XPoly":
        other = _as_xpoly(other)
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, 0) + c
        return XPoly._wrap(_clean(out))

    __radd__ = __add__

    def __neg__(self) -> "XPoly":
        return XPoly._wrap({e: -c for e, c in self._c.items()})

    def __sub__(self, other: "XPoly") -> "XPoly":
        return self + (-_as_xpoly(other))

    def __rsub__(self, other) -> "XPoly":
        return _as_xpoly(other) - self

    def __mul__(self, other: "XPoly") -> "XPoly":
        other = _as_xpoly(other)
        out: Dict[int, Coeff] = {}
        _poly_mul(self._c, other._c, out)
        return XPoly._wrap(_clean(out))

    __rmul__ = __mul__

    def derivative(self) -> "XPoly":
        return XPoly._wrap({e - 1: _norm(e * c) for e, c in self._c.items() if e})

    def __eq__(self, other) -> bool:
        try:
            other = _as_xpoly(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def __repr__(self) -> str:
        if not self._c:
            return "XPoly(0)"
        return f"XPoly({_fmt_poly(self._c, 'x')})"


def _as_xpoly(v) -> XPoly:
    if isinstance(v, XPoly):
        return v
    return XPoly(as_rational(v))


def _fmt_poly(c: Mapping[int, Coeff], var: str) -> str:
    parts = []
    for e, v in c.items():
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            parts.append(str(v))
        elif v == 1:
            parts.append(mono)
        elif v == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{v}*{mono}")
    return " + ".join(parts) if parts else "0"


class QSeries:
    """Truncated series ``sum_d c_d(x) q^d`` known modulo ``q^(order+1)``.

    Storage is sparse: ``{q_degree: {x_degree: coeff}}`` with zero entries
    removed.  Binary operations between series of different orders produce a
    result at the smaller order.
    """

    __slots__ = ("_c", "_order")

    def __init__(self, coeffs: Optional[Mapping] = None, order: int = 0):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        c: Dict[int, Dict[int, Coeff]] = {}
        for d, v in (coeffs or {}).items():
            if d < 0:
                raise ValueError("negative q-degree")
            if d > order:
                continue
            if isinstance(v, XPoly):
                poly = dict(v.items())
            elif isinstance(v, Mapping):
                poly = {e: as_rational(x) for e, x in v.items() if x}
            else:
                v = as_rational(v)
                poly = {0: v} if v else {}
            if poly:
                c[d] = dict(sorted(poly.items()))
        self._c = dict(sorted(c.items()))
        self._order = order

    @classmethod
    def _wrap(cls, c: Dict[int, Dict[int, Coeff]], order: int) -> "QSeries":
        s = cls.__new__(cls)
        s._c = c
        s._order = order
        return s

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls._wrap({}, order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls.monomial(1, 0, 0, order)

    @classmethod
    def monomial(cls, coeff, q_exp: int, x_exp: int, order: int) -> "QSeries":
        """``coeff * x^x_exp * q^q_exp`` truncated at ``order``."""
        if q_exp < 0 or x_exp < 0:
            raise ValueError("monomial exponents must be non-negative")
        coeff = as_rational(coeff)
        if q_exp > order or not coeff:
            return cls._wrap({}, order)
        return cls._wrap({q_exp: {x_exp: coeff}}, order)

    @classmethod
    def from_list(cls, coeffs: Iterable, order: Optional[int] = None) -> "QSeries":
        """x-free series from a dense list of q-coefficients."""
        coeffs = list(coeffs)
        if order is None:
            order = max(len(coeffs) - 1, 0)
        return cls(dict(enumerate(coeffs)), order)

    # -- inspection -------------------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    def coefficient(self, d: int) -> XPoly:
        if d > self._order:
            raise OutOfRange(f"q-degree {d} exceeds truncation order {self._order}")
        return XPoly._wrap(dict(self._c.get(d, {})))

    def __getitem__(self, d: int) -> XPoly:
        return self.coefficient(d)

    def terms(self) -> Iterator[Tuple[int, int, Coeff]]:
        """Nonzero ``(q_degree, x_degree, coeff)`` triples in sorted order."""
        for d, p in self._c.items():
            for e, c in p.items():
                yield d, e, c

    def degrees(self):
        return self._c.keys()

    def is_zero(self) -> bool:
        return not self._c

    def valuation(self) -> Optional[int]:
        """Smallest q-degree with a nonzero coefficient (``None`` for zero)."""
        return next(iter(self._c), None)

    def x_degree(self) -> int:
        return max((max(p) for p in self._c.values()), default=-1)

    def is_x_free(self) -> bool:
        return all(p.keys() == {0} for p in self._c.values())

    def to_list(self) -> list:
        """Dense q-coefficients of an x-free series (``order + 1`` entries)."""
        if not self.is_x_free():
            raise ValueError("series depends on x; use coefficient() instead")
        return [self._c.get(d, {}).get(0, 0) for d in range(self._order + 1)]

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        return QSeries.monomial(as_rational(other), 0, 0, self._order)

    def __add__(self, other) -> "QSeries":
        other = self._coerce(other)
        n = min(self._order, other._order)
        out = {d: dict(p) for d, p in self._c.items() if d <= n}
        for d, p in other._c.items():
            if d > n:
                break
            tgt = out.get(d)
            if tgt is None:
                out[d] = dict(p)
                continue
            for e, c in p.items():
                tgt[e] = tgt.get(e, 0) + c
        return QSeries._wrap(_clean_series(out), n)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries._wrap({d: {e: -c for e, c in p.items()} for d, p in self._c.items()}, self._order)

    def __sub__(self, other) -> "QSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            c = as_rational(other)
            if not c:
                return QSeries.zero(self._order)
            return QSeries._wrap(
                {d: {e: _norm(v * c) for e, v in p.items()} for d, p in self._c.items()}, self._order
            )
        n = min(self._order, other._order)
        out: Dict[int, Dict[int, Coeff]] = {}
        right = list(other._c.items())
        for d1, p1 in self._c.items():
            lim = n - d1
            if lim < 0:
                break
            for d2, p2 in right:
                if d2 > lim:
                    break
                tgt = out.get(d1 + d2)
                if tgt is None:
                    tgt = out[d1 + d2] = {}
                _poly_mul(p1, p2, tgt)
        return QSeries._wrap(_clean_series(out), n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return self.invert() ** (-k)
        result = QSeries.one(self._order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, coeff, q_exp: int, x_exp: int = 0, extend: bool = False) -> "QSeries":
        """Multiply by the monomial ``coeff * x^x_exp * q^q_exp`` (cheap path).

        With ``extend`` the known precision grows by ``q_exp``, which is exact
        when ``self`` is a full expansion known to its own order.
        """
        coeff = as_rational(coeff)
        n = self._order + q_exp if extend else self._order
        if not coeff:
            return QSeries.zero(n)
        out = {}
        for d, p in self._c.items():
            if d + q_exp > n:
                break
            out[d + q_exp] = {e + x_exp: _norm(c * coeff) for e, c in p.items()}
        return QSeries._wrap(out, n)

    def invert(self) -> "QSeries":
        """Multiplicative inverse modulo ``q^(order+1)``."""
        c0 = self._c.get(0)
        if not c0 or c0.keys() != {0}:
            raise NotAUnit("constant term must be a nonzero rational (no x)")
        inv0 = Fraction(1) / c0[0]
        n = self._order
        g: Dict[int, Dict[int, Coeff]] = {0: {0: _norm(inv0)}}
        f_items = [(d, p) for d, p in self._c.items() if d > 0]
        for d in range(1, n + 1):
            acc: Dict[int, Coeff] = {}
            for j, fj in f_items:
                if j > d:
                    break
                gd = g.get(d - j)
                if gd:
                    _poly_mul(fj, gd, acc)
            acc = _clean({e: -c * inv0 for e, c in acc.items()})
            if acc:
                g[d] = acc
        return QSeries._wrap(g, n)

    def truncate(self, order: int) -> "QSeries":
        order = min(order, self._order)
        return QSeries._wrap({d: p for d, p in self._c.items() if d <= order}, order)

    def truncate_x(self, x_max: int) -> "QSeries":
        """Drop every term of x-degree greater than ``x_max``."""
        out = {}
        for d, p in self._c.items():
            kept = {e: c for e, c in p.items() if e <= x_max}
            if kept:
                out[d] = kept
        return QSeries._wrap(out, self._order)

    # -- substitutions ----------------------------------------------------

    def subs_q_power(self, m: int) -> "QSeries":
        """``q -> q^m``, keeping the truncation order."""
        if m < 1:
            raise ValueError("q-power must be positive")
        n = self._order
        return QSeries._wrap({d * m: dict(p) for d, p in self._c.items() if d * m <= n}, n)

    def x_to_one(self) -> "QSeries":
        out = {}
        for d, p in self._c.items():
            s = _norm(sum(p.values(), 0))
            if s:
                out[d] = {0: s}
        return QSeries._wrap(out, self._order)

    def x_to_monomial(self, coeff, q_exp: int) -> "QSeries":
        """``x -> coeff * q^q_exp``, re-collecting q-degrees."""
        coeff = as_rational(coeff)
        if q_exp < 0:
            raise ValueError("q exponent must be non-negative")
        n = self._order
        out: Dict[int, Coeff] = {}
        for d, p in self._c.items():
            for e, c in p.items():
                t = d + q_exp * e
                if t <= n:
                    out[t] = out.get(t, 0) + c * coeff**e
        return QSeries._wrap({d: {0: _norm(c)} for d, c in sorted(out.items()) if c}, n)

    def x_power(self, m: int) -> "QSeries":
        """``x -> x^m``."""
        if m < 0:
            raise ValueError("x-power must be non-negative")
        if m == 0:
            return self.x_to_one()
        return QSeries._wrap({d: {e * m: c for e, c in p.items()} for d, p in self._c.items()}, self._order)

    def differentiate_x(self) -> "QSeries":
        out = {}
        for d, p in self._c.items():
            dp = {e - 1: _norm(e * c) for e, c in p.items() if e}
            if dp:
                out[d] = dp
        return QSeries._wrap(out, self._order)

    # -- comparison -------------------------------------------------------

    def first_mismatch(self, other: "QSeries", order: Optional[int] = None):
        """First ``(q_degree, x_degree, mine, theirs)`` where the series differ.

        Comparison runs up to ``order`` (default: the smaller truncation
        order); ``None`` means the series agree there.
        """
        n = min(self._order, other._order) if order is None else order
        if n > min(self._order, other._order):
            raise OutOfRange(f"cannot compare at order {n}: operands known to {self._order}, {other._order}")
        for d in range(n + 1):
            p1 = self._c.get(d, {})
            p2 = other._c.get(d, {})
            if p1 != p2:
                for e in sorted(set(p1) | set(p2)):
                    a, b = p1.get(e, 0), p2.get(e, 0)
                    if a != b:
                        return d, e, a, b
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return self.first_mismatch(other) is None

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = []
        for d, p in self._c.items():
            coeff = _fmt_poly(p, "x")
            if len(p) > 1:
                coeff = f"({coeff})"
            parts.append(coeff if d == 0 else f"{coeff}*q^{d}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(q^{self._order + 1})"


def _clean_series(c: Dict[int, Dict[int, Coeff]]) -> Dict[int, Dict[int, Coeff]]:
    out = {}
    for d in sorted(c):
        p = _clean(c[d])
        if p:
            out[d] = p
    return out


def combine(f: QSeries, g: QSeries, kind: str) -> QSeries:
    """Functional form of the ring operations (``kind`` in add/sub/mul)."""
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    raise ValueError(f"unknown operation {kind!r}")


def invert_unit(f: QSeries) -> QSeries:
    return f.invert()


def substitute(f: QSeries, action: str, *args) -> QSeries:
    """Apply ``q_power(m)``, ``x_to_one``, ``x_to_monomial(c, e)`` or ``x_power(m)``."""
    if action == "q_power":
        return f.subs_q_power(*args)
    if action == "x_to_one":
        return f.x_to_one()
    if action == "x_to_monomial":
        return f.x_to_monomial(*args)
    if action == "x_power":
        return f.x_power(*args)
    raise ValueError(f"unknown substitution {action!r}")


def differentiate_x(f: QSeries) -> QSeries:
    return f.differentiate_x()


def coefficient(f: QSeries, d: int) -> XPoly:
    return f.coefficient(d)
