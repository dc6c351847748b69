"""q-Pochhammer symbols, Gaussian binomials, periodic characters and partial theta sums."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple, Union

from .series import Coeff, QSeries, as_rational


class DivergentProduct(ValueError):
    """An infinite product whose factors never leave the constant term."""


class BadParams(ValueError):
    """Parameters outside the range where a construction is defined."""


class IntegralityViolation(ValueError):
    """A partial theta exponent ``(n^2 - c^2)/D`` is not an integer on the support."""


class BadSpecialization(ValueError):
    """A specialization produces non-formal exponents or a non-unit denominator."""


class _Infinity:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return "INF"


INF = _Infinity()


@dataclass(frozen=True)
class Monomial:
    """``coeff * x^x_exp * q^q_exp``.

    ``q_exp`` may be a half-integer while building specializations such as
    ``b = x q^(1/2)``; such monomials only appear in intermediate products.
    """

    coeff: Coeff = 1
    x_exp: int = 0
    q_exp: Union[int, Fraction] = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_rational(self.coeff))
        q = self.q_exp
        if isinstance(q, Fraction) and q.denominator == 1:
            object.__setattr__(self, "q_exp", q.numerator)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.coeff * other.coeff, self.x_exp + other.x_exp, self.q_exp + other.q_exp)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return Monomial(Fraction(self.coeff) / other.coeff, self.x_exp - other.x_exp, self.q_exp - other.q_exp)

    def __neg__(self) -> "Monomial":
        return Monomial(-self.coeff, self.x_exp, self.q_exp)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial(Fraction(self.coeff) ** k, self.x_exp * k, self.q_exp * k)

    def times_q(self, m) -> "Monomial":
        return Monomial(self.coeff, self.x_exp, self.q_exp + m)

    def is_formal(self) -> bool:
        return self.x_exp >= 0 and isinstance(self.q_exp, int) and self.q_exp >= 0

    def series(self, order: int) -> QSeries:
        if not self.is_formal():
            raise BadSpecialization(f"{self} is not a monomial of Q[x][[q]]")
        return QSeries.monomial(self.coeff, self.q_exp, self.x_exp, order)

    def key(self) -> Tuple:
        return (self.coeff, self.x_exp, self.q_exp)


Q = Monomial(1, 0, 1)


@dataclass(frozen=True)
class PochSpec:
    """``(arg; q^base)``; ``arg`` may be :data:`INF` only inside Bailey-lemma limits."""

    arg: Union[Monomial, _Infinity]
    base_exp: int = 1


def one_minus(m: Monomial, order: int) -> QSeries:
    """The factor ``1 - m`` as a series."""
    return QSeries.one(order) - m.series(order)


@lru_cache(maxsize=None)
def _poch_cached(key: Tuple, base: int, n, order: int) -> QSeries:
    coeff, x_exp, q_exp = key
    result = QSeries.one(order)
    if n is INF:
        if q_exp < 1:
            raise DivergentProduct("(a;q)_inf needs a positive q-power in a")
        j = 0
        while q_exp + base * j <= order:
            d = q_exp + base * j
            result = result - result.shift(coeff, d, x_exp)
            j += 1
        return result
    for j in range(n):
        d = q_exp + base * j
        if d > order:
            break
        result = result - result.shift(coeff, d, x_exp)
    return result


def poch(arg: Monomial, n, order: int, base: int = 1) -> QSeries:
    """``(arg; q^base)_n`` truncated at ``order``; ``n`` may be :data:`INF`."""
    if isinstance(arg, PochSpec):
        arg, base = arg.arg, arg.base_exp
    if arg is INF:
        raise DivergentProduct("a Pochhammer argument of INF only makes sense as a Bailey-lemma limit")
    if not arg.is_formal():
        raise BadSpecialization(f"Pochhammer argument {arg} is not formal")
    if n is not INF and n < 0:
        raise ValueError("negative Pochhammer length")
    if not arg.coeff:
        return QSeries.one(order)
    return _poch_cached(arg.key(), base, n, order)


def poch_inverse(arg: Monomial, n, order: int, base: int = 1) -> QSeries:
    return _poch_inv_cached(arg.key(), base, n, order)


@lru_cache(maxsize=None)
def _poch_inv_cached(key, base, n, order):
    return poch(Monomial(*key), n, order, base).invert()


@lru_cache(maxsize=None)
def qbinom_coeffs(n: int, k: int) -> Tuple[int, ...]:
    """Integer coefficients of the Gaussian binomial ``[n over k]_q``."""
    if k < 0 or n < 0 or k > n:
        return ()
    if k == 0 or k == n:
        return (1,)
    # [n, k] = [n-1, k-1] + q^k [n-1, k]
    a = qbinom_coeffs(n - 1, k - 1)
    b = qbinom_coeffs(n - 1, k)
    out = [0] * (k * (n - k) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + k] += c
    return tuple(out)


@lru_cache(maxsize=None)
def qbinom(n: int, k: int, order: int, base: int = 1) -> QSeries:
    """Gaussian binomial ``[n over k]`` in ``q^base``; zero outside ``0 <= k <= n``."""
    return QSeries({i * base: c for i, c in enumerate(qbinom_coeffs(n, k))}, order)


# -- periodic characters -----------------------------------------------------


class PeriodicFunction:
    """Rational-valued function of ``n`` with period ``M``, stored as a residue table."""

    __slots__ = ("period", "_values")

    def __init__(self, period: int, values: Union[Sequence[Coeff], Dict[int, Coeff]]):
        if period < 1:
            raise ValueError("period must be positive")
        table = [0] * period
        if isinstance(values, dict):
            for r, v in values.items():
                table[r % period] = as_rational(v)
        else:
            if len(values) != period:
                raise ValueError("need exactly one value per residue")
            table = [as_rational(v) for v in values]
        self.period = period
        self._values = tuple(table)

    def __call__(self, n: int) -> Coeff:
        return self._values[n % self.period]

    @property
    def values(self) -> Tuple[Coeff, ...]:
        """Values at residues ``1..M`` (the last entry is the value at ``n = M``)."""
        return self._values[1:] + self._values[:1]

    def support(self):
        return [r for r, v in enumerate(self._values) if v]

    def is_even(self) -> bool:
        M = self.period
        return all(self._values[r] == self._values[(-r) % M] for r in range(M))

    def mean_is_zero(self) -> bool:
        return sum(self._values) == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, PeriodicFunction):
            return NotImplemented
        return self.period == other.period and self._values == other._values

    def __hash__(self):
        return hash((self.period, self._values))

    def __repr__(self) -> str:
        nz = {r: v for r, v in enumerate(self._values) if v}
        return f"PeriodicFunction({self.period}, {nz})"


def _signed_table(period: int, plus, minus) -> PeriodicFunction:
    table: Dict[int, int] = {}
    for residues, sign in ((plus, 1), (minus, -1)):
        for r in residues:
            r %= period
            if table.get(r, sign) != sign:
                raise BadParams(f"residue {r} receives both signs mod {period}")
            table[r] = sign
    return PeriodicFunction(period, table)


CHARACTER_KINDS = (
    "zagier_12",
    "hikami_8k4",
    "fam1_4k",
    "fam2_8k",
    "fam3_8k",
    "fam4_4k2",
    "fam5_4k",
    "torus_2st",
)


def character(kind: str, k: Optional[int] = None, a: int = 0, s: Optional[int] = None, t: Optional[int] = None) -> PeriodicFunction:
    """Residue table of one of the even periodic functions used by the identities.

    ``fam2_8k`` is the period ``8k-4`` character of the second family, which
    coincides with ``fam1_4k`` at ``2k-1``.
    """
    if kind == "zagier_12":
        return _signed_table(12, (1, 11), (5, 7))
    if kind == "torus_2st":
        if s is None or t is None or s < 2 or t < 2:
            raise BadParams("torus_2st needs s, t >= 2")
        P = 2 * s * t
        return _signed_table(P, (s * t - s - t, s * t + s + t), (s * t - s + t, s * t + s - t))
    if k is None or k < 1:
        raise BadParams(f"{kind} needs k >= 1")
    if kind == "fam1_4k":
        return _signed_table(4 * k, (k - 1, 3 * k + 1), (k + 1, 3 * k - 1))
    if kind == "fam2_8k":
        return character("fam1_4k", 2 * k - 1)
    if kind == "fam5_4k":
        if not 0 <= a < k - 1:
            raise BadParams("fam5_4k needs 0 <= a < k-1")
        return _signed_table(4 * k, (k - a - 1, 3 * k + a + 1), (k + a + 1, 3 * k - a - 1))
    if not 0 <= a <= k - 1:
        raise BadParams(f"{kind} needs 0 <= a <= k-1")
    if kind == "hikami_8k4":
        P = 8 * k + 4
        return _signed_table(P, (2 * k - 2 * a - 1, 6 * k + 2 * a + 5), (2 * k + 2 * a + 3, 6 * k - 2 * a + 1))
    if kind == "fam3_8k":
        P = 8 * k
        return _signed_table(P, (2 * k - 2 * a - 1, 6 * k + 2 * a + 1), (2 * k + 2 * a + 1, 6 * k - 2 * a - 1))
    if kind == "fam4_4k2":
        c = 2 * k - 2 * a - 1
        return _signed_table(4 * k - 2, (c, -c), ())
    raise BadParams(f"unknown character kind {kind!r}")


# -- partial theta functions ---------------------------------------------------


@dataclass(frozen=True)
class PartialTheta:
    """``prefactor * sum_{n>=0} n^weight chi(n) q^((n^2 - shift^2)/divisor)``."""

    chi: PeriodicFunction
    weight: int
    divisor: int
    shift: int
    prefactor: Coeff = 1

    def exponent(self, n: int) -> Fraction:
        return Fraction(n * n - self.shift * self.shift, self.divisor)

    def check_integrality(self) -> None:
        P, D = self.chi.period, self.divisor
        for n in range(P * D):
            if self.chi(n) and (n * n - self.shift * self.shift) % D:
                raise IntegralityViolation(f"D={D} does not divide n^2-c^2 at n={n}")
        for n in range(self.shift):
            if self.chi(n):
                raise IntegralityViolation(f"negative exponent at n={n} in the support")


def partial_theta_qseries(pt: PartialTheta, order: int, x_rule: Optional[Tuple[int, int]] = None) -> QSeries:
    """Truncated expansion of ``pt``, optionally carrying ``x^((n - x_shift)/x_div)``."""
    pt.check_integrality()
    c2, D = pt.shift * pt.shift, pt.divisor
    out: Dict[int, Dict[int, Coeff]] = {}
    n = 0
    while n * n - c2 <= D * order:
        v = pt.chi(n)
        if v and (pt.weight == 0 or n):
            d = (n * n - c2) // D
            e = 0
            if x_rule is not None:
                sh, div = x_rule
                if (n - sh) % div or n < sh:
                    raise IntegralityViolation(f"x exponent ({n}-{sh})/{div} is not a non-negative integer")
                e = (n - sh) // div
            p = out.setdefault(d, {})
            p[e] = p.get(e, 0) + v * n**pt.weight * pt.prefactor
        n += 1
    return QSeries(out, order)


def lambert_sum(c: int, d: int, sign: int, order: int) -> QSeries:
    """``sum_{j>=1} q^(c j) / (1 - sign q^(d j))``."""
    if c < 1 or d < 1 or sign not in (1, -1):
        raise ValueError("lambert_sum needs c, d >= 1 and sign = +-1")
    out: Dict[int, int] = {}
    j = 1
    while c * j <= order:
        e, s = c * j, 1
        while e <= order:
            out[e] = out.get(e, 0) + s
            e += d * j
            s *= sign
        j += 1
    return QSeries(out, order)


def _inf_poch_allow_constant(arg: Monomial, order: int, base: int) -> QSeries:
    if arg.q_exp == 0:
        return one_minus(arg, order) * poch(arg.times_q(base), INF, order, base)
    return poch(arg, INF, order, base)


def triple_product(z_coeff, z_exp: int, order: int, base: int = 1) -> Tuple[QSeries, QSeries]:
    """Both sides of ``sum_n z^n q^(B n^2) = (-z q^B, -q^B/z, q^(2B); q^(2B))_inf``.

    ``z = z_coeff * q^z_exp`` with ``|z_exp| <= B`` so every exponent is
    non-negative.
    """
    z_coeff = as_rational(z_coeff)
    if not z_coeff or abs(z_exp) > base:
        raise BadSpecialization("need z != 0 and |z_exp| <= base")
    out: Dict[int, Coeff] = {}
    n = 0
    while True:
        hit = False
        for m in ((n, -n) if n else (0,)):
            e = base * m * m + z_exp * m
            if e <= order:
                hit = True
                out[e] = out.get(e, 0) + Fraction(z_coeff) ** m
        if not hit and base * n * n - abs(z_exp) * n > order:
            break
        n += 1
    lhs = QSeries(out, order)
    z = Monomial(z_coeff, 0, z_exp)
    rhs = (
        _inf_poch_allow_constant(-z.times_q(base), order, 2 * base)
        * _inf_poch_allow_constant(-(Monomial(1, 0, base) / z), order, 2 * base)
        * poch(Monomial(1, 0, 2 * base), INF, order, 2 * base)
    )
    return lhs, rhs
