"""Exact arithmetic in Q(zeta_M) and power series in t over it.

Elements of Q(zeta_M) are coordinate vectors in the basis 1, zeta, ...,
zeta^(phi(M)-1).  Multiplication convolves coordinates and folds each power
of zeta back through a precomputed table of ``zeta^j mod Phi_M``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .multisum import MultisumSpec, VarWeight, evaluate_chain
from .qfunctions import Monomial, qbinom_coeffs
from .series import Coeff, as_rational

Number = Union[int, Fraction]


class DivisionByZero(ZeroDivisionError):
    pass


class DenominatorVanishes(ArithmeticError):
    """A denominator factor is zero at the chosen root of unity."""

    def __init__(self, M: int, factor: str):
        super().__init__(f"{factor} vanishes at a primitive {M}-th root of unity")
        self.M = M
        self.factor = factor


# -- polynomials over Q (ascending coefficient lists) ----------------------------


def _trim(p: List[Number]) -> List[Number]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divmod(num: Sequence[Number], den: Sequence[Number]) -> Tuple[List[Number], List[Number]]:
    r = [Fraction(c) for c in num]
    d = len(den) - 1
    lead = Fraction(den[-1])
    q = [Fraction(0)] * max(len(r) - d, 1)
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i] / lead
        if c:
            q[i - d] = c
            for j in range(d + 1):
                r[i - d + j] -= c * den[j]
    return _trim([_norm(c) for c in q]), _trim([_norm(c) for c in r[:d]])


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> Tuple[int, ...]:
    """Integer coefficients (ascending) of the M-th cyclotomic polynomial."""
    if M < 1:
        raise ValueError("M must be positive")
    num: List[Number] = [-1] + [0] * (M - 1) + [1]
    for d in range(1, M):
        if M % d == 0:
            num, rem = _divmod(num, cyclotomic_poly(d))
            assert not rem
    return tuple(int(c) for c in num)


def phi(M: int) -> int:
    return len(cyclotomic_poly(M)) - 1


@lru_cache(maxsize=None)
def _power_table(M: int) -> Tuple[Tuple[Number, ...], ...]:
    """Coordinates of ``zeta^j`` for ``0 <= j < M``."""
    P = cyclotomic_poly(M)
    n = len(P) - 1
    rows = []
    cur: List[Number] = [1] + [0] * (n - 1)
    for _ in range(M):
        rows.append(tuple(cur))
        # multiply by zeta: shift, then fold zeta^n = -sum P_i zeta^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * P[i] for i, c in enumerate(cur)]
    return tuple(rows)


class CycNum:
    """An element of Q(zeta_M)."""

    __slots__ = ("M", "coords")

    def __init__(self, M: int, coords: Sequence[Coeff] = ()):
        n = phi(M)
        cs = [as_rational(c) for c in coords]
        if len(cs) > n:
            raise ValueError("too many coordinates; use from_powers for unreduced input")
        self.M = M
        self.coords: Tuple[Number, ...] = tuple(cs) + (0,) * (n - len(cs))

    @classmethod
    def _raw(cls, M: int, coords: Sequence[Number]) -> "CycNum":
        obj = object.__new__(cls)
        obj.M = M
        obj.coords = tuple(_norm(c) for c in coords)
        return obj

    @classmethod
    def from_powers(cls, M: int, powers: Mapping[int, Coeff]) -> "CycNum":
        """``sum_j powers[j] zeta^j`` for arbitrary integer ``j``."""
        table = _power_table(M)
        out: List[Number] = [0] * phi(M)
        for j, c in powers.items():
            if not c:
                continue
            row = table[j % M]
            for i, v in enumerate(row):
                if v:
                    out[i] += c * v
        return cls._raw(M, out)

    @classmethod
    def zeta(cls, M: int, j: int = 1) -> "CycNum":
        return cls._raw(M, _power_table(M)[j % M])

    @classmethod
    def rational(cls, M: int, c: Coeff) -> "CycNum":
        return cls(M, [c])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def lift(self, M2: int) -> "CycNum":
        """The same number viewed in Q(zeta_M2), for ``M | M2``."""
        if M2 == self.M:
            return self
        if M2 % self.M:
            raise ValueError(f"cannot embed Q(zeta_{self.M}) in Q(zeta_{M2})")
        s = M2 // self.M
        return CycNum.from_powers(M2, {i * s: c for i, c in enumerate(self.coords) if c})

    def _common(self, other) -> Tuple["CycNum", "CycNum"]:
        if not isinstance(other, CycNum):
            return self, CycNum.rational(self.M, other)
        if other.M == self.M:
            return self, other
        L = self.M * other.M // gcd(self.M, other.M)
        return self.lift(L), other.lift(L)

    def __add__(self, other) -> "CycNum":
        a, b = self._common(other)
        return CycNum._raw(a.M, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum._raw(self.M, [-x for x in self.coords])

    def __sub__(self, other) -> "CycNum":
        a, b = self._common(other)
        return CycNum._raw(a.M, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other) -> "CycNum":
        return (-self) + other

    def __mul__(self, other) -> "CycNum":
        if not isinstance(other, CycNum):
            c = as_rational(other)
            return CycNum._raw(self.M, [x * c for x in self.coords])
        a, b = self._common(other)
        M = a.M
        acc: Dict[int, Number] = {}
        for i, x in enumerate(a.coords):
            if not x:
                continue
            for j, y in enumerate(b.coords):
                if y:
                    acc[i + j] = acc.get(i + j, 0) + x * y
        return CycNum.from_powers(M, acc)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Inverse via the extended Euclidean algorithm against Phi_M."""
        if self.is_zero():
            raise DivisionByZero(f"zero has no inverse in Q(zeta_{self.M})")
        P = [Fraction(c) for c in cyclotomic_poly(self.M)]
        r0, r1 = P, _trim([Fraction(c) for c in self.coords])
        s0: List[Number] = []
        s1: List[Number] = [Fraction(1)]
        while len(r1) > 1:
            q, r = _divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = Fraction(r1[0])
        return CycNum.from_powers(self.M, {i: Fraction(v) / c for i, v in enumerate(s1)})

    def __truediv__(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            return self * other.inverse()
        c = as_rational(other)
        if not c:
            raise DivisionByZero("division by zero")
        return self * (Fraction(1) / c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycNum):
            try:
                other = CycNum.rational(self.M, other)
            except TypeError:
                return NotImplemented
        a, b = self._common(other)
        return a.coords == b.coords

    def __hash__(self):
        return hash((self.M, self.coords))

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.M)
        return sum(complex(c) * z**i for i, c in enumerate(self.coords))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return f"CycNum[{self.M}](" + (" + ".join(terms) or "0") + ")"


def _poly_mul(a: Sequence[Number], b: Sequence[Number]) -> List[Number]:
    if not a or not b:
        return []
    out: List[Number] = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: Sequence[Number], b: Sequence[Number]) -> List[Number]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def cyc_arith(a: CycNum, b: Optional[CycNum], kind: str):
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "inv":
        return a.inverse()
    if kind == "eq":
        return a == b
    raise ValueError(f"unknown operation {kind!r}")


# -- power series in t -------------------------------------------------------------


class TSeries:
    """``sum_{j<=K} c_j t^j`` with coefficients in Q(zeta_M), exact mod ``t^(K+1)``."""

    __slots__ = ("M", "K", "coeffs")

    def __init__(self, M: int, K: int, coeffs: Sequence[CycNum] = ()):
        cs = list(coeffs[: K + 1])
        cs += [CycNum(M)] * (K + 1 - len(cs))
        self.M, self.K, self.coeffs = M, K, tuple(cs)

    @classmethod
    def constant(cls, M: int, K: int, c) -> "TSeries":
        return cls(M, K, [c if isinstance(c, CycNum) else CycNum.rational(M, c)])

    def __add__(self, other: "TSeries") -> "TSeries":
        K = min(self.K, other.K)
        return TSeries(self.M, K, [a + b for a, b in zip(self.coeffs[: K + 1], other.coeffs[: K + 1])])

    def __sub__(self, other: "TSeries") -> "TSeries":
        K = min(self.K, other.K)
        return TSeries(self.M, K, [a - b for a, b in zip(self.coeffs[: K + 1], other.coeffs[: K + 1])])

    def __neg__(self) -> "TSeries":
        return TSeries(self.M, self.K, [-c for c in self.coeffs])

    def __mul__(self, other) -> "TSeries":
        if not isinstance(other, TSeries):
            return TSeries(self.M, self.K, [c * other for c in self.coeffs])
        K = min(self.K, other.K)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(K + 1):
            acc: Dict[int, Number] = {}
            for i in range(n + 1):
                x, y = a[i], b[n - i]
                if x.is_zero() or y.is_zero():
                    continue
                for p, u in enumerate(x.coords):
                    if not u:
                        continue
                    for q, v in enumerate(y.coords):
                        if v:
                            acc[p + q] = acc.get(p + q, 0) + u * v
            out.append(CycNum.from_powers(self.M, acc))
        return TSeries(self.M, K, out)

    __rmul__ = __mul__

    def inverse(self) -> "TSeries":
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise DivisionByZero("constant term vanishes")
        inv0 = c0.inverse()
        out = [inv0]
        for n in range(1, self.K + 1):
            acc = CycNum(self.M)
            for i in range(1, n + 1):
                acc = acc + self.coeffs[i] * out[n - i]
            out.append(-(acc * inv0))
        return TSeries(self.M, self.K, out)

    def truncate(self, K: int) -> "TSeries":
        return TSeries(self.M, min(K, self.K), self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TSeries):
            return NotImplemented
        K = min(self.K, other.K)
        return self.M == other.M and self.coeffs[: K + 1] == other.coeffs[: K + 1]

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"TSeries[M={self.M}, K={self.K}]({list(self.coeffs)})"


def q_to_t(M: int, zeta_power: int, K: int, coeff: Coeff = 1, q_exp: int = 1) -> TSeries:
    """``coeff * q^q_exp`` under ``q -> zeta^zeta_power e^(-t)``: ``coeff zeta^(p m) e^(-m t)``."""
    z = CycNum.zeta(M, zeta_power * q_exp) * coeff
    return TSeries(M, K, [z * Fraction((-q_exp) ** j, factorial(j)) for j in range(K + 1)])


def exp_series(M: int, K: int, rate: Coeff) -> TSeries:
    """``e^(rate t)``."""
    r = as_rational(rate)
    return TSeries(M, K, [CycNum.rational(M, Fraction(r) ** j / factorial(j)) for j in range(K + 1)])


def poly_to_t(coeffs: Mapping[int, Coeff], M: int, K: int) -> TSeries:
    """``P(zeta e^(-t))`` for ``P(q) = sum coeffs[m] q^m``, gathered by residue class."""
    out = []
    for j in range(K + 1):
        byres: Dict[int, Number] = {}
        for m, c in coeffs.items():
            if c:
                byres[m % M] = byres.get(m % M, 0) + c * m**j
        scale = Fraction((-1) ** j, factorial(j))
        out.append(CycNum.from_powers(M, {r: v * scale for r, v in byres.items()}))
    return TSeries(M, K, out)


@lru_cache(maxsize=None)
def _qbinom_t(top: int, n: int, base: int, M: int, K: int) -> TSeries:
    cs = qbinom_coeffs(top, n)
    return poly_to_t({i * base: c for i, c in enumerate(cs) if c}, M, K)


@lru_cache(maxsize=None)
def _poch_t(key: Tuple, base: int, length: int, M: int, K: int) -> TSeries:
    """``(c q^e; q^base)_length`` at ``q = zeta e^(-t)``; built on the cached shorter product."""
    coeff, x_exp, q_exp = key
    if length == 0:
        return TSeries.constant(M, K, 1)
    prev = _poch_t(key, base, length - 1, M, K)
    e = q_exp + base * (length - 1)
    factor = TSeries.constant(M, K, 1) - q_to_t(M, 1, K, coeff, e)
    return prev * factor


def poch_t(arg: Monomial, length: int, M: int, K: int, base: int = 1) -> TSeries:
    if arg.x_exp:
        raise ValueError("set x to 1 before evaluating at a root of unity")
    if not isinstance(arg.q_exp, int):
        raise ValueError(f"non-integral q exponent in {arg}")
    return _poch_t(arg.key(), base, length, M, K)


def poch_inverse_t(arg: Monomial, length: int, M: int, K: int, base: int = 1) -> TSeries:
    val = poch_t(arg, length, M, K, base)
    if val.coeffs[0].is_zero():
        raise DenominatorVanishes(M, f"({arg}; q^{base})_{length}")
    return val.inverse()


def weight_t(w: VarWeight, n: int, M: int, K: int) -> TSeries:
    if w.x_exp(n) or any(f.arg.x_exp for f in w.factors):
        raise ValueError("set x to 1 before evaluating at a root of unity")
    s = q_to_t(M, 1, K, 1, w.q_exp(n))
    for f in w.factors:
        L = f.length(n)
        s = s * (poch_t(f.arg, L, M, K, f.base) if f.power == 1 else poch_inverse_t(f.arg, L, M, K, f.base))
    return s


def root_ranges(spec: MultisumSpec, cutoff: int) -> List[int]:
    """Index bounds at a root: the outer index below ``cutoff``, inner ones bounded by the binomial chain."""
    d = spec.depth
    ranges = [0] * d
    ranges[d - 1] = spec.outer if spec.outer is not None else cutoff - 1
    for i in range(d - 2, -1, -1):
        ranges[i] = ranges[i + 1] + spec.deltas[i]
    return ranges


def eval_terminating_sum(spec: MultisumSpec, M: int, K: int, cutoff: Optional[int] = None) -> TSeries:
    """The t-expansion at ``q = zeta_M e^(-t)`` of a multisum that terminates at roots of unity.

    The outer index runs below ``M (K+2)`` by default.  Past that point the
    outer factor ``(q^b; q^b)_n`` has at least ``K+2`` factors vanishing at
    zeta, so every further term is divisible by ``t^(K+1)``.
    """
    if spec.depth == 0:
        return TSeries.constant(M, K, spec.scale)
    cutoff = M * (K + 2) if cutoff is None else cutoff
    return evaluate_chain(
        spec,
        root_ranges(spec, cutoff),
        lambda i, w, n: weight_t(w, n, M, K),
        lambda top, n: _qbinom_t(top, n, spec.base, M, K),
        TSeries(M, K),
        TSeries.constant(M, K, 1),
    )
