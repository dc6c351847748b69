"""Strange identities checked exactly at roots of unity.

The left side is a multisum that terminates at every admissible root; its
t-expansion under ``q = zeta e^(-t)`` comes from :mod:`qstrange.cyclotomic`.
The right side is a partial theta function whose t-expansion is produced
from L-values at negative integers of the twisted periodic function
``psi(n) = chi(n) zeta^((n^2 - c^2)/D)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd
from typing import Dict, List, Optional, Tuple

from .cyclotomic import CycNum, DenominatorVanishes, TSeries, eval_terminating_sum, exp_series
from .families import (
    check_params,
    multisum_spec,
    partial_theta_side,
    root_allowed,
    strange_validity,
)
from .multisum import MultisumSpec
from .qfunctions import BadParams, PartialTheta


class SingularExpansion(ArithmeticError):
    """The twisted function has nonzero mean, so the expansion has a ``1/t``-type term."""


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> Tuple[Fraction, ...]:
    """``B_0 .. B_n`` with ``B_1 = -1/2``."""
    B: List[Fraction] = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / Fraction(m + 1))
    return tuple(B)


@lru_cache(maxsize=None)
def bernoulli_poly(m: int) -> Tuple[Fraction, ...]:
    """Ascending coefficients of ``B_m(x) = sum_j C(m, j) B_j x^(m-j)``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    B = bernoulli_numbers(m)
    out = [Fraction(0)] * (m + 1)
    for j in range(m + 1):
        out[m - j] = comb(m, j) * B[j]
    return tuple(out)


def _eval_poly(p: Tuple[Fraction, ...], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


class TwistedPeriodic:
    """A periodic function with values in ``Q(zeta_M)``."""

    def __init__(self, M: int, period: int, values: Dict[int, CycNum]):
        self.M = M
        self.period = period
        self.values = {n % period: v for n, v in values.items() if not v.is_zero()}

    def __call__(self, n: int) -> CycNum:
        return self.values.get(n % self.period, CycNum(self.M))

    def total(self) -> CycNum:
        acc = CycNum(self.M)
        for v in self.values.values():
            acc = acc + v
        return acc

    def is_symmetric(self) -> bool:
        return all(self(self.period - n) == v for n, v in self.values.items())

    def is_periodic_over(self, reps: int = 2) -> bool:
        return all(self(n) == self(n + self.period) for n in range(reps * self.period))

    @classmethod
    def from_partial_theta(cls, pt: PartialTheta, M: int) -> "TwistedPeriodic":
        pt.check_integrality()
        P, D, c = pt.chi.period, pt.divisor, pt.shift
        period = P * D * M // gcd(P, D * M)
        vals: Dict[int, CycNum] = {}
        for n in range(period):
            v = pt.chi(n)
            if v:
                vals[n] = CycNum.zeta(M, (n * n - c * c) // D) * v
        return cls(M, period, vals)


def lvalue(psi: TwistedPeriodic, m: int) -> CycNum:
    """``L(-m, psi) = -(L^m / (m+1)) sum_{n=1}^{L} psi(n) B_{m+1}(n / L)``."""
    L = psi.period
    B = bernoulli_poly(m + 1)
    acc = CycNum(psi.M)
    for n in range(1, L + 1):
        v = psi(n)
        if not v.is_zero():
            acc = acc + v * _eval_poly(B, Fraction(n, L))
    return acc * Fraction(-(L**m), m + 1)


def rhs_asymptotic(pt: PartialTheta, M: int, K: int) -> TSeries:
    """t-expansion of ``pt`` at ``q = zeta_M e^(-t)``.

    ``sum_n n^w psi(n) e^(-n^2 s)`` with ``s = t/D`` expands as
    ``sum_j L(-2j-w, psi) (-s)^j / j!`` once ``psi`` has mean zero.
    """
    if pt.weight not in (0, 1):
        raise ValueError("only weights 0 and 1 are supported")
    psi = TwistedPeriodic.from_partial_theta(pt, M)
    if not psi.total().is_zero():
        raise SingularExpansion(f"twisted function has nonzero mean at M={M}")
    D = pt.divisor
    coeffs = [
        lvalue(psi, 2 * j + pt.weight) * Fraction((-1) ** j, factorial(j) * D**j) for j in range(K + 1)
    ]
    series = TSeries(M, K, coeffs) * exp_series(M, K, Fraction(pt.shift * pt.shift, D))
    return series * pt.prefactor


# -- the catalog of strange identities ---------------------------------------------

STRANGE_NAMES = ("zagier", "hikami", "fam1", "fam2", "fam3", "fam4", "fam5")


@dataclass(frozen=True)
class StrangeSpec:
    name: str
    k: int
    a: int
    lhs: MultisumSpec
    rhs: PartialTheta
    validity: str

    @property
    def prefactor(self):
        return self.rhs.prefactor


def strange_spec(name: str, k: int = 1, a: int = 0) -> StrangeSpec:
    if name not in STRANGE_NAMES:
        raise BadParams(f"unknown strange identity {name!r}")
    family = "hikami" if name == "zagier" else name
    if name == "zagier":
        k, a = 1, 0
    check_params(family, k, a)
    side = partial_theta_side(family, k, a, weight=1)
    return StrangeSpec(name, k, a, multisum_spec(family, k, a, mode="strange"), side.pt, strange_validity(family, k))


def _render(c: CycNum) -> dict:
    return {"order": c.M, "coords": [str(Fraction(x)) for x in c.coords]}


@dataclass
class StrangeReport:
    name: str
    params: Dict[str, int]
    M: int
    K: int
    status: str  # pass | fail | root_rejected
    lhs: List[CycNum] = field(default_factory=list)
    rhs: List[CycNum] = field(default_factory=list)
    mismatch: Optional[int] = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def witness(self) -> Optional[dict]:
        if self.mismatch is None:
            return None
        j = self.mismatch
        return {"t_degree": j, "lhs": _render(self.lhs[j]), "rhs": _render(self.rhs[j])}


def _compare(name, params, M, K, lhs: TSeries, rhs: TSeries) -> StrangeReport:
    bad = next((j for j in range(K + 1) if lhs.coeffs[j] != rhs.coeffs[j]), None)
    return StrangeReport(
        name, params, M, K, "pass" if bad is None else "fail", list(lhs.coeffs), list(rhs.coeffs), bad
    )


def strange_check(name: str, k: int = 1, a: int = 0, M: int = 1, K: int = 4) -> StrangeReport:
    """Compare both sides' t-coefficients up to ``t^K`` at a primitive M-th root."""
    spec = strange_spec(name, k, a)
    params = {"k": spec.k, "a": spec.a}
    if not root_allowed(spec.validity, M):
        return StrangeReport(name, params, M, K, "root_rejected", reason=f"outside {spec.validity}")
    try:
        lhs = eval_terminating_sum(spec.lhs, M, K)
    except DenominatorVanishes as e:
        return StrangeReport(name, params, M, K, "root_rejected", reason=str(e))
    rhs = rhs_asymptotic(spec.rhs, M, K)
    return _compare(name, params, M, K, lhs, rhs)


# -- quantum identities ------------------------------------------------------------

QUANTUM_IDS = ("fam1_vs_fam2", "fam5_vs_fam3", "fam5_vs_hikami")


def quantum_sides(qid: str, k: int, a: int = 0) -> Tuple[MultisumSpec, MultisumSpec, int]:
    """Left multisum, right multisum and the factor multiplying the right side."""
    if qid == "fam1_vs_fam2":
        return multisum_spec("fam1", 2 * k - 1, 0, "strange"), multisum_spec("fam2", k, 0, "strange"), 2
    if qid == "fam5_vs_fam3":
        return multisum_spec("fam5", 2 * k, 2 * a, "strange"), multisum_spec("fam3", k, a, "strange"), 2
    if qid == "fam5_vs_hikami":
        right = multisum_spec("hikami", k, a, "strange").scaled_q(2)
        return multisum_spec("fam5", 2 * k + 1, 2 * a + 1, "strange"), right, 2
    raise BadParams(f"unknown quantum identity {qid!r}")


def quantum_check(qid: str, k: int, a: int = 0, M: int = 1) -> StrangeReport:
    params = {"k": k, "a": a}
    left, right, factor = quantum_sides(qid, k, a)
    if M % 2 == 0:
        return StrangeReport(qid, params, M, 0, "root_rejected", reason="quantum identities need odd roots")
    try:
        lhs = eval_terminating_sum(left, M, 0)
        rhs = eval_terminating_sum(right, M, 0) * factor
    except DenominatorVanishes as e:
        return StrangeReport(qid, params, M, 0, "root_rejected", reason=str(e))
    return _compare(qid, params, M, 0, lhs, rhs)


