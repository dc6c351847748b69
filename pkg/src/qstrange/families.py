"""The six multisum families: summand shapes, closed-form alphas, partial theta sides.

Family names: ``hikami`` (Zagier is ``hikami`` with ``k=1, a=0``), ``fam1``
through ``fam4`` and ``fam5`` (the variant whose final Bailey-lemma step uses
``rho1 = -q``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .multisum import MultisumSpec, PochFactor, VarWeight
from .qfunctions import BadParams, Monomial, PartialTheta, character, one_minus, poch, poch_inverse
from .series import QSeries

FAMILIES = ("hikami", "fam1", "fam2", "fam3", "fam4", "fam5")

# Sign inside (1 -+ x^(2a+1) q^((2a+1)(2n+1))) of the family-3 alpha, as
# certified by verify_pair (see tests/test_bailey.py::test_fam3_sign_resolution).
FAM3_SIGN = -1

HALF = Fraction(1, 2)


def check_params(family: str, k: int, a: int = 0) -> None:
    if family not in FAMILIES:
        raise BadParams(f"unknown family {family!r}")
    if k < 1:
        raise BadParams("k must be at least 1")
    if family in ("fam1", "fam2"):
        return
    if family == "fam5":
        if not 0 <= a < k - 1:
            raise BadParams("fam5 needs 0 <= a < k-1")
    elif not 0 <= a <= k - 1:
        raise BadParams(f"{family} needs 0 <= a <= k-1")


def family_base(family: str) -> int:
    return 2 if family in ("fam2", "fam3") else 1


def _delta(i: int, a: int) -> int:
    return 1 if i == a else 0


def multisum_spec(family: str, k: int, a: int = 0, mode: str = "beta") -> MultisumSpec:
    """Summand of the closed ``beta_n`` (``mode='beta'``) or of the strange-identity left side.

    In ``beta`` mode the outer index carries ``1/(q^b;q^b)_n`` and x is kept;
    in ``strange`` mode x is set to 1 and the outer index carries
    ``(q^b;q^b)_n`` instead, i.e. the summand of ``sum (q^b;q^b)_n^2 beta_n``.
    """
    check_params(family, k, a)
    if mode not in ("beta", "strange"):
        raise ValueError("mode must be 'beta' or 'strange'")
    xs = 1 if mode == "beta" else 0
    b = family_base(family)
    first: Tuple[PochFactor, ...] = ()
    if family == "fam1":
        first = (PochFactor(Monomial(-1, xs, 1), 1, power=-1),)
    elif family == "fam2":
        first = (
            PochFactor(Monomial(1, 0, 1), 2),
            PochFactor(Monomial(-1, xs, 1), 1, mult=2, offset=1, power=-1),
        )
    elif family == "fam3":
        first = (PochFactor(Monomial(-1, xs, 1), 2, offset=_delta(a, 0), power=-1),)
    elif family == "fam4":
        d0 = _delta(a, 0)
        first = (
            PochFactor(Monomial(-1, 0, 0), 1, offset=d0),
            PochFactor(Monomial(1, 2 * xs, 1), 2, offset=d0, power=-1),
        )

    uses_delta = family in ("hikami", "fam3", "fam4", "fam5")
    weights = []
    for i in range(1, k):
        if family in ("fam1", "fam2"):
            lin = b
        else:
            lin = b if i >= a + 1 else 0
        w = VarWeight(quad=Fraction(b), lin=Fraction(lin), x_lin=2 * xs)
        if family == "fam5" and i == k - 1:
            w = VarWeight(quad=HALF, lin=HALF, x_lin=2 * xs, factors=(PochFactor(Monomial(-1, 0, 1), 1),))
        weights.append(w)
    if weights and first:
        weights[0] = VarWeight(weights[0].quad, weights[0].lin, weights[0].x_lin, 0, weights[0].factors + first)

    outer = (PochFactor(Monomial(1, 0, b), b, power=-1 if mode == "beta" else 1),)
    if family == "fam5":
        outer += (PochFactor(Monomial(-1, 2 * xs, 1), 1, power=-1),)
    if k == 1:
        outer += first
    weights.append(VarWeight(factors=outer))
    deltas = tuple(_delta(i, a) if uses_delta else 0 for i in range(1, k))
    return MultisumSpec(tuple(weights), deltas, base=b, label=f"{family}(k={k},a={a},{mode})")


def _alpha_common(base: int, n: int, order: int) -> QSeries:
    """``(x^2 q^b; q^b)_n / ((q^b; q^b)_n (1 - x^2 q^b))``."""
    x2q = Monomial(1, 2, base)
    return (
        poch(x2q, n, order, base)
        * poch_inverse(Monomial(1, 0, base), n, order, base)
        * one_minus(x2q, order).invert()
    )


def closed_alpha(family: str, k: int, a: int, n: int, order: int, fam3_sign: int = FAM3_SIGN) -> QSeries:
    """The closed form of ``alpha_n`` for each family's Bailey pair."""
    check_params(family, k, a)
    sgn = (-1) ** n
    if family == "hikami":
        e = n * (n + 1) // 2 + (a + 1) * n * n + (k - a - 1) * (n * n + n)
        tail = one_minus(Monomial(1, 2 * (a + 1), (a + 1) * (2 * n + 1)), order)
        return _alpha_common(1, n, order).shift(sgn, e, 2 * k * n) * tail
    if family == "fam1":
        tail = one_minus(Monomial(1, 2, 2 * n + 1), order)
        return _alpha_common(1, n, order).shift(sgn, k * n * n + (k - 1) * n, (2 * k - 1) * n) * tail
    if family == "fam2":
        tail = one_minus(Monomial(1, 1, 2 * n + 1), order)
        e = (2 * k - 1) * n * n + (2 * k - 2) * n
        return _alpha_common(2, n, order).shift(sgn, e, (2 * k - 2) * n) * tail
    if family == "fam3":
        e = 2 * (a + 1) * n * n + n + 2 * (k - a - 1) * (n * n + n)
        tail = one_minus(Monomial(-fam3_sign, 2 * a + 1, (2 * a + 1) * (2 * n + 1)), order)
        return _alpha_common(2, n, order).shift(sgn, e, (2 * k - 1) * n) * tail
    if family == "fam4":
        e = n * (n + 1) // 2 + a * n * n + (k - a - 1) * (n * n + n)
        tail = one_minus(Monomial(-1, 2 * a, a * (2 * n + 1)), order)
        return _alpha_common(1, n, order).shift(1, e, (2 * k - 2) * n) * tail
    # fam5: one rho1 = -q step applied to the hikami(k-1, a) alpha
    lift = poch(Monomial(-1, 0, 1), n, order) * poch_inverse(Monomial(-1, 2, 1), n, order)
    return closed_alpha("hikami", k - 1, a, n, order) * lift.shift(1, n * (n + 1) // 2, 2 * n)


@dataclass(frozen=True)
class StrangeSide:
    """Right-hand partial theta data of a family, plus its x-exponent rule."""

    pt: PartialTheta
    x_rule: Tuple[int, int]


def partial_theta_side(family: str, k: int, a: int = 0, weight: int = 1) -> StrangeSide:
    """The family's partial theta with the strange-identity prefactor.

    With ``weight=0`` the prefactor is dropped and the result is the
    x-parametrized right side (before the ``k = 1`` or ``a = 0`` doubling,
    which callers apply).
    """
    check_params(family, k, a)
    c = 2 * k - 2 * a - 1
    if family == "hikami":
        chi, D, shift, pre, rule = character("hikami_8k4", k, a), 8 * (2 * k + 1), c, Fraction(-1, 2), (c, 2)
    elif family == "fam1":
        chi, D, shift, pre, rule = character("fam1_4k", k), 4 * k, k - 1, -(1 + (k == 1)), (k - 1, 1)
    elif family == "fam2":
        chi, D, shift = character("fam2_8k", k), 8 * k - 4, 2 * k - 2
        pre, rule = Fraction(-(1 + (k == 1)), 2), (2 * k - 2, 2)
    elif family == "fam3":
        chi, D, shift, pre, rule = character("fam3_8k", k, a), 8 * k, c, Fraction(-1, 2), (c, 2)
    elif family == "fam4":
        chi, D, shift = character("fam4_4k2", k, a), 8 * (2 * k - 1), c
        pre, rule = Fraction(-(1 + (a == 0)), 2), (c, 2)
    else:
        chi, D, shift, pre, rule = character("fam5_4k", k, a), 4 * k, k - a - 1, -1, (k - a - 1, 1)
    if weight == 0:
        pre = 1
    return StrangeSide(PartialTheta(chi, weight, D, shift, pre), rule)


VALIDITY_TAGS = ("formal", "odd_roots", "even_roots", "roots_not_2_mod_4", "all_roots")


def strange_validity(family: str, k: int) -> str:
    if family == "hikami":
        return "all_roots"
    if family == "fam4":
        return "even_roots"
    if family == "fam3" and k == 1:
        return "roots_not_2_mod_4"
    return "odd_roots"


def root_allowed(validity: str, M: int) -> bool:
    if validity == "all_roots":
        return True
    if validity == "odd_roots":
        return M % 2 == 1
    if validity == "even_roots":
        return M % 2 == 0
    if validity == "roots_not_2_mod_4":
        return M % 4 != 2
    return False


def fam5_params(k: int, a: int) -> Optional[str]:
    return None if 0 <= a < k - 1 else "fam5 needs 0 <= a < k-1"
