"""Catalog of formal q-series identities, each built as exact truncated series.

Every builder returns a tuple of comparands (two, or three for the
sum = theta quotient = product identities); an identity holds when all
comparands agree to the requested order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from . import families as fam
from .multisum import (
    MultisumSpec,
    PochFactor,
    VarWeight,
    evaluate_chain,
    formal_ranges,
    multisum_qseries,
    weight_qseries,
)
from .qfunctions import INF, BadParams, Monomial, PartialTheta, character, lambert_sum, one_minus, poch, poch_inverse, partial_theta_qseries, qbinom
from .series import QSeries


class UnknownIdentity(KeyError):
    pass


class NotFormal(ValueError):
    """Raised when a root-of-unity identity is asked to verify as a formal one."""


# -- small builders ------------------------------------------------------------


def _inf(coeff, q_exp: int, base: int, order: int) -> QSeries:
    return poch(Monomial(coeff, 0, q_exp), INF, order, base)


def _inf_inv(coeff, q_exp: int, base: int, order: int) -> QSeries:
    return _inf(coeff, q_exp, base, order).invert()


def excluded_residue_product(modulus: int, excluded: Tuple[int, ...], order: int) -> QSeries:
    """``prod 1/(1-q^n)`` over ``n >= 1`` whose residue mod ``modulus`` avoids ``excluded``."""
    bad = {r % modulus for r in excluded}
    out = QSeries.one(order)
    for n in range(1, order + 1):
        if n % modulus not in bad:
            out = out * one_minus(Monomial(1, 0, n), order).invert()
    return out


def theta_quotient(pt: PartialTheta, base: int, order: int, scale=1) -> QSeries:
    return partial_theta_qseries(pt, order) * _inf_inv(1, base, base, order) * scale


def rr_spec(family: str, k: int, a: int = 0) -> MultisumSpec:
    """The ``(k-1)``-fold sum left after letting the outer index of the x = 1 family beta go to infinity."""
    full = fam.multisum_spec(family, k, a, "strange")
    b = full.base
    if k == 1:
        return MultisumSpec((), (), base=b, label=f"{family}-rr(k=1)")
    last = full.weights[k - 2]
    closing = PochFactor(Monomial(1, 0, b), b, power=-1)
    weights = full.weights[: k - 2] + (replace(last, factors=last.factors + (closing,)),)
    return MultisumSpec(weights, full.deltas[: k - 2], base=b, label=f"{family}-rr(k={k},a={a})")


# -- catalog entries -----------------------------------------------------------


def andrews_gordon(k: int, i: int, order: int) -> Tuple[QSeries, ...]:
    if k < 2 or not 1 <= i <= k:
        raise BadParams("andrews_gordon needs k >= 2 and 1 <= i <= k")
    weights = []
    for j in range(1, k):
        lin = 1 if j <= k - i else 0
        weights.append(VarWeight(quad=Fraction(1), lin=Fraction(lin)))
    weights[-1] = replace(weights[-1], factors=(PochFactor(Monomial(1, 0, 1), 1, power=-1),))
    spec = MultisumSpec(tuple(weights), (0,) * (k - 2), label=f"AG(k={k},i={i})")
    return multisum_qseries(spec, order), excluded_residue_product(2 * k + 1, (0, i, -i), order)


def ag_variant(k: int, a: int, order: int) -> Tuple[QSeries, ...]:
    fam.check_params("hikami", k, a)
    side = fam.partial_theta_side("hikami", k, a, weight=0)
    m = 2 * k + 1
    prod = _inf(1, a + 1, m, order) * _inf(1, 2 * k - a, m, order) * _inf(1, m, m, order) * _inf_inv(1, 1, 1, order)
    return multisum_qseries(rr_spec("hikami", k, a), order), theta_quotient(side.pt, 1, order), prod


def family1_rr(k: int, order: int) -> Tuple[QSeries, ...]:
    if k < 2:
        raise BadParams("family1_rr needs k >= 2")
    side = fam.partial_theta_side("fam1", k, weight=0)
    m = 2 * k
    prod = _inf(1, 1, m, order) * _inf(1, m - 1, m, order) * _inf(1, m, m, order) * _inf_inv(1, 1, 1, order)
    return multisum_qseries(rr_spec("fam1", k), order), theta_quotient(side.pt, 1, order), prod


def family2_rr(k: int, order: int) -> Tuple[QSeries, ...]:
    if k < 2:
        raise BadParams("family2_rr needs k >= 2")
    side = fam.partial_theta_side("fam2", k, weight=0)
    m = 4 * k - 2
    prod = _inf(1, 1, m, order) * _inf(1, m - 1, m, order) * _inf(1, m, m, order) * _inf_inv(1, 2, 2, order)
    return multisum_qseries(rr_spec("fam2", k), order), theta_quotient(side.pt, 2, order), prod


def family3_rr(k: int, a: int, order: int) -> Tuple[QSeries, ...]:
    if k < 2:
        raise BadParams("family3_rr needs k >= 2")
    fam.check_params("fam3", k, a)
    side = fam.partial_theta_side("fam3", k, a, weight=0)
    m = 4 * k
    prod = _inf(1, 2 * a + 1, m, order) * _inf(1, m - 2 * a - 1, m, order) * _inf(1, m, m, order)
    prod = prod * _inf_inv(1, 2, 2, order)
    return multisum_qseries(rr_spec("fam3", k, a), order), theta_quotient(side.pt, 2, order), prod


def family4_rr(k: int, a: int, order: int) -> Tuple[QSeries, ...]:
    if k < 2:
        raise BadParams("family4_rr needs k >= 2")
    fam.check_params("fam4", k, a)
    side = fam.partial_theta_side("fam4", k, a, weight=0)
    m = 2 * k - 1
    # (-q^a; q^m)_inf carries the factor 2 when a = 0
    neg_a = poch(Monomial(-1, 0, a), INF, order, m) if a else _inf(-1, m, m, order) * 2
    prod = _inf(1, m, m, order) * neg_a * _inf(-1, m - a, m, order) * _inf_inv(1, 1, 1, order)
    return multisum_qseries(rr_spec("fam4", k, a), order), theta_quotient(side.pt, 1, order, 1 + (a == 0)), prod


def qbinom_generating(k: int, shifted: bool, order: int, coeff=1, q_exp: int = 1) -> Tuple[QSeries, QSeries]:
    """``sum_n x^n [n (+1) over k]`` against its closed form, with ``x -> coeff * q^q_exp``."""
    if k < 0:
        raise BadParams("k must be non-negative")
    if q_exp < 1:
        raise BadParams("x must be replaced by a positive power of q")
    lhs = QSeries.zero(order)
    n = 0
    while n * q_exp <= order:
        top = n + 1 if shifted else n
        if top >= k:
            lhs = lhs + qbinom(top, k, order).shift(Fraction(coeff) ** n, n * q_exp)
        n += 1
    e = k - (1 if shifted and k else 0)
    rhs = poch_inverse(Monomial(coeff, 0, q_exp), k + 1, order).shift(Fraction(coeff) ** e, q_exp * e)
    return lhs, rhs


# -- x-identities ---------------------------------------------------------------


def _k1_tail_term(family: str, n: int, order: int, x_one: bool = False) -> QSeries:
    """``P_n = (x q^p; q^p)_n (q^p; q^p)_n beta_n`` of the single-sum base pair (``n`` may be INF)."""
    xs = 0 if x_one else 1
    xq1, xq2 = Monomial(1, xs, 1), Monomial(1, xs, 2)
    if family == "zagier":
        return poch(xq1, n, order)
    if family == "fam1":
        return poch(xq1, n, order) * poch(-xq1, n, order).invert()
    if family == "fam2":
        m = n if n is INF else 2 * n + 1
        return poch(xq2, n, order, 2) * poch(Monomial(1, 0, 1), n, order, 2) * poch(-xq1, m, order).invert()
    if family == "fam3":
        m = n if n is INF else n + 1
        return poch(xq2, n, order, 2) * poch(-xq1, m, order, 2).invert()
    if family == "fam4":
        m = n if n is INF else n + 1
        return poch(xq1, n, order) * poch(Monomial(-1, 0, 1), n, order) * poch(Monomial(1, 2 * xs, 1), m, order, 2).invert()
    raise BadParams(f"no single-sum x-identity for {family!r}")


def _tails(family: str, order: int, x_one: bool) -> QSeries:
    """``sum_n (P_n - P_inf) x^n``, asserting each tail has q-valuation above ``n``."""
    p_inf = _k1_tail_term(family, INF, order, x_one)
    total = QSeries.zero(order)
    for n in range(order + 1):
        d = _k1_tail_term(family, n, order, x_one) - p_inf
        v = d.valuation()
        if v is not None and v <= n:
            raise AssertionError(f"tail {n} of {family} has valuation {v}; truncation would be inexact")
        total = total + (d if x_one else d.shift(1, 0, n))
    return total


def _rhs_x(family: str, k: int, a: int, order: int) -> QSeries:
    key = "hikami" if family == "zagier" else family
    side = fam.partial_theta_side(key, k, a, weight=0)
    pt = partial_theta_qseries(side.pt, order, side.x_rule)
    if k == 1 and family in ("fam1", "fam2"):
        return pt * 2 - 1
    if family == "fam4" and a == 0 and k > 1:
        return pt * 2
    return pt


def x_identity(family: str, k: int = 1, a: int = 0, order: int = 20) -> Tuple[QSeries, QSeries]:
    """The x-parametrized identity behind a strange identity, in tails form.

    ``lhs`` is the left side after adding and subtracting the infinite
    product (and, for ``k >= 2``, eliminating the outer index); ``rhs`` is
    the partial theta function carrying the family's power of x.  Both are
    exact elements of ``Q[x][[q]]`` to ``order``.  ``family='zagier'`` is the
    ``k = 1`` Hikami case.
    """
    if family == "fam5":
        raise BadParams("the fam5 x-identity has no tails form (its outer index carries 1/(-x^2 q)_n)")
    if family == "zagier":
        k, a = 1, 0
    if k == 1:
        key = "zagier" if family in ("zagier", "hikami") else family
        p_inf = _k1_tail_term(key, INF, order)
        lhs = _tails(key, order, False) * one_minus(Monomial(1, 1, 0), order) + p_inf
        return lhs, _rhs_x(family, 1, 0, order)
    return _x_identity_multi(family, k, a, order), _rhs_x(family, k, a, order)


def _x_identity_multi(family: str, k: int, a: int, order: int) -> QSeries:
    spec = fam.multisum_spec(family, k, a, "beta")
    b = spec.base
    xqb = Monomial(1, 1, b)
    xqb_inf = poch(xqb, INF, order, b)

    # (1-x) sum ((xq^b)_{n_k} - (xq^b)_inf) x^{n_k} T(n_1..n_{k-1}) chain
    ranges = formal_ranges(spec.pinned(order // b), order)
    outer_extra = tuple(f for f in spec.weights[-1].factors if not (f.arg == Monomial(1, 0, b) and f.power == -1))

    def weight(i: int, w: VarWeight, n: int):
        if i < k - 1:
            return weight_qseries(w, n, order)
        t = poch(xqb, n, order, b) - xqb_inf
        for f in outer_extra:
            t = t * weight_qseries(VarWeight(factors=(f,)), n, order)
        return t.shift(1, 0, n)

    tails = evaluate_chain(
        spec, ranges, weight, lambda top, n: qbinom(top, n, order, b), QSeries.zero(order), QSeries.one(order)
    )
    tails = tails * one_minus(Monomial(1, 1, 0), order)

    # (xq^b)_inf sum T x^{n_{k-1} - [a = k-1][n_{k-1} > 0]} / (xq^b)_{n_{k-1}} chain
    last = spec.weights[k - 2]
    elim = replace(
        last,
        x_lin=last.x_lin + 1,
        x_pos_shift=last.x_pos_shift - (1 if a == k - 1 and family not in ("fam1", "fam2") else 0),
        factors=last.factors + (PochFactor(xqb, b, power=-1),),
    )
    reduced = MultisumSpec(spec.weights[: k - 2] + (elim,), spec.deltas[: k - 2], base=b)
    return tails + multisum_qseries(reduced, order) * xqb_inf


# -- sum of tails ------------------------------------------------------------------


def _p_inf_at_one(family: str, order: int) -> QSeries:
    return _k1_tail_term(family, INF, order, x_one=True)


def sum_of_tails(family: str, order: int) -> Tuple[QSeries, QSeries]:
    """The single-sum sum-of-tails identity, rebuilt from tails and Lambert series."""
    T = _tails(family, order, x_one=True)
    P = _p_inf_at_one(family, order)
    L = lambda c, d, s: lambert_sum(c, d, s, order)  # noqa: E731
    half = Fraction(1, 2)
    if family == "zagier":
        lhs = T * 2 + P * (L(1, 1, 1) * 2 - 1)
        rhs = partial_theta_qseries(PartialTheta(character("zagier_12"), 1, 24, 1, -1), order)
    elif family == "fam1":
        lhs = -T - P * L(1, 2, 1) * 2
        rhs = partial_theta_qseries(PartialTheta(character("fam1_4k", 1), 1, 4, 0, 2), order)
    elif family == "fam2":
        lhs = -T - P * L(1, 2, 1)
        rhs = partial_theta_qseries(PartialTheta(character("fam1_4k", 1), 1, 4, 0, 1), order)
    elif family == "fam3":
        odd_plus = L(1, 1, -1) - L(2, 2, -1)
        lhs = -T - P * (L(2, 2, 1) + odd_plus - half)
        rhs = partial_theta_qseries(PartialTheta(character("fam3_8k", 1, 0), 1, 8, 1, half), order)
    elif family == "fam4":
        odd_minus = L(1, 1, 1) - L(2, 2, 1)
        lhs = -T + P * (odd_minus * 2 - L(1, 1, 1) + half)
        rhs = partial_theta_qseries(PartialTheta(character("fam4_4k2", 1, 0), 1, 8, 1, half), order)
    else:
        raise BadParams(f"no sum-of-tails identity for {family!r}")
    return lhs, rhs


def derivative_at_one(family: str, f: QSeries) -> QSeries:
    """``-d/dx [x f(x^2)]`` at 1 for Zagier, ``f'(1)`` otherwise (matching the signs of the single-sum forms)."""
    if family == "zagier":
        return -(f.x_to_one() + f.differentiate_x().x_to_one() * 2)
    return f.differentiate_x().x_to_one()


def derivative_offset(family: str, order: int) -> QSeries:
    """Amount by which the differentiated x-identity sides exceed the single-sum forms.

    Families whose x-exponent is ``(n-1)/2`` pick up ``-1/2`` times the
    weight-zero partial theta, which equals the infinite product.
    """
    if family in ("fam3", "fam4"):
        return _p_inf_at_one(family, order) * Fraction(-1, 2)
    return QSeries.zero(order)


# -- registry ---------------------------------------------------------------------------

VALIDITIES = fam.VALIDITY_TAGS


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    params: Tuple[str, ...]
    validity: str
    builder: Optional[Callable[..., Tuple[QSeries, ...]]]
    doc: str = ""


def _xid(family: str, k: int = 1, a: int = 0, order: int = 20):
    return x_identity(family, k, a, order)


CATALOG: Dict[str, IdentitySpec] = {
    s.name: s
    for s in (
        IdentitySpec("andrews_gordon", ("k", "i"), "formal", andrews_gordon, "multisum = excluded-residue product"),
        IdentitySpec("ag_variant", ("k", "a"), "formal", ag_variant, "multisum = theta quotient = product"),
        IdentitySpec("family1_rr", ("k",), "formal", family1_rr, "multisum = theta quotient = product"),
        IdentitySpec("family2_rr", ("k",), "formal", family2_rr, "multisum = theta quotient = product"),
        IdentitySpec("family3_rr", ("k", "a"), "formal", family3_rr, "multisum = theta quotient = product"),
        IdentitySpec("family4_rr", ("k", "a"), "formal", family4_rr, "multisum = theta quotient = product"),
        IdentitySpec("qbinom_gf", ("k", "shifted"), "formal", qbinom_generating, "generating function of q-binomials"),
        IdentitySpec("x_identity", ("family", "k", "a"), "formal", _xid, "tails form = x partial theta"),
        IdentitySpec("sum_of_tails", ("family",), "formal", sum_of_tails, "single-sum sum-of-tails identity"),
        IdentitySpec("strange", ("family", "k", "a"), "roots", None, "checked at roots of unity"),
        IdentitySpec("quantum", ("kind", "k", "a"), "odd_roots", None, "checked at odd roots of unity"),
    )
}


def lookup(name: str) -> IdentitySpec:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownIdentity(name) from None


def build_sides(name: str, params: Mapping[str, object], order: int) -> Tuple[QSeries, ...]:
    spec = lookup(name)
    if spec.validity != "formal" or spec.builder is None:
        raise NotFormal(f"{name} holds only at roots of unity; use the strange or quantum checks")
    unknown = set(params) - set(spec.params)
    if unknown:
        raise BadParams(f"{name} does not take {sorted(unknown)}")
    return tuple(spec.builder(**params, order=order))


def build_identity(name: str, params: Mapping[str, object], order: int) -> Tuple[QSeries, QSeries]:
    sides = build_sides(name, params, order)
    return sides[0], sides[-1]


@dataclass(frozen=True)
class IdentityReport:
    name: str
    params: Tuple[Tuple[str, object], ...]
    order: int
    ok: bool
    witness: Optional[Tuple[int, int, int, object, object]] = None  # (side, q-deg, x-deg, expected, got)

    def __bool__(self) -> bool:
        return self.ok


def compare_sides(sides: Tuple[QSeries, ...], order: int) -> Optional[Tuple[int, int, int, object, object]]:
    ref = sides[0]
    for j, other in enumerate(sides[1:], 1):
        bad = ref.first_mismatch(other, order)
        if bad is not None:
            d, e, mine, theirs = bad
            return (j, d, e, mine, theirs)
    return None


def verify_identity(name: str, params: Mapping[str, object], order: int) -> IdentityReport:
    sides = build_sides(name, params, order)
    w = compare_sides(sides, order)
    return IdentityReport(name, tuple(sorted(params.items())), order, w is None, w)


def formal_names() -> List[str]:
    return [n for n, s in CATALOG.items() if s.validity == "formal"]
