"""Bailey pairs as lazy, memoized sequences of truncated series.

A pair relative to ``a`` in base ``q^p`` satisfies, for every ``n``::

    beta_n = sum_{k<=n} alpha_k / ((q^p;q^p)_{n-k} (a q^p;q^p)_{n+k})

Everything below works in base ``q^p``; ``p`` is 1 or 2.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple, Union

from . import families as fam
from .multisum import multisum_qseries
from .qfunctions import INF, BadSpecialization, Monomial, _Infinity, one_minus, poch, poch_inverse
from .series import QSeries

Rho = Union[Monomial, _Infinity]
Generator = Callable[[int, int], QSeries]


class BadRelParam(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class _Memo:
    """``n, order -> QSeries`` cache around a generator; safe to share across threads."""

    def __init__(self, fn: Generator):
        self._fn = fn
        self._cache: Dict[Tuple[int, int], QSeries] = {}
        self._lock = threading.Lock()

    def __call__(self, n: int, order: int) -> QSeries:
        if n < 0:
            raise ValueError("index must be non-negative")
        key = (n, order)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        val = self._fn(n, order)
        with self._lock:
            return self._cache.setdefault(key, val)


class BaileyPair:
    def __init__(self, rel_param: Monomial, base_exp: int, alpha: Generator, beta: Generator, label: str = ""):
        if base_exp not in (1, 2):
            raise ValueError("base_exp must be 1 or 2")
        self.rel_param = rel_param
        self.base_exp = base_exp
        self.alpha = alpha if isinstance(alpha, _Memo) else _Memo(alpha)
        self.beta = beta if isinstance(beta, _Memo) else _Memo(beta)
        self.label = label
        self.iterated: Optional["BaileyPair"] = None

    @property
    def qb(self) -> Monomial:
        return Monomial(1, 0, self.base_exp)

    def scaled(self, factor: Callable[[int], QSeries], label: str = "") -> "BaileyPair":
        """Multiply both sequences by a constant series ``factor(order)``."""
        return BaileyPair(
            self.rel_param,
            self.base_exp,
            lambda n, o: self.alpha(n, o) * factor(o),
            lambda n, o: self.beta(n, o) * factor(o),
            label or self.label,
        )

    def __repr__(self) -> str:
        return f"BaileyPair({self.label or '?'}, a={self.rel_param}, base=q^{self.base_exp})"


# -- helpers ---------------------------------------------------------------


def _mono(m: Monomial, order: int) -> QSeries:
    return m.series(order)


def _formal(m: Monomial, what: str) -> Monomial:
    if not m.is_formal():
        raise BadSpecialization(f"{what} = {m} is not a monomial of Q[x][[q]]")
    return m


def _unit_poch(arg: Monomial, n: int, order: int, base: int, what: str) -> QSeries:
    """``1/(arg; q^base)_n``, refusing factors whose constant term vanishes."""
    _formal(arg, what)
    if n and arg.q_exp == 0 and (arg.x_exp or arg.coeff == 1):
        raise BadSpecialization(f"({arg}; q^{base})_n has a factor with zero or non-constant constant term")
    return poch_inverse(arg, n, order, base)


def _a_poch_over_one_minus_a(a: Monomial, n: int, order: int, p: int) -> QSeries:
    """``(a; q^p)_n / (1 - a)`` without dividing: ``(a q^p; q^p)_{n-1}`` for ``n >= 1``."""
    if n == 0:
        return one_minus(a, order).invert()
    return poch(a.times_q(p), n - 1, order, p)


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


# -- Slater's pair ---------------------------------------------------------


def slater_pair(a: Monomial, b: Rho, c: Rho, base_exp: int = 1) -> BaileyPair:
    """Slater's pair relative to ``a`` with ``b``, ``c`` finite monomials or ``INF``."""
    p = base_exp
    qp = Monomial(1, 0, p)
    if b is INF and c is not INF:
        b, c = c, b
    aq = a * qp

    def special(n: int, order: int) -> QSeries:
        """``(b)_n (c)_n (aq/bc)^n / ((aq/b)_n (aq/c)_n)`` in its limiting form."""
        if b is INF:
            return (a**n).times_q(p * n * n).series(order)
        if c is INF:
            ratio = _formal(aq / b, "aq/b")
            lead = (ratio**n).times_q(p * _binom2(n))
            return poch(b, n, order, p) * _unit_poch(ratio, n, order, p, "aq/b").shift(
                (-1) ** n * lead.coeff, lead.q_exp, lead.x_exp
            )
        r = _formal(aq / (b * c), "aq/bc")
        rn = r**n
        if b == -c and not b.is_formal():
            num = poch(b * b, n, order, 2 * p)
            den = _unit_poch((aq / b) ** 2, n, order, 2 * p, "(aq/b)^2")
        else:
            num = poch(_formal(b, "b"), n, order, p) * poch(_formal(c, "c"), n, order, p)
            den = _unit_poch(_formal(aq / b, "aq/b"), n, order, p, "aq/b") * _unit_poch(
                _formal(aq / c, "aq/c"), n, order, p, "aq/c"
            )
        return (num * den).shift(rn.coeff, rn.q_exp, rn.x_exp)

    def alpha(n: int, order: int) -> QSeries:
        if n == 0:
            return QSeries.one(order)
        pre = _a_poch_over_one_minus_a(a, n, order, p) * one_minus(a.times_q(2 * p * n), order)
        pre = pre * poch_inverse(qp, n, order, p)
        return pre.shift((-1) ** n, p * _binom2(n)) * special(n, order)

    def beta(n: int, order: int) -> QSeries:
        s = poch_inverse(qp, n, order, p)
        if b is INF:
            return s
        if c is INF:
            return s * _unit_poch(_formal(aq / b, "aq/b"), n, order, p, "aq/b")
        num = poch(_formal(aq / (b * c), "aq/bc"), n, order, p)
        if b == -c and not b.is_formal():
            return s * num * _unit_poch((aq / b) ** 2, n, order, 2 * p, "(aq/b)^2")
        return (
            s
            * num
            * _unit_poch(_formal(aq / b, "aq/b"), n, order, p, "aq/b")
            * _unit_poch(_formal(aq / c, "aq/c"), n, order, p, "aq/c")
        )

    return BaileyPair(a, p, alpha, beta, f"slater(a={a}, b={b}, c={c}, q^{p})")


# -- the Bailey lemma ------------------------------------------------------


def _rho_weight(a: Monomial, p: int, rho1: Rho, rho2: Rho, k: int, order: int) -> QSeries:
    """``(rho1)_k (rho2)_k (a q/rho1 rho2)^k`` in its limiting form."""
    qp = Monomial(1, 0, p)
    if rho1 is INF and rho2 is INF:
        m = (a**k).times_q(p * k * k)
        return _formal(m, "a^k q^(k^2)").series(order)
    if rho1 is INF:
        rho1, rho2 = rho2, rho1
    if rho2 is INF:
        ratio = _formal(a * qp / rho1, "aq/rho1")
        lead = (ratio**k).times_q(p * _binom2(k))
        return poch(_formal(rho1, "rho1"), k, order, p).shift((-1) ** k * lead.coeff, lead.q_exp, lead.x_exp)
    r = _formal(a * qp / (rho1 * rho2), "aq/(rho1 rho2)") ** k
    return (poch(_formal(rho1, "rho1"), k, order, p) * poch(_formal(rho2, "rho2"), k, order, p)).shift(
        r.coeff, r.q_exp, r.x_exp
    )


def _rho_denominator(a: Monomial, p: int, rho1: Rho, rho2: Rho, n: int, order: int) -> QSeries:
    """``1/((aq/rho1)_n (aq/rho2)_n)`` with infinite rho contributing 1."""
    qp = Monomial(1, 0, p)
    out = QSeries.one(order)
    for rho in (rho1, rho2):
        if rho is not INF:
            out = out * _unit_poch(_formal(a * qp / rho, "aq/rho"), n, order, p, "aq/rho")
    return out


def bailey_step(pair: BaileyPair, rho1: Rho = INF, rho2: Rho = INF) -> BaileyPair:
    """One application of the Bailey lemma."""
    a, p = pair.rel_param, pair.base_exp
    qp = Monomial(1, 0, p)
    both_finite = rho1 is not INF and rho2 is not INF
    tail_arg = a * qp / (rho1 * rho2) if both_finite else None

    def alpha(n: int, order: int) -> QSeries:
        w = _rho_weight(a, p, rho1, rho2, n, order) * _rho_denominator(a, p, rho1, rho2, n, order)
        return w * pair.alpha(n, order)

    def beta(n: int, order: int) -> QSeries:
        total = QSeries.zero(order)
        for k in range(n + 1):
            t = _rho_weight(a, p, rho1, rho2, k, order) * pair.beta(k, order) * poch_inverse(qp, n - k, order, p)
            if tail_arg is not None:
                t = t * poch(_formal(tail_arg, "aq/(rho1 rho2)"), n - k, order, p)
            total = total + t
        return total * _rho_denominator(a, p, rho1, rho2, n, order)

    return BaileyPair(a, p, alpha, beta, f"step({rho1},{rho2})[{pair.label}]")


# -- verification and inversion ------------------------------------------------


@dataclass(frozen=True)
class PairReport:
    ok: bool
    n_checked: int
    order: int
    witness: Optional[Tuple[int, int, int, object, object]] = None  # (n, q-deg, x-deg, expected, got)

    def __bool__(self) -> bool:
        return self.ok


def pair_relation(alpha: Generator, a: Monomial, p: int, n: int, order: int) -> QSeries:
    """Right side of the defining relation: ``sum_k alpha_k / ((q^p)_{n-k} (a q^p)_{n+k})``."""
    qp = Monomial(1, 0, p)
    aqp = a.times_q(p)
    total = QSeries.zero(order)
    for k in range(n + 1):
        total = total + alpha(k, order) * poch_inverse(qp, n - k, order, p) * poch_inverse(aqp, n + k, order, p)
    return total


def verify_pair(pair: BaileyPair, n_max: int, order: int) -> PairReport:
    for n in range(n_max + 1):
        rhs = pair_relation(pair.alpha, pair.rel_param, pair.base_exp, n, order)
        bad = pair.beta(n, order).first_mismatch(rhs, order)
        if bad is not None:
            d, e, mine, theirs = bad
            return PairReport(False, n, order, (n, d, e, theirs, mine))
    return PairReport(True, n_max, order)


def invert_pair(beta: Generator, rel_param: Monomial, base_exp: int) -> Generator:
    """The alpha sequence determined by ``beta`` through Bailey inversion."""
    a, p = rel_param, base_exp
    qp = Monomial(1, 0, p)
    if a.q_exp == 0 and a.x_exp == 0 and a.coeff == 1:
        raise BadRelParam("relative parameter 1 makes 1 - a vanish")

    def alpha(n: int, order: int) -> QSeries:
        if n == 0:
            return beta(0, order)
        total = QSeries.zero(order)
        for j in range(n + 1):
            t = poch(a.times_q(p), n + j - 1, order, p) * poch_inverse(qp, n - j, order, p)
            total = total + t.shift((-1) ** (n - j), p * _binom2(n - j)) * beta(j, order)
        return total * one_minus(a.times_q(2 * p * n), order)

    return _Memo(alpha)


# -- the shift lemmas -------------------------------------------------------------


def _gamma_star(pair: BaileyPair, b: Union[Monomial, int]) -> BaileyPair:
    a, p = pair.rel_param, pair.base_exp
    zero_b = not isinstance(b, Monomial) or b.coeff == 0
    bq = None if zero_b else _formal(b, "b").times_q(p)

    def span(r: int, n: int, order: int) -> QSeries:
        # prod_{j=r+1}^{n} (a q^(p j) - b)
        out = QSeries.one(order)
        for j in range(r + 1, n + 1):
            f = a.times_q(p * j).series(order)
            if not zero_b:
                f = f - b.series(order)
            out = out * f
        return out

    def gamma(n: int, order: int) -> QSeries:
        if n < 0:
            return QSeries.zero(order)
        total = QSeries.zero(order)
        for r in range(n + 1):
            t = span(r, n, order) * pair.alpha(r, order)
            if not zero_b:
                t = t * poch(b, r, order, p)
            total = total + t.shift(1, p * (n * (n + 1) // 2 - _binom2(r)))
        if not zero_b:
            total = total * poch_inverse(bq, n, order, p)
        return total

    g = _Memo(lambda n, o: gamma(n, o))

    def alpha(n: int, order: int) -> QSeries:
        return g(n, order) - (g(n - 1, order) if n else QSeries.zero(order))

    def beta(n: int, order: int) -> QSeries:
        s = pair.beta(n, order).shift(1, p * n)
        if not zero_b:
            s = s * poch(b, n, order, p) * poch_inverse(bq, n, order, p)
        return s

    return BaileyPair(a, p, alpha, beta, f"gamma_star(b={b})[{pair.label}]")


def _one_minus_qn(pair: BaileyPair) -> BaileyPair:
    a, p = pair.rel_param, pair.base_exp

    def alpha(n: int, order: int) -> QSeries:
        out = pair.alpha(n, order) - pair.alpha(n, order).shift(1, p * n)
        if n == 0:
            return out
        acc = QSeries.zero(order)
        for r in range(n):
            m = (a ** (n - 1 - r)).times_q(p * (n * n - n - r * r))
            acc = acc + pair.alpha(r, order).shift(m.coeff, m.q_exp, m.x_exp)
        return out + acc * one_minus(a.times_q(2 * p * n), order)

    def beta(n: int, order: int) -> QSeries:
        b = pair.beta(n, order)
        return b - b.shift(1, p * n)

    return BaileyPair(a, p, alpha, beta, f"one_minus_qn[{pair.label}]")


def _index_shift(pair: BaileyPair, check_order: int) -> BaileyPair:
    a, p = pair.rel_param, pair.base_exp
    if not pair.alpha(0, check_order).is_zero() or not pair.beta(0, check_order).is_zero():
        raise PreconditionViolated("index_shift needs alpha_0 = beta_0 = 0")
    new_a = a.times_q(p)

    def alpha(n: int, order: int) -> QSeries:
        first = pair.alpha(n + 1, order) * one_minus(a.times_q(2 * p * (n + 1)), order).invert()
        if n:
            m = a.times_q(2 * p * n)
            first = first - pair.alpha(n, order).shift(m.coeff, m.q_exp, m.x_exp) * one_minus(m, order).invert()
        return first * one_minus(new_a, order).invert()

    def beta(n: int, order: int) -> QSeries:
        return pair.beta(n + 1, order)

    return BaileyPair(new_a, p, alpha, beta, f"index_shift[{pair.label}]")


def _key(pair: BaileyPair) -> BaileyPair:
    a, p = pair.rel_param, pair.base_exp
    qp = Monomial(1, 0, p)
    new_a = a.times_q(p)

    def alpha(n: int, order: int) -> QSeries:
        up = pair.alpha(n + 1, order) * one_minus(qp.times_q(p * n), order)
        up = up * one_minus(a.times_q(2 * p * (n + 1)), order).invert()
        if n == 0:
            here = pair.alpha(0, order)
        else:
            here = pair.alpha(n, order).shift(1, p * n) * one_minus(a.times_q(p * n), order)
            here = here * one_minus(a.times_q(2 * p * n), order).invert()
        return (up + here) * one_minus(new_a, order).invert()

    def beta(n: int, order: int) -> QSeries:
        b = pair.beta(n + 1, order)
        return b - b.shift(1, p * (n + 1))

    return BaileyPair(new_a, p, alpha, beta, f"key[{pair.label}]")


SHIFT_KINDS = ("gamma_star", "one_minus_qn", "index_shift", "key")


def shift_lemma(pair: BaileyPair, kind: str, b: Union[Monomial, int] = 0, check_order: int = 20) -> BaileyPair:
    """Transform a pair by one of the four shift lemmas.

    ``gamma_star`` takes the extra parameter ``b`` (0 allowed);
    ``index_shift`` checks ``alpha_0 = beta_0 = 0`` at ``check_order``;
    ``index_shift`` and ``key`` return pairs relative to ``a q^p``.
    """
    if kind == "gamma_star":
        return _gamma_star(pair, b)
    if kind == "one_minus_qn":
        return _one_minus_qn(pair)
    if kind == "index_shift":
        return _index_shift(pair, check_order)
    if kind == "key":
        return _key(pair)
    raise ValueError(f"unknown shift lemma {kind!r}; expected one of {SHIFT_KINDS}")


# -- the x^2 q identity ------------------------------------------------------------


def x2q_identity(pair: BaileyPair, order: int, x_max: Optional[int] = None) -> Tuple[QSeries, QSeries]:
    """Both sides of the limiting Bailey lemma at ``(a, rho1, rho2) = (x^2 q^p, x q^p, q^p)``.

    ``lhs = (1-x) sum (x q^p)_n (q^p)_n x^n beta_n`` and
    ``rhs = (1-x^2 q^p) sum (q^p)_n / (x^2 q^p)_n x^n alpha_n``, summed for
    ``n <= x_max`` (default ``order``) and truncated to x-degree ``x_max``.
    """
    p = pair.base_exp
    if pair.rel_param != Monomial(1, 2, p):
        raise BadRelParam(f"need a pair relative to x^2 q^{p}, got {pair.rel_param}")
    x_max = order if x_max is None else x_max
    qp, xqp, x2qp = Monomial(1, 0, p), Monomial(1, 1, p), Monomial(1, 2, p)
    lhs = QSeries.zero(order)
    rhs = QSeries.zero(order)
    for n in range(x_max + 1):
        lhs = lhs + (poch(xqp, n, order, p) * poch(qp, n, order, p) * pair.beta(n, order)).shift(1, 0, n)
        rhs = rhs + (poch(qp, n, order, p) * poch_inverse(x2qp, n, order, p) * pair.alpha(n, order)).shift(1, 0, n)
    lhs = (lhs * one_minus(Monomial(1, 1, 0), order)).truncate_x(x_max)
    rhs = (rhs * one_minus(x2qp, order)).truncate_x(x_max)
    return lhs, rhs


# -- family pairs ---------------------------------------------------------------------


X2 = Monomial(1, 2, 0)
HALF = fam.HALF


def _base_pairs(family: str) -> BaileyPair:
    """Starting Slater pair of each family's recipe (relative to ``x^2`` or ``x^2 q^p``)."""
    if family in ("hikami", "fam5"):
        return slater_pair(X2, INF, INF, 1)
    if family == "fam1":
        return slater_pair(Monomial(1, 2, 1), Monomial(-1, 1, 1), INF, 1)
    if family == "fam2":
        # Slater's pair divided by the constant (1 + x q)
        s = slater_pair(Monomial(1, 2, 2), Monomial(-1, 1, 1), Monomial(-1, 1, 2), 2)
        return s.scaled(lambda o: poch_inverse(Monomial(-1, 1, 1), 1, o), "fam2 base")
    if family == "fam3":
        return slater_pair(X2, Monomial(-1, 1, 1), INF, 2)
    return slater_pair(X2, Monomial(1, 1, HALF), Monomial(-1, 1, HALF), 1)


def k1_base_pair(family: str) -> BaileyPair:
    """The single-sum pairs relative to ``x^2 q^p`` behind the ``k = 1`` x-identities."""
    if family in ("zagier", "hikami"):
        return slater_pair(Monomial(1, 2, 1), INF, INF, 1)
    if family in ("fam1", "fam2"):
        return _base_pairs(family)
    if family == "fam3":
        s = slater_pair(Monomial(1, 2, 2), Monomial(-1, 1, 1), INF, 2)
        return s.scaled(lambda o: poch_inverse(Monomial(-1, 1, 1), 1, o), "fam3 base")
    if family == "fam4":
        s = slater_pair(Monomial(1, 2, 1), Monomial(1, 1, HALF), Monomial(-1, 1, HALF), 1)
        return s.scaled(lambda o: one_minus(Monomial(1, 2, 1), o).invert(), "fam4 base")
    raise fam.BadParams(f"no k=1 base pair for {family!r}")


def iterated_family_pair(family: str, k: int, a: int = 0) -> BaileyPair:
    """Run the family's construction recipe and return the raw iterated pair."""
    fam.check_params(family, k, a)
    pair = _base_pairs(family)
    if family in ("fam1", "fam2"):
        for _ in range(k - 1):
            pair = bailey_step(pair)
        return pair
    kk = k - 1 if family == "fam5" else k
    for _ in range(a):
        pair = bailey_step(pair)
    pair = shift_lemma(pair, "key")
    for _ in range(kk - 1 - a):
        pair = bailey_step(pair)
    if family == "fam5":
        pair = bailey_step(pair, Monomial(-1, 0, 1), INF)
    return pair


def build_family_pair(family: str, k: int, a: int = 0, fam3_sign: int = fam.FAM3_SIGN) -> BaileyPair:
    """Family pair with the closed-form alpha and the iterated beta.

    The raw recipe output is kept on ``.iterated`` so that both alphas can
    be compared.
    """
    it = iterated_family_pair(family, k, a)
    label = f"{family}(k={k},a={a})"
    if family == "fam3":
        label += f" sign={'+' if fam3_sign > 0 else '-'}"

    def alpha(n: int, order: int) -> QSeries:
        return fam.closed_alpha(family, k, a, n, order, fam3_sign)

    pair = BaileyPair(it.rel_param, it.base_exp, alpha, it.beta, label)
    pair.iterated = it
    return pair


def closed_beta(family: str, k: int, a: int, n: int, order: int) -> QSeries:
    """The closed multisum for ``beta_n`` of a family pair, by direct nested summation."""
    return multisum_qseries(fam.multisum_spec(family, k, a, "beta").pinned(n), order)


def resolve_fam3_sign(k: int, a: int, n_max: int = 4, order: int = 20) -> int:
    """The sign for which the family-3 closed alpha pairs with the iterated beta.

    Raises if both or neither sign pass.
    """
    passing = [s for s in (1, -1) if verify_pair(build_family_pair("fam3", k, a, s), n_max, order)]
    if len(passing) != 1:
        raise AssertionError(f"fam3 sign not determined: passing signs {passing}")
    return passing[0]


# The distinct Slater specializations behind every recipe, by name.
BASE_PAIR_NAMES = ("x2", "x2q", "fam1", "fam2", "fam3", "fam3_k1", "fam4", "fam4_k1")


def base_pair(name: str) -> BaileyPair:
    if name == "x2":
        return _base_pairs("hikami")
    if name == "x2q":
        return k1_base_pair("zagier")
    if name in ("fam1", "fam2", "fam3", "fam4"):
        return _base_pairs(name)
    if name in ("fam3_k1", "fam4_k1"):
        return k1_base_pair(name[:4])
    raise fam.BadParams(f"unknown base pair {name!r}")
