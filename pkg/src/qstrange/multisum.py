"""Declarative multisums over a chain of Gaussian binomials.

Every multisum in the catalog has the shape::

    scale * sum_{n_1..n_d} prod_i w_i(n_i) * prod_{i<d} [n_{i+1} + delta_i over n_i]_{q^base}

where each weight ``w_i`` depends on its own index only.  That structure lets
the sum be evaluated by nesting (one pass per level) instead of enumerating
the whole index simplex.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .qfunctions import Monomial, poch, poch_inverse, qbinom
from .series import Coeff, QSeries


@dataclass(frozen=True)
class PochFactor:
    """``(arg; q^base)_{mult*n + offset}`` raised to ``power`` (+1 or -1)."""

    arg: Monomial
    base: int = 1
    mult: int = 1
    offset: int = 0
    power: int = 1

    def length(self, n: int) -> int:
        return self.mult * n + self.offset


@dataclass(frozen=True)
class VarWeight:
    """Weight of one summation index: ``q^(quad n^2 + lin n) x^(x_lin n + [n>0] x_pos_shift)`` times factors."""

    quad: Fraction = Fraction(0)
    lin: Fraction = Fraction(0)
    x_lin: int = 0
    x_pos_shift: int = 0
    factors: Tuple[PochFactor, ...] = ()

    def q_exp(self, n: int) -> int:
        e = self.quad * n * n + self.lin * n
        if isinstance(e, Fraction):
            if e.denominator != 1:
                raise ValueError(f"non-integral q exponent {e} at n={n}")
            e = e.numerator
        return e

    def x_exp(self, n: int) -> int:
        return self.x_lin * n + (self.x_pos_shift if n > 0 else 0)


@dataclass(frozen=True)
class MultisumSpec:
    """A chained multisum; ``outer`` pins the last index or leaves it free (``None``)."""

    weights: Tuple[VarWeight, ...]
    deltas: Tuple[int, ...] = ()
    base: int = 1
    scale: Coeff = 1
    outer: Optional[int] = None
    label: str = ""

    def __post_init__(self):
        if len(self.deltas) != max(len(self.weights) - 1, 0):
            raise ValueError("need one delta per adjacent index pair")

    @property
    def depth(self) -> int:
        return len(self.weights)

    def pinned(self, n: int) -> "MultisumSpec":
        return replace(self, outer=n)

    def scaled_q(self, s: int) -> "MultisumSpec":
        """The same multisum with ``q -> q^s``."""

        def sw(w: VarWeight) -> VarWeight:
            fs = tuple(
                replace(f, arg=Monomial(f.arg.coeff, f.arg.x_exp, f.arg.q_exp * s), base=f.base * s) for f in w.factors
            )
            return replace(w, quad=w.quad * s, lin=w.lin * s, factors=fs)

        return replace(self, weights=tuple(sw(w) for w in self.weights), base=self.base * s)


def evaluate_chain(
    spec: MultisumSpec,
    ranges: Sequence[int],
    weight: Callable[[int, VarWeight, int], object],
    binom: Callable[[int, int], object],
    zero: object,
    one: object,
):
    """Nested evaluation over any ring.

    ``ranges[i]`` bounds index ``i`` (inclusive); the last range is ignored
    when ``spec.outer`` is set.  ``weight`` may return ``None`` for a term
    known to vanish.
    """
    d = spec.depth
    if d == 0:
        return one * spec.scale
    prev: Dict[int, object] = {}
    for i in range(d):
        w = spec.weights[i]
        last = i == d - 1
        if last and spec.outer is not None:
            idx = [spec.outer]
        else:
            idx = range(ranges[i] + 1)
        cur: Dict[int, object] = {}
        for m in idx:
            if i == 0:
                inner = one
            else:
                top = m + spec.deltas[i - 1]
                inner = None
                for n, s in prev.items():
                    if n > top:
                        continue
                    term = binom(top, n) * s
                    inner = term if inner is None else inner + term
                if inner is None:
                    continue
            wm = weight(i, w, m)
            if wm is None:
                continue
            cur[m] = wm * inner
        prev = cur
    total = zero
    for v in prev.values():
        total = total + v
    return total * spec.scale


def _max_index(w: VarWeight, order: int) -> Optional[int]:
    """Largest ``n`` with ``quad n^2 + lin n <= order`` (``None`` if unbounded)."""
    if w.quad == 0 and w.lin == 0:
        return None
    n = 0
    if w.quad > 0:
        n = max(isqrt(int(order / w.quad)) - 1, 0)
        while n > 0 and w.q_exp(n) > order:
            n -= 1
    while w.q_exp(n + 1) <= order:
        n += 1
    return n


def formal_ranges(spec: MultisumSpec, order: int) -> List[int]:
    d = spec.depth
    ranges = [0] * d
    top = spec.outer if spec.outer is not None else _max_index(spec.weights[-1], order)
    if top is None:
        raise ValueError(f"free outer index of {spec.label or 'multisum'} has no q-growth; sum diverges")
    ranges[d - 1] = top
    for i in range(d - 2, -1, -1):
        bound = ranges[i + 1] + spec.deltas[i]
        own = _max_index(spec.weights[i], order)
        ranges[i] = bound if own is None else min(bound, own)
    return ranges


def weight_qseries(w: VarWeight, n: int, order: int) -> Optional[QSeries]:
    e = w.q_exp(n)
    if e > order:
        return None
    o = order - e
    s = QSeries.one(o)
    for f in w.factors:
        length = f.length(n)
        if f.power == 1:
            s = s * poch(f.arg, length, order, f.base).truncate(o)
        elif f.power == -1:
            s = s * poch_inverse(f.arg, length, order, f.base).truncate(o)
        else:
            raise ValueError("factor powers must be +1 or -1")
    return s.shift(1, e, w.x_exp(n), extend=True)


def multisum_qseries(spec: MultisumSpec, order: int) -> QSeries:
    """Exact truncated expansion of ``spec`` in ``Q[x][[q]]``."""
    ranges = formal_ranges(spec, order) if spec.depth else []
    return evaluate_chain(
        spec,
        ranges,
        lambda i, w, n: weight_qseries(w, n, order),
        lambda top, n: qbinom(top, n, order, spec.base),
        QSeries.zero(order),
        QSeries.one(order),
    )
