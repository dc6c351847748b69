from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstrange.qfunctions import (
    CHARACTER_KINDS,
    INF,
    BadParams,
    BadSpecialization,
    DivergentProduct,
    IntegralityViolation,
    Monomial,
    PartialTheta,
    PeriodicFunction,
    character,
    lambert_sum,
    partial_theta_qseries,
    poch,
    qbinom,
    qbinom_coeffs,
    triple_product,
)
from qstrange.series import QSeries, XPoly

Q = Monomial(1, 0, 1)


def test_poch_examples():
    assert poch(Q, 3, 10).to_list() == [1, -1, -1, 0, 1, 1, -1, 0, 0, 0, 0]
    assert poch(Monomial(7, 3, 2), 0, 5) == QSeries.one(5)
    p = poch(Monomial(-1, 1, 1), 2, 5)
    assert p == QSeries({0: 1, 1: {1: 1}, 2: {1: 1}, 3: {2: 1}}, 5)


def test_infinite_poch_needs_positive_q_exponent():
    with pytest.raises(DivergentProduct):
        poch(Monomial(-1, 0, 0), INF, 5)


def test_euler_pentagonal():
    order = 40
    lhs = poch(Q, INF, order)
    pent = {}
    for n in range(-6, 7):
        e = n * (3 * n - 1) // 2
        if e <= order:
            pent[e] = (-1) ** abs(n)
    assert lhs == QSeries(pent, order)


def test_qbinom_examples():
    assert qbinom(4, 2, 10).to_list()[:5] == [1, 1, 2, 1, 1]
    assert qbinom(5, 0, 6) == QSeries.one(6)
    assert qbinom(2, 3, 6).is_zero()
    assert qbinom(2, 1, 6, base=2).to_list() == [1, 0, 1, 0, 0, 0, 0]


@pytest.mark.parametrize("n", range(13))
def test_qbinom_symmetry_and_pascal(n):
    for k in range(n + 1):
        assert qbinom_coeffs(n, k) == qbinom_coeffs(n, n - k)
        if 0 < k < n:
            order = n * n
            lhs = qbinom(n, k, order)
            r1 = qbinom(n - 1, k - 1, order) + qbinom(n - 1, k, order).shift(1, k)
            r2 = qbinom(n - 1, k - 1, order).shift(1, n - k) + qbinom(n - 1, k, order)
            assert lhs == r1 == r2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.integers(-2, 2), st.integers(0, 2), st.integers(0, 3))
def test_poch_functional_equation(m, n, c, xe, qe):
    if c == 0:
        c = 1
    a = Monomial(c, xe, qe)
    order = 20
    assert poch(a, m + n, order) == poch(a, m, order) * poch(a.times_q(m), n, order)


def test_character_examples():
    z = character("zagier_12")
    assert [z(n) for n in range(12)] == [0, 1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1]
    f1 = character("fam1_4k", 1)
    assert f1.period == 4 and [f1(n) for n in range(4)] == [1, 0, -1, 0]
    h = character("hikami_8k4", 1, 0)
    assert h.period == 12 and {n: h(n) for n in range(12) if h(n)} == {1: 1, 11: 1, 5: -1, 7: -1}
    with pytest.raises(BadParams):
        character("hikami_8k4", 2, 2)
    with pytest.raises(BadParams):
        character("fam5_4k", 3, 2)


def _all_characters():
    out = [character("zagier_12"), character("torus_2st", s=2, t=3), character("torus_2st", s=3, t=5)]
    for k in range(1, 5):
        out.append(character("fam1_4k", k))
        out.append(character("fam2_8k", k))
        for a in range(k):
            out += [character(kind, k, a) for kind in ("hikami_8k4", "fam3_8k", "fam4_4k2")]
            if a < k - 1:
                out.append(character("fam5_4k", k, a))
    return out


def test_characters_are_even():
    assert len(CHARACTER_KINDS) == 8
    for chi in _all_characters():
        assert chi.is_even(), chi


def test_periodic_function_residues():
    f = PeriodicFunction(5, {1: 1, 4: 1})
    assert f(6) == 1 and f(-1) == 1 and f(0) == 0


def test_zagier_partial_theta():
    pt = PartialTheta(character("zagier_12"), 1, 24, 1, Fraction(-1, 2))
    s = partial_theta_qseries(pt, 5)
    # (12/n) is -1 at 5 and 7, so those terms enter with a plus sign
    assert s == QSeries({0: Fraction(-1, 2), 1: Fraction(5, 2), 2: Fraction(7, 2), 5: Fraction(-11, 2)}, 5)


def test_partial_theta_zero_character():
    pt = PartialTheta(PeriodicFunction(3, {}), 0, 1, 0)
    assert partial_theta_qseries(pt, 8).is_zero()


def test_fam4_weight0_partial_theta():
    pt = PartialTheta(character("fam4_4k2", 1, 0), 0, 8, 1)
    assert partial_theta_qseries(pt, 6).to_list() == [1, 1, 0, 1, 0, 0, 1]


def test_partial_theta_integrality():
    with pytest.raises(IntegralityViolation):
        partial_theta_qseries(PartialTheta(character("zagier_12"), 1, 7, 1), 4)


def test_partial_theta_x_rule():
    pt = PartialTheta(character("fam1_4k", 1), 0, 4, 0)
    s = partial_theta_qseries(pt, 4, x_rule=(0, 1))
    assert s == QSeries({0: 1, 1: {2: -1}, 4: {4: 1}}, 4)


def test_catalog_partial_thetas_are_integral():
    from qstrange.families import partial_theta_side

    for k in range(1, 5):
        for fam in ("hikami", "fam1", "fam2", "fam3", "fam4", "fam5"):
            for a in range(k):
                try:
                    side = partial_theta_side(fam, k, a)
                except BadParams:
                    continue
                side.pt.check_integrality()


def _lambert_direct(c, d, sign, order):
    total = QSeries.zero(order)
    for j in range(1, order + 1):
        if c * j > order:
            break
        total = total + QSeries({c * j: 1}, order) * QSeries({0: 1, d * j: -sign}, order).invert()
    return total


def test_lambert_examples():
    assert lambert_sum(1, 1, 1, 4).to_list() == [0, 1, 2, 2, 3]
    assert lambert_sum(1, 2, -1, 3).to_list() == [0, 1, 1, 0]
    assert lambert_sum(1, 1, 1, 0).is_zero()


@pytest.mark.parametrize("c,d,sign", [(1, 1, 1), (1, 2, -1), (2, 1, 1), (3, 2, -1), (1, 3, 1)])
def test_lambert_matches_direct_expansion(c, d, sign):
    assert lambert_sum(c, d, sign, 25) == _lambert_direct(c, d, sign, 25)


def test_triple_product_examples():
    for zc, ze in ((-1, 0), (-1, 1), (1, 0), (1, -1)):
        lhs, rhs = triple_product(zc, ze, 30)
        assert lhs == rhs
    lhs, rhs = triple_product(-1, 0, 0)
    assert lhs.coefficient(0) == XPoly(1) and rhs.coefficient(0) == XPoly(1)
    with pytest.raises(BadSpecialization):
        triple_product(1, 3, 10)


def test_triple_product_base2():
    lhs, rhs = triple_product(-1, 1, 30, base=2)
    assert lhs == rhs
