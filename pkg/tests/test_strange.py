import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstrange.cyclotomic import CycNum, TSeries
from qstrange.qfunctions import BadParams, PartialTheta, PeriodicFunction, character
from qstrange.strange import (
    QUANTUM_IDS,
    STRANGE_NAMES,
    SingularExpansion,
    TwistedPeriodic,
    bernoulli_numbers,
    bernoulli_poly,
    lvalue,
    quantum_check,
    rhs_asymptotic,
    strange_check,
    strange_spec,
)


def rational_psi(chi: PeriodicFunction) -> TwistedPeriodic:
    return TwistedPeriodic(1, chi.period, {n: CycNum.rational(1, chi(n)) for n in range(chi.period) if chi(n)})


CHI12 = character("zagier_12")
CHI4 = character("fam1_4k", 1)


def test_bernoulli():
    assert bernoulli_numbers(4) == (1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30))
    assert bernoulli_poly(0) == (1,)
    assert bernoulli_poly(1) == (Fraction(-1, 2), 1)
    assert bernoulli_poly(2) == (Fraction(1, 6), -1, 1)


@pytest.mark.parametrize("m", range(1, 8))
def test_bernoulli_poly_difference(m):
    # B_m(x+1) - B_m(x) = m x^(m-1), checked at a few rationals
    B = bernoulli_poly(m)
    ev = lambda x: sum(c * x**i for i, c in enumerate(B))  # noqa: E731
    for x in (Fraction(0), Fraction(1, 3), Fraction(-5, 7)):
        assert ev(x + 1) - ev(x) == m * x ** (m - 1)


def test_known_lvalues():
    assert lvalue(rational_psi(CHI12), 1) == -2
    assert lvalue(rational_psi(CHI4), 1) == Fraction(-1, 2)
    assert lvalue(TwistedPeriodic(3, 5, {}), 4).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 6), st.lists(st.integers(-3, 3), min_size=2, max_size=6))
def test_lvalue_independent_of_period_representation(reps, m, raw):
    # a mean-zero periodic function and the same function read with a multiple of its period
    vals = raw + [-sum(raw)]
    P = len(vals)
    base = TwistedPeriodic(1, P, {n: CycNum.rational(1, v) for n, v in enumerate(vals)})
    longer = TwistedPeriodic(1, P * reps, {n: base(n) for n in range(P * reps)})
    assert lvalue(base, m) == lvalue(longer, m)


@pytest.mark.parametrize("chi", [CHI12, CHI4], ids=["chi12", "chi4"])
@pytest.mark.parametrize("m", range(6))
def test_lvalues_are_taylor_coefficients(chi, m):
    # sum chi(n) n^m e^(-n t) is analytic at 0 for mean-zero chi with coefficients L(-m-k, chi)(-t)^k/k!
    t = 0.05
    direct = math.fsum(chi(n) * n**m * math.exp(-n * t) for n in range(1, 3000))
    psi = rational_psi(chi)
    series = math.fsum(float(lvalue(psi, m + k).coords[0]) * (-t) ** k / math.factorial(k) for k in range(30))
    assert abs(direct - series) < 1e-6


@pytest.mark.parametrize("chi,D", [(CHI12, 24), (CHI4, 4)], ids=["chi12", "chi4"])
def test_partial_theta_asymptotics_numerically(chi, D):
    # the weight-1 partial theta at q = e^(-t): truncation error shrinks and stays within twice the next term
    t = 0.05
    s = t / D
    direct = math.fsum(n * chi(n) * math.exp(-n * n * s) for n in range(1, 4000))
    psi = rational_psi(chi)
    acc, last = 0.0, None
    for j in range(6):
        acc += float(lvalue(psi, 2 * j + 1).coords[0]) * (-s) ** j / math.factorial(j)
        nxt = abs(float(lvalue(psi, 2 * j + 3).coords[0]) * s ** (j + 1) / math.factorial(j + 1))
        err = abs(direct - acc)
        assert err <= 2 * nxt
        assert last is None or err < last
        last = err


def test_singular_expansion():
    pt = PartialTheta(PeriodicFunction(4, {1: 1}), 1, 1, 0)
    with pytest.raises(SingularExpansion):
        rhs_asymptotic(pt, 1, 2)
    with pytest.raises(ValueError):
        rhs_asymptotic(PartialTheta(CHI12, 2, 24, 1), 1, 2)


@pytest.mark.parametrize("M", range(1, 7))
def test_twists_are_even_and_periodic(M):
    for name in ("zagier", "fam1", "fam3"):
        psi = TwistedPeriodic.from_partial_theta(strange_spec(name).rhs, M)
        assert psi.is_symmetric()
        assert psi.is_periodic_over(3)


def test_rhs_known_values():
    assert rhs_asymptotic(strange_spec("zagier").rhs, 1, 0).coeffs[0] == 1
    assert rhs_asymptotic(strange_spec("fam1").rhs, 1, 0).coeffs[0] == 1


def test_zagier_common_values():
    r1 = strange_check("zagier", M=1, K=2)
    assert r1.ok and [c.coords[0] for c in r1.lhs] == [1, 1, Fraction(3, 2)]
    r2 = strange_check("zagier", M=2, K=2)
    assert r2.ok and [c.coords[0] for c in r2.lhs] == [3, 11, Fraction(133, 2)]
    assert strange_check("fam1", 1, M=1, K=0).lhs[0] == 1


@pytest.mark.parametrize("M", [1, 2, 3])
def test_rhs_stable_in_t_order(M):
    pt = strange_spec("zagier").rhs
    low, high = rhs_asymptotic(pt, M, 2), rhs_asymptotic(pt, M, 4)
    assert high.truncate(2) == low


@pytest.mark.parametrize("name,k,a,M", [
    ("hikami", 2, 1, 3), ("fam2", 2, 0, 3), ("fam3", 2, 0, 1), ("fam4", 2, 1, 2), ("fam5", 3, 1, 3),
])
def test_strange_checks(name, k, a, M):
    rep = strange_check(name, k, a, M, K=2)
    assert rep.status == "pass", rep


def test_root_rejections():
    assert strange_check("fam1", 1, M=2).status == "root_rejected"
    assert strange_check("fam4", 1, M=3).status == "root_rejected"
    assert strange_check("fam3", 2, 0, M=4).status == "root_rejected"
    assert strange_check("fam3", 1, M=6).status == "root_rejected"
    assert quantum_check("fam1_vs_fam2", 1, M=2).status == "root_rejected"


def test_fam3_k1_sweep():
    # the validity set for fam3 at k = 1 is an open point; record what the checker reports
    outcome = {M: strange_check("fam3", 1, 0, M, K=2).status for M in (1, 3, 4, 5, 8)}
    assert outcome == {1: "pass", 3: "pass", 4: "pass", 5: "pass", 8: "pass"}


def test_failure_has_witness():
    rep = strange_check("zagier", M=1, K=1)
    bad = type(rep)(rep.name, rep.params, 1, 1, "fail", rep.lhs, [c + 1 for c in rep.rhs], 0)
    w = bad.witness()
    assert w["t_degree"] == 0 and w["lhs"]["coords"] == ["1"] and w["rhs"]["coords"] == ["2"]
    assert rep.witness() is None


def test_unknown_names():
    with pytest.raises(BadParams):
        strange_spec("nope")
    with pytest.raises(BadParams):
        strange_spec("fam5", 2, 1)
    with pytest.raises(BadParams):
        quantum_check("nope", 1, M=1)
    assert "zagier" in STRANGE_NAMES and len(QUANTUM_IDS) == 3


def test_quantum_pinned_value():
    rep = quantum_check("fam1_vs_fam2", 1, M=3)
    assert rep.ok
    z = CycNum.zeta(3)
    assert rep.lhs[0] == 3 - 2 * z


@pytest.mark.parametrize("qid", QUANTUM_IDS)
@pytest.mark.parametrize("M", [1, 3])
def test_quantum_identities(qid, M):
    assert quantum_check(qid, 1, 0, M).ok


def test_tseries_results_are_tseries():
    assert isinstance(rhs_asymptotic(strange_spec("hikami", 2, 0).rhs, 2, 1), TSeries)
