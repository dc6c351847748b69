import pytest

from qstrange.bailey import (
    BASE_PAIR_NAMES,
    BadRelParam,
    BaileyPair,
    PreconditionViolated,
    bailey_step,
    base_pair,
    build_family_pair,
    closed_beta,
    invert_pair,
    iterated_family_pair,
    k1_base_pair,
    resolve_fam3_sign,
    shift_lemma,
    slater_pair,
    verify_pair,
    x2q_identity,
)
from qstrange.families import FAM3_SIGN, closed_alpha
from qstrange.qfunctions import INF, BadParams, Monomial, character, one_minus, poch, poch_inverse
from qstrange.series import QSeries

X2Q = Monomial(1, 2, 1)
Q = Monomial(1, 0, 1)
ORDER = 20


def legal(families=("hikami", "fam1", "fam2", "fam3", "fam4", "fam5"), kmax=3):
    out = []
    for f in families:
        for k in range(1, kmax + 1):
            if f in ("fam1", "fam2"):
                out.append((f, k, 0))
            elif f == "fam5":
                out += [(f, k, a) for a in range(k - 1)]
            else:
                out += [(f, k, a) for a in range(k)]
    return out


def test_slater_x2q_limit_matches_closed_forms():
    p = slater_pair(X2Q, INF, INF)
    for n in range(5):
        assert p.beta(n, ORDER) == poch_inverse(Q, n, ORDER)
        # alpha_n = (x^2 q)_n (1 - x^2 q^(2n+1)) (-1)^n x^(2n) q^(n(3n+1)/2) / ((q)_n (1 - x^2 q))
        want = (
            poch(X2Q, n, ORDER) * one_minus(Monomial(1, 2, 2 * n + 1), ORDER)
            * poch_inverse(Q, n, ORDER) * one_minus(X2Q, ORDER).invert()
        ).shift((-1) ** n, n * (3 * n + 1) // 2, 2 * n)
        assert p.alpha(n, ORDER) == want
    assert p.alpha(0, ORDER) == QSeries.one(ORDER) == p.beta(0, ORDER)


def test_slater_with_one_finite_parameter():
    p = slater_pair(X2Q, Monomial(-1, 1, 1), INF)
    for n in range(5):
        assert p.beta(n, ORDER) == poch_inverse(Q, n, ORDER) * poch_inverse(Monomial(-1, 1, 1), n, ORDER)


@pytest.mark.parametrize("name", BASE_PAIR_NAMES)
def test_base_pairs_verify(name):
    assert verify_pair(base_pair(name), 8, 30)


def test_base_pair_unknown():
    with pytest.raises(BadParams):
        base_pair("nope")


def test_corrupted_pair_fails_at_n1():
    good = slater_pair(X2Q, INF, INF)
    bad = BaileyPair(
        good.rel_param, 1, good.alpha,
        lambda n, o: good.beta(n, o) + (QSeries.monomial(1, 1, 0, o) if n == 1 else QSeries.zero(o)),
    )
    rep = verify_pair(bad, 4, 10)
    assert not rep and rep.witness[0] == 1 and rep.witness[1] == 1


def test_n_max_zero_checks_first_terms():
    assert verify_pair(slater_pair(X2Q, INF, INF), 0, 10).n_checked == 0


def test_bailey_step_keeps_pair_property():
    unit = slater_pair(X2Q, INF, INF)
    stepped = bailey_step(unit)
    assert verify_pair(stepped, 6, ORDER)
    assert stepped.alpha(0, ORDER) == unit.alpha(0, ORDER)
    assert stepped.beta(0, ORDER) == unit.beta(0, ORDER)
    assert verify_pair(bailey_step(unit, Monomial(-1, 0, 1), INF), 5, 25)
    assert verify_pair(bailey_step(unit, Monomial(-1, 1, 1), Monomial(1, 1, 1)), 5, 25)


@pytest.mark.parametrize("base", ["x2", "fam3"])
def test_key_is_index_shift_after_one_minus_qn(base):
    pair = base_pair(base)
    key = shift_lemma(pair, "key")
    composed = shift_lemma(shift_lemma(pair, "one_minus_qn"), "index_shift")
    assert key.rel_param == composed.rel_param
    for n in range(6):
        assert key.alpha(n, ORDER) == composed.alpha(n, ORDER)
        assert key.beta(n, ORDER) == composed.beta(n, ORDER)


def test_one_minus_qn_relation_to_gamma_star():
    pair = base_pair("x2")
    om = shift_lemma(pair, "one_minus_qn")
    gs = shift_lemma(pair, "gamma_star", 0)
    assert om.beta(0, ORDER).is_zero()
    for n in range(5):
        assert om.alpha(n, ORDER) == pair.alpha(n, ORDER) - gs.alpha(n, ORDER)
        assert om.beta(n, ORDER) == pair.beta(n, ORDER) - gs.beta(n, ORDER)


@pytest.mark.parametrize("kind,b", [("gamma_star", 0), ("gamma_star", Monomial(-1, 0, 1)), ("one_minus_qn", 0), ("key", 0)])
def test_shift_lemmas_give_pairs(kind, b):
    assert verify_pair(shift_lemma(base_pair("x2q"), kind, b), 5, ORDER)


def test_index_shift_precondition():
    with pytest.raises(PreconditionViolated):
        shift_lemma(base_pair("x2"), "index_shift")
    with pytest.raises(ValueError):
        shift_lemma(base_pair("x2"), "bogus")


def test_key_on_x2_matches_closed_alpha_k1():
    # one key step on the a = x^2 pair is the hikami k = 1 pair
    key = shift_lemma(base_pair("x2"), "key")
    for n in range(5):
        assert key.alpha(n, ORDER) == closed_alpha("hikami", 1, 0, n, ORDER)


def test_invert_pair_recovers_slater_alpha():
    p = slater_pair(X2Q, INF, INF)
    alpha = invert_pair(p.beta, X2Q, 1)
    for n in range(6):
        assert alpha(n, ORDER) == p.alpha(n, ORDER)
    zero = invert_pair(lambda n, o: QSeries.zero(o), X2Q, 1)
    assert all(zero(n, 10).is_zero() for n in range(4))
    with pytest.raises(BadRelParam):
        invert_pair(p.beta, Monomial(1, 0, 0), 1)


def test_invert_pair_round_trip_on_hikami():
    pair = build_family_pair("hikami", 2, 1)
    alpha = invert_pair(pair.beta, pair.rel_param, pair.base_exp)
    for n in range(5):
        assert alpha(n, ORDER) == pair.alpha(n, ORDER)


@pytest.mark.parametrize("family,k,a", legal())
def test_family_pairs(family, k, a):
    pair = build_family_pair(family, k, a)
    assert verify_pair(pair, 4, ORDER)
    for n in range(5):
        assert closed_beta(family, k, a, n, ORDER) == pair.beta(n, ORDER)
        assert pair.iterated.alpha(n, ORDER) == pair.alpha(n, ORDER)


def test_family_pairs_reject_bad_params():
    for args in (("hikami", 2, 2), ("fam5", 2, 1), ("fam3", 0, 0), ("nope", 1, 0)):
        with pytest.raises(BadParams):
            iterated_family_pair(*args)


def test_fam3_sign_resolution():
    assert FAM3_SIGN == -1
    for k, a in ((2, 0), (2, 1), (1, 0)):
        assert resolve_fam3_sign(k, a, 3, 16) == -1
    assert "sign=-" in build_family_pair("fam3", 2, 0).label


def test_zagier_x2q_identity():
    order = 15
    lhs, rhs = x2q_identity(k1_base_pair("zagier"), order)
    want = QSeries.zero(order)
    for n in range(order + 1):
        e = n * (3 * n + 1) // 2
        term = QSeries.monomial((-1) ** n, e, 3 * n, order) * one_minus(Monomial(1, 2, 2 * n + 1), order)
        want = want + term
    assert rhs == want.truncate_x(order)
    assert lhs == rhs


def test_fam1_x2q_identity():
    order = 16
    lhs, rhs = x2q_identity(k1_base_pair("fam1"), order)
    chi = character("fam1_4k", 1)
    want = {0: {0: 1}}
    for n in range(1, 9):
        if chi(n) and n * n % 4 == 0 and n * n // 4 <= order:
            want.setdefault(n * n // 4, {})[n] = 2 * chi(n)
    assert rhs == QSeries(want, order).truncate_x(order)
    assert lhs == rhs


def test_x2q_identity_at_x_zero():
    lhs, rhs = x2q_identity(k1_base_pair("zagier"), 10)
    assert lhs.truncate_x(0) == rhs.truncate_x(0) == QSeries.one(10)


def test_x2q_identity_needs_x2q():
    with pytest.raises(BadRelParam):
        x2q_identity(base_pair("x2"), 10)
