import pytest

from qstrange.families import (
    FAMILIES,
    check_params,
    family_base,
    multisum_spec,
    partial_theta_side,
    root_allowed,
    strange_validity,
)
from qstrange.qfunctions import BadParams


def test_parameter_ranges():
    check_params("fam1", 3, 7)  # a is ignored
    check_params("fam5", 3, 1)
    for args in (("fam5", 2, 1), ("hikami", 2, 2), ("fam3", 1, -1), ("bogus", 1, 0), ("fam4", 0, 0)):
        with pytest.raises(BadParams):
            check_params(*args)


def test_bases():
    assert [family_base(f) for f in FAMILIES] == [1, 1, 2, 2, 1, 1]


def test_spec_shapes():
    for f in FAMILIES:
        for k in range(1, 4):
            for a in range(k):
                try:
                    s = multisum_spec(f, k, a)
                except BadParams:
                    continue
                assert s.depth == k and len(s.deltas) == k - 1
                assert s.base == family_base(f)
    with pytest.raises(ValueError):
        multisum_spec("hikami", 1, 0, mode="other")


def test_strange_mode_drops_x():
    s = multisum_spec("fam4", 2, 0, "strange")
    for w in s.weights:
        assert w.x_lin == 0 and all(f.arg.x_exp == 0 for f in w.factors)


def test_prefactors():
    assert partial_theta_side("hikami", 1, 0).pt.prefactor == -0.5
    assert partial_theta_side("fam1", 1).pt.prefactor == -2
    assert partial_theta_side("fam1", 2).pt.prefactor == -1
    assert partial_theta_side("fam4", 2, 0).pt.prefactor == -1
    assert partial_theta_side("fam4", 2, 1).pt.prefactor == -0.5
    assert partial_theta_side("fam3", 2, 1, weight=0).pt.prefactor == 1


def test_validity_domains():
    assert strange_validity("hikami", 3) == "all_roots"
    assert strange_validity("fam4", 1) == "even_roots"
    assert strange_validity("fam3", 1) == "roots_not_2_mod_4"
    assert strange_validity("fam3", 2) == "odd_roots"
    assert [M for M in range(1, 9) if root_allowed("roots_not_2_mod_4", M)] == [1, 3, 4, 5, 7, 8]
    assert not root_allowed("formal", 1)
