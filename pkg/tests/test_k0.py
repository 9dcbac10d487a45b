import pytest

from hyperfin import k0
from hyperfin.errors import HyperfinError, ZeroVector


def test_type_lookup():
    assert k0.get_type((2, 2)) is k0.TYPE_22
    assert k0.get_type([1, 4]) is k0.TYPE_14
    with pytest.raises(HyperfinError):
        k0.get_type((3, 3))


def test_tables_match_known_values():
    assert k0.TYPE_22.h == (1, 1) and k0.TYPE_22.g == 2 and k0.TYPE_22.r == 1
    assert k0.TYPE_14.h == (2, 1) and k0.TYPE_14.g == 1 and k0.TYPE_14.r == 2
    assert k0.TYPE_41.h == (1, 2) and k0.TYPE_41.g == 1 and k0.TYPE_41.r == 2
    for t in k0.TYPES.values():
        assert k0.quadratic_form(t, t.h) == 0
        assert k0.defect(t, t.h) == 0


def test_euler_form_22():
    t = k0.TYPE_22
    # projectives (1,0) and (2,1): hom dims 1, ext 0
    assert k0.euler_form(t, (1, 0), (1, 0)) == 1
    assert k0.euler_form(t, (2, 1), (2, 1)) == 1
    # two arrows: ext(simple injective, simple projective) = 2
    assert k0.euler_form(t, (0, 1), (1, 0)) == -2


def test_defect_values():
    t = k0.TYPE_22
    assert k0.defect(t, (5, 4)) == -1
    assert k0.defect(t, (4, 5)) == 1
    assert k0.defect(t, (3, 3)) == 0


def test_coxeter_agrees_with_matrix():
    for t in k0.TYPES.values():
        for x in [(1, 0), (0, 1), (7, -3), (30, 30), (-5, 12)]:
            assert k0.coxeter(t, x) == k0.coxeter_matrix_apply(t, x)
            assert k0.coxeter_inv(t, k0.coxeter(t, x)) == x
            assert k0.defect(t, k0.coxeter(t, x)) == k0.defect(t, x)


def test_coxeter_known_value():
    assert k0.coxeter(k0.TYPE_22, (1, 0)) == (-1, -2)


def test_classify():
    t = k0.TYPE_22
    assert k0.classify_k0(t, (3, 2)) is k0.K0Class.PREPROJECTIVE
    assert k0.classify_k0(t, (2, 3)) is k0.K0Class.POSTINJECTIVE
    assert k0.classify_k0(t, (4, 4)) is k0.K0Class.REGULAR
    with pytest.raises(ZeroVector):
        k0.classify_k0(t, (0, 0))
