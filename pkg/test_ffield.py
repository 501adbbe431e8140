import pytest

from errors import DivisionByZero, FieldMismatch, FieldOverflow, NonPrime, NotDivisor
from ffield import (
    FieldSpec, field_of_order, inv, make_field, multiplicative_subgroup, primitive_root,
)


@pytest.mark.parametrize("p,alpha,modulus", [
    (2, 2, (1, 1, 1)),
    (3, 2, (1, 0, 1)),
    (2, 3, (1, 0, 1, 1)),
    (7, 1, None),
])
def test_lex_least_modulus(p, alpha, modulus):
    assert make_field(p, alpha).modulus == modulus


@pytest.mark.parametrize("q", [4, 8, 9, 25, 27])
def test_field_axioms_small(q):
    F = field_of_order(q)
    elems = F.elements()
    assert [e.index for e in elems] == list(range(q))
    for a in elems:
        assert (a + F.zero).index == a.index
        assert (a * F.one).index == a.index
        assert (a + (-a)).index == 0
        assert (a ** q).index == a.index
        if a:
            assert (a * inv(a)).index == 1
            assert (a / a).index == 1
    for a in elems[:5]:
        for b in elems[:5]:
            for c in elems[:5]:
                assert (a * (b + c)).index == (a * b + a * c).index


def test_primitive_roots():
    assert primitive_root(make_field(7)).index == 3
    assert primitive_root(make_field(17)).index == 3
    assert primitive_root(field_of_order(4)).index == 2
    assert primitive_root(field_of_order(9)).index == 4
    g = primitive_root(field_of_order(25))
    assert len({(g ** i).index for i in range(24)}) == 24


def test_frobenius_fixes_prime_field():
    F = make_field(3, 2)
    fixed = [e.index for e in F.elements() if e.frobenius().index == e.index]
    assert fixed == [0, 1, 2]


def test_index_maps_are_permutations():
    F = field_of_order(9)
    g = primitive_root(F)
    assert sorted(F.mul_map(g)) == list(range(9))
    assert sorted(F.add_map(5)) == list(range(9))
    assert [e.index for e in F.additive_basis()] == [1, 3]


def test_multiplicative_subgroup():
    F = make_field(13)
    assert [e.index for e in multiplicative_subgroup(F, 4)] == [1, 5, 8, 12]
    assert len(multiplicative_subgroup(field_of_order(16), 5)) == 5
    with pytest.raises(NotDivisor):
        multiplicative_subgroup(F, 5)


def test_errors():
    with pytest.raises(NonPrime):
        make_field(4)
    with pytest.raises(NonPrime):
        field_of_order(12)
    with pytest.raises(FieldOverflow):
        make_field(2, 64)
    with pytest.raises(DivisionByZero):
        make_field(5).zero.inverse()
    with pytest.raises(FieldMismatch):
        make_field(5).one + make_field(7).one
    with pytest.raises(FieldMismatch):
        FieldSpec.from_dict({"p": 2, "alpha": 2, "modulus": [1, 0, 1]})


def test_spec_json_round_trip():
    F = make_field(2, 3)
    assert FieldSpec.from_dict(F.to_dict()) == F


def test_integers_are_prime_field_scalars():
    F = field_of_order(9)
    x = F.from_index(3)
    assert (x * 3).index == 0
    assert (x * 2).index == (-x).index
    assert (x + 1).index == 4
    assert F.element(4).index == F.one.index
    assert F.element([1, 1]).index == 4
    assert F.from_index(4).coeffs == (1, 1)
