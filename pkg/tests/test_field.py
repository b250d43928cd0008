import pytest
from hypothesis import given, strategies as st

from reslie.errors import DivisionByZero
from reslie.field import FieldElement, FiniteField, field_arith, frobenius, is_irreducible

from conftest import F2, F3, F4, U


def el(F, v):
    return FieldElement(F, v)


def test_char_two_addition():
    assert field_arith(el(F2, 1), el(F2, 1), "add") == el(F2, 0)


def test_u_squared_in_f4():
    assert field_arith(el(F4, U), el(F4, U), "mul") == el(F4, U ^ 1)
    assert el(F4, U).coeffs == [0, 1]


def test_division_identity_f3():
    assert field_arith(el(F3, 2), el(F3, 2), "div") == el(F3, 1)


@pytest.mark.parametrize("F", [F2, F3, F4])
def test_division_by_zero(F):
    with pytest.raises(DivisionByZero):
        field_arith(el(F, 1), el(F, 0), "div")


@pytest.mark.parametrize("a", [0, 1])
def test_frobenius_trivial_on_prime_field(a):
    assert frobenius(el(F2, a), 5) == el(F2, a)


def test_frobenius_of_u_is_u_plus_one():
    assert frobenius(el(F4, U), 1) == el(F4, 3)


def test_reducible_modulus_rejected():
    assert not is_irreducible((1, 0, 1), 2)  # u^2 + 1 = (u+1)^2
    with pytest.raises(ValueError):
        FiniteField(2, 2, (1, 0, 1))
    with pytest.raises(ValueError):
        FiniteField(4)


def test_field_of_order_nine_and_eight():
    for F in (FiniteField(3, 2), FiniteField(2, 3)):
        elems = list(F.elements())
        assert len(elems) == F.q
        nonzero = [a for a in elems if a]
        # the multiplicative group has order q - 1
        assert all(F.pow(a, F.q - 1) == 1 for a in nonzero)
        assert all(F.mul(a, F.inv(a)) == 1 for a in nonzero)


FIELDS = [F2, F3, F4, FiniteField(3, 2), FiniteField(2, 3), FiniteField(5)]


@st.composite
def field_and_pair(draw):
    F = draw(st.sampled_from(FIELDS))
    return F, draw(st.integers(0, F.q - 1)), draw(st.integers(0, F.q - 1))


@given(field_and_pair(), st.integers(-4, 4))
def test_frobenius_is_an_automorphism(fab, e):
    F, a, b = fab
    x, y = el(F, a), el(F, b)
    assert frobenius(x * y, e) == frobenius(x, e) * frobenius(y, e)
    assert frobenius(x + y, e) == frobenius(x, e) + frobenius(y, e)
    assert frobenius(frobenius(x, 1), -1) == x
    assert frobenius(frobenius(x, -1), 1) == x


@given(field_and_pair())
def test_ring_axioms(fab):
    F, a, b = fab
    x, y = el(F, a), el(F, b)
    assert x + y == y + x and x * y == y * x
    assert (x - y) + y == x
    if b:
        assert (x / y) * y == x


@given(st.sampled_from(FIELDS), st.data())
def test_frobenius_is_p_th_power(F, data):
    a = data.draw(st.integers(0, F.q - 1))
    assert F.frobenius(a, 1) == F.pow(a, F.p)
