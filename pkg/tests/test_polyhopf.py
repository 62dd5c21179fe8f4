from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polyhopf import (ArityMismatchError, GroupKind, SparsePolynomial, TensorPolynomial, comultiply,
                      comultiply_monomial, counit, tensor)
from scalars import FieldSpec

from conftest import F2, F3, F5, Q


def x_y_z(field):
    return tuple(SparsePolynomial.variable(i, field, 3) for i in range(3))


def polynomials(field, arity=3, max_exp=3):
    exps = st.tuples(*[st.integers(min_value=0, max_value=max_exp)] * arity)
    coeffs = st.integers(min_value=-5, max_value=5)
    return st.dictionaries(exps, coeffs, max_size=4).map(lambda t: SparsePolynomial(field, arity, t))


def _apply_left(t: TensorPolynomial, group: GroupKind) -> dict:
    """(Delta (x) id) on a tensor, as a map over triple exponent vectors."""
    out = {}
    for (s, r), c in t.factor_terms():
        for (a, b), v in comultiply_monomial(s, group, t.field).factor_terms():
            key = a + b + r
            out[key] = t.field.element(out.get(key, 0) + c * v)
    return {k: v for k, v in out.items() if v != 0}


def _apply_right(t: TensorPolynomial, group: GroupKind) -> dict:
    """(id (x) Delta) on a tensor, as a map over triple exponent vectors."""
    out = {}
    for (s, r), c in t.factor_terms():
        for (a, b), v in comultiply_monomial(r, group, t.field).factor_terms():
            key = s + a + b
            out[key] = t.field.element(out.get(key, 0) + c * v)
    return {k: v for k, v in out.items() if v != 0}


class TestSparsePolynomial:
    def test_zero_coefficients_are_dropped(self):
        f = SparsePolynomial(F3, 3, {(1, 0, 0): 3, (0, 1, 0): 1})
        assert dict(f.terms) == {(0, 1, 0): 1}

    def test_ring_operations_mod_p(self):
        x, y, _ = x_y_z(F2)
        assert (x + y) ** 2 == x ** 2 + y ** 2
        assert x - x == SparsePolynomial.zero(F2, 3)
        assert (x * 3).coefficient((1, 0, 0)) == 1

    def test_rational_coefficients(self):
        x, _, z = x_y_z(Q)
        f = z - (x * x).scale(Fraction(1, 2))
        assert f.coefficient((2, 0, 0)) == Fraction(-1, 2)
        assert f.degree() == 2
        assert SparsePolynomial.zero(Q, 3).degree() == -1

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatchError):
            SparsePolynomial.variable(0, F3, 1) + SparsePolynomial.variable(0, F3, 3)
        with pytest.raises(ArityMismatchError):
            SparsePolynomial(F3, 1, {(1, 2): 1})

    def test_substitute_frobenius(self):
        x, y, z = x_y_z(F3)
        f = x * y + z
        assert f.substitute_frobenius(3) == x ** 3 * y ** 3 + z ** 3

    def test_str_graded_order(self):
        x, y, z = x_y_z(Q)
        assert str(z + x * y.scale(2) + 1 + x) == "1 + x + z + 2*x*y"
        assert str(SparsePolynomial.zero(Q, 3)) == "0"


class TestComultiply:
    def test_generators(self):
        z = SparsePolynomial.variable(2, F5, 3)
        delta = comultiply(z, GroupKind.H1)
        assert sorted(delta.factor_terms()) == [
            (((0, 0, 0), (0, 0, 1)), 1),
            (((0, 0, 1), (0, 0, 0)), 1),
            (((1, 0, 0), (0, 1, 0)), 1),
        ]
        assert str(delta) == "1(x)z + z(x)1 + x(x)y"

    def test_ga_binomial_expansion(self):
        x = SparsePolynomial.variable(0, Q, 1)
        delta = comultiply(x ** 3, GroupKind.GA)
        assert dict(delta.terms) == {(3, 0): 1, (2, 1): 3, (1, 2): 3, (0, 3): 1}

    def test_frobenius_is_primitive_in_char_p(self):
        x = SparsePolynomial.variable(0, F3, 1)
        assert dict(comultiply(x ** 9, GroupKind.GA).terms) == {(9, 0): 1, (0, 9): 1}

    def test_wrong_group(self):
        with pytest.raises(ArityMismatchError):
            comultiply(SparsePolynomial.variable(0, Q, 1), GroupKind.H1)

    @given(polynomials(Q), polynomials(Q))
    def test_algebra_map(self, f, g):
        assert comultiply(f * g, GroupKind.H1) == comultiply(f, GroupKind.H1) * comultiply(g, GroupKind.H1)

    @pytest.mark.parametrize("field", [F2, F3, Q], ids=str)
    @given(data=st.data())
    def test_coassociative(self, field, data):
        f = data.draw(polynomials(field, max_exp=2))
        delta = comultiply(f, GroupKind.H1)
        assert _apply_left(delta, GroupKind.H1) == _apply_right(delta, GroupKind.H1)

    @given(polynomials(F5))
    def test_counit_laws(self, f):
        delta = comultiply(f, GroupKind.H1)
        assert delta.counit_left() == f
        assert delta.counit_right() == f

    def test_counit_is_constant_term(self):
        x, _, _ = x_y_z(F5)
        assert counit(x + 4) == 4


class TestTensor:
    def test_tensor_of_monomials(self):
        x = SparsePolynomial.variable(0, F3, 1)
        t = tensor(x + 1, x.scale(2))
        assert dict(t.terms) == {(1, 1): 2, (0, 1): 2}
        assert isinstance(t, TensorPolynomial)

    def test_tensor_mismatch(self):
        with pytest.raises(ArityMismatchError):
            tensor(SparsePolynomial.variable(0, F3, 1), SparsePolynomial.variable(0, FieldSpec.prime(5), 1))


def test_group_kind_parse():
    assert GroupKind.parse("h1") is GroupKind.H1
    assert GroupKind.parse("Ga").arity == 1
    with pytest.raises(ValueError):
        GroupKind.parse("SL2")
