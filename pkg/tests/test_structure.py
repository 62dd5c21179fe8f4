import random
from fractions import Fraction

import pytest

from exactlinalg import DimensionMismatchError, ExactMatrix, NotNilpotentError, PolyMatrix
from generators import (defining_representation, random_lie_layers, tensor_square_layers,
                        tensor_square_triple)
from polyhopf import GroupKind, SparsePolynomial
from repcore import (extract_layers, from_polynomial_matrix, to_polynomial_matrix, verify_comodule_axioms,
                     verify_fundamental_relation, verify_fundamental_relation_h1)
from runtime.config import RuntimeConfig
from scalars import ContractViolation, InvalidFieldError
from structure import (HypothesisViolation, LieLayerData, construct_ga_char0, construct_ga_charp,
                       construct_h1_char0, construct_h1_charp, exponential_form_h1, weyl_identity_check)

from conftest import F2, F3, F5, F7, F19, Q, ga_example_matrix, rational_heisenberg_triple, sparse, unit


def heisenberg_triple(field):
    return unit(3, 1, 2, field), unit(3, 2, 3, field), unit(3, 1, 3, field)


def shift(d, field):
    return ExactMatrix.from_entries(d, field, {(i, i + 1): 1 for i in range(d - 1)})


def square_zero_exp(x: ExactMatrix) -> PolyMatrix:
    """I + xX for X with X^2 = 0."""
    t = SparsePolynomial.variable(0, x.field, 1)
    return PolyMatrix.identity(x.dim, x.field, 1) + PolyMatrix.combination([(t, x)], x.dim, x.field, 1)


def seeded_layer_data(count=100):
    """Random valid Lie-layer data over p in {7, 11}, d in {2, 3}, one or two layers."""
    rng = random.Random(5)
    for _ in range(count):
        yield random_lie_layers(rng, rng.choice([7, 11]), rng.choice([2, 3]), rng.choice([1, 2]))


def squared_layer_data(count=8):
    """Tensor squares of random 3-dimensional data over F_19: d = 9, X^2 and Y^2 generally nonzero."""
    rng = random.Random(13)
    for _ in range(count):
        yield tensor_square_layers(random_lie_layers(rng, 19, 3, 1))


def squared_heisenberg(field):
    return tensor_square_triple(*heisenberg_triple(field))


class TestLieLayerData:
    def test_valid_triple(self):
        data = LieLayerData(7, 3, [heisenberg_triple(F7)])
        assert data.field == F7 and len(data.triples) == 1

    def test_bracket_must_equal_z(self):
        x, y, _ = heisenberg_triple(F7)
        with pytest.raises(HypothesisViolation) as exc:
            LieLayerData(7, 3, [(x, y, ExactMatrix.zeros(3, F7))])
        assert exc.value.identity == "[X_0,Y_0] = Z_0"
        assert exc.value.layers == (0,)

    def test_layers_must_commute(self):
        with pytest.raises(HypothesisViolation) as exc:
            LieLayerData(7, 3, [heisenberg_triple(F7), heisenberg_triple(F7)])
        assert exc.value.identity == "[X_0,Y_1] = 0"
        assert exc.value.layers == (0, 1)

    def test_not_nilpotent(self):
        one = ExactMatrix.identity(3, F7)
        zero = ExactMatrix.zeros(3, F7)
        with pytest.raises(HypothesisViolation) as exc:
            LieLayerData(7, 3, [(one, zero, zero)])
        assert "nilpotent" in exc.value.identity

    def test_wrong_dimension(self):
        x, y, z = heisenberg_triple(F7)
        with pytest.raises(DimensionMismatchError):
            LieLayerData(7, 2, [(x, y, z)])

    def test_trimmed(self):
        zero = ExactMatrix.zeros(3, F7)
        data = LieLayerData(7, 3, [heisenberg_triple(F7), (zero, zero, zero)])
        assert data.trimmed() == (heisenberg_triple(F7),)

    def test_from_layers(self):
        layers = extract_layers(defining_representation(F7))
        assert LieLayerData.from_layers(layers).triples == (heisenberg_triple(F7),)


class TestConstructH1CharP:
    def test_defining_triple(self):
        family = construct_h1_charp(LieLayerData(7, 3, [heisenberg_triple(F7)]))
        assert family == defining_representation(F7)

    def test_zero_layer_gives_identity(self):
        zero = ExactMatrix.zeros(3, F7)
        family = construct_h1_charp(LieLayerData(7, 3, [(zero, zero, zero)]))
        assert family.support() == [(0, 0, 0)]
        assert construct_h1_charp(LieLayerData(7, 3, [])).support() == [(0, 0, 0)]

    def test_two_layers(self):
        e13 = unit(3, 1, 3, F7)
        zero = ExactMatrix.zeros(3, F7)
        family = construct_h1_charp(LieLayerData(7, 3, [heisenberg_triple(F7), (e13, zero, zero)]))
        assert family.matrix((1, 0, 0)) == unit(3, 1, 2, F7)
        assert family.matrix((7, 0, 0)) == e13
        assert family.matrix((8, 0, 0)).is_zero()
        assert verify_comodule_axioms(family).ok

    def test_needs_p_at_least_twice_dim(self):
        with pytest.raises(HypothesisViolation) as exc:
            construct_h1_charp(LieLayerData(5, 3, [heisenberg_triple(F5)]))
        assert exc.value.identity == "p >= 2d"

    def test_squares_are_divided_by_digit_factorials(self):
        # X = E12 (x) 1 + 1 (x) E12 has X^2 = 2 E12 (x) E12, so c^(2,0,0) = E12 (x) E12 = E_{1,5}
        x, y, _ = squared_heisenberg(F19)
        assert not (x @ x).is_zero() and not (y @ x).is_zero()
        family = construct_h1_charp(LieLayerData(19, 9, [squared_heisenberg(F19)]))
        assert family.matrix((2, 0, 0)) == unit(9, 1, 5, F19)
        assert family.matrix((0, 2, 0)) == unit(9, 5, 9, F19)
        assert verify_comodule_axioms(family).ok
        assert verify_fundamental_relation_h1(family).ok

    def test_squared_data_round_trip(self):
        nonzero_squares = 0
        for data in squared_layer_data():
            nonzero_squares += any(not (t[0] @ t[0]).is_zero() for t in data.triples)
            family = construct_h1_charp(data)
            assert verify_comodule_axioms(family).ok, data
            assert verify_fundamental_relation_h1(family).ok, data
            assert extract_layers(family).layers == data.trimmed(), data
        assert nonzero_squares > 0

    def test_self_check(self):
        family = construct_h1_charp(LieLayerData(7, 3, [heisenberg_triple(F7)]),
                                    RuntimeConfig(self_check=True))
        assert family.dim == 3

    def test_round_trip_through_layers(self):
        for data in seeded_layer_data():
            family = construct_h1_charp(data)
            assert verify_comodule_axioms(family).ok, data
            assert verify_fundamental_relation_h1(family).ok, data
            assert extract_layers(family).layers == data.trimmed(), data


class TestExponentialForm:
    def test_defining_triple(self):
        form = exponential_form_h1(LieLayerData(7, 3, [heisenberg_triple(F7)]))
        assert form == to_polynomial_matrix(defining_representation(F7))

    def test_zero_layer(self):
        zero = ExactMatrix.zeros(3, F7)
        assert exponential_form_h1(LieLayerData(7, 3, [(zero, zero, zero)])) == PolyMatrix.identity(3, F7, 3)

    def test_one_dimensional_is_identity_even_for_p_two(self):
        zero = ExactMatrix.zeros(1, F2)
        assert exponential_form_h1(LieLayerData(2, 1, [(zero, zero, zero)])) == PolyMatrix.identity(1, F2, 3)

    def test_even_p_rejected(self):
        with pytest.raises(HypothesisViolation) as exc:
            exponential_form_h1(LieLayerData(2, 2, []))
        assert exc.value.identity == "p odd"

    def test_small_p_rejected(self):
        with pytest.raises(HypothesisViolation) as exc:
            exponential_form_h1(LieLayerData(5, 3, [heisenberg_triple(F5)]))
        assert exc.value.identity == "p >= 2d"

    def test_matches_construction(self):
        for data in seeded_layer_data():
            assert exponential_form_h1(data) == to_polynomial_matrix(construct_h1_charp(data)), data

    def test_matches_construction_on_squared_data(self):
        data = LieLayerData(19, 9, [squared_heisenberg(F19)])
        form = exponential_form_h1(data)
        # x^2 X^2 / 2 with X^2 = 2 E12 (x) E12
        assert form.entry(0, 4) == SparsePolynomial.monomial((2, 0, 0), F19)
        assert form == to_polynomial_matrix(construct_h1_charp(data))
        for data in squared_layer_data(4):
            assert exponential_form_h1(data) == to_polynomial_matrix(construct_h1_charp(data)), data


class TestConstructGa:
    def test_single_unit(self):
        family = construct_ga_charp([unit(2, 1, 2, F5)], 5)
        assert family.support() == [(0,), (1,)]

    def test_shift_divides_by_digit_factorial(self):
        family = construct_ga_charp([shift(3, F5)], 5)
        # 1/2 = 3 mod 5
        assert family.matrix((2,)) == sparse(3, F5, {(1, 3): 3})
        assert verify_fundamental_relation(family).ok

    def test_repeated_layer(self):
        e12 = unit(2, 1, 2, F5)
        family = construct_ga_charp([e12, e12], 5)
        assert family.support() == [(0,), (1,), (5,)]
        assert family.matrix((1,)) == family.matrix((5,)) == e12

    def test_rejects_noncommuting(self):
        with pytest.raises(HypothesisViolation) as exc:
            construct_ga_charp([unit(3, 1, 2, F5), unit(3, 2, 3, F5)], 5)
        assert exc.value.layers == (0, 1)

    def test_rejects_non_p_nilpotent(self):
        with pytest.raises(HypothesisViolation) as exc:
            construct_ga_charp([shift(4, F3)], 3)
        assert exc.value.identity == "X_0^3 = 0"

    def test_char0_example(self):
        assert construct_ga_char0(unit(2, 1, 2, Q)) == square_zero_exp(unit(2, 1, 2, Q))

    def test_char0_shift(self):
        m = construct_ga_char0(shift(3, Q))
        family = from_polynomial_matrix(m, GroupKind.GA)
        assert family.matrix((2,)) == sparse(3, Q, {(1, 3): Fraction(1, 2)})
        assert verify_comodule_axioms(family).ok
        assert verify_fundamental_relation(family).ok

    def test_char0_matches_example_matrix(self):
        x = sparse(3, Q, {(1, 2): 1, (2, 3): 2})
        assert construct_ga_char0(x) == ga_example_matrix()

    def test_char0_zero(self):
        assert construct_ga_char0(ExactMatrix.zeros(2, Q)) == PolyMatrix.identity(2, Q, 1)

    def test_char0_errors(self):
        with pytest.raises(NotNilpotentError):
            construct_ga_char0(ExactMatrix.identity(2, Q))
        with pytest.raises(InvalidFieldError):
            construct_ga_char0(unit(2, 1, 2, F5))

    def test_charp_agrees_with_char0_mod_p(self):
        charp = construct_ga_charp([shift(4, F5)], 5)
        char0 = from_polynomial_matrix(construct_ga_char0(shift(4, Q)), GroupKind.GA)
        assert char0.support() == charp.support()
        for exp in charp.support():
            expected = {cell: F5.element(v) for cell, v in char0.matrix(exp).nonzero_entries().items()}
            assert charp.matrix(exp).nonzero_entries() == expected


class TestConstructH1Char0:
    def test_defining_triple(self):
        m = construct_h1_char0(*heisenberg_triple(Q))
        assert m == to_polynomial_matrix(defining_representation(Q))

    def test_zero(self):
        zero = ExactMatrix.zeros(3, Q)
        assert construct_h1_char0(zero, zero, zero) == PolyMatrix.identity(3, Q, 3)

    def test_random_triples_verify(self):
        rng = random.Random(11)
        for _ in range(10):
            family = from_polynomial_matrix(construct_h1_char0(*rational_heisenberg_triple(rng, 4)), GroupKind.H1)
            assert verify_comodule_axioms(family).ok
            assert verify_fundamental_relation(family).ok

    def test_squared_triples_verify(self):
        rng = random.Random(12)
        for _ in range(3):
            x, y, z = tensor_square_triple(*rational_heisenberg_triple(rng, 3))
            family = from_polynomial_matrix(construct_h1_char0(x, y, z), GroupKind.H1)
            assert family.matrix((2, 0, 0)) == (x @ x).scale(Fraction(1, 2))
            assert verify_comodule_axioms(family).ok
            assert verify_fundamental_relation(family).ok

    def test_relation_violation(self):
        x, y, _ = heisenberg_triple(Q)
        with pytest.raises(HypothesisViolation):
            construct_h1_char0(x, y, ExactMatrix.zeros(3, Q))

    def test_prime_field_rejected(self):
        with pytest.raises(InvalidFieldError):
            construct_h1_char0(*heisenberg_triple(F7))


class TestWeylIdentity:
    def test_base_case(self):
        assert weyl_identity_check(*heisenberg_triple(Q), 1, 1)

    def test_seeded_triples(self):
        rng = random.Random(3)
        for _ in range(100):
            d = rng.choice([3, 4, 5])
            n, m = rng.randint(0, 6), rng.randint(0, 6)
            assert weyl_identity_check(*rational_heisenberg_triple(rng, d), n, m)
        for _ in range(100):
            data = random_lie_layers(rng, 7, rng.choice([3, 4]), 1)
            n, m = rng.randint(0, 6), rng.randint(0, 6)
            assert weyl_identity_check(*data.triples[0], n, m)

    def test_squared_triples(self):
        x, y, z = squared_heisenberg(Q)
        # X^2 Y^2 = 4 E13 (x) E13 = 2! Z^2, the l = 2 term
        assert not (x.power(2) @ y.power(2)).is_zero()
        assert weyl_identity_check(x, y, z, 2, 2)
        rng = random.Random(9)
        for _ in range(20):
            n, m = rng.randint(0, 4), rng.randint(0, 4)
            assert weyl_identity_check(*tensor_square_triple(*rational_heisenberg_triple(rng, 3)), n, m)
        for data in squared_layer_data(10):
            n, m = rng.randint(0, 6), rng.randint(0, 6)
            assert weyl_identity_check(*data.triples[0], n, m)

    def test_z_not_central(self):
        x = unit(2, 1, 2, Q)
        y = unit(2, 2, 1, Q)
        with pytest.raises(HypothesisViolation):
            weyl_identity_check(x, y, x @ y - y @ x, 1, 1)

    def test_exponent_range_over_prime_field(self):
        with pytest.raises(ContractViolation):
            weyl_identity_check(*heisenberg_triple(F7), 7, 1)
