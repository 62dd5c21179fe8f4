from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exactlinalg import (DimensionMismatchError, ExactMatrix, FactorialNotInvertibleError,
                         NotNilpotentError, PolyMatrix, commutator, nilpotency_index, truncated_exp)
from polyhopf import SparsePolynomial

from conftest import F2, F3, F5, F7, Q, sparse, unit


def shift(d, field):
    return ExactMatrix.from_entries(d, field, {(i, i + 1): 1 for i in range(d - 1)})


def strictly_upper(field, d):
    values = st.integers(min_value=-6, max_value=6)
    cells = st.lists(values, min_size=d * (d - 1) // 2, max_size=d * (d - 1) // 2)

    def build(vals):
        it = iter(vals)
        return ExactMatrix.from_entries(d, field, {(i, j): next(it) for i in range(d) for j in range(i + 1, d)})
    return cells.map(build)


def square(field, d):
    cells = st.lists(st.integers(min_value=-6, max_value=6), min_size=d * d, max_size=d * d)
    return cells.map(lambda vals: ExactMatrix([vals[i * d:(i + 1) * d] for i in range(d)], field))


def linear_in_t(field, d, entries):
    """B + tA as a one-variable polynomial matrix."""
    t = SparsePolynomial.variable(0, field, 1)
    one = SparsePolynomial.constant(1, field, 1)
    return st.tuples(entries, entries).map(
        lambda ab: PolyMatrix.combination([(t, ab[0]), (one, ab[1])], d, field, 1))


class TestExactMatrix:
    def test_arithmetic_reduces_mod_p(self):
        a = ExactMatrix([[1, 2], [3, 4]], F5)
        assert (a @ a).rows() == [[2, 0], [0, 2]]
        assert (a + a).rows() == [[2, 4], [1, 3]]
        assert (-a).rows() == [[4, 3], [2, 1]]
        assert a.scale(3) == ExactMatrix([[3, 1], [4, 2]], F5)

    def test_rational_entries(self):
        a = ExactMatrix([[Fraction(1, 2), 0], [0, 1]], Q)
        assert (a @ a)[0, 0] == Fraction(1, 4)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            ExactMatrix.identity(2, F3) @ ExactMatrix.identity(3, F3)
        with pytest.raises(DimensionMismatchError):
            ExactMatrix.identity(2, F3) + ExactMatrix.identity(2, F5)
        with pytest.raises(DimensionMismatchError):
            ExactMatrix([[1, 2]], F3)

    def test_immutable(self):
        a = ExactMatrix.identity(2, F3)
        with pytest.raises(ValueError):
            a.array[0, 0] = 2

    def test_power_and_nonzero_entries(self):
        n = shift(4, Q)
        assert n.power(3).nonzero_entries() == {(0, 3): 1}
        assert n.power(4).is_zero()
        assert n.power(0) == ExactMatrix.identity(4, Q)

    def test_kron_and_block_diagonal(self):
        e = unit(2, 1, 2, F7)
        k = e.kron(ExactMatrix.identity(2, F7))
        assert k.nonzero_entries() == {(0, 2): 1, (1, 3): 1}
        b = ExactMatrix.block_diagonal(e, ExactMatrix.identity(1, F7))
        assert b.nonzero_entries() == {(0, 1): 1, (2, 2): 1}

    def test_commutator(self):
        x, y, z = unit(3, 1, 2, F7), unit(3, 2, 3, F7), unit(3, 1, 3, F7)
        assert commutator(x, y) == z
        assert commutator(y, x) == -z

    def test_hash_and_equality(self):
        assert hash(sparse(3, F3, {(1, 2): 4})) == hash(sparse(3, F3, {(1, 2): 1}))
        assert sparse(3, F3, {(1, 2): 4}) == sparse(3, F3, {(1, 2): 1})

    @given(square(F7, 3), square(F7, 3), square(F7, 3))
    def test_product_is_associative(self, a, b, c):
        assert (a @ b) @ c == a @ (b @ c)

    @given(square(Q, 3), square(Q, 3))
    def test_product_distributes(self, a, b):
        assert a @ (a + b) == a @ a + a @ b


class TestNilpotency:
    @pytest.mark.parametrize("d", [1, 2, 3, 5, 8])
    def test_shift_index_is_dimension(self, d):
        assert nilpotency_index(shift(d, F7)) == d

    def test_zero_matrix(self):
        assert nilpotency_index(ExactMatrix.zeros(4, Q)) == 1

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotentError):
            nilpotency_index(ExactMatrix.identity(3, F3))

    @given(strictly_upper(F5, 4))
    def test_index_matches_first_vanishing_power(self, a):
        n = nilpotency_index(a)
        assert a.power(n).is_zero()
        assert n == 1 or not a.power(n - 1).is_zero()


class TestTruncatedExp:
    def test_shift_over_q(self):
        x = SparsePolynomial.variable(0, Q, 1)
        m = PolyMatrix.combination([(x, shift(3, Q))], 3, Q, 1)
        e = truncated_exp(m, Q)
        assert e.entry(0, 2) == (x * x).scale(Fraction(1, 2))
        assert e.entry(0, 1) == x and e.entry(1, 1) == SparsePolynomial.constant(1, Q, 1)

    def test_factorial_not_invertible(self):
        x = SparsePolynomial.variable(0, F2, 1)
        m = PolyMatrix.combination([(x, shift(4, F2))], 4, F2, 1)
        with pytest.raises(FactorialNotInvertibleError):
            truncated_exp(m, F2)

    def test_not_nilpotent(self):
        m = PolyMatrix.identity(2, F7, 1)
        with pytest.raises(NotNilpotentError):
            truncated_exp(m, F7)

    def test_zero_gives_identity(self):
        assert truncated_exp(PolyMatrix.zeros(3, F5, 3), F5) == PolyMatrix.identity(3, F5, 3)

    @given(strictly_upper(Q, 3))
    def test_exp_of_commuting_sum_factors(self, a):
        # a and 2a commute; exp(t a) exp(t 2a) = exp(t 3a)
        t = SparsePolynomial.variable(0, Q, 1)
        ea = truncated_exp(PolyMatrix.combination([(t, a)], 3, Q, 1), Q)
        e2a = truncated_exp(PolyMatrix.combination([(t, a.scale(2))], 3, Q, 1), Q)
        e3a = truncated_exp(PolyMatrix.combination([(t, a.scale(3))], 3, Q, 1), Q)
        assert ea @ e2a == e3a

    @given(strictly_upper(Q, 4), strictly_upper(Q, 4))
    def test_exp_of_negative_is_inverse(self, a, b):
        t = SparsePolynomial.variable(0, Q, 2)
        s = SparsePolynomial.variable(1, Q, 2)
        m = PolyMatrix.combination([(t, a), (s, b)], 4, Q, 2)
        assert truncated_exp(m, Q) @ truncated_exp(-m, Q) == PolyMatrix.identity(4, Q, 2)

    @given(strictly_upper(F7, 4), strictly_upper(F7, 4))
    def test_exp_of_negative_is_inverse_mod_p(self, a, b):
        t = SparsePolynomial.variable(0, F7, 2)
        s = SparsePolynomial.variable(1, F7, 2)
        m = PolyMatrix.combination([(t, a), (s, b)], 4, F7, 2)
        assert truncated_exp(m, F7) @ truncated_exp(-m, F7) == PolyMatrix.identity(4, F7, 2)


class TestPolyMatrix:
    @given(linear_in_t(F5, 3, square(F5, 3)), linear_in_t(F5, 3, square(F5, 3)),
           linear_in_t(F5, 3, square(F5, 3)))
    def test_product_is_associative(self, a, b, c):
        assert (a @ b) @ c == a @ (b @ c)

    @given(linear_in_t(Q, 3, strictly_upper(Q, 3)), linear_in_t(Q, 3, strictly_upper(Q, 3)))
    def test_product_is_associative_over_rationals(self, a, b):
        assert (a @ b) @ a == a @ (b @ a)
