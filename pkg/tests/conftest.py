"""Shared fixtures: fields, matrix helpers and the worked example representations."""

from fractions import Fraction
from typing import Dict, Mapping, Tuple

import pytest
from hypothesis import HealthCheck, settings

from exactlinalg import ExactMatrix, PolyMatrix
from generators import monomial_coalgebra_rep
from polyhopf import GroupKind, SparsePolynomial
from repcore import CoefficientFamily, from_polynomial_matrix
from scalars import FieldSpec

settings.register_profile(
    "deterministic",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")

F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)
F7 = FieldSpec.prime(7)
F19 = FieldSpec.prime(19)
F23 = FieldSpec.prime(23)
Q = FieldSpec.rational()


def unit(d: int, i: int, j: int, field: FieldSpec) -> ExactMatrix:
    """E_ij with 1-based indices."""
    return ExactMatrix.unit(d, i - 1, j - 1, field)


def sparse(d: int, field: FieldSpec, entries: Mapping[Tuple[int, int], object]) -> ExactMatrix:
    """Matrix from 1-based {(row, col): value}."""
    return ExactMatrix.from_entries(d, field, {(i - 1, j - 1): v for (i, j), v in entries.items()})


def poly(field: FieldSpec, terms: Dict[Tuple[int, ...], object]) -> SparsePolynomial:
    arity = len(next(iter(terms))) if terms else 3
    return SparsePolynomial(field, arity, terms)


def h1_matrix(field: FieldSpec, rows) -> PolyMatrix:
    """Rows of {exponent: coeff} dicts (0 for an empty entry) as an H_1 polynomial matrix."""
    return PolyMatrix([[SparsePolynomial(field, 3, cell or {}) for cell in row] for row in rows], field, 3)


def ga_example_matrix(field: FieldSpec = Q) -> PolyMatrix:
    """[[1, x, x^2], [0, 1, 2x], [0, 0, 1]]."""
    one = {(0,): 1}
    rows = [
        [one, {(1,): 1}, {(2,): 1}],
        [{}, one, {(1,): 2}],
        [{}, {}, one],
    ]
    return PolyMatrix([[SparsePolynomial(field, 1, cell) for cell in row] for row in rows], field, 1)


def six_dim_matrix(field: FieldSpec, xz_coeff: int = 2) -> PolyMatrix:
    """
    [[1, 2x, x, 2x^2, z, 2xz],
     [0, 1, 0, x, 0, z],
     [0, 0, 1, 2x, y, 2xy],
     [0, 0, 0, 1, 0, y],
     [0, 0, 0, 0, 1, 2x],
     [0, 0, 0, 0, 0, 1]]
    """
    one = {(0, 0, 0): 1}
    x, y, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    rows = [
        [one, {x: 2}, {x: 1}, {(2, 0, 0): 2}, {z: 1}, {(1, 0, 1): xz_coeff}],
        [0, one, 0, {x: 1}, 0, {z: 1}],
        [0, 0, one, {x: 2}, {y: 1}, {(1, 1, 0): 2}],
        [0, 0, 0, one, 0, {y: 1}],
        [0, 0, 0, 0, one, {x: 2}],
        [0, 0, 0, 0, 0, one],
    ]
    return h1_matrix(field, rows)


@pytest.fixture
def ga_example() -> CoefficientFamily:
    return from_polynomial_matrix(ga_example_matrix(), GroupKind.GA)


@pytest.fixture(params=[F3, Q], ids=["F3", "Q"])
def six_dim(request) -> CoefficientFamily:
    return from_polynomial_matrix(six_dim_matrix(request.param), GroupKind.H1)


@pytest.fixture(scope="session")
def ten_dim() -> CoefficientFamily:
    return monomial_coalgebra_rep(F2, GroupKind.H1, 2)


@pytest.fixture(scope="session")
def twenty_dim() -> CoefficientFamily:
    return monomial_coalgebra_rep(F2, GroupKind.H1, 3)


def rational_heisenberg_triple(rng, d: int):
    """Random (X, Y, [X, Y]) over Q inside the block [[0, u, w], [0, 0, v], [0, 0, 0]]."""
    value = lambda: Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    x_cells = {(0, c): value() for c in range(1, d - 1)}
    y_cells = {(c, d - 1): value() for c in range(1, d - 1)}
    x_cells[(0, d - 1)] = value()
    y_cells[(0, d - 1)] = value()
    x = ExactMatrix.from_entries(d, Q, x_cells)
    y = ExactMatrix.from_entries(d, Q, y_cells)
    return x, y, x @ y - y @ x
