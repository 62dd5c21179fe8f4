"""
Generators Module
Produces representation corpora: monomial sub-coalgebra representations,
tensor products, direct sums, Frobenius twists, the defining and trivial
representations, and random Lie-layer data satisfying every hypothesis of
the layered construction.

Matrix convention: rho(e_j) = sum_i e_i (x) a_ij, so a_ij collects the terms
of Delta(m_j) whose left factor is the basis monomial m_i.
"""

import logging
import random
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Tuple

from exactlinalg import DimensionMismatchError, ExactMatrix, commutator
from polyhopf import Exponent, GroupKind, comultiply_monomial, _format_monomial
from repcore import CoefficientFamily, exponent_key
from scalars import ContractViolation, FieldSpec, InvalidFieldError
from structure import LieLayerData

logger = logging.getLogger(__name__)

# variable subsets whose monomial span is closed under Delta (z needs x)
VARIABLE_SETS = {
    GroupKind.GA: ('x',),
    GroupKind.H1: ('x', 'y', 'xy', 'xz', 'xyz'),
}


@dataclass(frozen=True)
class MonomialBasis:
    """
    Monomials of degree <= max_degree in the chosen variables, in graded
    order with x > y > z inside a degree: 1, x, y, z, x^2, xy, xz, y^2, ...
    """
    group: GroupKind
    max_degree: int
    variables: str
    exponents: Tuple[Exponent, ...]

    def __len__(self) -> int:
        return len(self.exponents)

    def index(self, exp: Exponent) -> int:
        return self.exponents.index(exp)

    def labels(self) -> List[str]:
        return [_format_monomial(exp, self.group.variables) or "1" for exp in self.exponents]


def _check_variables(group: GroupKind, variables: Optional[str]) -> str:
    if variables is None:
        return VARIABLE_SETS[group][-1]
    normalized = "".join(sorted(set(variables)))
    if normalized not in VARIABLE_SETS[group]:
        raise ContractViolation(
            f"variables {variables!r} do not span a sub-coalgebra of {group.value}; "
            f"choose one of {', '.join(VARIABLE_SETS[group])}")
    return normalized


def monomial_basis(group: GroupKind, max_degree: int, variables: Optional[str] = None) -> MonomialBasis:
    if max_degree < 0:
        raise ContractViolation(f"max degree must be nonnegative, got {max_degree}")
    variables = _check_variables(group, variables)
    allowed = [name in variables for name in group.variables]
    exponents = [
        exp for exp in product(range(max_degree + 1), repeat=group.arity)
        if sum(exp) <= max_degree and all(ok or e == 0 for ok, e in zip(allowed, exp))
    ]
    return MonomialBasis(group, max_degree, variables, tuple(sorted(exponents, key=exponent_key)))


def monomial_coalgebra_rep(field: FieldSpec, group: GroupKind, max_degree: int,
                           variables: Optional[str] = None) -> CoefficientFamily:
    """
    The comodule on the span V of all monomials of degree <= max_degree,
    given by restricting Delta: V -> V (x) A.

    Args:
        field: coefficient field
        group: Ga or H1
        max_degree: D >= 0
        variables: optional Delta-closed subset ("x", "y", "xy", "xz", "xyz")
    """
    basis = monomial_basis(group, max_degree, variables)
    d = len(basis)
    position = {exp: i for i, exp in enumerate(basis.exponents)}

    cells: Dict[Exponent, Dict[Tuple[int, int], int]] = {}
    for j, exp in enumerate(basis.exponents):
        for (left, right), c in comultiply_monomial(exp, group, field).factor_terms():
            bucket = cells.setdefault(right, {})
            bucket[(position[left], j)] = c

    logger.debug("monomial coalgebra %s D=%d vars=%s over %s: dim %d",
                 group.value, max_degree, basis.variables, field, d)
    return CoefficientFamily(group, field, d, {
        exp: ExactMatrix.from_entries(d, field, entries) for exp, entries in cells.items()
    })


def _require_compatible(f: CoefficientFamily, g: CoefficientFamily) -> None:
    if f.group is not g.group or f.field != g.field:
        raise DimensionMismatchError(
            f"cannot combine {f.group.value} over {f.field} with {g.group.value} over {g.field}")


def tensor_product(f: CoefficientFamily, g: CoefficientFamily) -> CoefficientFamily:
    """Entrywise-polynomial Kronecker product: c^r = sum_{s+t=r} c^s (x) c^t."""
    _require_compatible(f, g)
    coeffs: Dict[Exponent, ExactMatrix] = {}
    for s, a in f.coeffs.items():
        for t, b in g.coeffs.items():
            r = tuple(i + j for i, j in zip(s, t))
            block = a.kron(b)
            coeffs[r] = coeffs[r] + block if r in coeffs else block
    return CoefficientFamily(f.group, f.field, f.dim * g.dim, coeffs)


def direct_sum(f: CoefficientFamily, g: CoefficientFamily) -> CoefficientFamily:
    """Block-diagonal family: c^r = diag(c^r(f), c^r(g))."""
    _require_compatible(f, g)
    coeffs = {
        r: ExactMatrix.block_diagonal(f.matrix(r), g.matrix(r))
        for r in set(f.coeffs) | set(g.coeffs)
    }
    return CoefficientFamily(f.group, f.field, f.dim + g.dim, coeffs)


def frobenius_twist(f: CoefficientFamily, k: int) -> CoefficientFamily:
    """
    The k-th Frobenius twist over F_p: c'^(p^k r) = c^r. The substitution
    x -> x^(p^k) is a Hopf endomorphism in characteristic p.
    """
    if not f.field.is_prime:
        raise InvalidFieldError("Frobenius twists need a prime field")
    if k < 0:
        raise ContractViolation(f"twist exponent must be nonnegative, got {k}")
    q = f.field.p ** k
    return CoefficientFamily(f.group, f.field, f.dim,
                             {tuple(e * q for e in exp): m for exp, m in f.coeffs.items()})


def defining_representation(field: FieldSpec) -> CoefficientFamily:
    """[[1, x, z], [0, 1, y], [0, 0, 1]]."""
    unit = lambda i, j: ExactMatrix.unit(3, i, j, field)
    return CoefficientFamily(GroupKind.H1, field, 3, {
        (0, 0, 0): ExactMatrix.identity(3, field),
        (1, 0, 0): unit(0, 1),
        (0, 1, 0): unit(1, 2),
        (0, 0, 1): unit(0, 2),
    })


def trivial_representation(field: FieldSpec, group: GroupKind, d: int = 1) -> CoefficientFamily:
    return CoefficientFamily.identity(group, field, d)


def random_lie_layers(rng: random.Random, p: int, d: int, n_layers: int) -> LieLayerData:
    """
    Random Lie-layer data inside the block [[0, u, w], [0, 0, v], [0, 0, 0]]
    of gl_d: the middle indices 1..d-2 are dealt out to the layers, so u and
    v of different layers have disjoint supports. Then [X_i, Y_i] = (u_i . v_i)
    E_{0,d-1} and matrices of distinct layers commute.
    """
    if d < 1 or n_layers < 0:
        raise ContractViolation("need d >= 1 and a nonnegative layer count")
    fld = FieldSpec.prime(p)
    corner = (0, d - 1)
    owner = {c: rng.randrange(n_layers) for c in range(1, d - 1)} if n_layers else {}

    triples = []
    for i in range(n_layers):
        if d == 1:
            zero = ExactMatrix.zeros(1, fld)
            triples.append((zero, zero, zero))
            continue
        mine = [c for c, layer in owner.items() if layer == i]
        x_cells = {(0, c): rng.randrange(p) for c in mine}
        y_cells = {(c, d - 1): rng.randrange(p) for c in mine}
        x_cells[corner] = rng.randrange(p)
        y_cells[corner] = rng.randrange(p)
        x = ExactMatrix.from_entries(d, fld, x_cells)
        y = ExactMatrix.from_entries(d, fld, y_cells)
        triples.append((x, y, commutator(x, y)))
    return LieLayerData(p, d, tuple(triples))


def tensor_square_triple(x: ExactMatrix, y: ExactMatrix, z: ExactMatrix) -> Tuple[ExactMatrix, ...]:
    """
    A -> A (x) 1 + 1 (x) A on each matrix. The map preserves brackets, so the
    image satisfies the same identities; A^2 = 0 lifts to 2 A (x) A, which is
    nonzero for odd p.
    """
    one = ExactMatrix.identity(x.dim, x.field)
    return tuple(a.kron(one) + one.kron(a) for a in (x, y, z))


def tensor_square_layers(layers: LieLayerData) -> LieLayerData:
    """Lie-layer data on V (x) V from data on V, layer by layer."""
    return LieLayerData(layers.p, layers.dim ** 2,
                        tuple(tensor_square_triple(*triple) for triple in layers.triples))
