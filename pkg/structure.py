"""
Structure Module
Builds representations from generating data: Lie-layer triples over F_p
(H_1), commuting p-nilpotent matrices over F_p (G_a), and single nilpotent
data over Q; the exponential-product form of a layered H_1 representation;
and the Weyl-type commutation identity used as an oracle in tests.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Optional, Sequence, Tuple

from exactlinalg import (DimensionMismatchError, ExactMatrix, NotNilpotentError, PolyMatrix,
                         commutator, nilpotency_index, truncated_exp)
from polyhopf import Exponent, GroupKind, SparsePolynomial
from repcore import CoefficientFamily, FrobeniusLayers, LETTERS, verify_comodule_axioms
from runtime.audit_logger import log_operation
from runtime.config import RuntimeConfig, get_runtime_config
from scalars import ContractViolation, FieldSpec, InvalidFieldError, binomial_in, gamma, factorial_in

logger = logging.getLogger(__name__)

Triple = Tuple[ExactMatrix, ExactMatrix, ExactMatrix]


class HypothesisViolation(ValueError):
    """
    Raised when generating data fails one of the identities a construction
    depends on. ``identity`` names the failed identity and ``layers`` holds
    the layer indices involved.
    """

    def __init__(self, identity: str, layers: Tuple[int, ...] = (), detail: str = ""):
        self.identity = identity
        self.layers = tuple(layers)
        where = f" (layers {', '.join(map(str, self.layers))})" if self.layers else ""
        super().__init__(f"hypothesis failed: {identity}{where}{': ' + detail if detail else ''}")


def _require(holds: bool, identity: str, layers: Tuple[int, ...] = ()) -> None:
    if not holds:
        raise HypothesisViolation(identity, layers)


def _require_nilpotent(a: ExactMatrix, name: str, layers: Tuple[int, ...] = ()) -> int:
    try:
        return nilpotency_index(a)
    except NotNilpotentError as e:
        raise HypothesisViolation(f"{name} nilpotent", layers, str(e)) from e


@dataclass(frozen=True)
class LieLayerData:
    """
    Ordered triples (X_i, Y_i, Z_i) over F_p with [X_i, Y_i] = Z_i,
    [X_i, Z_i] = [Y_i, Z_i] = 0, every matrix nilpotent, and all matrices of
    distinct layers commuting. Validated on construction.
    """
    p: int
    dim: int
    triples: Tuple[Triple, ...]

    def __post_init__(self):
        object.__setattr__(self, 'triples', tuple(tuple(t) for t in self.triples))
        fld = FieldSpec.prime(self.p)
        for i, triple in enumerate(self.triples):
            if len(triple) != 3:
                raise ContractViolation(f"layer {i} is not a triple")
            for letter, a in zip(LETTERS, triple):
                if a.dim != self.dim or a.field != fld:
                    raise DimensionMismatchError(f"{letter}_{i} is not {self.dim}x{self.dim} over {fld}")
                _require_nilpotent(a, f"{letter}_{i}", (i,))
            x, y, z = triple
            _require(commutator(x, y) == z, f"[X_{i},Y_{i}] = Z_{i}", (i,))
            _require(commutator(x, z).is_zero(), f"[X_{i},Z_{i}] = 0", (i,))
            _require(commutator(y, z).is_zero(), f"[Y_{i},Z_{i}] = 0", (i,))
        for i in range(len(self.triples)):
            for j in range(i + 1, len(self.triples)):
                for a, b in product(range(3), repeat=2):
                    _require(commutator(self.triples[i][a], self.triples[j][b]).is_zero(),
                             f"[{LETTERS[a]}_{i},{LETTERS[b]}_{j}] = 0", (i, j))

    @property
    def field(self) -> FieldSpec:
        return FieldSpec.prime(self.p)

    @classmethod
    def from_layers(cls, layers: FrobeniusLayers) -> 'LieLayerData':
        """Promote extracted H_1 layers to validated generating data."""
        if layers.group is not GroupKind.H1:
            raise ContractViolation("Lie-layer data needs H1 layers")
        return cls(layers.p, layers.dim, layers.layers)

    def trimmed(self) -> Tuple[Triple, ...]:
        """The triples without trailing all-zero layers."""
        triples = list(self.triples)
        while triples and all(a.is_zero() for a in triples[-1]):
            triples.pop()
        return tuple(triples)


def _divided_powers(matrices: Sequence[ExactMatrix], p: int) -> Dict[int, ExactMatrix]:
    """
    n -> Gamma(n)^{-1} * prod_i A_i^{n_i} over all p-digit vectors (n_i) with
    A_i^{n_i} != 0; zero products are dropped.
    """
    d = matrices[0].dim
    fld = matrices[0].field
    powers = []
    for a in matrices:
        index = min(nilpotency_index(a), p)
        powers.append([a.power(k) for k in range(index)])

    result: Dict[int, ExactMatrix] = {}
    for digits in product(*(range(len(pw)) for pw in powers)):
        matrix = ExactMatrix.identity(d, fld)
        for i, k in enumerate(digits):
            if k:
                matrix = matrix @ powers[i][k]
        if matrix.is_zero():
            continue
        n = sum(k * p ** i for i, k in enumerate(digits))
        result[n] = matrix.scale(fld.inverse(gamma(n, p)))
    return result


def _self_check(family: CoefficientFamily, config: RuntimeConfig) -> None:
    if not config.self_check:
        return
    report = verify_comodule_axioms(family)
    if not report.ok:
        raise HypothesisViolation("comodule axioms of the constructed family",
                                  detail=report.violations[0].description)


def construct_h1_charp(layers: LieLayerData, config: Optional[RuntimeConfig] = None) -> CoefficientFamily:
    """
    Assemble the H_1 representation with c^(n,m,k) = Z_(k) Y_(m) X_(n),
    where P_(n) = Gamma(n)^{-1} P_0^{n_0} ... P_M^{n_M} for the p-digits n_i.

    Args:
        layers: validated Lie-layer data
        config: runtime settings; ``self_check`` re-verifies the output

    Raises:
        HypothesisViolation: p < 2d
    """
    config = config or get_runtime_config()
    p, d = layers.p, layers.dim
    if p < 2 * d:
        raise HypothesisViolation("p >= 2d", detail=f"p={p}, d={d}")

    with log_operation('construct_h1_charp', {'p': p, 'dim': d, 'depth': len(layers.triples)}) as ctx:
        fld = layers.field
        triples = layers.triples or ((ExactMatrix.zeros(d, fld),) * 3,)
        xs = _divided_powers([t[0] for t in triples], p)
        ys = _divided_powers([t[1] for t in triples], p)
        zs = _divided_powers([t[2] for t in triples], p)

        coeffs: Dict[Exponent, ExactMatrix] = {}
        for (k, zk), (m, ym), (n, xn) in product(zs.items(), ys.items(), xs.items()):
            matrix = zk @ ym @ xn
            if not matrix.is_zero():
                coeffs[(n, m, k)] = matrix
        family = CoefficientFamily(GroupKind.H1, fld, d, coeffs)
        ctx['result'] = {'support': len(coeffs)}
        logger.debug("constructed H1 family over F_%d with %d coefficient matrices", p, len(coeffs))

    _self_check(family, config)
    return family


def construct_ga_charp(xs: Sequence[ExactMatrix], p: int,
                       config: Optional[RuntimeConfig] = None) -> CoefficientFamily:
    """
    The G_a representation e^{X_0 x} e^{X_1 x^p} ... as a coefficient family:
    c^r = Gamma(r)^{-1} X_0^{r_0} ... X_m^{r_m}.

    Raises:
        HypothesisViolation: the X_i do not commute or some X_i^p != 0
    """
    config = config or get_runtime_config()
    if not xs:
        raise ContractViolation("at least one layer matrix is required")
    fld = FieldSpec.prime(p)
    d = xs[0].dim
    for i, x in enumerate(xs):
        if x.dim != d or x.field != fld:
            raise DimensionMismatchError(f"X_{i} is not {d}x{d} over {fld}")
        _require(x.power(min(p, d)).is_zero(), f"X_{i}^{p} = 0", (i,))
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            _require(commutator(xs[i], xs[j]).is_zero(), f"[X_{i},X_{j}] = 0", (i, j))

    with log_operation('construct_ga_charp', {'p': p, 'dim': d, 'depth': len(xs)}) as ctx:
        coeffs = {(n,): matrix for n, matrix in _divided_powers(list(xs), p).items()}
        family = CoefficientFamily(GroupKind.GA, fld, d, coeffs)
        ctx['result'] = {'support': len(coeffs)}

    _self_check(family, config)
    return family


def _h1_exponent_argument(x: ExactMatrix, y: ExactMatrix, z: ExactMatrix, q: int) -> PolyMatrix:
    """x^q X + y^q Y + (z^q - x^q y^q / 2) Z."""
    fld = x.field
    mono = lambda exp, c=1: SparsePolynomial.monomial(exp, fld, c)
    half = fld.inverse(fld.element(2))
    return PolyMatrix.combination([
        (mono((q, 0, 0)), x),
        (mono((0, q, 0)), y),
        (mono((0, 0, q)) - mono((q, q, 0), half), z),
    ], x.dim, fld, 3)


def exponential_form_h1(layers: LieLayerData) -> PolyMatrix:
    """
    prod_i exp(x^{p^i} X_i + y^{p^i} Y_i + (z^{p^i} - x^{p^i} y^{p^i} / 2) Z_i),
    each factor a truncated exponential. Equals the polynomial matrix of
    construct_h1_charp on the same data.

    Raises:
        HypothesisViolation: p even with d >= 2, or p < 2d
    """
    p, d = layers.p, layers.dim
    fld = layers.field
    if d == 1:
        # every nilpotent 1x1 matrix is zero
        return PolyMatrix.identity(1, fld, 3)
    if p % 2 == 0:
        raise HypothesisViolation("p odd", detail="the exponential form divides by 2")
    if p < 2 * d:
        raise HypothesisViolation("p >= 2d", detail=f"p={p}, d={d}")

    with log_operation('exponential_form_h1', {'p': p, 'dim': d, 'depth': len(layers.triples)}):
        result = PolyMatrix.identity(d, fld, 3)
        for i, (x, y, z) in enumerate(layers.triples):
            result = result @ truncated_exp(_h1_exponent_argument(x, y, z, p ** i), fld)
        return result


def _require_rational(*matrices: ExactMatrix) -> FieldSpec:
    fld = matrices[0].field
    if fld.is_prime:
        raise InvalidFieldError(f"characteristic-zero construction needs Q, got {fld}")
    for a in matrices:
        if a.dim != matrices[0].dim or a.field != fld:
            raise DimensionMismatchError("matrices must share dimension and field")
    return fld


def construct_ga_char0(x: ExactMatrix) -> PolyMatrix:
    """e^{xX} = sum_r x^r X^r / r! over Q."""
    fld = _require_rational(x)
    nilpotency_index(x)
    variable = SparsePolynomial.variable(0, fld, 1)
    return truncated_exp(PolyMatrix.combination([(variable, x)], x.dim, fld, 1), fld)


def construct_h1_char0(x: ExactMatrix, y: ExactMatrix, z: ExactMatrix) -> PolyMatrix:
    """
    exp(xX + yY + (z - xy/2) Z) over Q.

    Raises:
        HypothesisViolation: Z != [X, Y], Z does not commute with X or Y, or
        some matrix is not nilpotent
    """
    _require_rational(x, y, z)
    for letter, a in zip(LETTERS, (x, y, z)):
        _require_nilpotent(a, letter)
    _require(commutator(x, y) == z, "[X,Y] = Z")
    _require(commutator(z, x).is_zero(), "[Z,X] = 0")
    _require(commutator(z, y).is_zero(), "[Z,Y] = 0")
    return truncated_exp(_h1_exponent_argument(x, y, z, 1), x.field)


def weyl_identity_check(x: ExactMatrix, y: ExactMatrix, z: ExactMatrix, n: int, m: int) -> bool:
    """
    Evaluate X^n Y^m = sum_l l! C(n,l) C(m,l) Z^l Y^(m-l) X^(n-l) directly.

    Raises:
        HypothesisViolation: Z != [X, Y] or Z is not central in <X, Y>
        ContractViolation: n or m >= p over F_p
    """
    fld = x.field
    _require(commutator(x, y) == z, "[X,Y] = Z")
    _require(commutator(z, x).is_zero(), "[Z,X] = 0")
    _require(commutator(z, y).is_zero(), "[Z,Y] = 0")
    if n < 0 or m < 0:
        raise ContractViolation("exponents must be nonnegative")
    if fld.is_prime and (n >= fld.p or m >= fld.p):
        raise ContractViolation(f"exponents must be below p={fld.p}")

    lhs = x.power(n) @ y.power(m)
    rhs = ExactMatrix.zeros(x.dim, fld)
    for l in range(min(n, m) + 1):
        coeff = fld.element(factorial_in(fld, l) * binomial_in(fld, n, l) * binomial_in(fld, m, l))
        rhs = rhs + (z.power(l) @ y.power(m - l) @ x.power(n - l)).scale(coeff)
    return lhs == rhs
