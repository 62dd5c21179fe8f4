"""
Representation Core Module
The representation object (coefficient family <-> polynomial matrix), the
two verifiers (comodule axioms, fundamental relations for G_a and H_1),
Frobenius-layer extraction and layer-relation checking.

A d-dimensional representation is stored as the finitely supported map
r -> c^r of coefficient matrices, with (a_ij) = sum_r c^r x^r.
"""

import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from itertools import product
from types import MappingProxyType
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from exactlinalg import DimensionMismatchError, ExactMatrix, PolyMatrix, commutator
from polyhopf import (Exponent, GroupKind, SparsePolynomial, TensorPolynomial,
                      comultiply_monomial)
from runtime.audit_logger import log_operation
from scalars import ContractViolation, FieldSpec, InvalidFieldError, binomial_in, multinomial_in

logger = logging.getLogger(__name__)

LETTERS = ('X', 'Y', 'Z')


def exponent_key(exp: Exponent) -> Tuple[int, Tuple[int, ...]]:
    """Graded order: total degree first, then descending lexicographic."""
    return sum(exp), tuple(-e for e in exp)


class CoefficientFamily:
    """
    Finitely supported map exponent-vector -> d x d coefficient matrix.

    Zero matrices are never stored, so two families are equal exactly when
    their stored maps are equal.
    """

    __slots__ = ('group', 'field', 'dim', '_coeffs')

    def __init__(self, group: GroupKind, field: FieldSpec, dim: int,
                 coeffs: Optional[Mapping[Sequence[int], ExactMatrix]] = None):
        if dim < 1:
            raise DimensionMismatchError(f"dimension must be positive, got {dim}")
        clean: Dict[Exponent, ExactMatrix] = {}
        for exp, matrix in (coeffs or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != group.arity or any(e < 0 for e in exp):
                raise ContractViolation(f"exponent {exp} does not fit {group.value}")
            if matrix.dim != dim or matrix.field != field:
                raise DimensionMismatchError(
                    f"coefficient at {exp} is {matrix.dim}x{matrix.dim} over {matrix.field}; "
                    f"expected {dim}x{dim} over {field}")
            if not matrix.is_zero():
                clean[exp] = matrix
        self.group = group
        self.field = field
        self.dim = dim
        self._coeffs = clean

    @classmethod
    def identity(cls, group: GroupKind, field: FieldSpec, dim: int) -> 'CoefficientFamily':
        return cls(group, field, dim, {(0,) * group.arity: ExactMatrix.identity(dim, field)})

    @property
    def coeffs(self) -> Mapping[Exponent, ExactMatrix]:
        return MappingProxyType(self._coeffs)

    def matrix(self, exp: Sequence[int]) -> ExactMatrix:
        """c^exp, the zero matrix when exp is outside the support."""
        found = self._coeffs.get(tuple(exp))
        return found if found is not None else ExactMatrix.zeros(self.dim, self.field)

    def support(self) -> List[Exponent]:
        return sorted(self._coeffs, key=exponent_key)

    def max_coordinate(self) -> int:
        return max((max(exp) for exp in self._coeffs), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientFamily):
            return NotImplemented
        return (self.group is other.group and self.field == other.field
                and self.dim == other.dim and self._coeffs == other._coeffs)

    __hash__ = None

    def __repr__(self) -> str:
        return (f"CoefficientFamily({self.group.value}, {self.field}, dim={self.dim}, "
                f"support={self.support()})")


class CheckMode(Enum):
    STRICT = "strict"
    REPORT = "report"


def _render(value: Any, field: Optional[FieldSpec] = None) -> Any:
    if isinstance(value, ExactMatrix):
        return {f"{i + 1},{j + 1}": value.field.format(v)
                for (i, j), v in sorted(value.nonzero_entries().items())}
    if isinstance(value, SparsePolynomial):
        return str(value)
    if value is not None and field is not None:
        return field.format(value)
    return value


@dataclass(frozen=True)
class Violation:
    """One failed identity: where it failed and both sides."""
    site: Tuple
    description: str
    lhs: Any = None
    rhs: Any = None
    condition: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'site': [list(s) if isinstance(s, tuple) else s for s in self.site],
            'condition': self.condition,
            'description': self.description,
            'lhs': _render(self.lhs),
            'rhs': _render(self.rhs),
        }


@dataclass
class VerificationReport:
    violations: List[Violation] = dc_field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'checked': self.checked,
            'violations': [v.to_dict() for v in self.violations],
        }


@dataclass(frozen=True)
class FrobeniusLayers:
    """
    Layer matrices read off a representation over F_p: layer m holds
    (X_m, Y_m, Z_m) for H_1 and (X_m,) for G_a. Trailing zero layers are
    trimmed, so an empty tuple means no layers at all.
    """
    group: GroupKind
    p: int
    dim: int
    layers: Tuple[Tuple[ExactMatrix, ...], ...]

    def __post_init__(self):
        width = 3 if self.group is GroupKind.H1 else 1
        for m, layer in enumerate(self.layers):
            if len(layer) != width:
                raise ContractViolation(f"layer {m} has {len(layer)} matrices, expected {width}")
            for matrix in layer:
                if matrix.dim != self.dim or matrix.field != FieldSpec.prime(self.p):
                    raise DimensionMismatchError(f"layer {m} matrix does not fit {self.dim}x{self.dim} over F_{self.p}")

    @property
    def field(self) -> FieldSpec:
        return FieldSpec.prime(self.p)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def letters(self) -> Tuple[str, ...]:
        return LETTERS if self.group is GroupKind.H1 else LETTERS[:1]


# ============ Conversions ============

def from_polynomial_matrix(m: Union[PolyMatrix, Sequence[Sequence[SparsePolynomial]]],
                           group: GroupKind) -> CoefficientFamily:
    """
    Split a matrix of polynomials into its coefficient matrices.

    Raises:
        ArityMismatchError / DimensionMismatchError: entries do not share a
        field, or their arity does not match the group
    """
    if not isinstance(m, PolyMatrix):
        rows = [list(row) for row in m]
        if not rows or not rows[0]:
            raise DimensionMismatchError("polynomial matrix must be nonempty")
        first = rows[0][0]
        m = PolyMatrix(rows, first.field, first.arity)
    if m.arity != group.arity:
        raise DimensionMismatchError(f"entries have arity {m.arity}; {group.value} needs {group.arity}")

    d = m.dim
    entries: Dict[Exponent, Dict[Tuple[int, int], Any]] = {}
    for i, j in product(range(d), repeat=2):
        for exp, c in m.entry(i, j).items():
            entries.setdefault(exp, {})[(i, j)] = c
    return CoefficientFamily(group, m.field, d, {
        exp: ExactMatrix.from_entries(d, m.field, cells) for exp, cells in entries.items()
    })


def to_polynomial_matrix(f: CoefficientFamily) -> PolyMatrix:
    """(a_ij) = sum_r c^r x^r."""
    return PolyMatrix.combination(
        ((SparsePolynomial.monomial(exp, f.field), matrix) for exp, matrix in f.coeffs.items()),
        f.dim, f.field, f.group.arity)


# ============ Verifiers ============

def _check_identity_term(f: CoefficientFamily, report: VerificationReport) -> None:
    c0 = f.matrix((0,) * f.group.arity)
    report.checked += 1
    if c0 != ExactMatrix.identity(f.dim, f.field):
        report.violations.append(Violation(
            site=((0,) * f.group.arity,),
            description="constant coefficient c^0 is not the identity",
            lhs=c0, rhs=ExactMatrix.identity(f.dim, f.field), condition='identity'))


def verify_comodule_axioms(f: CoefficientFamily) -> VerificationReport:
    """
    Check Delta(a_ij) = sum_k a_ik (x) a_kj and epsilon(a_ij) = delta_ij
    entrywise. The left side goes through polyhopf's comultiplication; the
    right side collects (c^r c^s)_ij at x^r (x) x^s, which is the
    coefficient of that term in sum_k a_ik (x) a_kj.
    """
    d, fld, group = f.dim, f.field, f.group
    with log_operation('verify_comodule_axioms', {'group': group.value, 'field': str(fld), 'dim': d,
                                                  'support': len(f.coeffs)}) as ctx:
        report = VerificationReport()
        support = f.support()
        arity2 = 2 * group.arity

        lhs: Dict[Tuple[int, int], TensorPolynomial] = {}
        for r in support:
            delta = comultiply_monomial(r, group, fld)
            for cell, v in f.coeffs[r].nonzero_entries().items():
                term = delta.scale(v)
                lhs[cell] = lhs[cell] + term if cell in lhs else term

        rhs_terms: Dict[Tuple[int, int], Dict[Exponent, Any]] = {}
        for r in support:
            for s in support:
                for cell, v in (f.coeffs[r] @ f.coeffs[s]).nonzero_entries().items():
                    bucket = rhs_terms.setdefault(cell, {})
                    bucket[r + s] = bucket.get(r + s, 0) + v

        zero = TensorPolynomial.zero(fld, arity2)
        for cell in sorted(set(lhs) | set(rhs_terms)):
            report.checked += 1
            left = lhs.get(cell, zero)
            right = TensorPolynomial(fld, arity2, rhs_terms.get(cell, {}))
            if left != right:
                i, j = cell
                report.violations.append(Violation(
                    site=(i + 1, j + 1),
                    description=f"Delta(a_{i + 1},{j + 1}) != sum_k a_{i + 1},k (x) a_k,{j + 1}",
                    lhs=left, rhs=right, condition='comultiplication'))

        # counit: epsilon(a_ij) is the constant coefficient
        c0 = f.matrix((0,) * group.arity)
        for i, j in product(range(d), repeat=2):
            report.checked += 1
            expected = fld.one if i == j else fld.zero
            if c0[i, j] != expected:
                report.violations.append(Violation(
                    site=(i + 1, j + 1),
                    description=f"epsilon(a_{i + 1},{j + 1}) = {fld.format(c0[i, j])}, "
                                f"expected {fld.format(expected)}",
                    lhs=c0[i, j], rhs=expected, condition='counit'))

        ctx['result'] = {'ok': report.ok, 'violations': len(report.violations)}
        logger.debug("comodule check over %s: %d sites, %d violations",
                     fld, report.checked, len(report.violations))
        return report


def _relation_sites_ga(support: Sequence[Exponent]) -> Set[Tuple[Exponent, Exponent]]:
    """Pairs where either side of c^r c^s = C(r+s,r) c^(r+s) can be nonzero."""
    sites = {(r, s) for r in support for s in support}
    for (n,) in support:
        sites.update(((a,), (n - a,)) for a in range(n + 1))
    return sites


def _relation_sites_h1(support: Sequence[Exponent]) -> Set[Tuple[Exponent, Exponent]]:
    """
    Pairs (s, t) where either side of the H_1 relation can be nonzero: both
    in the support (left side), or some l-term lands on a support exponent
    r = s + t + (-l, -l, l) with l <= min(s1, t2) (right side).
    """
    sites = {(s, t) for s in support for t in support}
    for r1, r2, r3 in support:
        for l in range(r3 + 1):
            for s1 in range(l, r1 + l + 1):
                for s2 in range(r2 + 1):
                    for s3 in range(r3 - l + 1):
                        sites.add(((s1, s2, s3), (r1 + l - s1, r2 + l - s2, r3 - l - s3)))
    return sites


def _require_group(f: CoefficientFamily, group: GroupKind) -> None:
    if f.group is not group:
        raise ContractViolation(f"expected a {group.value} family, got {f.group.value}")


def verify_fundamental_relation_ga(f: CoefficientFamily) -> VerificationReport:
    """
    Check c^0 = I and c^r c^s = C(r+s, r) c^(r+s) on every pair where
    either side can be nonzero. Outside those pairs both sides vanish.
    """
    _require_group(f, GroupKind.GA)
    with log_operation('verify_fundamental_relation_ga', {'field': str(f.field), 'dim': f.dim}) as ctx:
        report = VerificationReport()
        _check_identity_term(f, report)
        support = f.support()
        for s, t in sorted(_relation_sites_ga(support)):
            report.checked += 1
            left = f.matrix(s) @ f.matrix(t)
            right = f.matrix((s[0] + t[0],)).scale(binomial_in(f.field, s[0] + t[0], s[0]))
            if left != right:
                report.violations.append(Violation(
                    site=(s, t),
                    description=f"c^{s[0]} c^{t[0]} != C({s[0] + t[0]},{s[0]}) c^{s[0] + t[0]}",
                    lhs=left, rhs=right, condition='relation'))
        ctx['result'] = {'ok': report.ok, 'violations': len(report.violations)}
        return report


def h1_relation_rhs(f: CoefficientFamily, s: Exponent, t: Exponent) -> ExactMatrix:
    """
    sum_{l=0}^{min(s1,t2)} C(s1+t1-l, t1) C(s2+t2-l, s2) C(s3+t3+l; s3,t3,l)
    c^(s+t+(-l,-l,l)), coefficients taken in the family's field.
    """
    fld = f.field
    result = ExactMatrix.zeros(f.dim, fld)
    for l in range(min(s[0], t[1]) + 1):
        target = (s[0] + t[0] - l, s[1] + t[1] - l, s[2] + t[2] + l)
        if target not in f.coeffs:
            continue
        coeff = fld.element(
            binomial_in(fld, s[0] + t[0] - l, t[0])
            * binomial_in(fld, s[1] + t[1] - l, s[1])
            * multinomial_in(fld, (s[2], t[2], l)))
        if coeff != 0:
            result = result + f.coeffs[target].scale(coeff)
    return result


def verify_fundamental_relation_h1(f: CoefficientFamily) -> VerificationReport:
    """
    Check c^(0,0,0) = I and c^s c^t = sum_l (...) c^(s+t+(-l,-l,l)) on the
    exact set of pairs where either side can be nonzero, which makes the
    check sufficient as well as necessary.
    """
    _require_group(f, GroupKind.H1)
    with log_operation('verify_fundamental_relation_h1', {'field': str(f.field), 'dim': f.dim,
                                                          'support': len(f.coeffs)}) as ctx:
        report = VerificationReport()
        _check_identity_term(f, report)
        support = f.support()
        products = {(s, t): f.coeffs[s] @ f.coeffs[t] for s in support for t in support}
        zero = ExactMatrix.zeros(f.dim, f.field)
        for s, t in sorted(_relation_sites_h1(support)):
            report.checked += 1
            left = products.get((s, t), zero)
            right = h1_relation_rhs(f, s, t)
            if left != right:
                report.violations.append(Violation(
                    site=(s, t),
                    description=f"c^{s} c^{t} does not match the l-sum",
                    lhs=left, rhs=right, condition='relation'))
        ctx['result'] = {'ok': report.ok, 'violations': len(report.violations)}
        logger.debug("H1 relation check: %d sites, %d violations", report.checked, len(report.violations))
        return report


def verify_fundamental_relation(f: CoefficientFamily) -> VerificationReport:
    """Dispatch on the family's group."""
    if f.group is GroupKind.GA:
        return verify_fundamental_relation_ga(f)
    return verify_fundamental_relation_h1(f)


# ============ Frobenius layers ============

def _layer_exponents(group: GroupKind, q: int) -> Tuple[Exponent, ...]:
    if group is GroupKind.GA:
        return ((q,),)
    return ((q, 0, 0), (0, q, 0), (0, 0, q))


def extract_layers(f: CoefficientFamily) -> FrobeniusLayers:
    """
    Read X_m = c^(p^m,0,0), Y_m = c^(0,p^m,0), Z_m = c^(0,0,p^m) (G_a: X_m
    only) for every m with p^m <= the largest support coordinate.

    Raises:
        InvalidFieldError: the family is over Q
    """
    if not f.field.is_prime:
        raise InvalidFieldError("Frobenius layers are defined over F_p only")
    p = f.field.p
    bound = f.max_coordinate()
    layers: List[Tuple[ExactMatrix, ...]] = []
    q = 1
    while q <= bound:
        layers.append(tuple(f.matrix(exp) for exp in _layer_exponents(f.group, q)))
        q *= p
    while layers and all(m.is_zero() for m in layers[-1]):
        layers.pop()
    return FrobeniusLayers(f.group, p, f.dim, tuple(layers))


def _layer_identities(layers: FrobeniusLayers) -> Iterator[Tuple[str, Tuple, str, ExactMatrix, ExactMatrix]]:
    """
    Lazily yield (condition, site, identity, lhs, rhs) in check order:
    conditions (a) to (f), layers in increasing (n, m) order.
    """
    L = layers.layers
    letters = layers.letters()
    count = len(L)
    d = layers.dim
    zero = ExactMatrix.zeros(d, layers.field)

    exponent = min(layers.p, d)
    for m in range(count):
        for k, letter in enumerate(letters):
            yield 'a', (m,), f"{letter}_{m}^{layers.p} = 0", L[m][k].power(exponent), zero

    for n in range(count):
        for m in range(n + 1, count):
            for k, letter in enumerate(letters):
                yield 'b', (n, m), f"[{letter}_{n},{letter}_{m}] = 0", commutator(L[n][k], L[m][k]), zero

    if layers.group is GroupKind.GA:
        return

    for n in range(count):
        for m in range(count):
            yield 'c', (n, m), f"[Z_{n},X_{m}] = 0", commutator(L[n][2], L[m][0]), zero
            yield 'c', (n, m), f"[Z_{n},Y_{m}] = 0", commutator(L[n][2], L[m][1]), zero

    for m in range(count):
        yield 'd', (m,), f"[X_{m},Y_{m}] = Z_{m}", commutator(L[m][0], L[m][1]), L[m][2]

    for n in range(count):
        for m in range(count):
            if n != m:
                yield 'e', (n, m), f"[X_{n},Y_{m}] = 0", commutator(L[n][0], L[m][1]), zero

    for n in range(count):
        for m in range(n + 1, count):
            for a, b in product(range(3), repeat=2):
                yield ('f', (n, m), f"[{letters[a]}_{n},{letters[b]}_{m}] = 0",
                       commutator(L[n][a], L[m][b]), zero)


def check_layer_relations(layers: FrobeniusLayers,
                          mode: CheckMode = CheckMode.REPORT) -> VerificationReport:
    """
    Check the layer identities:
      (a) every layer matrix is p-nilpotent
      (b) same-letter matrices of different layers commute
      (c) [Z_n, X_m] = [Z_n, Y_m] = 0 for all n, m
      (d) [X_m, Y_m] = Z_m
      (e) [X_n, Y_m] = 0 for n != m
      (f) all matrices of distinct layers commute
    G_a layers are checked for (a) and (b) only. STRICT stops at the first
    failure; REPORT lists every failed identity (so (f) may repeat failures
    already reported under (b), (c) or (e)).
    """
    with log_operation('check_layer_relations', {'group': layers.group.value, 'p': layers.p,
                                                 'dim': layers.dim, 'depth': layers.depth,
                                                 'mode': mode.value}) as ctx:
        report = VerificationReport()
        for condition, site, identity, lhs, rhs in _layer_identities(layers):
            report.checked += 1
            if lhs != rhs:
                report.violations.append(Violation(
                    site=site, description=f"({condition}) {identity} fails",
                    lhs=lhs, rhs=rhs, condition=condition))
                if mode is CheckMode.STRICT:
                    break
        ctx['result'] = {'ok': report.ok,
                         'failed': [v.condition for v in report.violations][:20]}
        return report
