"""
Polynomial Hopf Module
Sparse multivariate polynomials over a FieldSpec, their tensor squares, and
the Hopf structure (comultiplication, counit) of G_a = k[x] and
H_1 = k[x, y, z].

comultiply() is computed as a product of generator images, never through
the closed multinomial formula, so it can serve as an independent oracle
for the fundamental relations checked in repcore.
"""

from enum import Enum
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

from scalars import FieldSpec, Scalar

Exponent = Tuple[int, ...]


class ArityMismatchError(ValueError):
    """Raised when polynomials of different arity or field are combined."""


class GroupKind(Enum):
    GA = "Ga"
    H1 = "H1"

    @property
    def arity(self) -> int:
        return 1 if self is GroupKind.GA else 3

    @property
    def variables(self) -> Tuple[str, ...]:
        return ('x',) if self is GroupKind.GA else ('x', 'y', 'z')

    @classmethod
    def parse(cls, text: str) -> 'GroupKind':
        for kind in cls:
            if kind.value.lower() == text.strip().lower():
                return kind
        raise ValueError(f"unknown group {text!r} (expected 'Ga' or 'H1')")


def _variable_names(arity: int) -> Tuple[str, ...]:
    if arity == 1:
        return ('x',)
    if arity == 3:
        return ('x', 'y', 'z')
    return tuple(f"t{i}" for i in range(arity))


def _format_monomial(exp: Exponent, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


class SparsePolynomial:
    """
    Finitely supported map exponent-vector -> nonzero Scalar.

    Instances are immutable; zero coefficients are never stored, so equality
    is equality of the term maps.
    """

    __slots__ = ('field', 'arity', '_terms', '_hash')

    def __init__(self, field: FieldSpec, arity: int,
                 terms: Optional[Mapping[Exponent, Union[Scalar, str]]] = None):
        clean = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != arity or any(e < 0 for e in exp):
                raise ArityMismatchError(f"exponent {exp} does not fit arity {arity}")
            value = field.element(coeff)
            if value != 0:
                clean[exp] = value
        self._init(field, arity, clean)

    def _init(self, field: FieldSpec, arity: int, terms: Dict[Exponent, Scalar]) -> None:
        self.field = field
        self.arity = arity
        self._terms = terms
        self._hash = None

    def _like(self, terms: Dict[Exponent, Scalar]) -> 'SparsePolynomial':
        """Build a polynomial of the same kind from already-canonical terms."""
        obj = object.__new__(type(self))
        obj._init(self.field, self.arity, terms)
        return obj

    # Constructors

    @classmethod
    def zero(cls, field: FieldSpec, arity: int) -> 'SparsePolynomial':
        return cls(field, arity)

    @classmethod
    def constant(cls, value: Scalar, field: FieldSpec, arity: int) -> 'SparsePolynomial':
        return cls(field, arity, {(0,) * arity: value})

    @classmethod
    def monomial(cls, exp: Sequence[int], field: FieldSpec, coeff: Scalar = 1) -> 'SparsePolynomial':
        return cls(field, len(exp), {tuple(exp): coeff})

    @classmethod
    def variable(cls, index: int, field: FieldSpec, arity: int) -> 'SparsePolynomial':
        exp = [0] * arity
        exp[index] = 1
        return cls(field, arity, {tuple(exp): 1})

    # Accessors

    @property
    def terms(self) -> Mapping[Exponent, Scalar]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Scalar]]:
        return iter(self._terms.items())

    def coefficient(self, exp: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exp), self.field.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(exp) for exp in self._terms), default=-1)

    # Arithmetic

    def _coerce(self, other) -> 'SparsePolynomial':
        if isinstance(other, SparsePolynomial):
            if other.arity != self.arity or other.field != self.field:
                raise ArityMismatchError(
                    f"cannot combine arity {self.arity} over {self.field} "
                    f"with arity {other.arity} over {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            value = self.field.element(other)
            return self._like({(0,) * self.arity: value} if value != 0 else {})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        reduce = _reducer(self.field)
        for exp, c in other._terms.items():
            value = reduce(terms.get(exp, 0) + c)
            if value:
                terms[exp] = value
            else:
                terms.pop(exp, None)
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        reduce = _reducer(self.field)
        return self._like({exp: reduce(-c) for exp, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        reduce = _reducer(self.field)
        terms: Dict[Exponent, Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                terms[exp] = terms.get(exp, 0) + c1 * c2
        return self._like({exp: v for exp, v in ((e, reduce(c)) for e, c in terms.items()) if v})

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> 'SparsePolynomial':
        c = self.field.element(c)
        if c == 0:
            return self._like({})
        reduce = _reducer(self.field)
        return self._like({exp: reduce(v * c) for exp, v in self._terms.items()})

    def __pow__(self, n: int) -> 'SparsePolynomial':
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self._like({(0,) * self.arity: self.field.one})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def substitute_frobenius(self, q: int) -> 'SparsePolynomial':
        """Apply x -> x^q to every variable (a ring endomorphism)."""
        return self._like({tuple(e * q for e in exp): c for exp, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return (self.arity == other.arity and self.field == other.field
                and self._terms == other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, self.field, frozenset(self._terms.items())))
        return self._hash

    def _names(self) -> Tuple[str, ...]:
        return _variable_names(self.arity)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = self._names()
        out = []
        for exp in sorted(self._terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            coeff = self.field.format(self._terms[exp])
            mono = _format_monomial(exp, names)
            if not mono:
                out.append(coeff)
            elif coeff == "1":
                out.append(mono)
            else:
                out.append(f"{coeff}*{mono}")
        return " + ".join(out)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self}, {self.field})"


def _reducer(field: FieldSpec):
    if field.is_prime:
        p = field.p
        return lambda v: v % p
    return lambda v: v


class TensorPolynomial(SparsePolynomial):
    """
    Element of A (x) A stored over concatenated exponent vectors: the first
    ``factor_arity`` coordinates belong to the left factor.
    """

    __slots__ = ()

    @property
    def factor_arity(self) -> int:
        return self.arity // 2

    def factor_terms(self) -> Iterator[Tuple[Tuple[Exponent, Exponent], Scalar]]:
        k = self.factor_arity
        for exp, c in self._terms.items():
            yield (exp[:k], exp[k:]), c

    def counit_left(self) -> SparsePolynomial:
        """(epsilon (x) id): keep terms whose left factor is constant."""
        k = self.factor_arity
        return SparsePolynomial(self.field, k, {exp[k:]: c for exp, c in self._terms.items()
                                                if not any(exp[:k])})

    def counit_right(self) -> SparsePolynomial:
        """(id (x) epsilon): keep terms whose right factor is constant."""
        k = self.factor_arity
        return SparsePolynomial(self.field, k, {exp[:k]: c for exp, c in self._terms.items()
                                                if not any(exp[k:])})

    def _names(self) -> Tuple[str, ...]:
        names = _variable_names(self.factor_arity)
        return tuple(n + "1" for n in names) + tuple(n + "2" for n in names)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = _variable_names(self.factor_arity)
        out = []
        for (s, t), c in sorted(self.factor_terms()):
            left = _format_monomial(s, names) or "1"
            right = _format_monomial(t, names) or "1"
            coeff = self.field.format(c)
            prefix = "" if coeff == "1" else f"{coeff}*"
            out.append(f"{prefix}{left}(x){right}")
        return " + ".join(out)


def tensor(f: SparsePolynomial, g: SparsePolynomial) -> TensorPolynomial:
    """f (x) g."""
    if f.arity != g.arity or f.field != g.field:
        raise ArityMismatchError("tensor factors must share arity and field")
    reduce = _reducer(f.field)
    terms = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            terms[e1 + e2] = reduce(c1 * c2)
    result = object.__new__(TensorPolynomial)
    result._init(f.field, 2 * f.arity, {e: c for e, c in terms.items() if c})
    return result


def _generator_images(group: GroupKind, field: FieldSpec) -> Tuple[TensorPolynomial, ...]:
    def image(*exps):
        return TensorPolynomial(field, 2 * group.arity, {e: 1 for e in exps})

    if group is GroupKind.GA:
        return (image((1, 0), (0, 1)),)
    return (
        image((1, 0, 0, 0, 0, 0), (0, 0, 0, 1, 0, 0)),
        image((0, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0)),
        # z -> z(x)1 + x(x)y + 1(x)z
        image((0, 0, 1, 0, 0, 0), (1, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
    )


@lru_cache(maxsize=4096)
def _generator_power(group: GroupKind, field: FieldSpec, index: int, k: int) -> TensorPolynomial:
    return _generator_images(group, field)[index] ** k


@lru_cache(maxsize=8192)
def comultiply_monomial(exp: Exponent, group: GroupKind, field: FieldSpec) -> TensorPolynomial:
    """Delta(x^exp) as the product of the generator images' powers."""
    result = TensorPolynomial.constant(1, field, 2 * group.arity)
    for index, k in enumerate(exp):
        if k:
            result = result * _generator_power(group, field, index, k)
    return result


def comultiply(f: SparsePolynomial, group: GroupKind) -> TensorPolynomial:
    """
    Comultiplication Delta extended to f as an algebra map.

    Raises:
        ArityMismatchError: f does not live in the group's coordinate ring
    """
    if f.arity != group.arity:
        raise ArityMismatchError(f"polynomial of arity {f.arity} is not in the {group.value} Hopf algebra")
    result = TensorPolynomial.zero(f.field, 2 * group.arity)
    for exp, c in f.items():
        result = result + comultiply_monomial(exp, group, f.field).scale(c)
    return result


def counit(f: SparsePolynomial) -> Scalar:
    """epsilon(f): every generator maps to 0, so this is the constant term."""
    return f.coefficient((0,) * f.arity)
