"""
File Formats Module
Canonical JSON readers and writers for representation files (RepFile) and
Lie-layer files (LieFile).

RepFile:
    {"format_version": 1, "group": "H1", "field": {"kind": "prime", "p": 3},
     "dimension": 6,
     "coefficients": [{"exponent": [1, 0, 1], "entries": [[1, 6, "2"]]}, ...]}

LieFile:
    {"format_version": 1, "p": 7, "dimension": 3,
     "layers": [{"X": [["0", "1", "0"], ...], "Y": [...], "Z": [...]}, ...]}

Matrix indices are 1-based. Writers emit exponents in lexicographic order,
entries by (row, col) and values in canonical form, so equal objects give
byte-identical files.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from exactlinalg import ExactMatrix
from polyhopf import GroupKind
from repcore import CoefficientFamily, FrobeniusLayers, LETTERS
from scalars import FieldSpec, InvalidFieldError
from structure import LieLayerData

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class FileFormatError(ValueError):
    """Raised for a malformed file; ``field`` locates the failure."""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


def _expect(condition: bool, message: str, field: str) -> None:
    if not condition:
        raise FileFormatError(message, field)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _parse_json(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FileFormatError(e.msg, f"line {e.lineno}, column {e.colno}") from e
    _expect(isinstance(data, dict), "top level must be an object", "$")
    _expect(data.get('format_version') == FORMAT_VERSION,
            f"unsupported format_version {data.get('format_version')!r}", "format_version")
    return data


def _parse_value(field: FieldSpec, text: Any, where: str):
    _expect(isinstance(text, str), "values must be strings", where)
    try:
        value = field.parse(text)
    except ValueError as e:
        raise FileFormatError(str(e), where) from e
    _expect(field.format(value) == text, f"value {text!r} is not in canonical form", where)
    return value


def _dump(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2) + "\n"


def _read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise FileFormatError(f"not valid UTF-8 ({e.reason})", f"byte {e.start}") from e


# ============ RepFile ============

def _field_to_dict(field: FieldSpec) -> Dict[str, Any]:
    return {'kind': 'prime', 'p': field.p} if field.is_prime else {'kind': 'rational'}


def _field_from_dict(data: Any) -> FieldSpec:
    _expect(isinstance(data, dict), "field must be an object", "field")
    kind = data.get('kind')
    if kind == 'rational':
        return FieldSpec.rational()
    _expect(kind == 'prime', f"unknown field kind {kind!r}", "field.kind")
    _expect(_is_int(data.get('p')), "p must be an integer", "field.p")
    try:
        return FieldSpec.prime(data['p'])
    except InvalidFieldError as e:
        raise FileFormatError(str(e), "field.p") from e


def rep_to_dict(family: CoefficientFamily) -> Dict[str, Any]:
    fld = family.field
    coefficients = []
    for exp in sorted(family.coeffs):
        entries = [[i + 1, j + 1, fld.format(v)]
                   for (i, j), v in sorted(family.coeffs[exp].nonzero_entries().items())]
        coefficients.append({'exponent': list(exp), 'entries': entries})
    return {
        'format_version': FORMAT_VERSION,
        'group': family.group.value,
        'field': _field_to_dict(fld),
        'dimension': family.dim,
        'coefficients': coefficients,
    }


def dumps_rep(family: CoefficientFamily) -> str:
    """Canonical RepFile text."""
    return _dump(rep_to_dict(family))


def loads_rep(text: str) -> CoefficientFamily:
    """
    Parse RepFile text.

    Raises:
        FileFormatError: malformed JSON or schema violation, with its location
    """
    data = _parse_json(text)
    try:
        group = GroupKind.parse(str(data.get('group', '')))
    except ValueError as e:
        raise FileFormatError(str(e), "group") from e
    fld = _field_from_dict(data.get('field'))
    d = data.get('dimension')
    _expect(_is_int(d) and d >= 1, "dimension must be a positive integer", "dimension")
    coefficients = data.get('coefficients')
    _expect(isinstance(coefficients, list), "coefficients must be a list", "coefficients")

    coeffs = {}
    previous = None
    for k, item in enumerate(coefficients):
        where = f"coefficients[{k}]"
        _expect(isinstance(item, dict), "coefficient must be an object", where)
        exp = item.get('exponent')
        _expect(isinstance(exp, list) and len(exp) == group.arity
                and all(_is_int(e) and e >= 0 for e in exp),
                f"exponent must be {group.arity} nonnegative integers", f"{where}.exponent")
        exp = tuple(exp)
        _expect(previous is None or exp > previous,
                f"exponent {list(exp)} is a duplicate or out of order", f"{where}.exponent")
        previous = exp

        entries = item.get('entries')
        _expect(isinstance(entries, list), "entries must be a list", f"{where}.entries")
        _expect(len(entries) > 0, "zero coefficient matrices are not stored", f"{where}.entries")
        cells = {}
        last = None
        for n, entry in enumerate(entries):
            at = f"{where}.entries[{n}]"
            _expect(isinstance(entry, list) and len(entry) == 3, "entry must be [row, col, value]", at)
            row, col, text = entry
            _expect(_is_int(row) and _is_int(col) and 1 <= row <= d and 1 <= col <= d,
                    f"indices must lie in 1..{d}", at)
            _expect(last is None or (row, col) > last, f"entry ({row},{col}) is a duplicate or out of order", at)
            last = (row, col)
            value = _parse_value(fld, text, at)
            _expect(value != 0, "zero entries are not stored", at)
            cells[(row - 1, col - 1)] = value
        coeffs[exp] = ExactMatrix.from_entries(d, fld, cells)

    return CoefficientFamily(group, fld, d, coeffs)


def write_rep_file(family: CoefficientFamily, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_rep(family), encoding='utf-8')
    logger.info("wrote %s representation (dim %d) to %s", family.group.value, family.dim, path)


def read_rep_file(path: Union[str, Path]) -> CoefficientFamily:
    return loads_rep(_read_text(path))


# ============ LieFile ============

def _dense(matrix: ExactMatrix) -> List[List[str]]:
    return [[matrix.field.format(v) for v in row] for row in matrix.rows()]


def lie_to_dict(layers: Union[LieLayerData, FrobeniusLayers]) -> Dict[str, Any]:
    """
    Serialize Lie-layer data, or extracted layers of either group. G_a
    layers carry only "X" and add "group": "Ga".
    """
    if isinstance(layers, LieLayerData):
        letters, triples = LETTERS, layers.triples
        group = GroupKind.H1
    else:
        letters, triples, group = layers.letters(), layers.layers, layers.group
    data: Dict[str, Any] = {'format_version': FORMAT_VERSION}
    if group is GroupKind.GA:
        data['group'] = group.value
    data['p'] = layers.p
    data['dimension'] = layers.dim
    data['layers'] = [{letter: _dense(m) for letter, m in zip(letters, triple)} for triple in triples]
    return data


def dumps_lie(layers: Union[LieLayerData, FrobeniusLayers]) -> str:
    return _dump(lie_to_dict(layers))


def _parse_dense(fld: FieldSpec, d: int, rows: Any, where: str) -> ExactMatrix:
    _expect(isinstance(rows, list) and len(rows) == d, f"matrix must have {d} rows", where)
    values = []
    for i, row in enumerate(rows):
        _expect(isinstance(row, list) and len(row) == d, f"row must have {d} entries", f"{where}[{i}]")
        values.append([_parse_value(fld, v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    return ExactMatrix(values, fld)


def loads_layers(text: str) -> FrobeniusLayers:
    """Parse a LieFile of either group into plain (unvalidated) layers."""
    data = _parse_json(text)
    try:
        group = GroupKind.parse(str(data.get('group', 'H1')))
    except ValueError as e:
        raise FileFormatError(str(e), "group") from e
    _expect(_is_int(data.get('p')), "p must be an integer", "p")
    try:
        fld = FieldSpec.prime(data['p'])
    except InvalidFieldError as e:
        raise FileFormatError(str(e), "p") from e
    d = data.get('dimension')
    _expect(_is_int(d) and d >= 1, "dimension must be a positive integer", "dimension")
    layers = data.get('layers')
    _expect(isinstance(layers, list), "layers must be a list", "layers")

    letters = LETTERS if group is GroupKind.H1 else LETTERS[:1]
    parsed = []
    for m, layer in enumerate(layers):
        where = f"layers[{m}]"
        _expect(isinstance(layer, dict) and set(layer) == set(letters),
                f"layer must have exactly the keys {', '.join(letters)}", where)
        parsed.append(tuple(_parse_dense(fld, d, layer[letter], f"{where}.{letter}") for letter in letters))
    return FrobeniusLayers(group, fld.p, d, tuple(parsed))


def loads_lie(text: str) -> LieLayerData:
    """
    Parse an H_1 LieFile into validated Lie-layer data.

    Raises:
        FileFormatError: malformed file or a G_a layer file
        HypothesisViolation: the layers fail a bracket or nilpotency identity
    """
    layers = loads_layers(text)
    _expect(layers.group is GroupKind.H1, "Lie-layer data needs H1 layers", "group")
    return LieLayerData(layers.p, layers.dim, layers.layers)


def write_lie_file(layers: Union[LieLayerData, FrobeniusLayers], path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_lie(layers), encoding='utf-8')
    logger.info("wrote %d layer(s) to %s", len(lie_to_dict(layers)['layers']), path)


def read_lie_file(path: Union[str, Path]) -> LieLayerData:
    return loads_lie(_read_text(path))
