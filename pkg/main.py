"""
Heisenberg Representation Toolkit
Command-line tool for constructing, verifying, factoring and searching
finite-dimensional representations of G_a and H_1 over F_p and Q.

Usage:
    python main.py [--json] [--quiet] [--log-level LEVEL] COMMAND ...

Example:
    python main.py coalg --group H1 --char 2 --max-degree 2 --out m10.json
    python main.py verify m10.json --mode both
    python main.py factor m10.json --out layers.json --check
    python main.py search --char 3 --dim 2 --budget 1000 --seed 42
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from exactlinalg import DimensionMismatchError, FactorialNotInvertibleError, NotNilpotentError
from file_formats import (FileFormatError, dumps_lie, dumps_rep, read_lie_file, read_rep_file,
                          write_lie_file, write_rep_file)
from generators import direct_sum, monomial_coalgebra_rep, tensor_product
from polyhopf import ArityMismatchError, GroupKind
from repcore import (CheckMode, CoefficientFamily, VerificationReport, check_layer_relations,
                     extract_layers, from_polynomial_matrix, verify_comodule_axioms,
                     verify_fundamental_relation)
from runtime.audit_logger import audit_log
from runtime.config import get_runtime_config
from scalars import ContractViolation, FieldSpec, InvalidFieldError
from search import GENERATOR_KINDS, SearchConfig, SearchConfigError, run_conjecture_search
from structure import HypothesisViolation, construct_h1_charp, exponential_form_h1

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_SEARCH_VIOLATION = 3

USAGE_ERRORS = (FileFormatError, InvalidFieldError, SearchConfigError, ContractViolation,
                DimensionMismatchError, ArityMismatchError, OSError)
HYPOTHESIS_ERRORS = (HypothesisViolation, NotNilpotentError, FactorialNotInvertibleError)


def _say(args, text: str = "") -> None:
    """Human-readable output; silenced by --quiet and --json."""
    if not args.quiet and not args.json:
        print(text)


def _emit_json(args, payload: Dict[str, Any]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))


def _write_rep(args, family: CoefficientFamily) -> None:
    if args.out:
        write_rep_file(family, args.out)
        _say(args, f"✅ Wrote {family.group.value} representation over {family.field} "
                   f"(dim {family.dim}, {len(family.coeffs)} coefficient matrices) to {args.out}")
    elif not args.json:
        sys.stdout.write(dumps_rep(family))


def _print_report(args, title: str, report: VerificationReport, limit: int = 20) -> None:
    status = "✅ ok" if report.ok else f"❌ {len(report.violations)} violation(s)"
    _say(args, f"  {title}: {status} ({report.checked} identities checked)")
    for violation in report.violations[:limit]:
        site = ", ".join(str(s) for s in violation.site)
        _say(args, f"     at ({site}): {violation.description}")
    if len(report.violations) > limit:
        _say(args, f"     ... {len(report.violations) - limit} more")


# ============ Commands ============

@audit_log
def cmd_verify(args) -> int:
    family = read_rep_file(args.rep)
    reports = {}
    if args.mode in ('axioms', 'both'):
        reports['axioms'] = verify_comodule_axioms(family)
    if args.mode in ('relation', 'both'):
        reports['relation'] = verify_fundamental_relation(family)

    _say(args, "\n" + "=" * 60)
    _say(args, f"  VERIFY: {args.rep} ({family.group.value} over {family.field}, dim {family.dim})")
    _say(args, "=" * 60)
    for name, report in reports.items():
        _print_report(args, "comodule axioms" if name == 'axioms' else "fundamental relation", report)
    _emit_json(args, {name: report.to_dict() for name, report in reports.items()})
    return EXIT_OK if all(r.ok for r in reports.values()) else EXIT_VIOLATION


@audit_log
def cmd_construct(args) -> int:
    layers = read_lie_file(args.lie)
    family = construct_h1_charp(layers)
    _write_rep(args, family)
    _emit_json(args, {'dimension': family.dim, 'support': [list(e) for e in family.support()]})
    return EXIT_OK


@audit_log
def cmd_expform(args) -> int:
    layers = read_lie_file(args.lie)
    family = from_polynomial_matrix(exponential_form_h1(layers), GroupKind.H1)
    _write_rep(args, family)
    _emit_json(args, {'dimension': family.dim, 'support': [list(e) for e in family.support()]})
    return EXIT_OK


@audit_log
def cmd_factor(args) -> int:
    family = read_rep_file(args.rep)
    layers = extract_layers(family)
    if args.out:
        write_lie_file(layers, args.out)
        _say(args, f"✅ Wrote {layers.depth} layer(s) to {args.out}")
    elif not args.json:
        sys.stdout.write(dumps_lie(layers))

    if not args.check:
        _emit_json(args, {'layers': layers.depth})
        return EXIT_OK
    report = check_layer_relations(layers, CheckMode.REPORT)
    _print_report(args, "layer relations", report)
    _emit_json(args, {'layers': layers.depth, 'relations': report.to_dict()})
    return EXIT_OK if report.ok else EXIT_VIOLATION


@audit_log
def cmd_coalg(args) -> int:
    field = FieldSpec.rational() if args.rational else FieldSpec.prime(args.char)
    group = GroupKind.parse(args.group)
    family = monomial_coalgebra_rep(field, group, args.max_degree, args.variables)
    _write_rep(args, family)
    _emit_json(args, {'dimension': family.dim, 'support': len(family.coeffs)})
    return EXIT_OK


def _combine(args, combine) -> int:
    if len(args.rep) != 2:
        raise ContractViolation("exactly two --rep inputs are required")
    left, right = (read_rep_file(path) for path in args.rep)
    family = combine(left, right)
    _write_rep(args, family)
    _emit_json(args, {'dimension': family.dim, 'support': len(family.coeffs)})
    return EXIT_OK


@audit_log
def cmd_tensor(args) -> int:
    return _combine(args, tensor_product)


@audit_log
def cmd_sum(args) -> int:
    return _combine(args, direct_sum)


def _parse_mix(text: Optional[str]) -> Dict[str, float]:
    """'coalgebra=1,tensor=0.5' -> weights; unnamed kinds get weight 0."""
    if not text:
        return {k: 1.0 for k in GENERATOR_KINDS}
    mix = {k: 0.0 for k in GENERATOR_KINDS}
    for part in text.split(','):
        name, _, weight = part.partition('=')
        try:
            mix[name.strip()] = float(weight) if weight else 1.0
        except ValueError:
            raise SearchConfigError(f"invalid weight in --mix: {part!r}") from None
    return mix


@audit_log
def cmd_search(args) -> int:
    options = {}
    if args.variables:
        options['variable_sets'] = tuple(v.strip() for v in args.variables.split(','))
    cfg = SearchConfig(
        p=args.char,
        target_dim=args.dim,
        budget=args.budget,
        seed=args.seed,
        mix=_parse_mix(args.mix),
        fail_fast=args.fail_fast,
        min_dim=args.min_dim,
        twists=args.twists,
        workers=args.workers,
        **options,
    )
    report = run_conjecture_search(cfg)

    _say(args, "\n" + "=" * 60)
    _say(args, f"  CONJECTURE SEARCH: p={cfg.p}, dim <= {cfg.target_dim}, seed={cfg.seed}")
    _say(args, "=" * 60)
    _say(args, f"  Candidates examined: {report.candidates_examined}"
               f"{' (corpus exhausted)' if report.exhausted else ''}")
    _say(args, f"  Violations: {len(report.violations)}")
    _say(args, f"  Internal errors: {len(report.internal_errors)}")
    if report.violations or report.internal_errors:
        _say(args, "\n" + report.to_frame().to_string(index=False))
    _say(args, "\n  ⚠️  " + report.caveat)
    _emit_json(args, report.to_dict())

    if report.internal_errors:
        return EXIT_VIOLATION
    if report.violations and args.fail_on_violation:
        return EXIT_SEARCH_VIOLATION
    return EXIT_OK


# ============ Argument parsing ============

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='heisenrep',
        description='Construct, verify, factor and search representations of G_a and H_1.')
    parser.add_argument('--json', action='store_true', help='machine-readable report on stdout')
    parser.add_argument('--quiet', action='store_true', help='no human-readable output')
    parser.add_argument('--log-level', default=None,
                        help='logging level (default from HEISENREP_LOG_LEVEL)')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('verify', help='run the comodule and/or fundamental-relation verifier')
    p.add_argument('rep')
    p.add_argument('--mode', choices=('axioms', 'relation', 'both'), default='both')
    p.set_defaults(handler=cmd_verify)

    for name, handler, text in (('construct', cmd_construct, 'build the representation from Lie-layer data'),
                                ('expform', cmd_expform, 'evaluate the exponential-product form')):
        p = commands.add_parser(name, help=text)
        p.add_argument('lie')
        p.add_argument('--out')
        p.set_defaults(handler=handler)

    p = commands.add_parser('factor', help='extract Frobenius layers from an F_p representation')
    p.add_argument('rep')
    p.add_argument('--out')
    p.add_argument('--check', action='store_true', help='also check the layer relations')
    p.set_defaults(handler=cmd_factor)

    p = commands.add_parser('coalg', help='monomial sub-coalgebra representation')
    p.add_argument('--group', default='H1', choices=('Ga', 'H1'))
    field = p.add_mutually_exclusive_group(required=True)
    field.add_argument('--char', type=int, help='prime characteristic p')
    field.add_argument('--rational', action='store_true', help='work over Q')
    p.add_argument('--max-degree', type=int, required=True)
    p.add_argument('--variables', default=None, help='Delta-closed variable subset (x, y, xy, xz, xyz)')
    p.add_argument('--out')
    p.set_defaults(handler=cmd_coalg)

    for name, handler, text in (('tensor', cmd_tensor, 'tensor product of two representations'),
                                ('sum', cmd_sum, 'direct sum of two representations')):
        p = commands.add_parser(name, help=text)
        p.add_argument('--rep', action='append', required=True)
        p.add_argument('--out')
        p.set_defaults(handler=handler)

    p = commands.add_parser('search', help='seeded search for layer-condition violations')
    p.add_argument('--char', type=int, required=True)
    p.add_argument('--dim', type=int, default=None, help='target dimension (default (p+1)/2)')
    p.add_argument('--min-dim', type=int, default=1)
    p.add_argument('--budget', type=int, default=None)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--mix', default=None, help="generator weights, e.g. 'coalgebra=1,sum=0.5'")
    p.add_argument('--variables', default=None, help="comma-separated variable sets, e.g. 'x,y,xyz'")
    p.add_argument('--twists', type=int, default=1)
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--fail-fast', action='store_true')
    p.add_argument('--fail-on-violation', action='store_true')
    p.set_defaults(handler=cmd_search)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    level = (args.log_level or get_runtime_config().log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        return args.handler(args)
    except USAGE_ERRORS as e:
        print(f"\n❌ Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HYPOTHESIS_ERRORS as e:
        print(f"\n❌ {e}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
