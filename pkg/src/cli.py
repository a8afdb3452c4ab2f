"""
etalg command line.

Every command prints one JSON document on stdout and a short summary on
stderr. Exit codes: 0 ok, 1 validation failure, 2 schema error (including
unknown commands), 3 internal assertion.
"""

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .algebra.catalog import CATALOG
from .algebra.ktheory import k_theory
from .algebra.presentation import Presentation, decompose_minimal, require_valid, validate_presentation
from .config import Settings, load_settings
from .discretization.collapse import collapse_summary, discretize, verify_collapse
from .errors import EXIT_INTERNAL, EXIT_OK, EXIT_VALIDATION, EtalgError, SchemaError
from .export.codec import (
    certificate_to_dict,
    closedset_to_dict,
    decode_rational,
    dumps,
    loads,
    parse_chain,
    parse_closedset,
    parse_pattern,
    parse_presentation,
    parse_spectrum,
    presentation_to_dict,
)
from .export.dot import presentation_dot, stages_dot
from .logging.config import LoggerConfig
from .logging.correlation import CorrelationContext
from .logging.progress import ProgressTracker
from .patterns.homs import validate_pattern
from .patterns.operations import is_injective
from .patterns.pairing import pair_spectra
from .perturbation.bridge import random_bridge_instance, unitary_bridge
from .restriction.restrict import audit_restriction, restrict_algebra
from .rewriter.chain import audit_certificate, rewrite_chain
from .selftest.suites import SUITES, run_selftest
from .spectrum.index_sets import index_sets
from .storage.database import CertificateStore

logger = logging.getLogger(__name__)

Outcome = Tuple[Dict[str, Any], List[str], int]


# ------------------------------------------------------------------ inputs

def read_json(path: str) -> Any:
    """
    Raises:
        SchemaError: if the file is missing or not JSON
    """
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def load_presentation(source: str) -> Presentation:
    """A presentation file, or a catalog name such as P_DD."""
    if source in CATALOG and not Path(source).exists():
        return CATALOG[source]()
    return parse_presentation(read_json(source))


def rational_arg(text: str) -> Fraction:
    try:
        return decode_rational(text, "")
    except SchemaError as exc:
        raise argparse.ArgumentTypeError(exc.message) from exc


def _write_dot(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text, encoding='utf-8')


# ---------------------------------------------------------------- commands

def cmd_inspect(args: argparse.Namespace, settings: Settings) -> Outcome:
    P = load_presentation(args.presentation)
    report = validate_presentation(P)
    payload = {'schema': 'inspect/v1', 'presentation': presentation_to_dict(P), **report.to_dict()}
    if report.ok:
        payload.update({'p': P.p, 'l': P.l, 'L': P.L, 'summands': len(decompose_minimal(P))})
        _write_dot(args.dot, presentation_dot(P))
    lines = [f"p={P.p}, l={P.l}, unital={P.unital}",
             "valid" if report.ok else f"{len(report.violations)} violations"]
    lines += [f"  {v.invariant}{list(v.index)}: {v.message}" for v in report.violations]
    return payload, lines, EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_ktheory(args: argparse.Namespace, settings: Settings) -> Outcome:
    P = load_presentation(args.presentation)
    result = k_theory(P)
    _write_dot(args.dot, presentation_dot(P))
    lines = [f"K0 = Z^{result.k0_rank}", f"K1 invariant factors: {list(result.k1_invariant_factors) or 'none'}"]
    return {'schema': 'ktheory/v1', **result.to_dict()}, lines, EXIT_OK


def cmd_decompose(args: argparse.Namespace, settings: Settings) -> Outcome:
    P = load_presentation(args.presentation)
    parts = decompose_minimal(P)
    _write_dot(args.dot, stages_dot([Q for Q, _ in parts], name="summands"))
    payload = {'schema': 'decomposition/v1',
               'summands': [{'presentation': presentation_to_dict(Q), 'blocks': m.to_dict()} for Q, m in parts]}
    return payload, [f"{len(parts)} minimal summands"], EXIT_OK


def cmd_restrict(args: argparse.Namespace, settings: Settings) -> Outcome:
    P = load_presentation(args.presentation)
    require_valid(P)
    Z = parse_closedset(read_json(args.closedset))
    result = restrict_algebra(P, Z)
    audit = audit_restriction(result, samples=settings.restriction_samples)
    _write_dot(args.dot, presentation_dot(result.B, name="restriction"))
    payload = {
        'schema': 'restriction/v1',
        'presentation': presentation_to_dict(result.B),
        'index_sets': result.sets.to_dict(),
        'correspondence': result.correspondence(),
        'audit': audit.to_dict(),
    }
    lines = [f"B: k={list(result.B.k)}, dims={list(result.B.dims)}",
             "audit passed" if audit.ok else f"audit failed: {audit.violations[0].message}"]
    return payload, lines, EXIT_OK if audit.ok else EXIT_INTERNAL


def cmd_discretize(args: argparse.Namespace, settings: Settings) -> Outcome:
    P = load_presentation(args.presentation)
    require_valid(P)
    Y = parse_closedset(read_json(args.closedset))
    index_sets(P, Y)
    Z, rho = discretize(P, Y, args.delta)
    audit = verify_collapse(rho)
    payload = {'schema': 'discretization/v1', 'Z': closedset_to_dict(Z), 'rho': rho.to_dict(),
               'components': collapse_summary(rho), 'audit': audit.to_dict()}
    lines = [f"m={rho.m}, Z={Z}", "audit passed" if audit.ok else f"audit failed: {audit.violations[0].message}"]
    return payload, lines, EXIT_OK if audit.ok else EXIT_INTERNAL


def cmd_pair(args: argparse.Namespace, settings: Settings) -> Outcome:
    P = load_presentation(args.presentation)
    require_valid(P)
    S_phi = parse_spectrum(read_json(args.first))
    S_psi = parse_spectrum(read_json(args.second))
    result = pair_spectra(P, S_phi, S_psi, args.eps, args.m)
    lines = [f"eta=1/{args.m}, max gap {result.max_gap}", "within 2 eta" if result.ok else "exceeds 2 eta"]
    return {'schema': 'pairing/v1', **result.to_dict()}, lines, EXIT_OK if result.ok else EXIT_VALIDATION


def cmd_check_injective(args: argparse.Namespace, settings: Settings) -> Outcome:
    phi = parse_pattern(read_json(args.pattern))
    report = validate_pattern(phi)
    if not report.ok:
        payload = {'schema': 'injectivity/v1', 'valid': False, **report.to_dict()}
        return payload, [f"invalid pattern: {report.violations[0].message}"], EXIT_VALIDATION
    witness = is_injective(phi)
    payload = {'schema': 'injectivity/v1', 'valid': True, **witness.to_dict()}
    return payload, ["injective" if witness else "not injective"], EXIT_OK if witness else EXIT_VALIDATION


def cmd_bridge(args: argparse.Namespace, settings: Settings) -> Outcome:
    instance, H, F = random_bridge_instance(args.n, args.seed, args.eps)
    trace = unitary_bridge(instance, H, F, args.eps, samples=args.samples or settings.bridge_samples, strict=False)
    payload = {'schema': 'bridge/v1', **trace.to_dict()}
    lines = [trace.defect_table().to_string(index=False),
             f"endpoint error {trace.endpoint_error:.3e}, F defect {trace.defect:.3e}"]
    ok = trace.ok and trace.endpoint_error < settings.float_tolerance
    return payload, lines, EXIT_OK if ok else EXIT_INTERNAL


def cmd_rewrite_chain(args: argparse.Namespace, settings: Settings,
                      context: Optional[CorrelationContext] = None) -> Outcome:
    spec = parse_chain(read_json(args.chain))
    with ProgressTracker(spec.N - 1, description="rewrite-chain") as progress:
        cert = rewrite_chain(spec, context=context, progress=progress)
    audit = audit_certificate(cert)
    _write_dot(args.dot, stages_dot(cert.new_stages, name="rewritten"))
    payload = certificate_to_dict(cert, seed=args.seed)
    payload['audit'] = audit.to_dict()
    lines = [f"stage {n}: k={list(B.k)}, dims={list(B.dims)}" for n, B in enumerate(cert.new_stages)]
    lines.append("certificate verified" if audit.ok else f"certificate failed: {audit.violations[0].message}")
    return payload, lines, EXIT_OK if audit.ok else EXIT_INTERNAL


def cmd_selftest(args: argparse.Namespace, settings: Settings) -> Outcome:
    counts = None
    if args.cases is not None:
        counts = {key: args.cases for key in settings.selftest}
    report = run_selftest(args.seed, suites=args.suite, counts=counts, settings=settings)
    lines = [report.summary().to_string(index=False)]
    for r in report.results:
        lines += [f"  {r.name}: {msg}" for msg in r.failures]
    return report.to_dict(), lines, EXIT_OK if report.ok else EXIT_VALIDATION


COMMANDS: Dict[str, Callable[..., Outcome]] = {
    'inspect': cmd_inspect,
    'ktheory': cmd_ktheory,
    'decompose': cmd_decompose,
    'restrict': cmd_restrict,
    'discretize': cmd_discretize,
    'pair': cmd_pair,
    'check-injective': cmd_check_injective,
    'bridge': cmd_bridge,
    'rewrite-chain': cmd_rewrite_chain,
    'selftest': cmd_selftest,
}


# ------------------------------------------------------------------ parser

# inputs that may be given positionally or through these flags
INPUT_FLAGS = {'presentation': '--presentation', 'closedset': '--set'}


def add_input(p: argparse.ArgumentParser, name: str, help_text: str) -> None:
    p.add_argument(name, nargs='?', help=help_text)
    p.add_argument(INPUT_FLAGS[name], dest=f'{name}_flag', metavar=name.upper(), help=f'Same as the positional {name}')


def resolve_inputs(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """
    Fill each input from its flag, or else from the positional values in order.

    Exits with a usage error (code 2) when an input is missing or a
    positional value is left over.
    """
    names = [name for name in INPUT_FLAGS if hasattr(args, name)]
    positional = [getattr(args, name) for name in names if getattr(args, name) is not None]
    for name in names:
        value = getattr(args, f'{name}_flag') or (positional.pop(0) if positional else None)
        if value is None:
            parser.error(f"{name} is required, positionally or as {INPUT_FLAGS[name]}")
        setattr(args, name, value)
    if positional:
        parser.error(f"unexpected argument {positional[0]}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='etalg', description='Exact computations on Elliott-Thomsen algebras')
    parser.add_argument('--log-level', type=str, help='Log level (default: ETALG_LOG_LEVEL or WARNING)')
    parser.add_argument('--log-file', action='store_true', help='Also write logs/application.log')
    parser.add_argument('--store', action='store_true', help='Record the run and its report in the certificate store')
    sub = parser.add_subparsers(dest='command', required=True, metavar='command')

    def presentation_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        add_input(p, 'presentation', 'presentation/v1 file or catalog name (INT, P_DD, P_LOOP)')
        p.add_argument('--dot', type=str, help='Write the gluing graph in DOT format to this file')
        return p

    presentation_command('inspect', 'Validate a presentation')
    presentation_command('ktheory', 'K0 and K1 of a presentation')
    presentation_command('decompose', 'Split a presentation into minimal summands')

    p = presentation_command('restrict', 'Restrict to a closed subset')
    add_input(p, 'closedset', 'closedset/v1 file')

    p = sub.add_parser('discretize', help='Discretize a closed subset at scale delta')
    add_input(p, 'presentation', 'presentation/v1 file or catalog name')
    add_input(p, 'closedset', 'closedset/v1 file')
    p.add_argument('--delta', type=rational_arg, required=True, help='Positive rational, e.g. 1/3')

    p = sub.add_parser('pair', help='Pair two finite spectra within 2/m')
    add_input(p, 'presentation', 'presentation/v1 file or catalog name')
    p.add_argument('first', help='spectrum/v1 file')
    p.add_argument('second', help='spectrum/v1 file')
    p.add_argument('--m', type=int, required=True, help='Grid size, eta = 1/m')
    p.add_argument('--eps', type=rational_arg, help='Test-function bound to record')

    p = sub.add_parser('check-injective', help='Exact injectivity witness of a pattern')
    p.add_argument('pattern', help='pattern/v1 file with source and target')

    p = sub.add_parser('bridge', help='Numerical unitary bridge on a seeded instance')
    p.add_argument('--n', type=int, required=True, help='Matrix size')
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--eps', type=rational_arg, default=Fraction(1))
    p.add_argument('--samples', type=int, help='Sampled times (default from settings)')

    p = sub.add_parser('rewrite-chain', help='Rewrite a chain so that all maps are injective')
    p.add_argument('chain', help='chain/v1 file')
    p.add_argument('--seed', type=int, help='Recorded in the certificate')
    p.add_argument('--dot', type=str, help='Write the rewritten stages in DOT format to this file')

    p = sub.add_parser('selftest', help='Run the seeded property suites')
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--suite', action='append', choices=SUITES, help='Run only this suite (repeatable)')
    p.add_argument('--cases', type=int, help='Cases per suite instead of the configured counts')
    return parser


def _summary(command: str, lines: Sequence[str], code: int) -> None:
    print("=" * 60, file=sys.stderr)
    print(f"etalg {command}: exit {code}", file=sys.stderr)
    print("=" * 60, file=sys.stderr)
    for line in lines:
        print(line, file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one command and report.

    Returns:
        Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    resolve_inputs(parser, args)
    settings = load_settings()
    logging_config = LoggerConfig.from_settings(settings, level=args.log_level, file_output=args.log_file)
    seed = getattr(args, 'seed', None)
    store = CertificateStore(settings.database_path) if args.store else None

    with CorrelationContext(command=args.command, seed=seed) as context:
        run_log = logging_config.get_run_logger(context.run_id)
        run_log.info("command_started", command=args.command, argv=list(argv) if argv is not None else sys.argv[1:])
        if store:
            store.start_run(context.run_id, args.command, seed)
        try:
            handler = COMMANDS[args.command]
            if args.command == 'rewrite-chain':
                payload, lines, code = handler(args, settings, context)
            else:
                payload, lines, code = handler(args, settings)
        except EtalgError as exc:
            payload, lines, code = {'schema': 'error/v1', **exc.to_dict()}, [exc.message], exc.exit_code
            logger.warning(f"{args.command} failed: {exc.message}")
            run_log.warning("command_failed", error=type(exc).__name__, message=exc.message)
        except Exception as exc:  # noqa: BLE001
            logger.exception(f"{args.command} crashed")
            run_log.error("command_crashed", error=type(exc).__name__, message=str(exc))
            payload = {'schema': 'error/v1', 'error': type(exc).__name__, 'message': str(exc)}
            lines, code = [f"internal error: {exc}"], EXIT_INTERNAL
        if seed is not None:
            payload.setdefault('seed', seed)
        payload['run_id'] = context.run_id

        print(dumps(payload))
        _summary(args.command, lines, code)
        run_log.info("command_finished", exit_code=code, summary=list(lines))
        if store:
            store.save_document(context.run_id, payload)
            store.finish_run(context.run_id, code, {'lines': list(lines)})
    logging_config.reset()
    return code

