"""Command surface.

Every command resolves its services from the container, builds a Report and
hands it to ``reporting``, which prints text or a schema-checked JSON document
and picks the exit code: 0 for verdicts, 1 when a theorem, an expectation or a
round trip fails, 2 for bad input.
"""
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import wraps
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import click
import jsonschema
from pydantic import ValidationError

from source.apps.axioms.services import (
    PARAMETERISED,
    PREDICATES,
    evaluate,
    is_involutive_rl,
    is_one_bounded_involutive,
    with_derived_negations,
)
from source.apps.core.exceptions import (
    AlgebraError,
    ConsistencyError,
    InputError,
    PreconditionError,
    SearchInterrupted,
    UnsupportedError,
)
from source.apps.core.models import AlgebraTable
from source.apps.core.services import Report, to_jsonable
from source.apps.core.tables import is_lattice_distributive
from source.apps.decide.services import ideal_lattice_check, is_join_distributive, is_mid_complete
from source.apps.enumerate.models import AlgebraClass, SearchSpec
from source.apps.enumerate.services import CHECKS, CLASS_AXIOMS
from source.apps.semimodules.models import HomKind, SemimoduleTable
from source.apps.semimodules.services import enumerate_homs, ideals, regular, validate_semimodule
from source.apps.termeq.services import (
    identity_battery,
    interval_agreement,
    invsr_to_irl,
    irl_to_invsr,
    roundtrip_check,
    unit_interval,
)
from source.layers.di.container import Container
from source.layers.utils.file_management import read_text_file
from source.settings.settings_manager import settings_manager
from .corpus import builtin_corpus, evaluate_expectations, lookup, resolve_module
from .formats import emit, emit_document, parse

logger = logging.getLogger(__name__)

Structure = Union[AlgebraTable, SemimoduleTable]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

REPORT_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'type': 'object',
    'required': ['command', 'inputs', 'verdict', 'timing'],
    'properties': {
        'command': {'type': 'string'},
        'inputs': {'type': 'object'},
        'verdict': {'enum': ['pass', 'fail', 'value', 'error']},
        'data': {},
        'error': {'type': ['string', 'null']},
        'witness': {'type': 'array'},
        'certificate': {},
        'details': {'type': 'object'},
        'timing': {
            'type': 'object',
            'required': ['seconds'],
            'properties': {'seconds': {'type': 'number', 'minimum': 0}},
        },
        'schema_version': {'type': 'integer'},
    },
}


@dataclass
class CommandContext:
    as_json: bool
    container: Any


@dataclass
class Outcome:
    report: Report
    inputs: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK
    verdict: Optional[str] = None


# Input resolution

def _corpus_algebras() -> List[AlgebraTable]:
    return [e.structure for e in builtin_corpus() if isinstance(e.structure, AlgebraTable)]


def load_structures(source: str) -> List[Structure]:
    """Blocks of a file, or one corpus entry; 'SOURCE#NAME' keeps only the named block"""
    source, _, name = source.partition('#')
    if source.startswith('corpus:'):
        structures = [lookup(source).structure]
    else:
        structures = parse(read_text_file(source), known=_corpus_algebras())
    if name:
        picked = [s for s in structures if s.name == name]
        if not picked:
            raise InputError(f"{source} has no block named {name!r}", {'names': [s.name for s in structures]})
        return picked
    return structures


def algebra_of(structures: Sequence[Structure]) -> AlgebraTable:
    for s in structures:
        if isinstance(s, AlgebraTable):
            return s
    return structures[0].over


def semimodules_of(structures: Sequence[Structure]) -> Dict[str, SemimoduleTable]:
    return {s.name: s for s in structures if isinstance(s, SemimoduleTable)}


def _spec(**fields) -> SearchSpec:
    try:
        return SearchSpec(**{k: v for k, v in fields.items() if v is not None})
    except ValidationError as e:
        raise InputError(f"invalid search: {e.errors()[0]['msg']}", {'errors': to_jsonable(e.errors())})


def describe(report: Report, structure: Optional[Structure] = None) -> List[str]:
    lines = [f"{report.name}: {report.verdict}"]
    if report.error:
        lines.append(f"  {report.error}")
    if report.witness is not None:
        witness = report.witness
        if structure is not None and len(witness) == 1 and isinstance(witness[0], int):
            witness = (structure.element_name(witness[0]),)
        lines.append(f"  witness: {', '.join(str(w) for w in witness)}")
    return lines


# Reporting

def _payload(command: str, outcome: Outcome, seconds: float) -> Dict[str, Any]:
    report = outcome.report.to_dict()
    payload = {
        'command': command,
        'inputs': to_jsonable(outcome.inputs),
        'verdict': outcome.verdict or report['verdict'],
        'data': report['data'],
        'error': report['error'],
        'details': report['details'],
        'timing': {'seconds': round(max(seconds, 0.0), 6)},
        'schema_version': settings_manager.get_setting('report', 'schema_version', 1),
    }
    if report['witness'] is not None:
        payload['witness'] = report['witness']
    if report['certificate'] is not None:
        payload['certificate'] = report['certificate']
    return payload


def _emit_outcome(state: CommandContext, command: str, outcome: Outcome, seconds: float) -> int:
    if not state.as_json:
        for line in outcome.lines or describe(outcome.report):
            click.echo(line, err=outcome.verdict == 'error')
        return outcome.exit_code
    payload = _payload(command, outcome, seconds)
    if settings_manager.get_setting('report', 'validate_schema', True):
        try:
            jsonschema.validate(payload, REPORT_SCHEMA)
        except jsonschema.ValidationError as e:
            logger.error(f"report for {command} does not match its schema: {e.message}")
            return EXIT_FAILED
    click.echo(json.dumps(payload, indent=settings_manager.get_setting('report', 'indent', 2)))
    return outcome.exit_code


def _error_outcome(error: AlgebraError, inputs: Dict[str, Any]) -> Outcome:
    if isinstance(error, (InputError, UnsupportedError, PreconditionError)):
        code = EXIT_INPUT
    else:
        code = EXIT_FAILED
    message = str(error)
    if isinstance(error, SearchInterrupted) and error.checkpoint:
        message = f"{message} (resume from {error.checkpoint})"
    report = Report(False, error=message, name=type(error).__name__, details=error.details)
    return Outcome(report, inputs, [f"error: {message}"], code, verdict='error')


def reporting(command: str):
    """Time the command, turn toolkit errors into exit codes, print the outcome"""
    def decorator(func):
        @click.pass_context
        @wraps(func)
        def wrapper(ctx, **kwargs):
            state: CommandContext = ctx.obj
            monitor = state.container.performance_monitor()
            timing: Dict[str, float] = {}
            try:
                with monitor.timed(command) as timing:
                    outcome = func(state, **kwargs)
            except AlgebraError as e:
                logger.debug(f"{command} failed: {e}")
                outcome = _error_outcome(e, kwargs)
            ctx.exit(_emit_outcome(state, command, outcome, timing.get('seconds', 0.0)))
        return wrapper
    return decorator


# Commands

@click.group()
@click.option('--json', 'as_json', is_flag=True, help='Print a machine-readable report.')
@click.option('--threads', type=click.IntRange(min=1), default=None, help='Worker processes for searches.')
@click.option('--log-level', default=None, help='Root log level, e.g. INFO.')
@click.pass_context
def cli(ctx, as_json: bool, threads: Optional[int], log_level: Optional[str]):
    """Finite involutive semirings, residuated lattices and their semimodules."""
    if threads is not None:
        settings_manager.override('resource_monitor', 'max_workers', threads)
    if log_level is not None:
        settings_manager.override('monitoring', 'log_level', log_level)
    settings_manager.configure_logging()
    ctx.obj = CommandContext(as_json=as_json, container=Container())


def survey(a: AlgebraTable) -> Dict[str, str]:
    """Verdict of every registered predicate; 'n/a' where the input lacks what it needs"""
    names = sorted(PREDICATES)
    max_power = settings_manager.get_setting('decision', 'max_power', 4)
    names += [f"{base}:{n}" for base in sorted(PARAMETERISED) for n in range(1, max_power + 1)]
    verdicts = {}
    for name in names:
        try:
            verdicts[name] = evaluate(a, name).verdict
        except (UnsupportedError, PreconditionError):
            verdicts[name] = 'n/a'
    return verdicts


@cli.command('check')
@click.argument('source')
@click.option('--class', 'algebra_class', type=click.Choice([c.value for c in AlgebraClass]), default=None,
              help='Check the axioms of one class instead of surveying every predicate.')
@reporting('check')
def check(state: CommandContext, source: str, algebra_class: Optional[str]) -> Outcome:
    """Survey the predicates of an algebra, or check the axioms of one class."""
    a = algebra_of(load_structures(source))
    inputs = {'source': source, 'algebra': a.name, 'size': a.size, 'class': algebra_class}
    subject = with_derived_negations(a)
    if algebra_class is None:
        verdicts = survey(subject)
        report = Report.value('check', verdicts, details={'negations': _negations(a, subject)})
        return Outcome(report, inputs, [f"{a.name} ({a.size} elements)"] +
                       [f"  {name}: {verdict}" for name, verdict in verdicts.items()])
    reports = [(name, evaluate(subject, name)) for name in CLASS_AXIOMS[AlgebraClass(algebra_class)]]
    verdicts = {name: r.verdict for name, r in reports}
    failed = next((r for _, r in reports if r.failed), None)
    if failed is None:
        report = Report.passed('check', verdicts)
    else:
        report = Report.failed_with('check', failed.error, failed.witness, data=verdicts)
    lines = [f"{a.name} is {'' if failed is None else 'not '}a {algebra_class}"]
    lines += [f"  {name}: {verdict}" for name, verdict in verdicts.items()]
    if failed is not None:
        lines += ['  ' + line for line in describe(failed)[1:]]
    return Outcome(report, inputs, lines)


def _negations(a: AlgebraTable, subject: AlgebraTable) -> str:
    if a.has_negations:
        return 'declared'
    return 'derived' if subject.has_negations else 'none'


@cli.command('termeq')
@click.argument('source')
@reporting('termeq')
def termeq(state: CommandContext, source: str) -> Outcome:
    """Translate between the semiring and residuated presentations."""
    a = algebra_of(load_structures(source))
    inputs = {'source': source, 'algebra': a.name}
    if a.has_negations:
        translated, semiring, direction = invsr_to_irl(a), a, 'residuated'
    else:
        translated = irl_to_invsr(a)
        semiring, direction = translated, 'semiring'
    roundtrip = roundtrip_check(a)
    battery = identity_battery(semiring)
    verdicts = {'roundtrip': roundtrip.verdict, 'identity_battery': battery.verdict}
    failed = roundtrip if roundtrip.failed else battery if battery.failed else None
    if failed is None:
        report = Report.passed('termeq', verdicts, certificate=translated, details={'direction': direction})
    else:
        report = Report.failed_with('termeq', failed.error, failed.witness, data=verdicts,
                                    certificate=translated, details={'direction': direction})
    lines = [f"{a.name} as an involutive {'residuated lattice' if direction == 'residuated' else 'semiring'}:",
             emit(translated).rstrip()]
    lines += [f"{name}: {verdict}" for name, verdict in verdicts.items()]
    if failed is not None:
        lines += describe(failed)[1:]
    return Outcome(report, inputs, lines, EXIT_OK if failed is None else EXIT_FAILED)


@cli.command('interval')
@click.argument('source')
@reporting('interval')
def interval(state: CommandContext, source: str) -> Outcome:
    """Decide whether [0,1] is a subalgebra."""
    a = with_derived_negations(algebra_of(load_structures(source)))
    inputs = {'source': source, 'algebra': a.name}
    subalgebra = unit_interval(a)
    agreement = interval_agreement(a)
    details = subalgebra.details
    report = Report(agreement.success, details, agreement.error, agreement.witness, name='interval',
                    details={'subalgebra': subalgebra.verdict})
    members = ' '.join(a.element_name(x) for x in details['members']) or '(empty)'
    lines = [
        f"[0,1] in {a.name}: {members}",
        f"  closed under the operations: {details['closed']}",
        f"  0.0 = 0: {details['zero_idempotent']}",
        f"  subalgebra: {subalgebra.verdict}",
        f"  agreement: {agreement.verdict}",
    ]
    return Outcome(report, inputs, lines, EXIT_OK if agreement.success else EXIT_FAILED)


@cli.command('ideals')
@click.argument('source')
@reporting('ideals')
def ideals_command(state: CommandContext, source: str) -> Outcome:
    """List the ideals of a join-semilattice and check their lattice."""
    structure = load_structures(source)[0]
    inputs = {'source': source, 'structure': structure.name}
    found = ideals(structure)
    family_limit = state.container.decision_service().ideal_family_limit
    lattice = ideal_lattice_check(structure, family_limit)
    data = {
        'count': len(found),
        'ideals': [[structure.element_name(x) for x in ideal.elements()] for ideal in found],
        'join_distributive': is_join_distributive(structure).success,
        'mid_complete': is_mid_complete(structure).success,
    }
    if isinstance(structure, AlgebraTable):
        try:
            data['id_semimodule'] = validate_semimodule(state.container.decision_service().id_module(structure)).verdict
        except UnsupportedError:
            data['id_semimodule'] = 'n/a'
    report = Report(lattice.success, data, lattice.error, lattice.witness, name='ideals', details=lattice.details)
    lines = [f"{len(found)} ideals of {structure.name}:"]
    lines += ['  {' + ', '.join(members) + '}' for members in data['ideals']]
    lines += [f"  join-distributive: {data['join_distributive']}", f"  MID-complete: {data['mid_complete']}"]
    lines += describe(lattice)
    return Outcome(report, inputs, lines, EXIT_OK if lattice.success else EXIT_FAILED)


def _hom_side(source: str, kind: HomKind) -> Structure:
    structures = load_structures(source)
    if kind == HomKind.MODULE:
        modules = semimodules_of(structures)
        return next(iter(modules.values())) if modules else regular(algebra_of(structures))
    return structures[0]


@cli.command('homs')
@click.argument('dom')
@click.argument('cod')
@click.option('--kind', type=click.Choice([k.value for k in HomKind]), default=HomKind.MODULE.value,
              help='module: A-homomorphisms; semilattice: join and zero preserving maps.')
@click.option('--limit', type=click.IntRange(min=0), default=20, help='Maps listed in the report.')
@reporting('homs')
def homs(state: CommandContext, dom: str, cod: str, kind: str, limit: int) -> Outcome:
    """Enumerate homomorphisms DOM -> COD."""
    kind = HomKind(kind)
    d, c = _hom_side(dom, kind), _hom_side(cod, kind)
    inputs = {'dom': d.name, 'cod': c.name, 'kind': kind.value}
    maps = [h.map for h in enumerate_homs(d, c, kind)]
    report = Report.value('homs', {'count': len(maps), 'maps': [list(m) for m in maps[:limit]]})
    lines = [f"{len(maps)} {kind.value} homomorphisms {d.name} -> {c.name}"]
    lines += ['  ' + ' '.join(c.element_name(v) for v in m) for m in maps[:limit]]
    if len(maps) > limit:
        lines.append(f"  ... {len(maps) - limit} more")
    return Outcome(report, inputs, lines)


def _retract_command(state: CommandContext, source: str, module: Optional[str], projective: bool) -> Outcome:
    structures = load_structures(source)
    a = algebra_of(structures)
    named = semimodules_of(structures)
    service = state.container.decision_service()
    selector = module or (next(iter(named)) if named else 'regular')
    m = resolve_module(service, a, selector, named)
    report = service.is_projective(a, m) if projective else service.is_injective(a, m)
    word = 'projective' if projective else 'injective'
    inputs = {'source': source, 'algebra': a.name, 'module': m.name}
    lines = [f"{m.name} is {word}" if report.success else f"{m.name} is not {word}"]
    if report.failed:
        lines += describe(report, m)[1:]
    elif report.certificate is not None:
        lines.append(f"  retract of {report.certificate.outer.name} ({report.certificate.outer.size} elements)")
    return Outcome(report, inputs, lines)


MODULE_HELP = 'regular, id, free:K, cyclic:I or a semimodule name from the file.'


@cli.command('injective')
@click.argument('source')
@click.option('--module', default=None, help=MODULE_HELP)
@reporting('injective')
def injective(state: CommandContext, source: str, module: Optional[str]) -> Outcome:
    """Decide injectivity of a semimodule."""
    return _retract_command(state, source, module, projective=False)


@cli.command('projective')
@click.argument('source')
@click.option('--module', default=None, help=MODULE_HELP)
@reporting('projective')
def projective(state: CommandContext, source: str, module: Optional[str]) -> Outcome:
    """Decide projectivity of a semimodule."""
    return _retract_command(state, source, module, projective=True)


CLASS_CHOICE = click.Choice([c.value for c in AlgebraClass])


@cli.command('battery')
@click.option('--class', 'algebra_class', type=CLASS_CHOICE, required=True)
@click.option('--max-size', type=click.IntRange(min=1), required=True)
@click.option('--checks', multiple=True, help='Check names, comma-separated or repeated; default all.')
@reporting('battery')
def battery(state: CommandContext, algebra_class: str, max_size: int, checks: Tuple[str, ...]) -> Outcome:
    """Run theorem checks over every enumerated algebra of a class."""
    names = [name.strip() for item in checks for name in item.split(',') if name.strip()] or list(CHECKS)
    spec = _spec(max_size=max_size, algebra_class=algebra_class)
    report = state.container.battery_service().theorem_battery(spec, names)
    inputs = {'class': algebra_class, 'max_size': max_size, 'checks': names}
    lines = [f"{report.details.get('instances', 0)} algebras of class {algebra_class} up to size {max_size}"]
    lines += [f"  {name}: {counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip"
              for name, counts in report.data.items()]
    if report.failed:
        lines += describe(report)[1:]
    return Outcome(report, inputs, lines, EXIT_OK if report.success else EXIT_FAILED)


@cli.command('enumerate')
@click.option('--class', 'algebra_class', type=CLASS_CHOICE, required=True)
@click.option('--max-size', type=click.IntRange(min=1), required=True)
@click.option('--limit', type=click.IntRange(min=0), default=None)
@click.option('--filter', 'filters', multiple=True, help='Predicate filter name[:n][=true|false]; repeatable.')
@click.option('--nondistributive-only', is_flag=True)
@click.option('--checkpoint', type=click.Path(dir_okay=False), default=None)
@click.option('--output', type=click.Path(dir_okay=False), default=None, help='Write the algebras to a file.')
@reporting('enumerate')
def enumerate_command(state: CommandContext, algebra_class: str, max_size: int, limit: Optional[int],
                      filters: Tuple[str, ...], nondistributive_only: bool, checkpoint: Optional[str],
                      output: Optional[str]) -> Outcome:
    """Generate every algebra of a class up to isomorphism."""
    spec = _spec(max_size=max_size, algebra_class=algebra_class, filters=filters, limit=limit,
                 nondistributive_only=nondistributive_only)
    algebras = list(state.container.enumeration_service().enumerate_algebras(spec, checkpoint=checkpoint))
    by_size = Counter(a.size for a in algebras)
    data = {'count': len(algebras), 'by_size': {str(k): by_size[k] for k in sorted(by_size)},
            'names': [a.name for a in algebras]}
    inputs = spec.model_dump(by_alias=True, mode='json')
    text = emit_document(algebras) if algebras else ''
    if output:
        Path(output).write_text(text, encoding='utf-8')
        lines = [f"wrote {len(algebras)} algebras to {output}"]
    else:
        lines = [text.rstrip()] if text else []
        lines.append(f"# {len(algebras)} algebras")
    return Outcome(Report.value('enumerate', data, certificate=algebras), inputs, lines)


def emit_roundtrip(structure: Structure) -> Report:
    """parse(emit(x)) reproduces x, display names included"""
    reparsed = parse(emit_document([structure]))[-1]
    if reparsed != structure or reparsed.display != structure.display:
        return Report.failed_with('emit_roundtrip', f"{structure.name} does not survive emit and parse",
                                  (structure.name,))
    return Report.passed('emit_roundtrip')


@cli.command('corpus')
@click.option('--name', 'names', multiple=True, help='Only these entries; repeatable.')
@reporting('corpus')
def corpus_command(state: CommandContext, names: Tuple[str, ...]) -> Outcome:
    """Reproduce the expected verdicts of the built-in corpus."""
    service = state.container.decision_service()
    entries = [lookup(name) for name in names] if names else builtin_corpus()
    results, failures, lines = {}, [], []
    for entry in entries:
        expectations = evaluate_expectations(entry, service)
        roundtrip = emit_roundtrip(entry.structure)
        results[entry.name] = {'expectations': expectations.data if expectations.success else
                               {'error': expectations.error, 'mismatches': expectations.details['mismatches']},
                               'emit_roundtrip': roundtrip.verdict}
        status = 'pass' if expectations.success and roundtrip.success else 'fail'
        lines.append(f"{entry.name}: {status} ({len(entry.expected)} expectations)")
        for failed in (expectations, roundtrip):
            if failed.failed:
                failures.append(failed)
                lines.append(f"  {failed.error}")
    if failures:
        report = Report.failed_with('corpus', failures[0].error, failures[0].witness, data=results)
    else:
        report = Report.passed('corpus', results)
    return Outcome(report, {'names': list(names)}, lines, EXIT_FAILED if failures else EXIT_OK)


@cli.command('smallest-nondistributive')
@click.option('--max-size', type=click.IntRange(min=1), default=7)
@click.option('--checkpoint', type=click.Path(dir_okay=False), default=None,
              help='Resume file. Without it the search resumes from a file under the search.checkpoint_dir '
                   'setting (.semiring-checkpoints), which is ignored once search.checkpoint_version changes.')
@click.option('--time-budget', type=click.FloatRange(min=0), default=None, help='Seconds before stopping.')
@reporting('smallest-nondistributive')
def smallest_nondistributive(state: CommandContext, max_size: int, checkpoint: Optional[str],
                             time_budget: Optional[float]) -> Outcome:
    """Find the least size with a non-distributive 1-bounded involutive algebra."""
    service = state.container.enumeration_service()
    report = service.smallest_nondistributive(max_size, checkpoint=checkpoint, time_budget=time_budget)
    inputs = {'max_size': max_size, 'checkpoint': report.details['checkpoint']}
    witness = report.certificate
    if witness is None:
        return Outcome(report, inputs, [f"no non-distributive 1-bounded involutive algebra up to size {max_size}"])
    reparsed = parse(emit(witness))[0]
    revalidation = {
        'emit_roundtrip': reparsed == witness,
        'one_bounded_involutive': is_one_bounded_involutive(reparsed).success,
        'involutive_residuated_lattice': is_involutive_rl(reparsed.irl_reduct()).success,
        'nondistributive': is_lattice_distributive(reparsed).failed,
    }
    report.details['revalidation'] = revalidation
    lines = [f"smallest size {report.data['size']}: {report.data['count']} witnesses", emit(witness).rstrip()]
    lines += [f"# {name}: {ok}" for name, ok in revalidation.items()]
    if not all(revalidation.values()):
        raise ConsistencyError(f"witness {witness.name} does not re-validate", {'revalidation': revalidation})
    return Outcome(report, inputs, lines)


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI on argv and return the exit code instead of exiting"""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name='semiring',
                          standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_INPUT if isinstance(e, click.UsageError) else e.exit_code
    except click.Abort:
        click.echo('Aborted!', err=True)
        return EXIT_FAILED
    return result if isinstance(result, int) else EXIT_OK
