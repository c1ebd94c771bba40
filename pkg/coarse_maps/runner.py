"""Runs experiments described by validated config dicts and turns their
outcomes into Reports."""
import logging
import traceback

from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import click

from coarse_maps.coarse import comm_probe, graph_sample, pi_probe, quasi_subgroup_witness, s_ab_probe
from coarse_maps.defects import CheckResult, equiv_defect, profile
from coarse_maps.diffs import degree_estimate
from coarse_maps.errors import PreconditionError
from coarse_maps.gmaps import GroupMap
from coarse_maps.groups import FreeGroup, parse_group
from coarse_maps.normalq import NormalityCaps, almost_quadratic_check, check_normality, hyperbolic_desk_check
from coarse_maps.reports import Report
from coarse_maps.zquad import ZQuadSeed, extend, l49_identity, pol2_relator_check, quadratic_extension_exists, window_check


LOGGER = logging.getLogger('coarse_maps')

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2

EXPERIMENTS: Dict[str, Callable[[dict], Report]] = {}


def experiment(name: str):
    """Registers a function turning a config dict into a Report."""
    def register(function: Callable[[dict], Report]) -> Callable[[dict], Report]:
        EXPERIMENTS[name] = function
        return function
    return register


def get_map(config: dict) -> GroupMap:
    source = parse_group(config['group']) if config.get('group') else None
    target = parse_group(config['target']) if config.get('target') else None
    return GroupMap.from_text(config['map'], source, target)


def _options(config: dict) -> dict:
    return {'budget': config['budget'], 'samples': config['samples'], 'seed': config['seed']}


def _profile_experiment(config: dict, kind: str) -> Report:
    phi = get_map(config)
    report = Report(config['command'], config)
    result = profile(kind, phi, config['radius'], config['window'], **_options(config))
    report.add_profile(result)
    report.expect('classification', config.get('expect'), result.classification.value)
    return report


@experiment('defect-profile')
def run_defect_profile(config: dict) -> Report:
    return _profile_experiment(config, config['kind'])


@experiment('middle-profile')
def run_middle_profile(config: dict) -> Report:
    return _profile_experiment(config, 'M')


@experiment('a-profile')
def run_a_profile(config: dict) -> Report:
    return _profile_experiment(config, 'A')


@experiment('equivariance')
def run_equivariance(config: dict) -> Report:
    phi = get_map(config)
    report = Report(config['command'], config)
    result = equiv_defect(phi, config['radius'], config['window'], **_options(config))
    report.add_profile(result)
    report.expect('classification', config.get('expect'), result.classification.value)
    return report


@experiment('poly-degree')
def run_poly_degree(config: dict) -> Report:
    phi = get_map(config)
    report = Report(config['command'], config)
    estimate = degree_estimate(phi, config['degree'], config['radius'], config['window'],
                               **_options(config))
    for result in estimate.profiles:
        report.add_profile(result)
    summary = estimate.summary()
    report.add_result({**summary, 'name': 'degree', 'verdict': str(summary['verdict'])})
    report.expect('degree', config.get('expect'), summary['verdict'])
    return report


@experiment('zquad')
def run_zquad(config: dict) -> Report:
    target = parse_group(config.get('target') or 'free:2')
    seed = ZQuadSeed(target.parse_element(config['a']), target.parse_element(config['b']), target)
    report = Report(config['command'], config)
    ran = False
    if config.get('n') is not None:
        value = extend(seed, config['n'])
        report.add_result({'name': 'extend', 'n': config['n'], 'value': target.format_element(value)})
        ran = True
    if config.get('scale') is not None:
        report.add_check(window_check(seed, 3 * config['scale'], config['scale']))
        ran = True
    if config.get('identity'):
        holds = l49_identity(seed)
        a, b = seed.formatted()
        report.add_check(CheckResult('l49-identity', holds, None if holds else {'a': a, 'b': b}))
        ran = True
    if not ran:
        report.add_check(quadratic_extension_exists(seed))
    return report


@experiment('pol2-check')
def run_pol2_check(config: dict) -> Report:
    phi = get_map(config)
    report = Report(config['command'], config)
    report.add_check(pol2_relator_check(phi, config['radius'], **_options(config)))
    return report


@experiment('pi-probe')
def run_pi_probe(config: dict) -> Report:
    phi = get_map(config)
    c = phi.target.parse_element(config['c']) if config.get('c') else phi.target.identity()
    report = Report(config['command'], config)
    result = pi_probe(phi, c, config['radius'], config['window'])
    report.add_profile(result)
    report.expect('classification', config.get('expect'), result.classification.value)
    return report


@experiment('s-probe')
def run_s_probe(config: dict) -> Report:
    phi = get_map(config)
    a = phi.source.parse_element(config['a']) if config.get('a') else phi.source.identity()
    b = phi.target.parse_element(config['b']) if config.get('b') else phi.target.identity()
    report = Report(config['command'], config)
    result = s_ab_probe(phi, (a, b), config['radius'], config['window'])
    report.add_profile(result)
    report.expect('classification', config.get('expect'), result.classification.value)
    return report


def _witness_reports(report: Report, points, witness_reports):
    for witness_report in witness_reports:
        report.add_result(witness_report.summary(points.group), witness_report.mode)


@experiment('qsg-witness')
def run_qsg_witness(config: dict) -> Report:
    phi = get_map(config)
    radius = config['radius']
    probe_radius = config.get('probeRadius') or 2 * radius
    points = graph_sample(phi, probe_radius)
    if config.get('translate'):
        points = points.translate(points.group.parse_element(config['translate']))
    report = Report(config['command'], config)
    _witness_reports(report, points, quasi_subgroup_witness(points, radius, probe_radius, **_options(config)))
    return report


@experiment('comm-probe')
def run_comm_probe(config: dict) -> Report:
    phi = get_map(config)
    points = graph_sample(phi, config['radius'])
    G = points.group
    if config.get('conjugator'):
        a = G.parse_element(config['conjugator'])
    else:
        a = G.embed_right(phi.target.parse_element(config['c']) if config.get('c') else phi.target.identity())
    probe_radius = config.get('probeRadius') or config['radius'] + 2 * G.norm(a)
    report = Report(config['command'], config)
    _witness_reports(report, points, comm_probe(points, a, config['radius'], probe_radius))
    return report


@experiment('normality-check')
def run_normality_check(config: dict) -> Report:
    phi = get_map(config)
    H = phi.target
    caps = NormalityCaps()
    result = check_normality(phi, config['radius'], config['length'], caps,
                             config['window'], config['budget'])
    report = Report(config['command'], config)
    summary = result.summary(H)
    summary['name'] = 'normality'
    summary['verdict'] = {True: 'holds', False: 'violated', None: 'inconclusive'}[result.passed]
    report.add_result(summary, 'exact' if result.exhausted else 'sampled')
    if result.passed is False:
        report.violated = True
        report.witnesses.append({'name': 'normality', 'q1': result.q1.profile.classification.value})
    if isinstance(H, FreeGroup):
        hyperbolic = hyperbolic_desk_check(phi, config['radius'], caps, config['budget'])
        report.add_result({'name': 'hyperbolic', 'verdict': hyperbolic.details['verdict'],
                           'witness': hyperbolic.witness}, hyperbolic.mode)
    try:
        almost = almost_quadratic_check(phi, config['radius'], config['budget'])
        report.add_result({'name': 'almost-quadratic', 'verdict': almost.verdict,
                           'witness': almost.witness, **almost.details}, almost.mode)
    except PreconditionError as exc:
        LOGGER.debug(f'skipping almost-quadratic check: {exc}')
    return report


@experiment('theorem-suite')
def run_theorem_suite(config: dict) -> Report:
    # the suite imports most of the package
    from coarse_maps.suite import run_suite  # pylint: disable=import-outside-toplevel
    report = Report(config['command'], config)
    for result in run_suite(config['seed'], config.get('only')):
        report.add_check(result)
    return report


def run_experiment(config: dict) -> Report:
    try:
        function = EXPERIMENTS[config['command']]
    except KeyError as exc:
        raise click.UsageError(f"unknown command {config.get('command')!r}") from exc
    LOGGER.debug(f'running {config}')
    return function(config)


def write_report(report: Report, fmt: str, out: Optional[str]):
    text = report.render(fmt)
    if out:
        Path(out).write_text(text, encoding='utf-8')
        LOGGER.info(f'wrote {out}')
    else:
        click.echo(text, nl=False)


def exit_code(reports: Iterable[Optional[Report]]) -> int:
    """2 when an experiment errored (None), 1 when one found a violation, else 0."""
    reports = list(reports)
    if any(report is None for report in reports):
        return EXIT_ERROR
    if any(report.violated for report in reports):
        return EXIT_VIOLATION
    return EXIT_OK


def run_experiments(configs: List[dict]) -> Tuple[List[Optional[Report]], int]:
    """Runs the experiments in order. An experiment that raises is logged with
    its traceback and recorded as None; the remaining ones still run."""
    reports = []
    for index, config in enumerate(configs):
        try:
            report = run_experiment(config)
            write_report(report, config['format'], config.get('out'))
        except Exception:  # pylint: disable=broad-except
            LOGGER.error(f'experiment {index} ({config.get("command")}) failed:\n{traceback.format_exc()}')
            report = None
        reports.append(report)
    return reports, exit_code(reports)
