# -*- coding: utf-8 -*-
"""Console script for coarse_maps."""
import logging
import sys

from typing import Any, Dict, Optional

import click
import yaml

import coarse_maps.runner as rn
from coarse_maps.defects import SETTERS, check_profile_parameters
from coarse_maps.errors import CoarseMapsError, ConfigurationError
from coarse_maps.mapspec import FAMILIES
from coarse_maps.reports import FORMATS


LOGGER = logging.getLogger('coarse_maps')

DEFAULTS = {
    'window': 3,
    'budget': 1_000_000,
    'samples': 20_000,
    'seed': 42,
    'format': 'csv',
}

# per-command radius defaults; commands missing here take no radius
RADIUS_DEFAULTS = {
    'defect-profile': 5,
    'middle-profile': 5,
    'a-profile': 3,
    'equivariance': 4,
    'poly-degree': 5,
    'pol2-check': 5,
    'pi-probe': 5,
    's-probe': 5,
    'qsg-witness': 2,
    'comm-probe': 2,
    'normality-check': 4,
}

PROFILE_COMMANDS = ('defect-profile', 'middle-profile', 'a-profile', 'equivariance',
                    'poly-degree', 'pi-probe', 's-probe')

INTEGER_KEYS = ('radius', 'window', 'budget', 'samples', 'seed', 'degree', 'length',
                'n', 'scale', 'probeRadius')
ELEMENT_KEYS = ('c', 'a', 'b', 'conjugator', 'translate')

# click parameter names that differ from config keys
FLAG_KEYS = {
    'map_text': 'map',
    'fmt': 'format',
    'probe_radius': 'probeRadius',
}


def initialize_logging(level):
    """Initializes logging. Log lines go to standard error so that reports on
    standard output stay machine readable."""
    for handler in list(LOGGER.handlers):
        LOGGER.removeHandler(handler)
    stream_handler = logging.StreamHandler(stream=sys.stderr)
    stream_handler.setLevel(level)
    fmt_string = '%(asctime)s %(levelname)s %(filename)s:%(funcName)s: %(message)s'
    formatter = logging.Formatter(fmt_string, datefmt='%Y/%m/%d %H:%M:%S')
    stream_handler.setFormatter(formatter)
    LOGGER.addHandler(stream_handler)
    LOGGER.setLevel(level)
    LOGGER.debug(f"Initialized logging with level: {logging.getLevelName(level)}")


def _log_level(name: str) -> int:
    level = getattr(logging, name.upper(), None)
    if not isinstance(level, int):
        raise click.BadParameter(f'unknown log level {name!r}', param_hint='--log-level')
    return level


def read_config_file(config_path: str) -> Dict[str, Any]:
    """Reads a YAML (or JSON) config document; it must hold a mapping."""
    try:
        with open(config_path, 'r') as infile:
            document = yaml.safe_load(infile)
    except FileNotFoundError as exc:
        msg = f'No config file found at {config_path}.'
        raise FileNotFoundError(msg) from exc
    if document is None:
        return {}
    if not isinstance(document, dict):
        raise ConfigurationError(f'{config_path} must hold a mapping of config keys')
    return document


def normalize_experiment(command: Optional[str], config: Dict[str, Any]) -> Dict[str, Any]:
    """Validates one experiment config and fills in defaults. Config format:
    ```
    ---
    command: defect-profile
    map: brooks{ab}
    group: free:2
    target: z
    radius: 5
    window: 3
    budget: 1000000
    seed: 42
    format: csv
    out: ...
    ```
    plus the keys a particular command reads (kind, degree, length, c, a, b,
    n, scale, identity, probeRadius, translate, conjugator, only).
    """
    config = dict(config)
    command = command or config.get('command')
    if not command:
        raise ConfigurationError('command is required')
    if command not in rn.EXPERIMENTS:
        raise ConfigurationError(f'unknown command {command!r}')
    config['command'] = command

    # check required keys
    if command == 'zquad':
        for key in ['a', 'b']:
            if config.get(key) is None:
                raise ConfigurationError(f'{command} requires {key}')
    elif command != 'theorem-suite' and not config.get('map'):
        raise ConfigurationError(f'{command} requires map')

    # set defaults for keys that aren't required
    for key, value in DEFAULTS.items():
        if config.get(key) is None:
            config[key] = value
    if command in RADIUS_DEFAULTS and config.get('radius') is None:
        config['radius'] = RADIUS_DEFAULTS[command]
    if command == 'defect-profile':
        config['kind'] = config.get('kind') or 'D'
    if command == 'poly-degree':
        config['degree'] = config.get('degree') or 2
    if command == 'normality-check':
        config['length'] = config.get('length') or 3

    for key in INTEGER_KEYS:
        value = config.get(key)
        if value is None:
            continue
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f'{key} must be an integer, got {value!r}')
        if key != 'n' and value < 0:
            raise ConfigurationError(f'{key} must be non-negative, got {value}')
    for key in ELEMENT_KEYS:
        if config.get(key) is not None:
            config[key] = str(config[key])
    if config.get('only') is not None:
        only = config['only']
        config['only'] = [only] if isinstance(only, str) else [str(name) for name in only]

    if config['format'] not in FORMATS:
        raise ConfigurationError(f"format must be one of {FORMATS}, got {config['format']!r}")
    if command == 'defect-profile' and config['kind'] not in SETTERS:
        raise ConfigurationError(f"kind must be one of {sorted(SETTERS)}, got {config['kind']!r}")
    if command in PROFILE_COMMANDS:
        check_profile_parameters(config['radius'], config['window'])
    if command in ('qsg-witness', 'comm-probe') and config['radius'] < 1:
        raise ConfigurationError(f'{command} needs radius >= 1')

    # every referenced spec has to parse before anything runs
    if config.get('map'):
        rn.get_map(config)

    LOGGER.debug(f'Parsed config: {config}')
    return config


def get_experiment_config(command: str, config_path: Optional[str],
                          flags: Dict[str, Any]) -> Dict[str, Any]:
    """Merges the config file at `config_path` (if any) with command-line
    flags, flags winning, and validates the result."""
    config = read_config_file(config_path) if config_path else {}
    if 'experiments' in config:
        raise ConfigurationError(f'{config_path} holds a list of experiments; use run-config')
    for flag, value in flags.items():
        if value is None or value == () or value is False:
            continue
        config[FLAG_KEYS.get(flag, flag)] = list(value) if isinstance(value, tuple) else value
    return normalize_experiment(command, config)


def _fail(exc: Exception):
    LOGGER.error(str(exc))
    sys.exit(rn.EXIT_ERROR)


def _run(command: str, flags: Dict[str, Any]):
    initialize_logging(_log_level(flags.pop('log_level')))
    try:
        config = get_experiment_config(command, flags.pop('config'), flags)
        report = rn.run_experiment(config)
        rn.write_report(report, config['format'], config.get('out'))
    except (CoarseMapsError, click.UsageError, FileNotFoundError, yaml.YAMLError) as exc:
        _fail(exc)
    sys.exit(rn.exit_code([report]))


COMMON_OPTIONS = [
    click.option('-m', '--map', 'map_text', type=click.STRING, help='Map in the map DSL, e.g. "brooks{ab}".'),
    click.option('-g', '--group', type=click.STRING, help='Source group spec, e.g. free:2, z, cyc:6.'),
    click.option('-t', '--target', type=click.STRING, help='Target group spec. Defaults to the natural target.'),
    click.option('-r', '--radius', type=click.INT, help='Largest radius to enumerate.'),
    click.option('-w', '--window', type=click.INT, help='Plateau window. Defaults to 3.'),
    click.option('--budget', type=click.INT, help='Tuple budget before switching to sampling.'),
    click.option('--samples', type=click.INT, help='Samples drawn per radius once over budget.'),
    click.option('--seed', type=click.INT, help='Sampling seed. Defaults to 42.'),
    click.option('-o', '--out', type=click.STRING, help='Output file. Defaults to standard output.'),
    click.option('--format', 'fmt', type=click.Choice(FORMATS), help='Output format. Defaults to csv.'),
    click.option('--expect', type=click.STRING, help='Expected classification; a mismatch exits 1.'),
    click.option('-f', '--config', type=click.STRING, help='Config file; flags override its values.'),
    click.option('-l', '--log-level', default='WARNING', type=click.STRING,
                 help='Acceptable values: WARN[ING], INFO, DEBUG, or ERROR. Defaults to WARNING.'),
]


def common_options(function):
    for option in reversed(COMMON_OPTIONS):
        function = option(function)
    return function


@click.group()
def main():
    """Finite-scale experiments on coarse maps between groups."""


@main.command('defect-profile')
@common_options
@click.option('--kind', type=click.Choice(sorted(SETTERS)), help='Defect set to profile. Defaults to D.')
def defect_profile(**flags):
    """Max norm of a defect set over radii 1..radius."""
    _run('defect-profile', flags)


@main.command('middle-profile')
@common_options
def middle_profile(**flags):
    """Profile of the middle defect set M."""
    _run('middle-profile', flags)


@main.command('a-profile')
@common_options
def a_profile(**flags):
    """Profile of the quadruple defect set A."""
    _run('a-profile', flags)


@main.command('equivariance')
@common_options
def equivariance(**flags):
    """Profile of the translation defect of the quadruple term."""
    _run('equivariance', flags)


@main.command('poly-degree')
@common_options
@click.option('--degree', type=click.INT, help='Highest difference order to profile (1-3). Defaults to 2.')
def poly_degree(**flags):
    """Estimates the coarse polynomial degree of a map."""
    _run('poly-degree', flags)


@main.command('zquad')
@common_options
@click.option('-a', '--a', 'a', type=click.STRING, help='Value at 1.')
@click.option('-b', '--b', 'b', type=click.STRING, help='Value at 2.')
@click.option('-n', '--n', 'n', type=click.INT, help='Print the sequence value at n.')
@click.option('--scale', type=click.INT, help='Check the relators on arguments up to this scale.')
@click.option('--identity', is_flag=True, help='Check the commutation identity of the seed.')
def zquad(**flags):
    """Quadratic sequences on Z given by their values at 1 and 2."""
    _run('zquad', flags)


@main.command('pol2-check')
@common_options
def pol2_check(**flags):
    """Searches for a quadratic relator the map violates."""
    _run('pol2-check', flags)


@main.command('pi-probe')
@common_options
@click.option('-c', '--c', 'c', type=click.STRING, help='Target element to conjugate. Defaults to 1.')
def pi_probe(**flags):
    """Profile of the conjugates of c by the image of the map."""
    _run('pi-probe', flags)


@main.command('s-probe')
@common_options
@click.option('-a', '--a', 'a', type=click.STRING, help='Source element.')
@click.option('-b', '--b', 'b', type=click.STRING, help='Target element.')
def s_probe(**flags):
    """Profile of the (a, b)-translation set of the graph."""
    _run('s-probe', flags)


@main.command('qsg-witness')
@common_options
@click.option('--probe-radius', type=click.INT, help="Probe radius R'. Defaults to 2R.")
@click.option('--translate', type=click.STRING, help='Translate the graph by this product element, e.g. (a|b).')
def qsg_witness(**flags):
    """Finite witnesses that the graph of a map is a quasi-subgroup."""
    _run('qsg-witness', flags)


@main.command('comm-probe')
@common_options
@click.option('-c', '--c', 'c', type=click.STRING, help='Target element; conjugates by (1, c).')
@click.option('--conjugator', type=click.STRING, help='Product element to conjugate by instead.')
@click.option('--probe-radius', type=click.INT, help="Probe radius R'. Defaults to R + 2|a|.")
def comm_probe(**flags):
    """Finite commensurator witnesses for the graph of a map."""
    _run('comm-probe', flags)


@main.command('normality-check')
@common_options
@click.option('--length', type=click.INT, help='Product length for the defect subgroup. Defaults to 3.')
def normality_check(**flags):
    """Runs the quadratic normality questions on a map."""
    _run('normality-check', flags)


@main.command('theorem-suite')
@common_options
@click.option('--only', multiple=True, help='Run only the named criterion. May be repeated.')
def theorem_suite(**flags):
    """Runs the whole property battery."""
    _run('theorem-suite', flags)


@main.command('run-config')
@click.argument('path', type=click.STRING)
@click.option('-l', '--log-level', default='WARNING', type=click.STRING,
              help='Acceptable values: WARN[ING], INFO, DEBUG, or ERROR. Defaults to WARNING.')
def run_config(path: str, log_level: str):
    """Runs every experiment of a config document in order. Keys outside
    `experiments` are shared defaults."""
    initialize_logging(_log_level(log_level))
    try:
        document = read_config_file(path)
        entries = document.pop('experiments', None)
        if entries is None:
            entries = [{}]
        if not isinstance(entries, list) or not all(isinstance(entry, dict) for entry in entries):
            raise ConfigurationError('experiments must be a list of mappings')
        configs = [normalize_experiment(None, {**document, **entry}) for entry in entries]
    except (CoarseMapsError, FileNotFoundError, yaml.YAMLError) as exc:
        _fail(exc)
    LOGGER.info(f'running {len(configs)} experiments from {path}')
    _, code = rn.run_experiments(configs)
    sys.exit(code)


@main.command('list-families')
def list_families():
    """Lists the map families of the DSL and their parameters."""
    for name, parameters in FAMILIES.items():
        if name == 'hom':
            parameters = ('<generator>-><word>', '...')
        click.echo(f"{name}{{{','.join(parameters)}}}" if parameters else name)
