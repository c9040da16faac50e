###########
# imports #
###########

import numbers

import numpy as np
import pandas as pd
import toml

from .._exceptions import ConfigError, HybridcalError, ModelError
from ..common import ReceiverScenario
from ..estimation import SolverSettings
from ..model import LoadSwitchPlan, TrainingSequence, zadoff_chu
from ..montecarlo import SweepConfig
from ..stats import SufficientStats

STATS_COLUMNS = ('packet_index', 'V1_re', 'V1_im', 'V2_re', 'V2_im')

_REQUIRED = object()

#############
# functions #
#############


def parse_complex(value, key):
    """Reads a complex number written as ``"re+imj"``, ``[re, im]`` or a real number."""
    if isinstance(value, bool):
        raise ConfigError(key, 'expected a complex number, got {!r}'.format(value))
    if isinstance(value, numbers.Number):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(' ', ''))
        except ValueError:
            raise ConfigError(key, 'cannot parse {!r} as a complex number'.format(value)) from None
    if isinstance(value, (list, tuple)) and len(value) == 2 \
            and all(isinstance(v, numbers.Number) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise ConfigError(key, 'expected "re+imj" or [re, im], got {!r}'.format(value))


def _get(section, name, prefix, default=_REQUIRED):
    key = '{}.{}'.format(prefix, name)
    if name not in section:
        if default is _REQUIRED:
            raise ConfigError(key, 'missing required key')
        return default
    return section[name]


def _number(section, name, prefix, default=_REQUIRED, kind=float):
    value = _get(section, name, prefix, default)
    key = '{}.{}'.format(prefix, name)
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError(key, 'expected a number, got {!r}'.format(value))
    if kind is int and int(value) != value:
        raise ConfigError(key, 'expected an integer, got {!r}'.format(value))
    return kind(value)


def _list(section, name, prefix, default=_REQUIRED):
    value = _get(section, name, prefix, default)
    if not isinstance(value, (list, tuple)):
        value = [value]
    return list(value)


def load_config(path):
    """Parses a TOML file into a dict. Syntax errors become ConfigError."""
    try:
        return toml.load(path)
    except toml.TomlDecodeError as error:
        raise ConfigError(str(path), 'invalid TOML ({})'.format(error)) from None


def training_from_config(cfg, prefix='scenario'):
    """Training sequence of a [scenario] section: explicit ``symbols`` or a
    Zadoff-Chu sequence of length ``T`` and root ``root``, split at ``K``."""
    section = cfg.get(prefix, {})
    try:
        if 'symbols' in section:
            symbols = [parse_complex(v, '{}.symbols[{}]'.format(prefix, i))
                       for i, v in enumerate(_list(section, 'symbols', prefix))]
            K = _number(section, 'K', prefix, len(symbols) // 2, int)
            return TrainingSequence(np.array(symbols), K)
        T = _number(section, 'T', prefix, 64, int)
        K = _number(section, 'K', prefix, T // 2, int)
        return zadoff_chu(T, _number(section, 'root', prefix, 1, int), K)
    except ModelError as error:
        raise ConfigError('{}.T'.format(prefix), str(error)) from None


def scenario_from_config(cfg):
    """ReceiverScenario of the [scenario] section. Either ``antenna`` or ``F``
    must be given; the loads ``z1`` and ``z2`` are required."""
    if 'scenario' not in cfg:
        raise ConfigError('scenario', 'missing section')
    section = cfg['scenario']
    training = training_from_config(cfg)
    z1 = parse_complex(_get(section, 'z1', 'scenario'), 'scenario.z1')
    z2 = parse_complex(_get(section, 'z2', 'scenario'), 'scenario.z2')
    antenna = section.get('antenna')
    F = section.get('F')
    if antenna is None and F is None:
        raise ConfigError('scenario.antenna', 'give the antenna impedance or F')
    try:
        plan = LoadSwitchPlan(z1, z2, training.K, training.T)
    except ModelError as error:
        raise ConfigError('scenario.z2', str(error)) from None
    noise_var = _number(section, 'noise_var', 'scenario', 1.)
    try:
        return ReceiverScenario(None if antenna is None else parse_complex(antenna, 'scenario.antenna'),
                                plan, training, noise_var,
                                F=None if F is None else parse_complex(F, 'scenario.F'))
    except ModelError as error:
        raise ConfigError('scenario.antenna' if antenna is not None else 'scenario.F', str(error)) from None


def solver_settings_from_config(cfg):
    section = cfg.get('solver', {})
    defaults = SolverSettings()
    try:
        return SolverSettings(
            root_tolerance=_number(section, 'root_tolerance', 'solver', defaults.root_tolerance),
            max_iterations=_number(section, 'max_iterations', 'solver', defaults.max_iterations, int),
            multistart=tuple(parse_complex(v, 'solver.multistart') for v in _list(section, 'multistart', 'solver', [])),
            dedupe_radius=_number(section, 'dedupe_radius', 'solver', defaults.dedupe_radius),
            max_alternating_sweeps=_number(section, 'max_alternating_sweeps', 'solver',
                                           defaults.max_alternating_sweeps, int))
    except ValueError as error:
        if isinstance(error, HybridcalError):
            raise
        raise ConfigError('solver', str(error)) from None


def sweep_config_from_dict(cfg, seed=None, threads=None):
    """Builds a SweepConfig from parsed TOML.
    cfg     -- dict with sections [scenario], [prior], [sweep] and optionally [solver]
    seed    -- overrides sweep.seed
    threads -- overrides sweep.threads"""
    if 'sweep' not in cfg:
        raise ConfigError('sweep', 'missing section')
    section = cfg['sweep']
    prior = cfg.get('prior', {})
    scenario = scenario_from_config(cfg)
    kind = _get(prior, 'kind', 'prior', 'iid')
    return SweepConfig(
        scenario=scenario,
        snr_db=[_number({'snr_db': v}, 'snr_db', 'sweep') for v in _list(section, 'snr_db', 'sweep')],
        L_values=[_number({'L': v}, 'L', 'sweep', kind=int) for v in _list(section, 'L', 'sweep')],
        trials=_number(section, 'trials', 'sweep', kind=int),
        estimators=[str(e) for e in _list(section, 'estimators', 'sweep')],
        seed=seed if seed is not None else _number(section, 'seed', 'sweep', 0, int),
        prior_kind=kind,
        sigma_H2=_number(prior, 'sigma_H2', 'prior', 1.),
        r=_number(prior, 'r', 'prior', 0.5),
        study=_get(section, 'study', 'sweep', 'sweep'),
        F_values=[parse_complex(v, 'sweep.F_values') for v in _list(section, 'F_values', 'sweep', [])],
        confidence=_number(section, 'confidence', 'sweep', 0.95),
        trim=_number(section, 'trim', 'sweep', 0.),
        failure_threshold=_number(section, 'failure_threshold', 'sweep', 0.05),
        threads=threads if threads is not None else _number(section, 'threads', 'sweep', 1, int),
        settings=solver_settings_from_config(cfg))


def load_sweep_config(path, seed=None, threads=None):
    return sweep_config_from_dict(load_config(path), seed, threads)


def load_training(path):
    """Reads a training file written by ``write_training``; returns the
    TrainingSequence and the parsed file."""
    cfg = load_config(path)
    if 'scenario' not in cfg or 'symbols' not in cfg['scenario']:
        raise ConfigError('scenario.symbols', 'missing required key')
    return training_from_config(cfg), cfg


def _read_stats_header(path):
    with open(path) as handle:
        first = handle.readline().strip()
    if not first.startswith('#'):
        raise ConfigError('stats.header', 'first line must be "# S1=.. S2=.. noise_var=.."')
    fields = {}
    for item in first.lstrip('#').replace(',', ' ').split():
        name, _, value = item.partition('=')
        fields[name] = value
    out = {}
    for name in ('S1', 'S2', 'noise_var'):
        if name not in fields:
            raise ConfigError('stats.' + name, 'missing in the header line')
        try:
            out[name] = float(fields[name])
        except ValueError:
            raise ConfigError('stats.' + name, 'not a number: {!r}'.format(fields[name])) from None
    return out


def load_stats_csv(path):
    """Reads SufficientStats from a CSV file whose first line is
    ``# S1=<S1> S2=<S2> noise_var=<noise_var>`` followed by the columns
    packet_index, V1_re, V1_im, V2_re, V2_im, one row per packet in order."""
    header = _read_stats_header(path)
    table = pd.read_csv(path, skiprows=1)
    missing = [c for c in STATS_COLUMNS if c not in table.columns]
    if missing:
        raise ConfigError('stats.columns', 'missing columns {}'.format(missing))
    if not np.array_equal(table['packet_index'].to_numpy(), np.arange(len(table))):
        raise ConfigError('stats.packet_index', 'packets must be numbered 0..L-1 in order')
    V1 = table['V1_re'].to_numpy(float) + 1j * table['V1_im'].to_numpy(float)
    V2 = table['V2_re'].to_numpy(float) + 1j * table['V2_im'].to_numpy(float)
    try:
        return SufficientStats(V1, V2, header['S1'], header['S2'], header['noise_var'])
    except ModelError as error:
        raise ConfigError('stats', str(error)) from None
