"""
Monte Carlo studies
===================

A study is a grid of (SNR, L) cells. Every cell draws ``trials`` channels from
the prior, simulates and reduces the packets and runs all selected estimators
on the same statistics. SNR is rho = sigma_H^2 / sigma_n^2 with sigma_H^2
fixed, so moving along the SNR grid only changes the noise variance.

Trial t of cell p in study s uses the generator
``default_rng(SeedSequence(seed, spawn_key=(s, p, t)))``, and outcomes are
aggregated in trial order, so serial and parallel runs give identical tables.
"""

###########
# imports #
###########

import dataclasses
import logging
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Tuple

import numpy as np
from tqdm import tqdm

from .._exceptions import ConfigError
from ..analysis import summarize_errors
from ..bounds import hcrb
from ..estimation import SolverSettings, method_supports
from ..model import ChannelPrior
from ._trial import GridPoint, run_trial, trial_rng

logger = logging.getLogger(__name__)

STUDIES = ('sweep', 'bias', 'correlation')

ESTIMATORS = ('map_ml_general', 'iid_quadratic', 'low_noise', 'single_packet',
              'slow_fading', 'consistent', 'alternating')

SWEEP_PRIORS = ('iid', 'slow_fading', 'exponential')

#############
# functions #
#############


@dataclass(frozen=True, eq=False)
class SweepConfig:
    """Everything that defines a study; together with the seed it fixes the
    output table byte for byte.

    scenario          -- ReceiverScenario; its noise level is overridden per SNR
    snr_db            -- grid of rho = sigma_H^2 / sigma_n^2 in dB
    L_values          -- grid of packet counts
    trials            -- trials per grid cell
    estimators        -- estimator names, see ESTIMATORS
    prior_kind, sigma_H2, r -- channel prior of every cell
    F_values          -- impedance parameters of a bias study
    trim              -- two-sided trim fraction of the diagnostic columns
    failure_threshold -- largest tolerated solver failure rate
    """
    scenario: object
    snr_db: Tuple[float, ...]
    L_values: Tuple[int, ...]
    trials: int
    estimators: Tuple[str, ...]
    seed: int = 0
    prior_kind: str = 'iid'
    sigma_H2: float = 1.
    r: float = 0.5
    study: str = 'sweep'
    F_values: Tuple[complex, ...] = ()
    confidence: float = 0.95
    trim: float = 0.
    failure_threshold: float = 0.05
    threads: int = 1
    settings: SolverSettings = field(default_factory=SolverSettings)

    def __post_init__(self):
        object.__setattr__(self, 'snr_db', tuple(float(s) for s in self.snr_db))
        object.__setattr__(self, 'L_values', tuple(int(L) for L in self.L_values))
        object.__setattr__(self, 'estimators', tuple(self.estimators))
        object.__setattr__(self, 'F_values', tuple(complex(F) for F in self.F_values))
        if not self.snr_db:
            raise ConfigError('sweep.snr_db', 'the SNR grid is empty')
        if not self.L_values or min(self.L_values) < 1:
            raise ConfigError('sweep.L', 'need a nonempty grid of packet counts >= 1')
        if int(self.trials) < 1:
            raise ConfigError('sweep.trials', 'need at least one trial, got {}'.format(self.trials))
        object.__setattr__(self, 'trials', int(self.trials))
        if not self.estimators:
            raise ConfigError('sweep.estimators', 'no estimator selected')
        unknown = [e for e in self.estimators if e not in ESTIMATORS]
        if unknown:
            raise ConfigError('sweep.estimators', 'unknown estimators {}, expected a subset of {}'.format(unknown, ESTIMATORS))
        if 'consistent' in self.estimators:
            # the correction 1 - 1 / (S_1 rho)^2 must stay positive
            floor_db = -10 * np.log10(self.scenario.S1)
            low = [s for s in self.snr_db if s <= floor_db]
            if low:
                raise ConfigError('sweep.snr_db', 'the consistent estimator needs SNR above {:.2f} dB, got {}'
                                  .format(floor_db, low))
        if self.study not in STUDIES:
            raise ConfigError('sweep.study', 'unknown study {!r}, expected one of {}'.format(self.study, STUDIES))
        if self.prior_kind not in SWEEP_PRIORS:
            raise ConfigError('prior.kind', 'unknown prior {!r}, expected one of {}'.format(self.prior_kind, SWEEP_PRIORS))
        if not self.sigma_H2 > 0:
            raise ConfigError('prior.sigma_H2', 'must be > 0, got {}'.format(self.sigma_H2))
        if not 0 <= self.r < 1:
            raise ConfigError('prior.r', 'must lie in [0, 1), got {}'.format(self.r))
        if not 0 < self.confidence < 1:
            raise ConfigError('sweep.confidence', 'must lie in (0, 1), got {}'.format(self.confidence))
        if not 0 <= self.trim < 0.5:
            raise ConfigError('sweep.trim', 'must lie in [0, 0.5), got {}'.format(self.trim))
        if not 0 <= self.failure_threshold <= 1:
            raise ConfigError('sweep.failure_threshold', 'must lie in [0, 1], got {}'.format(self.failure_threshold))
        if int(self.threads) < 1:
            raise ConfigError('sweep.threads', 'need at least one worker, got {}'.format(self.threads))
        if int(self.seed) < 0:
            raise ConfigError('sweep.seed', 'must be >= 0, got {}'.format(self.seed))
        object.__setattr__(self, 'seed', int(self.seed))
        if self.scenario.F == 0 or any(F == 0 for F in self.F_values):
            raise ConfigError('scenario.F', 'relative F errors need F != 0')

    def prior(self, L, kind=None):
        kind = kind or self.prior_kind
        return ChannelPrior(L, kind, self.sigma_H2, self.r if kind == 'exponential' else 0.)

    def noise_var(self, snr_db):
        return self.sigma_H2 / 10 ** (snr_db / 10.)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return {'study': self.study, 'seed': self.seed, 'trials': self.trials,
                'snr_db': list(self.snr_db), 'L': list(self.L_values),
                'estimators': list(self.estimators),
                'prior': {'kind': self.prior_kind, 'sigma_H2': self.sigma_H2, 'r': self.r},
                'F_values': [[F.real, F.imag] for F in self.F_values],
                'confidence': self.confidence, 'trim': self.trim,
                'failure_threshold': self.failure_threshold, 'threads': self.threads,
                'scenario': self.scenario.to_dict()}


@dataclass
class MetricRecord:
    """One row of a study table: one estimator at one (SNR, L) cell.
    Columns ending in _ci are confidence half-widths, hcrb_F is relative."""
    study: str
    prior: str
    estimator: str
    snr_db: float
    L: int
    F_re: float
    F_im: float
    trials: int
    unidentifiable: int
    failures: int
    failure_rate: float
    rel_mse_H: float
    rel_mse_H_ci: float
    hcrb_rel_H: float
    rel_mse_F: float
    rel_mse_F_ci: float
    rel_mae_F: float
    rel_mae_F_ci: float
    rel_bias_F_abs: float
    rel_bias_F_ci: float
    hcrb_F: float
    negative_root_rate: float
    rel_mse_H_trimmed: float = np.nan
    rel_mse_F_trimmed: float = np.nan
    rel_mae_F_trimmed: float = np.nan
    rel_bias_F_trimmed: float = np.nan

    @property
    def efficiency_H(self):
        """HCRB over achieved relative channel MSE."""
        return self.hcrb_rel_H / self.rel_mse_H


COLUMNS = tuple(f.name for f in dataclasses.fields(MetricRecord))

TRIMMED_COLUMNS = ('rel_mse_H_trimmed', 'rel_mse_F_trimmed', 'rel_mae_F_trimmed', 'rel_bias_F_trimmed')


def _run_point(task):
    """All trials of one cell, condensed to per-estimator arrays in trial order."""
    point, seed, study_index, point_index, trials = task
    h_sq = {name: np.full(trials, np.nan) for name in point.estimators}
    f_err = {name: np.full(trials, np.nan, dtype=complex) for name in point.estimators}
    status = {name: [] for name in point.estimators}
    positive = {name: [] for name in point.estimators}
    for t in range(trials):
        outcomes = run_trial(point, trial_rng(seed, study_index, point_index, t))
        for name, outcome in outcomes.items():
            h_sq[name][t] = outcome.h_sq_error
            f_err[name][t] = outcome.f_error
            status[name].append(outcome.status)
            positive[name].append(outcome.positive_root_selected)
    return h_sq, f_err, status, positive


def _aggregate(config, study, prior_label, snr_db, point, condensed):
    h_sq, f_err, status, positive = condensed
    scenario = point.scenario
    bound = hcrb(scenario.F, point.prior, scenario.S1, scenario.S2, scenario.noise_var)
    records = []
    for name in point.estimators:
        codes = np.array(status[name])
        ok = codes == 'ok'
        failures = int(np.sum(codes == 'failed'))
        h_keep = h_sq[name][codes != 'failed']
        metrics = summarize_errors(h_keep, f_err[name][ok], point.L, config.sigma_H2, scenario.F,
                                   config.confidence, config.trim)
        flags = [p for p in positive[name] if p is not None]
        negative_rate = float(np.mean([not p for p in flags])) if flags else np.nan
        record = MetricRecord(study=study, prior=prior_label, estimator=name, snr_db=snr_db, L=point.L,
                              F_re=scenario.F.real, F_im=scenario.F.imag, trials=config.trials,
                              unidentifiable=int(np.sum(codes == 'unidentifiable')),
                              failures=failures, failure_rate=failures / config.trials,
                              hcrb_rel_H=bound.h_relative, hcrb_F=bound.f_relative,
                              negative_root_rate=negative_rate,
                              **{key: metrics[key] for key in metrics})
        records.append(record)
    return records


def _run_grid(config, study, study_index, progress=False):
    """Runs every cell of the (SNR, L) grid of one prior and scenario."""
    cells, tasks = [], []
    point_index = 0
    for snr_db in config.snr_db:
        scenario = config.scenario.with_noise_var(config.noise_var(snr_db))
        for L in config.L_values:
            prior = config.prior(L)
            estimators = tuple(e for e in config.estimators if method_supports(e, prior))
            skipped = set(config.estimators) - set(estimators)
            if skipped:
                logger.debug('skipping %s for %r', sorted(skipped), prior)
            if estimators:
                point = GridPoint(scenario, prior, estimators, config.settings)
                cells.append((snr_db, point))
                tasks.append((point, config.seed, study_index, point_index, config.trials))
            point_index += 1

    desc = '{} ({})'.format(study, config.prior_kind)
    if config.threads > 1:
        with Pool(config.threads) as pool:
            results = list(tqdm(pool.imap(_run_point, tasks), total=len(tasks), desc=desc, disable=not progress))
    else:
        results = [_run_point(task) for task in tqdm(tasks, desc=desc, disable=not progress)]

    records = []
    for (snr_db, point), condensed in zip(cells, results):
        records.extend(_aggregate(config, study, config.prior_kind, snr_db, point, condensed))
    return records


def sweep(config, progress=False):
    """One MetricRecord per (SNR, L, estimator) cell of the configured prior.
    Estimators that are undefined for the prior (e.g. single_packet with
    L > 1) are skipped for that cell."""
    start_time = time.time()
    logger.info('Running the sweep over %d x %d grid points ... ', len(config.snr_db), len(config.L_values))
    records = _run_grid(config, 'sweep', 0, progress)
    logger.info('done ( %s seconds )', round(time.time() - start_time, 2))
    return records


def bias_study(config, F_values=None, progress=False):
    """The sweep repeated for several impedance parameters; study index k
    belongs to F_values[k]. F values outside the passive region are kept as
    bare impedance parameters."""
    F_values = tuple(F_values or config.F_values or (config.scenario.F,))
    start_time = time.time()
    logger.info('Running the bias study for %d values of F ... ', len(F_values))
    records = []
    for k, F in enumerate(F_values):
        if F == 0:
            raise ConfigError('sweep.F_values', 'relative F errors need F != 0')
        shifted = config.replace(scenario=config.scenario.with_F(F))
        records.extend(_run_grid(shifted, 'bias', k, progress))
    logger.info('done ( %s seconds )', round(time.time() - start_time, 2))
    return records


def correlation_study(config, progress=False):
    """The sweep under an i.i.d. prior and under the fully correlated
    slow-fading prior. Both priors share the random streams of study index 0,
    so at L = 1 they see identical data. Under slow fading only the pooling
    estimator (and single_packet at L = 1) applies."""
    start_time = time.time()
    logger.info('Running the correlation study ... ')
    records = []
    for kind in ('iid', 'slow_fading'):
        records.extend(_run_grid(config.replace(prior_kind=kind), 'correlation', 0, progress))
    logger.info('done ( %s seconds )', round(time.time() - start_time, 2))
    return records


def run_study(config, progress=False):
    """Dispatches on config.study."""
    if config.study == 'bias':
        return bias_study(config, progress=progress)
    if config.study == 'correlation':
        return correlation_study(config, progress=progress)
    return sweep(config, progress=progress)


def failure_rate_exceeded(records, threshold):
    return any(record.failure_rate > threshold for record in records)
