###########
# imports #
###########

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .._exceptions import SolverError, UnidentifiableError
from ..estimation import SolverSettings, estimate
from ..model import sample_channels, simulate_packet_matrix

logger = logging.getLogger(__name__)

#############
# functions #
#############


def trial_rng(seed, study_index, point_index, trial_index):
    """Independent generator of one trial. The stream depends only on the
    master seed and the three indices, never on the order of execution."""
    sequence = np.random.SeedSequence(seed, spawn_key=(study_index, point_index, trial_index))
    return np.random.default_rng(sequence)


@dataclass(frozen=True, eq=False)
class GridPoint:
    """One (SNR, L) cell of a study.
    scenario   -- ReceiverScenario with the noise level of this cell
    prior      -- ChannelPrior for L packets
    estimators -- estimator names run on the same data
    settings   -- SolverSettings of the general solver"""
    scenario: object
    prior: object
    estimators: Tuple[str, ...]
    settings: SolverSettings = field(default_factory=SolverSettings)

    @property
    def L(self):
        return self.prior.L


@dataclass
class TrialOutcome:
    """Errors of one estimator in one trial.

    status -- ok, unidentifiable (F undefined, H_hat = 0 kept) or failed
    """
    estimator: str
    status: str
    h_error: Optional[np.ndarray] = None
    f_error: complex = complex('nan')
    residual: Optional[float] = None
    positive_root_selected: Optional[bool] = None

    @property
    def h_sq_error(self):
        if self.h_error is None:
            return np.nan
        return float(np.vdot(self.h_error, self.h_error).real)


def run_trial(point, rng):
    """Draws a channel, simulates and reduces the L packets of the cell and
    runs every estimator of the cell on the same statistics.
    point -- GridPoint
    rng   -- numpy Generator owned by this trial
    Returns a dict estimator -> TrialOutcome."""
    scenario = point.scenario
    H = sample_channels(point.prior, rng)
    stats = scenario.reduce(simulate_packet_matrix(H, scenario.F, scenario, rng))

    outcomes = {}
    for name in point.estimators:
        try:
            est = estimate(name, stats, point.prior, point.settings)
        except UnidentifiableError as error:
            H_hat = error.H_hat if error.H_hat is not None else np.zeros(point.L, dtype=complex)
            outcomes[name] = TrialOutcome(name, 'unidentifiable', h_error=H_hat - H)
            continue
        except SolverError as error:
            logger.debug('%s failed: %s', name, error)
            outcomes[name] = TrialOutcome(name, 'failed', residual=error.best_residual)
            continue
        outcomes[name] = TrialOutcome(name, 'ok', h_error=est.H_hat - H, f_error=est.F_hat - scenario.F,
                                      residual=est.residual,
                                      positive_root_selected=est.positive_root_selected)
    return outcomes
