"""
Hybrid Cramér-Rao bound
=======================

For theta = [H; F] with H ~ CN(0, C_H) random and F deterministic, the hybrid
information matrix of the switched-load model is block diagonal. Its inverse
gives

    h_block = [((S_1 + |F|^2 S_2) / sigma_n^2) I + C_H^{-1}]^{-1}
    f_bound = sigma_n^2 / (S_2 Tr[C_H])

h_block is evaluated as C_H (a C_H + I)^{-1}, a = (S_1 + |F|^2 S_2) / sigma_n^2,
in the eigenbasis of C_H, which also covers rank-deficient covariances.
"""

###########
# imports #
###########

import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .._exceptions import ModelError
from ..model import complex_normal, sample_channels

logger = logging.getLogger(__name__)

_CHUNK = 10000

#############
# functions #
#############


@dataclass(frozen=True, eq=False)
class HcrbReport:
    """Both blocks of the bound. The channel block is kept in the eigenbasis of
    C_H and only materialized through ``h_block``.

    h_eigenvalues -- eigenvalues of h_block, lambda_k / (a lambda_k + 1)
    eigenvectors  -- eigenbasis of C_H, None for the identity
    f_bound       -- absolute bound on E|F_hat - F|^2
    sigma_H2      -- Tr[C_H] / L, the normalization of the relative columns
    F             -- the impedance parameter the bound was evaluated at
    """
    h_eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    f_bound: float
    sigma_H2: float
    F: complex

    @property
    def L(self):
        return len(self.h_eigenvalues)

    @property
    def h_block(self):
        """The L x L channel block."""
        U = self.eigenvectors
        if U is None:
            return np.diag(self.h_eigenvalues).astype(complex)
        return (U * self.h_eigenvalues) @ U.conj().T

    @property
    def h_diagonal(self):
        U = self.eigenvectors
        if U is None:
            return np.array(self.h_eigenvalues)
        return (np.abs(U) ** 2) @ self.h_eigenvalues

    @property
    def h_relative_diagonal(self):
        """Per-packet bound divided by sigma_H^2."""
        return self.h_diagonal / self.sigma_H2

    @property
    def h_relative(self):
        """Tr[h_block] / (L sigma_H^2), the bound on the relative channel MSE."""
        return float(np.sum(self.h_eigenvalues)) / (self.L * self.sigma_H2)

    @property
    def f_relative(self):
        """f_bound / |F|^2, the bound on the relative MSE of F."""
        return self.f_bound / abs(self.F) ** 2

    def to_dict(self):
        return {'F': [self.F.real, self.F.imag],
                'L': self.L,
                'h_relative_diagonal': self.h_relative_diagonal.tolist(),
                'h_relative': self.h_relative,
                'f_bound': self.f_bound,
                'f_relative': self.f_relative}


def hcrb(F, prior, S1, S2, noise_var):
    """Hybrid Cramér-Rao bound of the channel and the impedance parameter.
    F         -- impedance parameter
    prior     -- ChannelPrior; may be singular
    S1, S2    -- training energies
    noise_var -- sigma_n^2 >= 0; zero gives the all-zero bound"""
    if not (S1 > 0 and S2 > 0):
        raise ModelError('training energies must be positive, got S1={} S2={}'.format(S1, S2))
    if noise_var < 0:
        raise ModelError('noise variance must be >= 0, got {}'.format(noise_var))
    trace = prior.trace
    if trace <= 0:
        raise ModelError('Tr[C_H] = 0: the bound on F is undefined')
    F = complex(F)
    eigvals = prior.eigenvalues
    if noise_var == 0:
        h_eig = np.zeros_like(eigvals)
    else:
        a = (S1 + abs(F) ** 2 * S2) / noise_var
        h_eig = eigvals / (a * eigvals + 1.)
    return HcrbReport(h_eig, prior.eigenvectors, noise_var / (S2 * trace), trace / prior.L, F)


def asymptotic_ml_limit(F, sigma_H2, noise_var, S1, S2):
    """Limits of both i.i.d. roots for F as L grows at fixed SNR,
    (alpha |F|^2 - c d +- sqrt((alpha |F|^2 - c d)^2 + 4 alpha c |F|^2)) / (2 alpha c F*)
    with c the shrinkage factor and d = 1 - (sigma_n^2 / (S_1 sigma_H^2))^2."""
    if not sigma_H2 > 0:
        raise ModelError('sigma_H2 must be > 0, got {}'.format(sigma_H2))
    F = complex(F)
    if F == 0:
        raise ModelError('the limit is undefined for F = 0')
    alpha = S2 / S1
    c = S1 * sigma_H2 / (S1 * sigma_H2 + noise_var)
    d = 1. - (noise_var / (S1 * sigma_H2)) ** 2
    gain = alpha * abs(F) ** 2
    b = gain - c * d
    radical = np.sqrt(b * b + 4 * c * gain)
    denominator = 2 * alpha * c * F.conjugate()
    return complex((b + radical) / denominator), complex((b - radical) / denominator)


@dataclass(frozen=True, eq=False)
class PseudoInformation:
    """Monte Carlo averages of the score s = dL/dtheta*.

    pseudo      -- E[s s^T], vanishes for circular models
    information -- E[s s^H], the hybrid information matrix
    *_stderr    -- entrywise standard errors of the two averages
    """
    pseudo: np.ndarray
    information: np.ndarray
    pseudo_stderr: np.ndarray
    information_stderr: np.ndarray
    trials: int

    def z_scores(self):
        """|pseudo| in units of its standard error."""
        return np.abs(self.pseudo) / self.pseudo_stderr

    def bound_from_information(self):
        """Inverse of the averaged information, comparable to the HCRB blocks."""
        return np.linalg.inv(self.information)


def _scores(H, V1, V2, F, prior, S1, S2, noise_var):
    """Score vectors of a batch of trials, one row each."""
    r2 = V2 - F * H
    prior_term = prior.from_eigenbasis(prior.to_eigenbasis(H) / prior.eigenvalues)
    grad_H = (S1 / noise_var) * (V1 - H) + (S2 / noise_var) * r2 * np.conj(F) - prior_term
    grad_F = (S2 / noise_var) * np.sum(np.conj(H) * r2, axis=1)
    return np.column_stack((grad_H, grad_F))


def pseudo_information_mc(F, prior, scenario, trials, rng):
    """Estimates E[s s^T] and E[s s^H] of the complex score over draws of the
    channel and of the sufficient statistics, which are drawn from their exact
    conditional law V_1 ~ CN(H, sigma_n^2/S_1 I), V_2 ~ CN(F H, sigma_n^2/S_2 I).
    F        -- impedance parameter
    prior    -- nonsingular ChannelPrior
    scenario -- ReceiverScenario supplying S_1, S_2 and sigma_n^2 > 0
    trials   -- number of draws
    rng      -- numpy Generator"""
    if prior.is_singular:
        raise ModelError('the score needs a nonsingular channel covariance')
    if scenario.noise_var <= 0:
        raise ModelError('the score needs noise_var > 0')
    if trials < 2:
        raise ModelError('at least two trials are needed, got {}'.format(trials))

    start_time = time.time()
    logger.info('Averaging the score over %d trials ... ', trials)
    F = complex(F)
    S1, S2, s2 = scenario.S1, scenario.S2, scenario.noise_var
    n = prior.L + 1
    sums = {key: np.zeros((n, n), dtype=complex) for key in ('pseudo', 'information')}
    squares = {key: np.zeros((n, n)) for key in ('pseudo', 'information')}

    done = 0
    while done < trials:
        size = min(_CHUNK, trials - done)
        H = sample_channels(prior, rng, size)
        V1 = H + complex_normal(rng, H.shape, s2 / S1)
        V2 = F * H + complex_normal(rng, H.shape, s2 / S2)
        score = _scores(H, V1, V2, F, prior, S1, S2, s2)
        for key, other in (('pseudo', score), ('information', score.conj())):
            outer = score[:, :, None] * other[:, None, :]
            sums[key] += outer.sum(axis=0)
            squares[key] += (np.abs(outer) ** 2).sum(axis=0)
        done += size

    means, stderrs = {}, {}
    for key in sums:
        means[key] = sums[key] / trials
        variance = (squares[key] - trials * np.abs(means[key]) ** 2) / (trials - 1)
        stderrs[key] = np.sqrt(np.clip(variance, 0., None) / trials)

    logger.info('done ( %s seconds )', round(time.time() - start_time, 2))
    return PseudoInformation(means['pseudo'], means['information'],
                             stderrs['pseudo'], stderrs['information'], trials)
