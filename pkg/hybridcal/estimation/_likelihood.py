"""
Hybrid log-likelihood
=====================

ln p(V, H; F) = ln p(V | H; F) + ln p(H) for the reduced observation V and a
known Gaussian prior on H, together with its complex gradient with respect to
theta* = [H; F]*, the MAP channel estimate for a given F and the rational
function g(F) whose zeros are the ML candidates for F.

All prior-dependent quantities are evaluated in the eigenbasis of C_H, where
A(F) = [(1 + alpha |F|^2) I + (sigma_n^2 / S_1) C_H^{-1}]^{-1} is diagonal.
"""

###########
# imports #
###########

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .._exceptions import ModelError, SingularPriorError
from ..model import impedance_from_f

#############
# functions #
#############


@dataclass
class HybridEstimate:
    """A joint estimate (H_hat, F_hat) and where it came from.

    loglik     -- hybrid log-likelihood at (H_hat, F_hat); in noiseless mode
                  (noise_var = 0) the negated data misfit
    method     -- general, iid_quadratic, low_noise, single_packet,
                  slow_fading, consistent or alternating
    candidates -- (F, loglik) pairs that were compared
    """
    H_hat: np.ndarray
    F_hat: complex
    loglik: float
    method: str
    candidates: List[Tuple[complex, float]] = field(default_factory=list)
    residual: Optional[float] = None
    iterations: Optional[int] = None
    positive_root_selected: Optional[bool] = None

    @property
    def L(self):
        return len(self.H_hat)

    def impedance(self, z1, z2):
        """Antenna impedance implied by F_hat."""
        return impedance_from_f(self.F_hat, z1, z2)

    def to_dict(self):
        out = {'method': self.method,
               'F_hat': [self.F_hat.real, self.F_hat.imag],
               'H_hat': [[h.real, h.imag] for h in self.H_hat],
               'loglik': self.loglik,
               'candidates': [{'F': [F.real, F.imag], 'loglik': ll} for F, ll in self.candidates]}
        if self.residual is not None:
            out['residual'] = self.residual
        if self.positive_root_selected is not None:
            out['positive_root_selected'] = self.positive_root_selected
        return out


class EigenProblem():
    """Sufficient statistics rotated into the eigenbasis of a nonsingular prior.
    stats -- SufficientStats
    prior -- ChannelPrior with L = stats.L"""

    def __init__(self, stats, prior):
        _check_prior(stats, prior)
        self.stats = stats
        self.prior = prior
        self.alpha = stats.alpha
        self.W1 = prior.to_eigenbasis(stats.V1)
        self.W2 = prior.to_eigenbasis(stats.V2)
        # (sigma_n^2 / S_1) C_H^{-1} in the eigenbasis
        self.eps = stats.noise_var / (stats.S1 * prior.eigenvalues)
        self.scale = float(np.vdot(stats.V1, stats.V1).real + self.alpha * np.vdot(stats.V2, stats.V2).real)

    def shrinkage(self, F):
        return 1. / (1. + self.alpha * abs(F) ** 2 + self.eps)

    def map_H(self, F):
        a = self.shrinkage(F)
        return self.prior.from_eigenbasis(a * (self.W1 + self.alpha * np.conj(F) * self.W2))

    def g(self, F):
        a = self.shrinkage(F)
        b = self.W1 + self.alpha * np.conj(F) * self.W2
        rest = self.W2 - F * self.W1 + self.eps * self.W2
        return complex(np.sum(np.conj(b) * a * a * rest))


def map_H_given_F(F, stats, prior):
    """MAP channel estimate A(F) (V_1 + alpha F* V_2) for a fixed F."""
    return EigenProblem(stats, prior).map_H(complex(F))


def g_of_F(F, stats, prior):
    """g(F) = (V_1 + alpha F* V_2)^H A(F)^H A(F) (V_2 - F V_1 + (sigma_n^2/S_1) C_H^{-1} V_2).

    Equivalently H(F)^H (V_2 - F H(F)) with H(F) = map_H_given_F(F); not
    holomorphic in F.
    """
    return EigenProblem(stats, prior).g(complex(F))


def _check_prior(stats, prior):
    if prior.L != stats.L:
        raise ModelError('prior is for L={} packets, statistics have L={}'.format(prior.L, stats.L))
    if prior.is_singular:
        raise SingularPriorError()


def hybrid_loglik(H, F, stats, prior):
    """Exact ln p(V | H; F) + ln p(H), normalization constants included.
    H     -- channel vector of length L
    F     -- impedance parameter
    stats -- SufficientStats with noise_var > 0
    prior -- nonsingular ChannelPrior"""
    _check_prior(stats, prior)
    if stats.noise_var <= 0:
        raise ModelError('the hybrid log-likelihood needs noise_var > 0')
    H = np.asarray(H, dtype=complex)
    L, s2 = stats.L, stats.noise_var
    r1 = stats.V1 - H
    r2 = stats.V2 - F * H
    observation = (-(stats.S1 / s2) * np.vdot(r1, r1).real
                   - (stats.S2 / s2) * np.vdot(r2, r2).real
                   - L * np.log(np.pi * s2 / stats.S1)
                   - L * np.log(np.pi * s2 / stats.S2))
    w = prior.to_eigenbasis(H)
    eigvals = prior.eigenvalues
    channel = (-np.sum(np.abs(w) ** 2 / eigvals)
               - L * np.log(np.pi) - np.sum(np.log(eigvals)))
    return float(observation + channel)


def data_misfit(H, F, stats):
    """S_1 |V_1 - H|^2 + S_2 |V_2 - F H|^2."""
    r1 = stats.V1 - H
    r2 = stats.V2 - F * H
    return float(stats.S1 * np.vdot(r1, r1).real + stats.S2 * np.vdot(r2, r2).real)


def candidate_loglik(H, F, stats, prior):
    """Score used to rank candidate estimates. Equals hybrid_loglik for
    noise_var > 0; in noiseless mode it is the negated data misfit, the
    noise_var -> 0 limit of noise_var times the log-likelihood."""
    if stats.noise_var > 0:
        return hybrid_loglik(H, F, stats, prior)
    return -data_misfit(H, F, stats)


def hybrid_score(H, F, stats, prior):
    """Complex gradient dL/dtheta* of the hybrid log-likelihood at theta = [H; F].

    Returns a vector of length L + 1: the L channel entries
    (S_1/s)(V_1 - H) + (S_2/s)(V_2 - F H) F* - C_H^{-1} H followed by
    (S_2/s) H^H (V_2 - F H), with s = sigma_n^2.
    """
    _check_prior(stats, prior)
    H = np.asarray(H, dtype=complex)
    s2 = stats.noise_var
    r2 = stats.V2 - F * H
    prior_term = prior.from_eigenbasis(prior.to_eigenbasis(H) / prior.eigenvalues)
    grad_H = (stats.S1 / s2) * (stats.V1 - H) + (stats.S2 / s2) * r2 * np.conj(F) - prior_term
    grad_F = (stats.S2 / s2) * np.vdot(H, r2)
    return np.append(grad_H, grad_F)
