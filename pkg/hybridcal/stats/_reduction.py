"""
Sufficient statistics
=====================

Matched-filter reduction of raw training packets. Conditioned on H,

    V_1 = H + N_1,   N_1 ~ CN(0, (noise_var / S_1) I)
    V_2 = F H + N_2, N_2 ~ CN(0, (noise_var / S_2) I)

so the stacked V = [V_1; V_2] has mean [H; F H] and block-diagonal covariance
diag(noise_var/S_1 I, noise_var/S_2 I). By the factorization theorem no
information about (H, F) is lost.
"""

###########
# imports #
###########

from dataclasses import dataclass

import numpy as np

from .._exceptions import ModelError
from ..model import PacketObservation

#############
# functions #
#############


@dataclass(frozen=True, eq=False)
class SufficientStats:
    """Reduced observation of L packets.

    V1, V2    -- complex vectors of length L
    S1, S2    -- training energies of the two halves
    noise_var -- sigma_n^2 per raw sample
    """
    V1: np.ndarray
    V2: np.ndarray
    S1: float
    S2: float
    noise_var: float

    def __post_init__(self):
        V1 = np.atleast_1d(np.asarray(self.V1, dtype=complex)).ravel()
        V2 = np.atleast_1d(np.asarray(self.V2, dtype=complex)).ravel()
        if len(V1) != len(V2) or len(V1) == 0:
            raise ModelError('V1 and V2 must have the same nonzero length, '
                             'got {} and {}'.format(len(V1), len(V2)))
        if not (self.S1 > 0 and self.S2 > 0):
            raise ModelError('training energies must be positive, got S1={} S2={}'.format(self.S1, self.S2))
        if not (np.isfinite(self.noise_var) and self.noise_var >= 0):
            raise ModelError('noise variance must be finite and >= 0, got {}'.format(self.noise_var))
        object.__setattr__(self, 'V1', V1)
        object.__setattr__(self, 'V2', V2)
        object.__setattr__(self, 'S1', float(self.S1))
        object.__setattr__(self, 'S2', float(self.S2))
        object.__setattr__(self, 'noise_var', float(self.noise_var))

    @property
    def L(self):
        return len(self.V1)

    @property
    def alpha(self):
        return self.S2 / self.S1

    @property
    def V(self):
        return np.concatenate((self.V1, self.V2))

    def c(self, sigma_H2):
        """Shrinkage factor S_1 sigma_H^2 / (S_1 sigma_H^2 + sigma_n^2)."""
        return self.S1 * sigma_H2 / (self.S1 * sigma_H2 + self.noise_var)

    def d(self, sigma_H2):
        """Consistency correction 1 - (sigma_n^2 / (S_1 sigma_H^2))^2."""
        return 1. - (self.noise_var / (self.S1 * sigma_H2)) ** 2

    def pooled(self):
        """All packets regarded as one packet of L times the training energy."""
        return SufficientStats(np.mean(self.V1, keepdims=True), np.mean(self.V2, keepdims=True),
                               self.L * self.S1, self.L * self.S2, self.noise_var)


@dataclass(frozen=True)
class CrossMoments:
    """P_ij = (1/L) V_i^H V_j."""
    p11: float
    p12: complex
    p21: complex
    p22: float


def reduce_packet(obs, training):
    """Matched-filter projections V_1 = x_1^H v_1 / S_1 and V_2 = x_2^H v_2 / S_2."""
    if obs.T != training.T or obs.K != training.K:
        raise ModelError('packet (T={}, K={}) does not match the training sequence '
                         '(T={}, K={})'.format(obs.T, obs.K, training.T, training.K))
    V1 = np.vdot(training.x1, obs.v1) / training.S1
    V2 = np.vdot(training.x2, obs.v2) / training.S2
    return complex(V1), complex(V2)


def reduce_all(packets, training, scenario):
    """Stacks the per-packet reductions, packet i to index i.
    packets  -- sequence of PacketObservation, an L x T array of raw samples
                or a length-T array holding a single packet
    training -- TrainingSequence used for all packets
    scenario -- anything with a ``noise_var`` attribute (a ReceiverScenario)"""
    if isinstance(packets, np.ndarray) and packets.ndim == 1 and packets.dtype != object:
        packets = packets[np.newaxis, :]
    if isinstance(packets, np.ndarray) and packets.ndim == 2:
        if packets.shape[0] == 0:
            raise ModelError('at least one packet is needed')
        if packets.shape[1] != training.T:
            raise ModelError('packets have length {}, training has {}'.format(packets.shape[1], training.T))
        V1 = packets[:, :training.K] @ training.x1.conj() / training.S1
        V2 = packets[:, training.K:] @ training.x2.conj() / training.S2
    else:
        packets = list(packets)
        if not packets:
            raise ModelError('at least one packet is needed')
        pairs = [reduce_packet(p if isinstance(p, PacketObservation)
                               else PacketObservation(p, training.K), training) for p in packets]
        V1, V2 = (np.array(v) for v in zip(*pairs))
    return SufficientStats(V1, V2, training.S1, training.S2, scenario.noise_var)


def cross_moments(stats):
    V1, V2, L = stats.V1, stats.V2, stats.L
    p11 = float(np.vdot(V1, V1).real) / L
    p22 = float(np.vdot(V2, V2).real) / L
    p12 = complex(np.vdot(V1, V2)) / L
    return CrossMoments(p11, p12, p12.conjugate(), p22)
