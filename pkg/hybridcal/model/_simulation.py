###########
# imports #
###########

from dataclasses import dataclass

import numpy as np

from .._exceptions import ModelError
from ._prior import complex_normal

#############
# functions #
#############


@dataclass(frozen=True, eq=False)
class PacketObservation:
    """Received samples of one training packet; v_1 = v[:K], v_2 = v[K:]."""
    v: np.ndarray
    K: int

    def __post_init__(self):
        v = np.asarray(self.v, dtype=complex).ravel()
        if not 1 <= self.K < len(v):
            raise ModelError('split index K={} outside a packet of length {}'.format(self.K, len(v)))
        object.__setattr__(self, 'v', v)

    @property
    def T(self):
        return len(self.v)

    @property
    def v1(self):
        return self.v[:self.K]

    @property
    def v2(self):
        return self.v[self.K:]

    def __mul__(self, a):
        return PacketObservation(a * self.v, self.K)

    __rmul__ = __mul__


def noiseless_packet(H_i, F, training):
    """Mean of a packet, [H_i x_1; F H_i x_2]."""
    return np.concatenate((H_i * training.x1, F * H_i * training.x2))


def simulate_packet(H_i, F, scenario, rng):
    """Simulates one packet v = [H_i x_1; F H_i x_2] + n with n ~ CN(0, noise_var I).
    H_i      -- channel of this packet
    F        -- impedance parameter
    scenario -- ReceiverScenario providing the training sequence and noise level
    rng      -- numpy Generator"""
    training = scenario.training
    v = noiseless_packet(complex(H_i), complex(F), training)
    v = v + complex_normal(rng, training.T, scenario.noise_var)
    return PacketObservation(v, training.K)


def simulate_packet_matrix(H, F, scenario, rng):
    """Raw samples of L packets as an L x T array, row i for packet i."""
    H = np.atleast_1d(np.asarray(H, dtype=complex))
    training = scenario.training
    mean = np.outer(H, np.concatenate((training.x1, F * training.x2)))
    return mean + complex_normal(rng, mean.shape, scenario.noise_var)


def simulate_packets(H, F, scenario, rng):
    """Simulates L packets, one per entry of H, in packet order."""
    K = scenario.training.K
    return [PacketObservation(row, K) for row in simulate_packet_matrix(H, F, scenario, rng)]
