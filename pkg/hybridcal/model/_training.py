###########
# imports #
###########

import math
from dataclasses import dataclass

import numpy as np

from .._exceptions import DegeneratePlanError, TrainingError
from ._impedance import as_impedance

#############
# functions #
#############


@dataclass(frozen=True)
class LoadSwitchPlan:
    """Two-valued load schedule: Z_1 for the first K symbols, Z_2 afterwards."""
    z1: object
    z2: object
    K: int
    T: int

    def __post_init__(self):
        object.__setattr__(self, 'z1', as_impedance(self.z1))
        object.__setattr__(self, 'z2', as_impedance(self.z2))
        if self.z1 == self.z2:
            raise DegeneratePlanError('load impedances must differ, both are {}'.format(self.z1))
        if not 1 <= self.K < self.T:
            raise TrainingError('need 1 <= K < T, got K={} and T={}'.format(self.K, self.T))


@dataclass(frozen=True, eq=False)
class TrainingSequence:
    """Known training symbols x_1..x_T split after symbol K.

    symbols -- complex vector of length T
    K       -- number of symbols received with the first load
    """
    symbols: np.ndarray
    K: int

    def __post_init__(self):
        symbols = np.asarray(self.symbols, dtype=complex).ravel()
        symbols.setflags(write=False)
        object.__setattr__(self, 'symbols', symbols)
        object.__setattr__(self, 'K', int(self.K))
        if not 1 <= self.K < len(symbols):
            raise TrainingError('need 1 <= K < T, got K={} and T={}'.format(self.K, len(symbols)))
        if self.S1 <= 0 or self.S2 <= 0:
            raise TrainingError('both halves of the training sequence need '
                                'nonzero energy (S1={}, S2={})'.format(self.S1, self.S2))

    @property
    def T(self):
        return len(self.symbols)

    @property
    def x1(self):
        return self.symbols[:self.K]

    @property
    def x2(self):
        return self.symbols[self.K:]

    @property
    def S1(self):
        return float(np.vdot(self.x1, self.x1).real)

    @property
    def S2(self):
        return float(np.vdot(self.x2, self.x2).real)

    @property
    def alpha(self):
        return self.S2 / self.S1

    def __eq__(self, other):
        if not isinstance(other, TrainingSequence):
            return NotImplemented
        return self.K == other.K and np.array_equal(self.symbols, other.symbols)


def zadoff_chu(T, u=1, K=None):
    """Constructs an even-length Zadoff-Chu training sequence
    x_n = exp(-j pi u n^2 / T), n = 0..T-1. Every symbol has unit magnitude,
    so S_1 = K and S_2 = T - K.
    T -- sequence length, even and positive
    u -- root index, odd and coprime with T
    K -- split index, defaults to T/2."""
    T, u = int(T), int(u)
    if T <= 0 or T % 2:
        raise TrainingError('Zadoff-Chu length must be even and positive, got {}'.format(T))
    if u % 2 == 0 or math.gcd(u, T) != 1:
        raise TrainingError('root index {} must be odd and coprime with {}'.format(u, T))
    if K is None:
        K = T // 2
    n = np.arange(T)
    # n^2 mod 2T keeps the phase argument small for long sequences
    phase = -np.pi * u * ((n * n) % (2 * T)) / T
    return TrainingSequence(np.exp(1j * phase), K)
