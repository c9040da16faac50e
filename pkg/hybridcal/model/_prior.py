"""
Channel priors
==============

Zero-mean circularly-symmetric complex Gaussian priors on the channel vector
H = [H_1, ..., H_L]. CN(0, s) means variance s/2 on each real component.
"""

###########
# imports #
###########

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import eigh, toeplitz

from .._exceptions import ModelError

PRIOR_KINDS = ('iid', 'slow_fading', 'exponential', 'explicit')

# eigenvalues below this fraction of the largest one count as zero
SINGULAR_RTOL = 1e-12

#############
# functions #
#############


@dataclass(frozen=True, eq=False)
class ChannelPrior:
    """Known covariance C_H of the L-packet channel vector.

    Use the constructors ``iid``, ``slow_fading``, ``exponential`` and
    ``explicit`` rather than the bare initializer. The i.i.d. kind never
    materializes its L x L matrix unless asked to, so very long packet
    sequences stay cheap.
    """
    L: int
    kind: str
    sigma_H2: float = 1.
    r: float = 0.
    matrix: np.ndarray = None

    def __post_init__(self):
        if self.kind not in PRIOR_KINDS:
            raise ModelError('unknown prior kind {!r}, expected one of {}'.format(self.kind, PRIOR_KINDS))
        if int(self.L) < 1:
            raise ModelError('packet count L must be >= 1, got {}'.format(self.L))
        object.__setattr__(self, 'L', int(self.L))
        if self.kind == 'explicit':
            C = np.atleast_2d(np.asarray(self.matrix, dtype=complex))
            if C.shape != (self.L, self.L):
                raise ModelError('covariance must be {0}x{0}, got {1}'.format(self.L, C.shape))
            if not np.allclose(C, C.conj().T, rtol=1e-10, atol=1e-12):
                raise ModelError('covariance must be Hermitian')
            C.setflags(write=False)
            object.__setattr__(self, 'matrix', C)
            object.__setattr__(self, 'sigma_H2', float(np.trace(C).real) / self.L)
        else:
            if not np.isfinite(self.sigma_H2) or self.sigma_H2 < 0:
                raise ModelError('sigma_H2 must be finite and >= 0, got {}'.format(self.sigma_H2))
            object.__setattr__(self, 'sigma_H2', float(self.sigma_H2))
        if self.kind == 'exponential' and not 0 <= self.r < 1:
            raise ModelError('exponential correlation r must lie in [0, 1), got {}'.format(self.r))
        eigvals = self.eigenvalues
        if eigvals.min() < -SINGULAR_RTOL * max(eigvals.max(), 1.):
            raise ModelError('covariance is not positive semidefinite '
                             '(smallest eigenvalue {:.3g})'.format(eigvals.min()))

    @classmethod
    def iid(cls, L, sigma_H2=1.):
        return cls(L, 'iid', sigma_H2)

    @classmethod
    def slow_fading(cls, L, sigma_H2=1.):
        return cls(L, 'slow_fading', sigma_H2)

    @classmethod
    def exponential(cls, L, sigma_H2=1., r=0.5):
        return cls(L, 'exponential', sigma_H2, r)

    @classmethod
    def explicit(cls, matrix):
        matrix = np.atleast_2d(matrix)
        return cls(matrix.shape[0], 'explicit', matrix=matrix)

    def with_packets(self, L):
        """Same kind and scale for a different packet count."""
        if self.kind == 'explicit':
            if L != self.L:
                raise ModelError('an explicit covariance fixes L = {}'.format(self.L))
            return self
        return ChannelPrior(L, self.kind, self.sigma_H2, self.r)

    def covariance(self):
        """Materialized L x L covariance matrix."""
        if self.kind == 'iid':
            return self.sigma_H2 * np.eye(self.L)
        if self.kind == 'slow_fading':
            return self.sigma_H2 * np.ones((self.L, self.L))
        if self.kind == 'exponential':
            return self.sigma_H2 * toeplitz(self.r ** np.arange(self.L))
        return np.array(self.matrix)

    @cached_property
    def _spectrum(self):
        if self.kind == 'iid':
            return np.full(self.L, self.sigma_H2), None
        if self.kind == 'slow_fading':
            # rank one: all the energy sits on the normalized all-ones vector
            eigvals = np.zeros(self.L)
            eigvals[-1] = self.L * self.sigma_H2
            if self.L == 1:
                return eigvals, None
        eigvals, eigvecs = eigh(self.covariance())
        return np.clip(eigvals, 0., None), eigvecs

    @property
    def eigenvalues(self):
        return self._spectrum[0]

    @property
    def eigenvectors(self):
        """Unitary eigenbasis of C_H, or None when it is the identity."""
        return self._spectrum[1]

    @property
    def trace(self):
        return float(self.eigenvalues.sum())

    @property
    def is_singular(self):
        eigvals = self.eigenvalues
        return bool(eigvals.max() <= 0 or eigvals.min() <= SINGULAR_RTOL * eigvals.max())

    def to_eigenbasis(self, x):
        """U^H x for vectors (last axis of length L)."""
        U = self.eigenvectors
        return x if U is None else x @ U.conj()

    def from_eigenbasis(self, w):
        """U w, the inverse of ``to_eigenbasis``."""
        U = self.eigenvectors
        return w if U is None else w @ U.T

    def __repr__(self):
        if self.kind == 'explicit':
            return 'ChannelPrior.explicit(L={})'.format(self.L)
        extra = ', r={}'.format(self.r) if self.kind == 'exponential' else ''
        return 'ChannelPrior.{}(L={}, sigma_H2={}{})'.format(self.kind, self.L, self.sigma_H2, extra)


def complex_normal(rng, shape, variance=1.):
    """Circularly-symmetric complex Gaussian samples of the given variance."""
    scale = np.sqrt(variance / 2.)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_channels(prior, rng, size=None):
    """Draws H ~ CN(0, C_H).
    prior -- a ChannelPrior
    rng   -- numpy Generator
    size  -- optional number of independent draws; the result then has shape (size, L)."""
    lead = () if size is None else (int(size),)
    if prior.kind == 'iid':
        return complex_normal(rng, lead + (prior.L,), prior.sigma_H2)
    if prior.kind == 'slow_fading':
        # a single scalar per draw, replicated over the packets
        scalar = complex_normal(rng, lead + (1,), prior.sigma_H2)
        return np.repeat(scalar, prior.L, axis=-1)
    w = complex_normal(rng, lead + (prior.L,)) * np.sqrt(prior.eigenvalues)
    return prior.from_eigenbasis(w)
