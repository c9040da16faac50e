"""
Damped Newton iteration on the real plane
=========================================

g(F) depends on both F and conj(F), so it has no complex derivative. Its zeros
are found by treating (Re F, Im F) as two real unknowns and (Re g, Im g) as two
real equations, with a centrally differenced Jacobian and step halving.
"""

###########
# imports #
###########

import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

logger = logging.getLogger(__name__)

#############
# functions #
#############


@dataclass(frozen=True)
class SolverSettings:
    """Settings of the general root finder.

    root_tolerance -- threshold on |g(F)| divided by the data scale
    max_iterations -- Newton steps per start
    multistart     -- extra starting values for F besides the default seeds
    dedupe_radius  -- roots closer than this (relative to 1 + |F|) are merged
    jacobian_step  -- relative step of the central differences
    max_halvings   -- step halvings before a start is abandoned
    max_alternating_sweeps -- budget of the alternating ascent that is resumed
                      when no start converges
    """
    root_tolerance: float = 1e-10
    max_iterations: int = 100
    multistart: Tuple[complex, ...] = ()
    dedupe_radius: float = 1e-6
    jacobian_step: float = 1e-7
    max_halvings: int = 40
    max_alternating_sweeps: int = 100000

    def __post_init__(self):
        if not self.root_tolerance > 0:
            raise ValueError('root_tolerance must be > 0, got {}'.format(self.root_tolerance))
        if int(self.max_iterations) < 1:
            raise ValueError('max_iterations must be >= 1, got {}'.format(self.max_iterations))
        if self.dedupe_radius < 0:
            raise ValueError('dedupe_radius must be >= 0, got {}'.format(self.dedupe_radius))
        if int(self.max_alternating_sweeps) < 0:
            raise ValueError('max_alternating_sweeps must be >= 0, got {}'.format(self.max_alternating_sweeps))
        object.__setattr__(self, 'max_iterations', int(self.max_iterations))
        object.__setattr__(self, 'max_alternating_sweeps', int(self.max_alternating_sweeps))
        object.__setattr__(self, 'multistart', tuple(complex(F) for F in self.multistart))


class NewtonResult(NamedTuple):
    F: complex
    residual: float
    iterations: int
    converged: bool


def _jacobian(fun, F, step):
    h = step * max(1., abs(F))
    d_re = (fun(F + h) - fun(F - h)) / (2 * h)
    d_im = (fun(F + 1j * h) - fun(F - 1j * h)) / (2 * h)
    return np.array([[d_re.real, d_im.real],
                     [d_re.imag, d_im.imag]])


def _newton_step(fun, F, value, settings):
    J = _jacobian(fun, F, settings.jacobian_step)
    rhs = -np.array([value.real, value.imag])
    try:
        delta = np.linalg.solve(J, rhs)
    except np.linalg.LinAlgError:
        delta = np.linalg.lstsq(J, rhs, rcond=None)[0]
    return complex(delta[0], delta[1])


def _settled(F, err, step, settings):
    # far out in the plane g decays like |F|^-3 without a root, so a small
    # residual only counts together with a small step
    return err <= settings.root_tolerance and abs(step) <= 1e-6 * (1 + abs(F))


def damped_newton(fun, F0, scale, settings=None, verbose=False, log=False):
    """
    Returns a zero of the complex-valued, non-holomorphic function fun.

    Parameters
    ----------
    fun : callable
        complex -> complex
    F0 : complex
        starting value
    scale : float
        positive normalization of the residual |fun(F)|
    settings : SolverSettings, optional
    verbose : bool, optional
        log the iterations at DEBUG level
    log : bool, optional
        also return the history of normalized residuals

    Returns
    -------
    result : NewtonResult
        the last iterate, its normalized residual, the number of steps taken
        and whether the tolerance was met with a vanishing Newton step
    """
    settings = settings or SolverSettings()
    scale = scale if scale > 0 else 1.
    F = complex(F0)
    value = complex(fun(F))
    err = abs(value) / scale
    history = {'err': [err]}
    cpt = 0
    converged = err == 0

    while not converged and cpt < settings.max_iterations:
        step = _newton_step(fun, F, value, settings)
        if not np.isfinite(step):
            break
        if _settled(F, err, step, settings):
            converged = True
            break

        t = 1.
        for _ in range(settings.max_halvings):
            candidate = F + t * step
            candidate_value = complex(fun(candidate))
            candidate_err = abs(candidate_value) / scale
            if candidate_err < err or candidate_err == 0:
                break
            t /= 2
        else:
            # no decrease along the Newton direction
            break

        F, value, err = candidate, candidate_value, candidate_err
        cpt += 1
        history['err'].append(err)
        converged = err == 0

        if verbose:
            if cpt == 1:
                logger.debug('{:5s}|{:12s}|{:12s}'.format('It.', 'Err', 'Step'))
            logger.debug('{:5d}|{:8e}|{:8e}'.format(cpt, err, abs(t * step)))

    if not converged and cpt == settings.max_iterations and err <= settings.root_tolerance:
        # the last allowed step may have landed on the root
        step = _newton_step(fun, F, value, settings)
        converged = np.isfinite(step) and _settled(F, err, step, settings)

    result = NewtonResult(F, err, cpt, bool(converged))
    if log:
        return result, history
    return result
