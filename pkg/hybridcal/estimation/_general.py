###########
# imports #
###########

import logging

import numpy as np

from .._exceptions import ModelError, SolverError, UnidentifiableError
from ..stats import cross_moments
from ._closed_form import (estimate_consistent, estimate_iid_quadratic, estimate_low_noise,
                           estimate_single_packet, estimate_slow_fading, ml_f_iid,
                           ml_f_low_noise, require_identifiable)
from ._likelihood import EigenProblem, HybridEstimate, candidate_loglik
from ._newton import SolverSettings, damped_newton

logger = logging.getLogger(__name__)

METHODS = ('general', 'iid_quadratic', 'low_noise', 'single_packet',
           'slow_fading', 'consistent', 'alternating')

_ALIASES = {'map_ml_general': 'general'}

#############
# functions #
#############


def alternating_map_ml(stats, prior, tol=1e-12, max_iter=1000, F0=0j):
    """Coordinate ascent on the hybrid log-likelihood. Starting at F0,
    alternates the MAP channel for the current F with the least-squares
    F = H^H V_2 / H^H H for the current channel.
    stats    -- SufficientStats
    prior    -- nonsingular ChannelPrior
    tol      -- stop once |F_new - F| <= tol (1 + |F|)
    max_iter -- the maximal number of sweeps
    F0       -- starting value, 0 by default"""
    require_identifiable(stats)
    problem = EigenProblem(stats, prior)
    F = complex(F0)
    converged = False
    for cpt in range(1, max_iter + 1):
        H = problem.map_H(F)
        energy = np.vdot(H, H).real
        if energy == 0:
            raise UnidentifiableError('the channel estimate vanished', H_hat=H)
        F_new = complex(np.vdot(H, stats.V2) / energy)
        step = abs(F_new - F)
        F = F_new
        if step <= tol * (1 + abs(F)):
            converged = True
            break
    H = problem.map_H(F)
    if not converged:
        raise SolverError('alternating maximization did not settle after {} sweeps'.format(max_iter),
                          best_F=F, best_residual=abs(problem.g(F)) / (problem.scale or 1.))
    estimate = HybridEstimate(H, F, candidate_loglik(H, F, stats, prior), 'alternating')
    estimate.candidates = [(F, estimate.loglik)]
    estimate.residual = abs(problem.g(F))
    estimate.iterations = cpt
    return estimate


_SEED_SWEEPS = 200


def _alternating_start(stats, prior, F0=0j, sweeps=_SEED_SWEEPS, tol=1e-8):
    """Runs the alternating ascent for at most ``sweeps`` sweeps from F0.
    Returns the last iterate and whether the ascent settled."""
    try:
        return alternating_map_ml(stats, prior, tol=tol, max_iter=sweeps, F0=F0).F_hat, True
    except SolverError as error:
        return error.best_F, False


def _seeds(stats, prior, settings, alternating_F):
    """Default starting values followed by the user-supplied ones."""
    moments = cross_moments(stats)
    seeds = []
    try:
        # i.i.d. closed form with the average variance Tr[C_H] / L
        seeds.extend(ml_f_iid(moments, stats.c(prior.trace / prior.L), stats.alpha)[:2])
        seeds.extend(ml_f_low_noise(moments, stats.alpha))
    except UnidentifiableError:
        logger.debug('closed-form seeds unavailable, cross moments are degenerate')
    seeds.append(0j)
    seeds.append(alternating_F)
    seeds.extend(settings.multistart)
    return [complex(F) for F in seeds if np.isfinite(F)]


def _resume_alternating(problem, stats, prior, settings, F):
    """Continues the alternating ascent from F in doubling chunks and restarts
    Newton after each chunk, until a start converges or the sweep budget of
    the settings is spent. Returns the converged NewtonResult or None."""
    spent, chunk = _SEED_SWEEPS, 2 * _SEED_SWEEPS
    while spent < settings.max_alternating_sweeps and np.isfinite(F):
        chunk = min(chunk, settings.max_alternating_sweeps - spent)
        F, settled = _alternating_start(stats, prior, F, chunk, tol=1e-12)
        spent += chunk
        result = damped_newton(problem.g, F, problem.scale, settings)
        if result.converged:
            logger.debug('alternating ascent reached a root after %d sweeps', spent)
            return result
        if settled:
            break
        chunk *= 2
    return None


def _dedupe(roots, radius):
    kept = []
    for result in roots:
        if all(abs(result.F - other.F) > radius * (1 + abs(other.F)) for other in kept):
            kept.append(result)
    return kept


def joint_map_ml_general(stats, prior, settings=None):
    """
    Joint MAP/ML estimate for an arbitrary nonsingular channel covariance.

    Every zero of g(F) reachable from the seeds is a candidate for F; the
    channel for each is the MAP estimate given F, and the candidate with the
    largest hybrid log-likelihood wins.

    Parameters
    ----------
    stats : SufficientStats
    prior : ChannelPrior
        nonsingular, with prior.L == stats.L
    settings : SolverSettings, optional

    Returns
    -------
    estimate : HybridEstimate
        method 'general'; ``residual`` holds the absolute |g(F_hat)| and
        ``iterations`` the Newton steps spent on the winning root
    """
    settings = settings or SolverSettings()
    require_identifiable(stats)
    problem = EigenProblem(stats, prior)

    alternating_F, _ = _alternating_start(stats, prior)
    results = [damped_newton(problem.g, F0, problem.scale, settings)
               for F0 in _seeds(stats, prior, settings, alternating_F)]
    roots = _dedupe([r for r in results if r.converged], settings.dedupe_radius)
    if not roots:
        rescued = _resume_alternating(problem, stats, prior, settings, alternating_F)
        roots = [rescued] if rescued is not None else []
    if not roots:
        best = min(results, key=lambda r: r.residual)
        raise SolverError('no start converged within {} iterations (best residual {:.3g})'
                          .format(settings.max_iterations, best.residual),
                          best_F=best.F, best_residual=best.residual)

    candidates = []
    for root in roots:
        H = problem.map_H(root.F)
        candidates.append((H, root, candidate_loglik(H, root.F, stats, prior)))
    H, root, loglik = max(candidates, key=lambda item: item[2])
    logger.debug('general solver: %d distinct roots, F_hat = %s', len(roots), root.F)
    return HybridEstimate(H, root.F, loglik, 'general',
                          [(r.F, ll) for _, r, ll in candidates],
                          residual=abs(problem.g(root.F)), iterations=root.iterations)


def estimate(method, stats, prior, settings=None):
    """Runs one estimator by name.
    method   -- one of METHODS, or map_ml_general for general
    stats    -- SufficientStats
    prior    -- ChannelPrior for stats.L packets
    settings -- SolverSettings for the general solver"""
    name = _ALIASES.get(method, method)
    if prior.L != stats.L:
        raise ModelError('prior is for L={} packets, statistics have L={}'.format(prior.L, stats.L))
    if name not in METHODS:
        raise ModelError('unknown method {!r}, expected one of {}'.format(method, METHODS + tuple(_ALIASES)))
    if name == 'slow_fading':
        if prior.kind != 'slow_fading' and prior.L > 1:
            raise ModelError('slow_fading pools all packets and needs a slow_fading prior, got {!r}'.format(prior))
        return estimate_slow_fading(stats, prior.sigma_H2)
    if name == 'single_packet':
        return estimate_single_packet(stats, prior.sigma_H2)
    if name == 'iid_quadratic':
        return estimate_iid_quadratic(stats, prior)
    if name == 'low_noise':
        return estimate_low_noise(stats, prior)
    if name == 'consistent':
        return estimate_consistent(stats, prior)
    if name == 'alternating':
        return alternating_map_ml(stats, prior)
    return joint_map_ml_general(stats, prior, settings)


def method_supports(method, prior):
    """Whether ``estimate(method, ., prior)`` is defined for this prior."""
    name = _ALIASES.get(method, method)
    if name == 'single_packet':
        return prior.L == 1
    if name == 'slow_fading':
        return prior.kind == 'slow_fading' or prior.L == 1
    if name in ('iid_quadratic', 'consistent'):
        return (prior.kind == 'iid' or prior.L == 1) and prior.sigma_H2 > 0
    return name in METHODS and not prior.is_singular
