###########
# imports #
###########

import logging
from typing import NamedTuple

import numpy as np

from .._exceptions import ModelError, UnidentifiableError
from ..model import ChannelPrior
from ..stats import cross_moments
from ._likelihood import EigenProblem, HybridEstimate, candidate_loglik

logger = logging.getLogger(__name__)

# |P21| below this fraction of sqrt(P11 P22) collapses the quadratic
DEGENERACY_RTOL = 1e-12

#############
# functions #
#############


class RootPair(NamedTuple):
    root_plus: complex
    root_minus: complex
    selected: complex


def _check_unit_interval(name, value):
    if not 0 < value <= 1:
        raise ModelError('{} must lie in (0, 1], got {}'.format(name, value))


def _linear_root(moments, c, alpha):
    coefficient = c * moments.p11 - alpha * moments.p22
    if coefficient == 0:
        raise UnidentifiableError('cross moments carry no information on F')
    return complex(moments.p12 / coefficient)


def _is_degenerate(moments):
    return abs(moments.p21) <= DEGENERACY_RTOL * np.sqrt(moments.p11 * moments.p22)


def _quadratic_roots(moments, c, alpha, d=1., scale_denominator=True):
    """Both roots of P_12 + (alpha P_22 - c P_11) F - alpha c P_21 F^2 = 0,
    optionally with the radical's cross term multiplied by d."""
    b = alpha * moments.p22 - c * moments.p11
    radical = np.sqrt(b * b + 4 * alpha * c * d * abs(moments.p21) ** 2)
    denominator = 2 * alpha * moments.p21 * (c if scale_denominator else 1.)
    return complex((b + radical) / denominator), complex((b - radical) / denominator)


def profile_objective(F, moments, c, alpha):
    """Hybrid log-likelihood of the i.i.d. model maximized over H, up to an
    affine map with positive slope. Larger is better."""
    eps = 1. / c - 1.
    gain = moments.p11 + 2 * alpha * (np.conj(F) * moments.p12).real + alpha ** 2 * abs(F) ** 2 * moments.p22
    return gain / (1 + alpha * abs(F) ** 2 + eps)


def ml_f_iid(moments, c, alpha):
    """Roots of the quadratic for F under an i.i.d. prior and the likelier of the two.
    moments -- CrossMoments of the statistics
    c       -- shrinkage S_1 sigma_H^2 / (S_1 sigma_H^2 + sigma_n^2), 1 in the noiseless limit
    alpha   -- S_2 / S_1
    When P_21 vanishes the quadratic degenerates to a linear equation whose
    root is returned in all three slots."""
    _check_unit_interval('c', c)
    if alpha <= 0:
        raise ModelError('alpha must be positive, got {}'.format(alpha))
    if _is_degenerate(moments):
        root = _linear_root(moments, c, alpha)
        return RootPair(root, root, root)
    plus, minus = _quadratic_roots(moments, c, alpha)
    if profile_objective(plus, moments, c, alpha) >= profile_objective(minus, moments, c, alpha):
        selected = plus
    else:
        logger.debug('negative root %s beats the positive root %s', minus, plus)
        selected = minus
    return RootPair(plus, minus, selected)


def ml_f_low_noise(moments, alpha):
    """Roots for an arbitrary nonsingular prior when sigma_n^2 C_H^{-1} is neglected."""
    plus, minus, _ = ml_f_iid(moments, 1., alpha)
    return plus, minus


def consistent_f(moments, c, d, alpha):
    """Consistent estimator of F for i.i.d. channels,
    (alpha P_22 - c P_11 + sqrt((alpha P_22 - c P_11)^2 + 4 alpha c d |P_21|^2)) / (2 alpha P_21).
    d -- 1 - (sigma_n^2 / (S_1 sigma_H^2))^2"""
    _check_unit_interval('c', c)
    _check_unit_interval('d', d)
    if alpha <= 0:
        raise ModelError('alpha must be positive, got {}'.format(alpha))
    if _is_degenerate(moments):
        return _linear_root(moments, c, alpha)
    return _quadratic_roots(moments, c, alpha, d=d, scale_denominator=False)[0]


def single_packet_closed_form(V1, V2, c):
    """Single-packet joint MAP/ML pair (c V_1, V_2 / (c V_1))."""
    _check_unit_interval('c', c)
    V1, V2 = complex(V1), complex(V2)
    if V1 == 0:
        raise UnidentifiableError('V1 = 0: F is unidentifiable from this packet', H_hat=np.zeros(1, dtype=complex))
    return c * V1, V2 / (c * V1)


def require_identifiable(stats):
    """Rejects statistics whose first-half projections all vanish."""
    if not np.any(stats.V1):
        raise UnidentifiableError('V1 = 0: F is unidentifiable from these packets',
                                  H_hat=np.zeros(stats.L, dtype=complex))


def _select(candidates):
    """The (H, F, loglik) candidate with the largest log-likelihood."""
    return max(candidates, key=lambda item: item[2])


def _estimate_from_roots(stats, prior, roots, method, problem=None):
    problem = problem or EigenProblem(stats, prior)
    candidates = []
    for F in dict.fromkeys(roots):
        H = problem.map_H(F)
        candidates.append((H, F, candidate_loglik(H, F, stats, prior)))
    H, F, loglik = _select(candidates)
    estimate = HybridEstimate(H, F, loglik, method, [(f, ll) for _, f, ll in candidates])
    estimate.positive_root_selected = F == roots[0]
    if not estimate.positive_root_selected:
        logger.debug('%s: negative root selected (F = %s)', method, F)
    return estimate


def _require_scalar_variance(prior, method):
    if prior.kind != 'iid' and prior.L > 1:
        raise ModelError('{} assumes an i.i.d. prior, got {!r}'.format(method, prior))
    if prior.sigma_H2 <= 0:
        raise ModelError('{} needs sigma_H2 > 0'.format(method))


def estimate_iid_quadratic(stats, prior):
    """Joint MAP/ML estimate for an i.i.d. prior from the closed-form roots."""
    require_identifiable(stats)
    _require_scalar_variance(prior, 'iid_quadratic')
    c = stats.c(prior.sigma_H2)
    roots = ml_f_iid(cross_moments(stats), c, stats.alpha)
    return _estimate_from_roots(stats, prior, roots[:2], 'iid_quadratic')


def estimate_low_noise(stats, prior):
    """Low-noise roots for F, channel from the exact MAP formula."""
    require_identifiable(stats)
    roots = ml_f_low_noise(cross_moments(stats), stats.alpha)
    return _estimate_from_roots(stats, prior, roots, 'low_noise')


def estimate_consistent(stats, prior):
    """Consistent F_C and the channel estimate obtained by plugging it into the MAP formula."""
    require_identifiable(stats)
    _require_scalar_variance(prior, 'consistent')
    sigma_H2 = prior.sigma_H2
    F = consistent_f(cross_moments(stats), stats.c(sigma_H2), stats.d(sigma_H2), stats.alpha)
    problem = EigenProblem(stats, prior)
    H = problem.map_H(F)
    loglik = candidate_loglik(H, F, stats, prior)
    return HybridEstimate(H, F, loglik, 'consistent', [(F, loglik)])


def estimate_single_packet(stats, sigma_H2):
    """Single-packet joint MAP/ML estimate, checked against the second
    stationary point (0, -V_1* / (alpha V_2*)).
    stats    -- SufficientStats with L = 1
    sigma_H2 -- prior variance of the channel"""
    if stats.L != 1:
        raise ModelError('single_packet needs L = 1, got L = {}'.format(stats.L))
    if sigma_H2 <= 0:
        raise ModelError('single_packet needs sigma_H2 > 0')
    prior = ChannelPrior.iid(1, sigma_H2)
    V1, V2 = stats.V1[0], stats.V2[0]
    H, F = single_packet_closed_form(V1, V2, stats.c(sigma_H2))
    H = np.array([H])
    loglik = candidate_loglik(H, F, stats, prior)
    candidates = [(F, loglik)]
    if V2 != 0:
        F2 = -np.conj(V1) / (stats.alpha * np.conj(V2))
        loglik2 = candidate_loglik(np.zeros(1, dtype=complex), F2, stats, prior)
        candidates.append((complex(F2), loglik2))
        if loglik2 > loglik:
            logger.warning('second stationary point beats the closed form (%g > %g)', loglik2, loglik)
    return HybridEstimate(H, F, loglik, 'single_packet', candidates)


def estimate_slow_fading(stats, sigma_H2):
    """Fully correlated channel: all L packets pooled into one packet of
    energies L S_1, L S_2; the scalar channel estimate is replicated. The
    reported log-likelihood is the one of the pooled problem."""
    pooled = stats.pooled()
    try:
        estimate = estimate_single_packet(pooled, sigma_H2)
    except UnidentifiableError as error:
        raise UnidentifiableError('pooled V1 = 0: F is unidentifiable',
                                  H_hat=np.zeros(stats.L, dtype=complex)) from error
    estimate.H_hat = np.repeat(estimate.H_hat, stats.L)
    estimate.method = 'slow_fading'
    return estimate
