###########
# imports #
###########

import numpy as np
import scipy.stats as stats

#############
# functions #
#############


def z_value(confidence):
    """Two-sided normal quantile of the given confidence level."""
    if not 0 < confidence < 1:
        raise ValueError('confidence must lie in (0, 1), got {}'.format(confidence))
    return stats.norm.ppf(0.5 + confidence / 2.)


def standard_error(samples):
    """Standard error of the mean of real or complex samples, using
    E|x - mean|^2 as the variance of complex ones."""
    samples = np.asarray(samples)
    n = len(samples)
    if n < 2:
        return np.nan
    return float(np.sqrt(np.sum(np.abs(samples - samples.mean()) ** 2) / (n - 1) / n))


def mean_ci(samples, confidence=0.95):
    """Sample mean and the half-width of its normal confidence interval."""
    samples = np.asarray(samples)
    return samples.mean(), z_value(confidence) * standard_error(samples)


def trimmed_mean(samples, trim):
    """Mean after cutting the fraction trim from both tails; complex samples
    are trimmed per component."""
    samples = np.asarray(samples)
    if trim == 0:
        return samples.mean()
    if np.iscomplexobj(samples):
        return stats.trim_mean(samples.real, trim) + 1j * stats.trim_mean(samples.imag, trim)
    return stats.trim_mean(samples, trim)


def summarize_errors(h_sq_errors, f_errors, L, sigma_H2, F, confidence=0.95, trim=0.):
    """Relative error metrics of one estimator at one grid point.
    h_sq_errors -- ||H_hat - H||^2 per trial
    f_errors    -- F_hat - F per trial (complex)
    L, sigma_H2 -- normalization of the channel MSE
    F           -- true impedance parameter
    Returns a dict of the metrics, their confidence half-widths (suffix _ci)
    and, for trim > 0, their trimmed versions (suffix _trimmed)."""
    h_sq_errors = np.asarray(h_sq_errors, dtype=float)
    f_errors = np.asarray(f_errors, dtype=complex)
    z = z_value(confidence)
    h_norm = L * sigma_H2
    f_abs = abs(F)

    out = {}
    if len(h_sq_errors):
        out['rel_mse_H'] = float(h_sq_errors.mean()) / h_norm
        out['rel_mse_H_ci'] = z * standard_error(h_sq_errors) / h_norm
    else:
        out['rel_mse_H'] = out['rel_mse_H_ci'] = np.nan

    if len(f_errors):
        sq = np.abs(f_errors) ** 2
        ab = np.abs(f_errors)
        out['rel_mse_F'] = float(sq.mean()) / f_abs ** 2
        out['rel_mse_F_ci'] = z * standard_error(sq) / f_abs ** 2
        out['rel_mae_F'] = float(ab.mean()) / f_abs
        out['rel_mae_F_ci'] = z * standard_error(ab) / f_abs
        out['rel_bias_F_abs'] = abs(f_errors.mean()) / f_abs
        out['rel_bias_F_ci'] = z * standard_error(f_errors) / f_abs
    else:
        for key in ('rel_mse_F', 'rel_mse_F_ci', 'rel_mae_F', 'rel_mae_F_ci', 'rel_bias_F_abs', 'rel_bias_F_ci'):
            out[key] = np.nan

    if trim > 0:
        out['rel_mse_H_trimmed'] = float(trimmed_mean(h_sq_errors, trim)) / h_norm if len(h_sq_errors) else np.nan
        if len(f_errors):
            out['rel_mse_F_trimmed'] = float(trimmed_mean(np.abs(f_errors) ** 2, trim)) / f_abs ** 2
            out['rel_mae_F_trimmed'] = float(trimmed_mean(np.abs(f_errors), trim)) / f_abs
            out['rel_bias_F_trimmed'] = abs(trimmed_mean(f_errors, trim)) / f_abs
        else:
            out['rel_mse_F_trimmed'] = out['rel_mae_F_trimmed'] = out['rel_bias_F_trimmed'] = np.nan
    return out
