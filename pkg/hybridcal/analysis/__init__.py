from ._metrics import z_value, standard_error, mean_ci, trimmed_mean, summarize_errors
