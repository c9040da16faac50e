from ._trial import GridPoint, TrialOutcome, trial_rng, run_trial
from ._sweep import STUDIES, ESTIMATORS, COLUMNS, TRIMMED_COLUMNS, SweepConfig, MetricRecord, sweep, bias_study, correlation_study, run_study, failure_rate_exceeded
