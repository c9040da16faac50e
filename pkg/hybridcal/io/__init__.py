from ._data_loading import STATS_COLUMNS, parse_complex, load_config, training_from_config, scenario_from_config, solver_settings_from_config, sweep_config_from_dict, load_sweep_config, load_training, load_stats_csv
from ._saving import FLOAT_FORMAT, complex_pair, write_metrics_csv, write_stats_csv, write_training, timestamp, RunManifest, manifest_path
