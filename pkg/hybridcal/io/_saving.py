###########
# imports #
###########

import dataclasses
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List

import numpy as np
import pandas as pd
import toml

from ..montecarlo import COLUMNS, TRIMMED_COLUMNS

# full round-trip precision of a double
FLOAT_FORMAT = '%.17g'

#############
# functions #
#############


def complex_pair(z):
    """Canonical [re, im] form of a complex number."""
    z = complex(z)
    return [z.real, z.imag]


def write_metrics_csv(records, path, trimmed=False):
    """Writes one MetricRecord per row. The trimmed diagnostic columns are
    only written when asked for."""
    columns = [c for c in COLUMNS if trimmed or c not in TRIMMED_COLUMNS]
    table = pd.DataFrame([dataclasses.asdict(r) for r in records], columns=columns)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep='nan')


def write_stats_csv(stats, path):
    """Inverse of ``load_stats_csv``."""
    table = pd.DataFrame({'packet_index': np.arange(stats.L),
                          'V1_re': stats.V1.real, 'V1_im': stats.V1.imag,
                          'V2_re': stats.V2.real, 'V2_im': stats.V2.imag})
    with open(path, 'w') as handle:
        handle.write('# S1={!r} S2={!r} noise_var={!r}\n'.format(stats.S1, stats.S2, stats.noise_var))
        table.to_csv(handle, index=False, float_format=FLOAT_FORMAT)


def write_training(path, training, scenario=None, root=None):
    """Writes a training sequence, and the loads, antenna and noise level of a
    scenario skeleton, as TOML that ``load_training`` and ``scenario_from_config``
    read back."""
    section = {'T': training.T, 'K': training.K,
               'symbols': [complex_pair(x) for x in training.symbols]}
    if root is not None:
        section['root'] = int(root)
    if scenario is not None:
        section['z1'] = complex_pair(scenario.plan.z1.z)
        section['z2'] = complex_pair(scenario.plan.z2.z)
        if scenario.antenna is not None:
            section['antenna'] = complex_pair(scenario.antenna.z)
        else:
            section['F'] = complex_pair(scenario.F)
        section['noise_var'] = scenario.noise_var
    with open(path, 'w') as handle:
        toml.dump({'scenario': section}, handle)


def timestamp():
    return datetime.now(timezone.utc).isoformat()


@dataclass
class RunManifest:
    """Inputs and outputs of one CLI run.

    config  -- echo of the parsed configuration
    seed    -- the master seed actually used
    version -- hybridcal version
    started, finished -- UTC ISO timestamps
    outputs -- paths of the written files
    """
    config: Dict
    seed: int
    version: str
    started: str
    finished: str = ''
    outputs: List[str] = field(default_factory=list)

    def to_dict(self):
        return dataclasses.asdict(self)

    def write(self, path):
        with open(path, 'w') as handle:
            json.dump(self.to_dict(), handle, indent=2, sort_keys=True)


def manifest_path(out_path):
    """Sibling of the CSV output, <stem>.manifest.json."""
    stem, _ = os.path.splitext(out_path)
    return stem + '.manifest.json'
