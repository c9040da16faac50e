__author__ = ', '.join([
    'The hybridcal developers'
])
__email__ = ''
__version__ = '0.1.0'

import logging

logging.getLogger(__name__).addHandler(logging.NullHandler())

from . import model as md
from . import stats as st
from . import common as cm
from . import estimation as es
from . import bounds as bd
from . import analysis as an
from . import montecarlo as mc
from . import io as io
from .common import ReceiverScenario
from ._exceptions import (HybridcalError, ModelError, SingularPriorError, UnidentifiableError,
                          SolverError, ConfigError)
