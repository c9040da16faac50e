###########
# imports #
###########

import numbers
from dataclasses import dataclass

import numpy as np

from .._exceptions import (DegeneratePlanError, ModelError, SingularMapError,
                           UnboundedImpedanceError)

# relative threshold under which a complex denominator counts as zero
_POLE_RTOL = 1e-12

#############
# functions #
#############


@dataclass(frozen=True)
class Impedance:
    """A passive lumped impedance Z = R + jX in ohms.

    resistance -- R, must be finite and nonnegative
    reactance  -- X, must be finite
    """
    resistance: float
    reactance: float = 0.

    def __post_init__(self):
        object.__setattr__(self, 'resistance', float(self.resistance))
        object.__setattr__(self, 'reactance', float(self.reactance))
        if not (np.isfinite(self.resistance) and np.isfinite(self.reactance)):
            raise ModelError('impedance must be finite, got {!r}'.format(self.z))
        if self.resistance < 0:
            raise ModelError('impedance {} has negative resistance (not a '
                             'passive element)'.format(self.z))

    @property
    def z(self):
        return complex(self.resistance, self.reactance)

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self):
        return self.z

    def __str__(self):
        return '{:.6g}{:+.6g}j ohm'.format(self.resistance, self.reactance)


def as_impedance(value):
    """Coerce an Impedance, a number or an ``[R, X]`` pair to an Impedance."""
    if isinstance(value, Impedance):
        return value
    if isinstance(value, numbers.Number):
        return Impedance.from_complex(value)
    if isinstance(value, (list, tuple, np.ndarray)) and len(value) == 2:
        return Impedance(value[0], value[1])
    raise ModelError('cannot interpret {!r} as an impedance'.format(value))


def _is_pole(denominator, *terms):
    scale = max([abs(t) for t in terms] + [np.finfo(float).tiny])
    return abs(denominator) <= _POLE_RTOL * scale


def f_from_impedance(zA, z1, z2):
    """Map the antenna impedance to F = (1 + Z_A/Z_1) / (1 + Z_A/Z_2).

    The map is one-to-one as long as the two loads differ.
    zA -- antenna impedance
    z1 -- load used for the first K training symbols (and for data)
    z2 -- load used for the remaining T - K symbols
    """
    zA, z1, z2 = (as_impedance(z).z for z in (zA, z1, z2))
    if z1 == z2:
        raise DegeneratePlanError('load impedances must differ, both are {}'.format(z1))
    if z1 == 0 or z2 == 0:
        raise SingularMapError('load impedances must be nonzero')
    denominator = 1 + zA / z2
    if _is_pole(denominator, 1, zA / z2):
        raise SingularMapError('1 + Z_A/Z_2 vanishes for Z_A = {}'.format(zA))
    return (1 + zA / z1) / denominator


def impedance_from_f(F, z1, z2):
    """Invert the F map: Z_A = (1 - F) / (F/Z_2 - 1/Z_1).

    Raises UnboundedImpedanceError at F = Z_2/Z_1, the image of an infinite
    antenna impedance, and ModelError when F implies a negative resistance.
    """
    z1, z2 = as_impedance(z1).z, as_impedance(z2).z
    if z1 == z2:
        raise DegeneratePlanError('load impedances must differ, both are {}'.format(z1))
    if z1 == 0 or z2 == 0:
        raise SingularMapError('load impedances must be nonzero')
    F = complex(F)
    denominator = F / z2 - 1 / z1
    if _is_pole(denominator, F / z2, 1 / z1):
        raise UnboundedImpedanceError('F = {} is the image of an unbounded '
                                      'antenna impedance'.format(F))
    return Impedance.from_complex((1 - F) / denominator)


def effective_channel(G, zA, z1):
    """Voltage-divider scaled path gain H = Z_1 G / (Z_A + Z_1)."""
    zA, z1 = as_impedance(zA).z, as_impedance(z1).z
    total = zA + z1
    if _is_pole(total, zA, z1):
        raise SingularMapError('Z_A + Z_1 vanishes')
    return z1 * np.asarray(G) / total
