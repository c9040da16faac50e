import numpy as np

from .._exceptions import ModelError
from ..model import (Impedance, LoadSwitchPlan, as_impedance, f_from_impedance,
                     impedance_from_f, simulate_packets, zadoff_chu)
from ..stats import reduce_all


class ReceiverScenario():
	"""The class that holds the physical ground truth of a switched-load receiver:
	antenna impedance, load plan, training sequence and noise level. It derives
	the impedance parameter F and the training energies used everywhere else."""

	def __init__(self, antenna, plan, training, noise_var, F=None):
		"""Initialize the scenario.
		antenna   -- antenna impedance Z_A (None when only F is known)
		plan      -- LoadSwitchPlan with the loads Z_1, Z_2 and the split K of T
		training  -- TrainingSequence, split at the same K
		noise_var -- receiver noise variance sigma_n^2 per complex sample (>= 0)
		F         -- impedance parameter, only when the antenna is not given"""
		if training.K != plan.K or training.T != plan.T:
			raise ModelError('training split (K={}, T={}) does not match the load plan '
							 '(K={}, T={})'.format(training.K, training.T, plan.K, plan.T))
		if not np.isfinite(noise_var) or noise_var < 0:
			raise ModelError('noise variance must be finite and >= 0, got {}'.format(noise_var))

		self.plan = plan
		self.training = training
		self.noise_var = float(noise_var)

		if antenna is not None:
			self.antenna = as_impedance(antenna)
			self.F = complex(f_from_impedance(self.antenna, plan.z1, plan.z2))
			if F is not None and not np.isclose(F, self.F, rtol=1e-12, atol=0):
				raise ModelError('F = {} contradicts the antenna impedance (F = {})'.format(F, self.F))
		elif F is None:
			raise ModelError('a scenario needs an antenna impedance or an F value')
		else:
			self.antenna = None
			self.F = complex(F)

		self.S1 = training.S1
		self.S2 = training.S2
		self.alpha = self.S2 / self.S1

	@classmethod
	def dipole_default(cls, noise_var=1.):
		"""Dipole antenna 73+j42.5 ohm, loads 50 and 50+j20 ohm, length-64
		Zadoff-Chu training switched after 32 symbols."""
		training = zadoff_chu(64, 1)
		plan = LoadSwitchPlan(Impedance(50.), Impedance(50., 20.), training.K, training.T)
		return cls(Impedance(73., 42.5), plan, training, noise_var)

	def with_noise_var(self, noise_var):
		return ReceiverScenario(self.antenna, self.plan, self.training, noise_var,
								F=None if self.antenna is not None else self.F)

	def with_F(self, F):
		"""Same receiver with another impedance parameter. When F is the image
		of a passive antenna the antenna is kept, otherwise only F is."""
		try:
			antenna = impedance_from_f(F, self.plan.z1, self.plan.z2)
		except ModelError:
			antenna = None
		return ReceiverScenario(antenna, self.plan, self.training, self.noise_var,
								F=None if antenna is not None else F)

	def simulate(self, H, rng):
		"""Raw observations of len(H) packets."""
		return simulate_packets(H, self.F, self, rng)

	def reduce(self, packets):
		return reduce_all(packets, self.training, self)

	def to_dict(self):
		out = {'z1': [self.plan.z1.resistance, self.plan.z1.reactance],
			   'z2': [self.plan.z2.resistance, self.plan.z2.reactance],
			   'T': self.training.T, 'K': self.training.K,
			   'noise_var': self.noise_var}
		if self.antenna is not None:
			out['antenna'] = [self.antenna.resistance, self.antenna.reactance]
		else:
			out['F'] = [self.F.real, self.F.imag]
		return out

	def __repr__(self):
		return ('ReceiverScenario(antenna={}, F={:.6g}, T={}, K={}, noise_var={:.6g})'
				.format(self.antenna, self.F, self.training.T, self.training.K, self.noise_var))
