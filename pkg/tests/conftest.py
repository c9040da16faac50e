import numpy as np
import pytest

import hybridcal

# F of the dipole receiver, (1 + Z_A/Z_1) / (1 + Z_A/Z_2) with Z_A = 73+j42.5,
# Z_1 = 50 and Z_2 = 50+j20
F_DIPOLE = (1 + (73 + 42.5j) / 50) / (1 + (73 + 42.5j) / (50 + 20j))


@pytest.fixture
def scenario():
    return hybridcal.cm.ReceiverScenario.dipole_default(noise_var=1.)


@pytest.fixture
def noiseless_scenario():
    return hybridcal.cm.ReceiverScenario.dipole_default(noise_var=0.)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_stats(rng, L, noise_var=1., S1=32., S2=32.):
    """Arbitrary (not model-generated) statistics."""
    V1 = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    V2 = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    return hybridcal.st.SufficientStats(V1, V2, S1, S2, noise_var)


def model_stats(rng, scenario, prior):
    """Statistics of L packets drawn from the model, with the true channel."""
    H = hybridcal.md.sample_channels(prior, rng)
    packets = scenario.simulate(H, rng)
    return scenario.reduce(packets), H
