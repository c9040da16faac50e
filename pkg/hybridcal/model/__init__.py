from ._impedance import Impedance, as_impedance, f_from_impedance, impedance_from_f, effective_channel
from ._training import LoadSwitchPlan, TrainingSequence, zadoff_chu
from ._prior import PRIOR_KINDS, ChannelPrior, complex_normal, sample_channels
from ._simulation import PacketObservation, noiseless_packet, simulate_packet, simulate_packet_matrix, simulate_packets
