from ._reduction import SufficientStats, CrossMoments, reduce_packet, reduce_all, cross_moments
