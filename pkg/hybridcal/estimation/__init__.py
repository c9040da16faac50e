from ._likelihood import HybridEstimate, EigenProblem, hybrid_loglik, candidate_loglik, data_misfit, hybrid_score, map_H_given_F, g_of_F
from ._closed_form import RootPair, ml_f_iid, ml_f_low_noise, consistent_f, profile_objective, single_packet_closed_form, require_identifiable
from ._closed_form import estimate_iid_quadratic, estimate_low_noise, estimate_consistent, estimate_single_packet, estimate_slow_fading
from ._newton import SolverSettings, NewtonResult, damped_newton
from ._general import METHODS, alternating_map_ml, joint_map_ml_general, estimate, method_supports
