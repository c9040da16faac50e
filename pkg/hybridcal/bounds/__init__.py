from ._hcrb import HcrbReport, PseudoInformation, hcrb, asymptotic_ml_limit, pseudo_information_mc
