import time

import numpy as np

import hybridcal

if __name__ == '__main__':

    ###################################
    # 1. Set the receiver and output ###
    ###################################

    output_folder = '/pathto/output' # folder to save the statistics and the bound
    snr_db = 20 # post-detection SNR sigma_H^2 / sigma_n^2
    num_packets = 10
    seed = 1

    # dipole antenna 73+j42.5 ohm, loads 50 and 50+j20 ohm, length-64 Zadoff-Chu
    # training switched after 32 symbols
    scenario = hybridcal.cm.ReceiverScenario.dipole_default(noise_var=10 ** (-snr_db / 10))
    print(scenario)

    ###################################
    # 2. Draw channels and packets ###
    ###################################

    rng = np.random.default_rng(seed)
    prior = hybridcal.md.ChannelPrior.iid(num_packets, sigma_H2=1.)
    H = hybridcal.md.sample_channels(prior, rng)
    packets = scenario.simulate(H, rng)

    # matched-filter reduction to V_1, V_2
    stats = scenario.reduce(packets)
    hybridcal.io.write_stats_csv(stats, output_folder + '/stats.csv')

    #################################
    # 3. Estimate the unknowns ###
    #################################

    for method in ('map_ml_general', 'iid_quadratic', 'consistent'):
        start_time = time.time()
        print('Estimating with ' + method + ' ... ', end='', flush=True)
        estimate = hybridcal.es.estimate(method, stats, prior)
        print('done (', round(time.time() - start_time, 2), 'seconds )')
        print('  F_hat =', estimate.F_hat, ' true F =', scenario.F)
        print('  relative channel error =',
              np.sum(np.abs(estimate.H_hat - H) ** 2) / np.sum(np.abs(H) ** 2))
        try:
            print('  Z_A =', estimate.impedance(scenario.plan.z1, scenario.plan.z2))
        except hybridcal.ModelError:
            print('  Z_A = not passive')

    ####################################
    # 4. Compare with the HCRB ###
    ####################################

    report = hybridcal.bd.hcrb(scenario.F, prior, scenario.S1, scenario.S2, scenario.noise_var)
    print('relative HCRB on H:', report.h_relative)
    print('relative HCRB on F:', report.f_relative)
