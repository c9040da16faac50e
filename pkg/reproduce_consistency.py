import hybridcal

if __name__ == '__main__':

    #####################################
    # 1. Set the configuration paths ###
    #####################################

    config_path = 'configs/consistency.toml' # many packets at a fixed SNR
    output_path = '/pathto/output/consistency.csv'

    ###########################
    # 2. Run the sweep ###
    ###########################

    config = hybridcal.io.load_sweep_config(config_path)
    records = hybridcal.mc.sweep(config, progress=True)
    hybridcal.io.write_metrics_csv(records, output_path)

    ##############################################
    # 3. Compare with the large-L limit of F_ML ###
    ##############################################

    scenario = config.scenario
    for snr_db in config.snr_db:
        noise_var = config.noise_var(snr_db)
        limit_plus, _ = hybridcal.bd.asymptotic_ml_limit(scenario.F, config.sigma_H2, noise_var,
                                                         scenario.S1, scenario.S2)
        print('SNR {:.1f} dB: F = {:.6f}, large-L limit of F_ML = {:.6f}'.format(snr_db, scenario.F, limit_plus))
        print('  predicted relative bias of F_ML: {:.4e}'.format(abs(limit_plus - scenario.F) / abs(scenario.F)))
        for record in records:
            if record.snr_db == snr_db:
                print('  {:>14s}  L={:6d}  relative bias {:.4e} +- {:.1e}'.format(
                      record.estimator, record.L, record.rel_bias_F_abs, record.rel_bias_F_ci))
