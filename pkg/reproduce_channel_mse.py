import hybridcal

if __name__ == '__main__':

    #####################################
    # 1. Set the configuration paths ###
    #####################################

    config_path = 'configs/mse_vs_snr.toml' # relative channel MSE against the HCRB
    output_path = '/pathto/output/mse_vs_snr.csv'
    threads = 4 # worker processes, 1 runs serially with identical results

    ###########################
    # 2. Run the sweep ###
    ###########################

    config = hybridcal.io.load_sweep_config(config_path, threads=threads)
    records = hybridcal.mc.sweep(config, progress=True)

    ########################################
    # 3. Save and summarize the records ###
    ########################################

    hybridcal.io.write_metrics_csv(records, output_path)

    print('Efficiency of the channel estimate:')
    for record in records:
        print('  {:>16s}  L={:3d}  {:5.1f} dB  MSE={:.4e} +- {:.1e}  HCRB={:.4e}  efficiency={:.3f}'.format(
              record.estimator, record.L, record.snr_db, record.rel_mse_H, record.rel_mse_H_ci,
              record.hcrb_rel_H, record.efficiency_H))
