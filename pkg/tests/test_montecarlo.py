import dataclasses

import numpy as np
import pytest

from hybridcal import bd, mc, md
from hybridcal._exceptions import ConfigError
from conftest import F_DIPOLE


def _config(scenario, **kwargs):
    args = dict(snr_db=[10.], L_values=[1], trials=20, estimators=['single_packet'], seed=7)
    args.update(kwargs)
    return mc.SweepConfig(scenario, **args)


def _records(records, **match):
    return [r for r in records if all(getattr(r, k) == v for k, v in match.items())]


class TestTrials:

    def test_trial_streams(self):
        a = mc.trial_rng(1, 0, 2, 3).standard_normal(4)
        b = mc.trial_rng(1, 0, 2, 3).standard_normal(4)
        c = mc.trial_rng(1, 0, 2, 4).standard_normal(4)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_noiseless_trial(self, noiseless_scenario):
        point = mc.GridPoint(noiseless_scenario, md.ChannelPrior.iid(4),
                             ('map_ml_general', 'iid_quadratic', 'consistent'))
        outcomes = mc.run_trial(point, mc.trial_rng(0, 0, 0, 0))
        for outcome in outcomes.values():
            assert outcome.status == 'ok'
            assert outcome.h_sq_error < 1e-20
            assert abs(outcome.f_error) < 1e-10

    def test_estimators_share_data(self, scenario):
        point = mc.GridPoint(scenario, md.ChannelPrior.iid(1), ('single_packet', 'map_ml_general'))
        outcomes = mc.run_trial(point, mc.trial_rng(3, 0, 0, 0))
        assert outcomes['single_packet'].f_error == pytest.approx(outcomes['map_ml_general'].f_error, rel=1e-8)


class TestSweepConfig:

    @pytest.mark.parametrize('change, key', [(dict(trials=0), 'sweep.trials'),
                                             (dict(L_values=[]), 'sweep.L'),
                                             (dict(estimators=['newton']), 'sweep.estimators'),
                                             (dict(prior_kind='gauss'), 'prior.kind'),
                                             (dict(study='other'), 'sweep.study'),
                                             (dict(trim=0.5), 'sweep.trim'),
                                             (dict(snr_db=[-20., 0.], estimators=['consistent']), 'sweep.snr_db'),
                                             (dict(snr_db=[-15.1], estimators=['consistent']), 'sweep.snr_db')])
    def test_invalid(self, scenario, change, key):
        with pytest.raises(ConfigError) as info:
            _config(scenario, **change)
        assert info.value.key == key

    def test_consistent_snr_floor(self, scenario):
        # S_1 rho = 32 * 10^-1.5 is just above one
        assert _config(scenario, snr_db=[-15.], estimators=['consistent']).snr_db == (-15.,)
        records = mc.sweep(_config(scenario, snr_db=[-20.], L_values=[5], trials=10,
                                   estimators=['iid_quadratic']))
        assert len(records) == 1

    def test_noise_grid(self, scenario):
        config = _config(scenario, sigma_H2=2.)
        assert config.noise_var(10.) == pytest.approx(0.2)
        assert config.to_dict()['prior']['sigma_H2'] == 2.


class TestSweep:

    def test_deterministic(self, scenario):
        config = _config(scenario, L_values=[1, 3], estimators=['single_packet', 'iid_quadratic'])
        first = [dataclasses.asdict(r) for r in mc.sweep(config)]
        second = [dataclasses.asdict(r) for r in mc.sweep(config)]
        np.testing.assert_equal(first, second)
        # single_packet is skipped for L = 3
        assert len(first) == 3

    def test_serial_equals_parallel(self, scenario):
        config = _config(scenario, L_values=[1, 2], estimators=['iid_quadratic'])
        serial = [dataclasses.asdict(r) for r in mc.sweep(config)]
        parallel = [dataclasses.asdict(r) for r in mc.sweep(config.replace(threads=2))]
        np.testing.assert_equal(serial, parallel)

    def test_record_contents(self, scenario):
        records = mc.sweep(_config(scenario, estimators=['single_packet', 'iid_quadratic']))
        for record in records:
            assert record.trials == 20 and record.failures == 0
            assert record.F_re == pytest.approx(F_DIPOLE.real)
            assert record.hcrb_F == pytest.approx(0.1 / 32. / abs(F_DIPOLE) ** 2)
            assert set(mc.COLUMNS) >= {'rel_mse_H', 'hcrb_rel_H', 'negative_root_rate'}
        assert np.isnan(_records(records, estimator='single_packet')[0].negative_root_rate)
        assert 0. <= _records(records, estimator='iid_quadratic')[0].negative_root_rate <= 1.

    def test_single_packet_channel_mse(self, scenario):
        records = mc.sweep(_config(scenario, snr_db=[10., 30.], trials=2000))
        low, high = records
        # c V_1 is the MMSE estimate, sigma_H^2 / (1 + S_1 rho)
        assert low.rel_mse_H == pytest.approx(1. / 321., abs=4 * low.rel_mse_H_ci / 1.96)
        # a 3 dB gap to the bound at high SNR
        assert 1.8 < high.rel_mse_H / high.hcrb_rel_H < 2.2

    @pytest.mark.slow
    def test_multi_packet_efficiency(self, scenario):
        records = mc.sweep(_config(scenario, snr_db=[0., 20.], L_values=[10], trials=1500,
                                   estimators=['iid_quadratic']))
        for record in records:
            assert record.efficiency_H > 0.9

    def test_failure_rate(self, scenario):
        records = mc.sweep(_config(scenario))
        assert not mc.failure_rate_exceeded(records, 0.05)
        records[0].failure_rate = 0.2
        assert mc.failure_rate_exceeded(records, 0.05)


class TestStudies:

    def test_correlation_study(self, scenario):
        config = _config(scenario, L_values=[1, 5], trials=500, study='correlation',
                         estimators=['single_packet', 'iid_quadratic', 'slow_fading'])
        records = mc.run_study(config)
        # identical data at L = 1
        for name in ('single_packet', 'iid_quadratic'):
            iid, = _records(records, prior='iid', L=1, estimator=name)
            slow, = _records(records, prior='slow_fading', L=1, estimator=name)
            assert iid.rel_mse_H == slow.rel_mse_H
            assert iid.rel_mae_F == slow.rel_mae_F
        iid, = _records(records, prior='iid', L=5, estimator='iid_quadratic')
        slow, = _records(records, prior='slow_fading', L=5, estimator='slow_fading')
        # pooling helps the channel and hurts F
        assert slow.rel_mse_H < iid.rel_mse_H
        assert slow.rel_mae_F > iid.rel_mae_F

    def test_bias_study(self, scenario):
        F_values = (F_DIPOLE, 1.0644 + 0.5451j)
        config = _config(scenario, snr_db=[0.], L_values=[50], trials=1000, study='bias',
                         estimators=['iid_quadratic', 'consistent'], F_values=F_values)
        records = mc.run_study(config)
        assert len(records) == 4
        for F in F_values:
            cell = [r for r in records if abs(complex(r.F_re, r.F_im) - F) < 1e-9]
            ml, = _records(cell, estimator='iid_quadratic')
            consistent, = _records(cell, estimator='consistent')
            assert ml.rel_bias_F_abs > 0.02
            assert consistent.rel_bias_F_abs < ml.rel_bias_F_abs / 2

    @pytest.mark.slow
    def test_ml_inconsistency(self, scenario):
        records = mc.sweep(_config(scenario, snr_db=[0.], L_values=[10000], trials=60,
                                   estimators=['iid_quadratic', 'consistent']))
        plus, _ = bd.asymptotic_ml_limit(F_DIPOLE, 1., 1., scenario.S1, scenario.S2)
        ml, = _records(records, estimator='iid_quadratic')
        consistent, = _records(records, estimator='consistent')
        expected = abs(plus - F_DIPOLE) / abs(F_DIPOLE)
        assert ml.rel_bias_F_abs == pytest.approx(expected, abs=5 * ml.rel_bias_F_ci / 1.96 + 1e-3)
        assert consistent.rel_bias_F_abs < 5 * consistent.rel_bias_F_ci / 1.96 + 1e-3


class TestAcceptance:

    @pytest.mark.slow
    def test_single_packet_F_unbiased(self, scenario):
        record, = mc.sweep(_config(scenario, trials=20000))
        assert record.rel_bias_F_abs < 5 * record.rel_bias_F_ci / 1.96 + 2e-3

    @pytest.mark.slow
    def test_consistent_not_worse_than_ml(self, scenario):
        records = mc.sweep(_config(scenario, snr_db=[0., 10., 20.], L_values=[5, 10, 20], trials=2000,
                                   estimators=['iid_quadratic', 'consistent']))
        for snr in (0., 10., 20.):
            for L in (5, 10, 20):
                ml, = _records(records, snr_db=snr, L=L, estimator='iid_quadratic')
                consistent, = _records(records, snr_db=snr, L=L, estimator='consistent')
                assert consistent.rel_mse_F <= ml.rel_mse_F + ml.rel_mse_F_ci + consistent.rel_mse_F_ci

    @pytest.mark.slow
    def test_general_solver_strongly_correlated(self, scenario):
        records = mc.sweep(_config(scenario, snr_db=[-10.], L_values=[5], trials=300, prior_kind='exponential',
                                   r=0.99, estimators=['map_ml_general']))
        assert records[0].failure_rate <= 0.01
