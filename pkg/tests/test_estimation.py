import numpy as np
import pytest
from scipy import optimize, stats as sps

import hybridcal
from hybridcal import es, md, st
from hybridcal._exceptions import ModelError, SingularPriorError, UnidentifiableError
from conftest import F_DIPOLE, model_stats, random_stats


def _complex_normal_logpdf(x, mean, cov):
    """Log-density of CN(mean, cov) through the equivalent real Gaussian."""
    cov = np.atleast_2d(cov)
    real_cov = 0.5 * np.block([[cov.real, -cov.imag], [cov.imag, cov.real]])
    point = np.concatenate(((x - mean).real, (x - mean).imag))
    return sps.multivariate_normal(np.zeros(len(point)), real_cov).logpdf(point)


def _snr_scenario(snr_db):
    return hybridcal.cm.ReceiverScenario.dipole_default(noise_var=10 ** (-snr_db / 10))


class TestLikelihood:

    def test_matches_gaussian_densities(self, rng):
        prior = md.ChannelPrior.exponential(3, 1.5, 0.6)
        stats = random_stats(rng, 3, noise_var=0.7, S1=32., S2=20.)
        H = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        F = 0.8 - 0.3j
        s = stats.noise_var
        expected = (_complex_normal_logpdf(stats.V1, H, s / stats.S1 * np.eye(3))
                    + _complex_normal_logpdf(stats.V2, F * H, s / stats.S2 * np.eye(3))
                    + _complex_normal_logpdf(H, np.zeros(3), prior.covariance()))
        assert es.hybrid_loglik(H, F, stats, prior) == pytest.approx(expected, rel=1e-10)

    def test_score_matches_finite_differences(self, rng):
        prior = md.ChannelPrior.exponential(2, 1., 0.3)
        stats = random_stats(rng, 2, noise_var=0.5)
        theta = np.array([0.4 + 0.1j, -0.2 + 0.9j, 1.1 - 0.2j])
        score = es.hybrid_score(theta[:2], theta[2], stats, prior)

        def loglik(t):
            return es.hybrid_loglik(t[:2], t[2], stats, prior)

        h = 1e-6
        for k in range(3):
            e = np.zeros(3, dtype=complex)
            e[k] = h
            d_re = (loglik(theta + e) - loglik(theta - e)) / (2 * h)
            d_im = (loglik(theta + 1j * e) - loglik(theta - 1j * e)) / (2 * h)
            assert score[k] == pytest.approx(0.5 * (d_re + 1j * d_im), rel=1e-5, abs=1e-5)

    def test_noiseless_needs_candidate_loglik(self, rng):
        stats = random_stats(rng, 2, noise_var=0.)
        prior = md.ChannelPrior.iid(2)
        with pytest.raises(ModelError):
            es.hybrid_loglik(stats.V1, 1., stats, prior)
        assert es.candidate_loglik(stats.V1, 0., stats, prior) == pytest.approx(
            -stats.S2 * np.sum(np.abs(stats.V2) ** 2))

    def test_singular_prior_rejected(self, rng):
        stats = random_stats(rng, 3)
        with pytest.raises(SingularPriorError, match='slow_fading'):
            es.map_H_given_F(1., stats, md.ChannelPrior.slow_fading(3))


class TestMapChannel:

    def test_shrinkage_at_zero(self, rng):
        stats = random_stats(rng, 4)
        H = es.map_H_given_F(0., stats, md.ChannelPrior.iid(4))
        np.testing.assert_allclose(H, stats.c(1.) * stats.V1)

    def test_noiseless_limit(self, rng):
        stats = random_stats(rng, 3, noise_var=0., S2=48.)
        F = 0.3 + 2j
        H = es.map_H_given_F(F, stats, md.ChannelPrior.exponential(3, r=0.4))
        alpha = stats.alpha
        np.testing.assert_allclose(H, (stats.V1 + alpha * np.conj(F) * stats.V2) / (1 + alpha * abs(F) ** 2))

    @pytest.mark.parametrize('prior', [md.ChannelPrior.iid(3, 2.), md.ChannelPrior.exponential(3, 1., 0.8)])
    def test_channel_stationarity(self, prior, rng):
        stats = random_stats(rng, 3)
        for F in (0.5j, 1 + 1j, -2.):
            H = es.map_H_given_F(F, stats, prior)
            score = es.hybrid_score(H, F, stats, prior)
            np.testing.assert_allclose(score[:3], 0., atol=1e-10)

    @pytest.mark.parametrize('prior', [md.ChannelPrior.iid(4), md.ChannelPrior.exponential(4, 1., 0.5)])
    def test_g_identity(self, prior, rng):
        stats = random_stats(rng, 4)
        for F in (0.2 + 0.1j, 1.5 - 1j):
            H = es.map_H_given_F(F, stats, prior)
            assert es.g_of_F(F, stats, prior) == pytest.approx(np.vdot(H, stats.V2 - F * H), rel=1e-10)


class TestClosedForms:

    def test_noiseless_moments_give_F(self):
        F, m = 0.7 - 1.3j, 2.5
        moments = st.CrossMoments(m, F * m, np.conj(F) * m, abs(F) ** 2 * m)
        roots = es.ml_f_iid(moments, 1., 1.5)
        assert roots.root_plus == pytest.approx(F)
        assert roots.selected == pytest.approx(F)

    def test_iid_roots_are_zeros_of_g(self, rng):
        prior = md.ChannelPrior.iid(5, 1.)
        stats = random_stats(rng, 5, noise_var=2.)
        roots = es.ml_f_iid(st.cross_moments(stats), stats.c(1.), stats.alpha)
        problem = es.EigenProblem(stats, prior)
        for F in roots[:2]:
            assert abs(problem.g(F)) <= 1e-10 * problem.scale

    def test_selected_root_is_the_likelier(self, rng):
        prior = md.ChannelPrior.iid(3, 1.)
        for _ in range(20):
            stats = random_stats(rng, 3, noise_var=5.)
            result = es.estimate_iid_quadratic(stats, prior)
            assert result.loglik == max(ll for _, ll in result.candidates)
            assert result.positive_root_selected == (result.F_hat == result.candidates[0][0])

    def test_linear_fallback(self):
        moments = st.CrossMoments(2., 0.5 + 0.5j, 0j, 1.)
        roots = es.ml_f_iid(moments, 0.9, 1.)
        assert roots.root_plus == roots.root_minus == roots.selected
        assert roots.selected == pytest.approx((0.5 + 0.5j) / (0.9 * 2. - 1.))

    def test_low_noise_is_unit_shrinkage(self, rng):
        moments = st.cross_moments(random_stats(rng, 6))
        plus, minus = es.ml_f_low_noise(moments, 2.)
        expected = es.ml_f_iid(moments, 1., 2.)
        assert (plus, minus) == (expected.root_plus, expected.root_minus)

    def test_consistent_without_correction(self, rng):
        moments = st.cross_moments(random_stats(rng, 6))
        plus, _ = es.ml_f_low_noise(moments, 1.)
        assert es.consistent_f(moments, 1., 1., 1.) == pytest.approx(plus, rel=1e-12)

    def test_consistent_on_population_moments(self):
        # population moments of the i.i.d. model with sigma_H^2 = noise_var = 1, S1 = S2 = 32
        F = F_DIPOLE
        moments = st.CrossMoments(1 + 1 / 32, F, np.conj(F), abs(F) ** 2 + 1 / 32)
        stats = st.SufficientStats([1.], [1.], 32., 32., 1.)
        assert es.consistent_f(moments, stats.c(1.), stats.d(1.), 1.) == pytest.approx(F, rel=1e-12)
        # the ML root does not converge to F on the same moments
        assert abs(es.ml_f_iid(moments, stats.c(1.), 1.).selected - F) > 0.01

    @pytest.mark.parametrize('c, d', [(0., 1.), (1.2, 1.), (0.5, 0.)])
    def test_unit_interval_parameters(self, c, d):
        moments = st.CrossMoments(1., 1j, -1j, 1.)
        with pytest.raises(ModelError):
            es.consistent_f(moments, c, d, 1.)


class TestSinglePacket:

    def test_worked_example(self):
        stats = st.SufficientStats([1.], [1j], 32., 32., 1.)
        result = es.estimate_single_packet(stats, 1.)
        assert result.H_hat[0] == pytest.approx(32. / 33.)
        assert result.F_hat == pytest.approx(1j * 33. / 32.)
        # second stationary point (0, -V1*/(alpha V2*)) loses
        F2, ll2 = result.candidates[1]
        assert F2 == pytest.approx(-1j)
        assert ll2 < result.loglik

    def test_local_optimality(self, rng):
        prior = md.ChannelPrior.iid(1, 1.)
        for _ in range(10):
            stats = random_stats(rng, 1, noise_var=0.5)
            result = es.estimate_single_packet(stats, 1.)

            def objective(x):
                return -es.hybrid_loglik([x[0] + 1j * x[1]], x[2] + 1j * x[3], stats, prior)

            x0 = np.array([result.H_hat[0].real, result.H_hat[0].imag, result.F_hat.real, result.F_hat.imag])
            refined = optimize.minimize(objective, x0, method='Nelder-Mead',
                                        options={'xatol': 1e-10, 'fatol': 1e-12})
            assert -refined.fun <= result.loglik + 1e-8

    def test_noiseless_exact(self, noiseless_scenario, rng):
        stats = noiseless_scenario.reduce(noiseless_scenario.simulate([0.4 - 2j], rng))
        result = es.estimate_single_packet(stats, 1.)
        assert result.F_hat == pytest.approx(F_DIPOLE, rel=1e-12)
        assert result.H_hat[0] == pytest.approx(0.4 - 2j, rel=1e-12)

    def test_unidentifiable(self):
        stats = st.SufficientStats([0.], [1. + 1j], 32., 32., 1.)
        with pytest.raises(UnidentifiableError) as info:
            es.estimate_single_packet(stats, 1.)
        np.testing.assert_array_equal(info.value.H_hat, [0.])

    def test_needs_one_packet(self, rng):
        with pytest.raises(ModelError):
            es.estimate_single_packet(random_stats(rng, 2), 1.)

    def test_slow_fading_reduces_to_single_packet(self, rng):
        stats = random_stats(rng, 1)
        single = es.estimate_single_packet(stats, 1.)
        slow = es.estimate_slow_fading(stats, 1.)
        assert slow.F_hat == single.F_hat
        assert slow.loglik == single.loglik
        np.testing.assert_array_equal(slow.H_hat, single.H_hat)
        assert slow.method == 'slow_fading'

    def test_slow_fading_noiseless(self, noiseless_scenario, rng):
        stats = noiseless_scenario.reduce(noiseless_scenario.simulate(np.full(4, 1.5j), rng))
        result = es.estimate_slow_fading(stats, 1.)
        assert result.F_hat == pytest.approx(F_DIPOLE, rel=1e-12)
        np.testing.assert_allclose(result.H_hat, 1.5j, rtol=1e-12)


class TestGeneral:

    def test_matches_iid_closed_form(self, rng):
        scenario = _snr_scenario(10.)
        prior = md.ChannelPrior.iid(5)
        for _ in range(10):
            stats, _ = model_stats(rng, scenario, prior)
            general = es.joint_map_ml_general(stats, prior)
            closed = es.estimate_iid_quadratic(stats, prior)
            assert general.F_hat == pytest.approx(closed.F_hat, rel=1e-8, abs=1e-8)
            np.testing.assert_allclose(general.H_hat, closed.H_hat, rtol=1e-7, atol=1e-8)

    def test_single_packet_agreement(self, rng):
        prior = md.ChannelPrior.iid(1)
        for _ in range(10):
            stats = random_stats(rng, 1, noise_var=0.3)
            general = es.estimate('map_ml_general', stats, prior)
            single = es.estimate('single_packet', stats, prior)
            assert general.F_hat == pytest.approx(single.F_hat, rel=1e-8)

    def test_stationary_and_selected(self, rng):
        scenario = _snr_scenario(10.)
        prior = md.ChannelPrior.exponential(4, 1., 0.5)
        stats, _ = model_stats(rng, scenario, prior)
        result = es.joint_map_ml_general(stats, prior)
        problem = es.EigenProblem(stats, prior)
        assert result.residual <= 1e-9 * problem.scale
        score = es.hybrid_score(result.H_hat, result.F_hat, stats, prior)
        assert np.linalg.norm(score) <= 1e-7 * (stats.S1 + stats.S2) / stats.noise_var * problem.scale
        assert result.loglik == max(ll for _, ll in result.candidates)

    @pytest.mark.parametrize('prior', [md.ChannelPrior.iid(2), md.ChannelPrior.exponential(3, 1., 0.7)])
    def test_global_maximum(self, prior, rng):
        # brute force over the profile, H = MAP channel for each F
        scenario = _snr_scenario(10.)
        for _ in range(5):
            stats, _ = model_stats(rng, scenario, prior)
            result = es.joint_map_ml_general(stats, prior)
            problem = es.EigenProblem(stats, prior)

            def profile(x):
                F = x[0] + 1j * x[1]
                return -es.hybrid_loglik(problem.map_H(F), F, stats, prior)

            grid = np.linspace(-4, 4, 81)
            values = [(profile((a, b)), a, b) for a in grid for b in grid]
            _, a, b = min(values)
            refined = optimize.minimize(profile, [a, b], method='Nelder-Mead',
                                        options={'xatol': 1e-10, 'fatol': 1e-12})
            assert result.loglik >= -refined.fun - 1e-6

    def test_noiseless_recovery(self, noiseless_scenario, rng):
        prior = md.ChannelPrior.exponential(4, 1., 0.5)
        H = md.sample_channels(prior, rng)
        stats = noiseless_scenario.reduce(noiseless_scenario.simulate(H, rng))
        result = es.joint_map_ml_general(stats, prior)
        assert result.F_hat == pytest.approx(F_DIPOLE, rel=1e-8)
        np.testing.assert_allclose(result.H_hat, H, rtol=1e-8)
        assert result.impedance(50., 50 + 20j).z == pytest.approx(73 + 42.5j, rel=1e-6)

    def test_unidentifiable(self):
        stats = st.SufficientStats(np.zeros(3), [1., 1j, 2.], 32., 32., 1.)
        with pytest.raises(UnidentifiableError):
            es.joint_map_ml_general(stats, md.ChannelPrior.iid(3))

    def test_multistart_settings(self, rng):
        stats = random_stats(rng, 3)
        prior = md.ChannelPrior.iid(3)
        plain = es.joint_map_ml_general(stats, prior)
        extra = es.joint_map_ml_general(stats, prior, es.SolverSettings(multistart=(5 + 5j, -3j)))
        assert extra.loglik >= plain.loglik - 1e-9

    def test_invalid_settings(self):
        with pytest.raises(ValueError):
            es.SolverSettings(root_tolerance=0.)
        with pytest.raises(ValueError):
            es.SolverSettings(max_iterations=0)
        with pytest.raises(ValueError):
            es.SolverSettings(max_alternating_sweeps=-1)

    def test_low_noise_agreement(self, rng):
        scenario = _snr_scenario(40.)
        prior = md.ChannelPrior.exponential(5, 1., 0.5)
        for _ in range(20):
            stats, _ = model_stats(rng, scenario, prior)
            general = es.joint_map_ml_general(stats, prior)
            low_noise = es.estimate_low_noise(stats, prior)
            assert abs(general.F_hat - low_noise.F_hat) < 1e-3 * abs(general.F_hat)

    @pytest.mark.parametrize('trial', [13, 128, 268])
    def test_strongly_correlated_low_snr(self, trial):
        # Newton from every seed drifts to |F| ~ 1e19 here, the root is only
        # reached by carrying on with the alternating ascent
        point = hybridcal.mc.GridPoint(_snr_scenario(-10.), md.ChannelPrior.exponential(5, 1., 0.99),
                                       ('map_ml_general',))
        outcome = hybridcal.mc.run_trial(point, hybridcal.mc.trial_rng(7, 0, 1, trial))['map_ml_general']
        assert outcome.status == 'ok'
        assert abs(outcome.f_error) < 1e6


class TestAlternating:

    def test_noiseless_one_step(self, noiseless_scenario, rng):
        H = np.array([1., -0.5j, 0.3 + 0.3j])
        stats = noiseless_scenario.reduce(noiseless_scenario.simulate(H, rng))
        result = es.alternating_map_ml(stats, md.ChannelPrior.iid(3))
        assert result.F_hat == pytest.approx(F_DIPOLE, rel=1e-12)
        assert result.iterations <= 2

    def test_stationary_point(self, rng):
        scenario = _snr_scenario(10.)
        prior = md.ChannelPrior.exponential(3, 1., 0.5)
        stats, _ = model_stats(rng, scenario, prior)
        result = es.alternating_map_ml(stats, prior)
        problem = es.EigenProblem(stats, prior)
        assert result.residual <= 1e-6 * problem.scale
        assert result.loglik <= es.joint_map_ml_general(stats, prior).loglik + 1e-9

    def test_resumes_from_start(self, rng):
        prior = md.ChannelPrior.exponential(4, 1., 0.5)
        stats, _ = model_stats(rng, _snr_scenario(10.), prior)
        first = es.alternating_map_ml(stats, prior)
        again = es.alternating_map_ml(stats, prior, F0=first.F_hat)
        assert again.iterations <= 2
        assert again.F_hat == pytest.approx(first.F_hat, rel=1e-9)


class TestNewton:

    @staticmethod
    def _fun(F):
        return (F - (1 + 1j)) * (1 + abs(F) ** 2)

    def test_finds_root(self):
        result = es.damped_newton(self._fun, 3 - 2j, 1.)
        assert result.converged
        assert result.F == pytest.approx(1 + 1j, abs=1e-9)

    def test_converged_on_last_allowed_step(self):
        full = es.damped_newton(self._fun, 3 - 2j, 1.)
        assert full.iterations >= 1
        capped = es.damped_newton(self._fun, 3 - 2j, 1., es.SolverSettings(max_iterations=full.iterations))
        assert capped.converged
        assert capped.F == full.F

    def test_budget_exhausted(self):
        result = es.damped_newton(self._fun, 3 - 2j, 1., es.SolverSettings(max_iterations=1))
        assert not result.converged
        assert result.iterations == 1


class TestDispatch:

    def test_noiseless_exact_for_every_method(self, noiseless_scenario, rng):
        H = md.sample_channels(md.ChannelPrior.iid(5), rng)
        stats = noiseless_scenario.reduce(noiseless_scenario.simulate(H, rng))
        prior = md.ChannelPrior.iid(5)
        for method in ('general', 'iid_quadratic', 'low_noise', 'consistent', 'alternating'):
            result = es.estimate(method, stats, prior)
            assert result.F_hat == pytest.approx(F_DIPOLE, rel=1e-8), method
            np.testing.assert_allclose(result.H_hat, H, rtol=1e-8)

    def test_method_names(self, rng):
        stats = random_stats(rng, 2)
        prior = md.ChannelPrior.iid(2)
        assert es.estimate('map_ml_general', stats, prior).method == 'general'
        with pytest.raises(ModelError):
            es.estimate('newton', stats, prior)

    def test_prior_length_mismatch(self, rng):
        with pytest.raises(ModelError):
            es.estimate('general', random_stats(rng, 2), md.ChannelPrior.iid(3))

    def test_singular_prior_points_to_slow_fading(self, rng):
        stats = random_stats(rng, 3)
        with pytest.raises(SingularPriorError, match='slow_fading'):
            es.estimate('general', stats, md.ChannelPrior.slow_fading(3))
        assert es.estimate('slow_fading', stats, md.ChannelPrior.slow_fading(3)).L == 3

    def test_iid_only_methods(self, rng):
        stats = random_stats(rng, 3)
        with pytest.raises(ModelError):
            es.estimate('iid_quadratic', stats, md.ChannelPrior.exponential(3))

    def test_method_supports(self):
        assert es.method_supports('single_packet', md.ChannelPrior.iid(1))
        assert not es.method_supports('single_packet', md.ChannelPrior.iid(2))
        assert not es.method_supports('general', md.ChannelPrior.slow_fading(2))
        assert es.method_supports('slow_fading', md.ChannelPrior.slow_fading(2))
        assert not es.method_supports('consistent', md.ChannelPrior.exponential(2))

    def test_to_dict(self, rng):
        result = es.estimate('iid_quadratic', random_stats(rng, 2), md.ChannelPrior.iid(2))
        out = result.to_dict()
        assert out['method'] == 'iid_quadratic'
        assert len(out['H_hat']) == 2
        assert out['F_hat'] == [result.F_hat.real, result.F_hat.imag]
