"""Command line front end: ``hybridcal sweep|estimate|bound|gen``."""

###########
# imports #
###########

import argparse
import json
import logging

import hybridcal
from ._exceptions import ConfigError, ModelError, SolverError, UnidentifiableError
from .bounds import hcrb
from .common import ReceiverScenario
from .estimation import METHODS, estimate
from .io import (RunManifest, complex_pair, load_config, load_stats_csv, manifest_path,
                 scenario_from_config, solver_settings_from_config, sweep_config_from_dict,
                 timestamp, write_metrics_csv, write_training)
from .model import ChannelPrior, Impedance, LoadSwitchPlan, impedance_from_f, zadoff_chu
from .montecarlo import failure_rate_exceeded, run_study

logger = logging.getLogger('hybridcal')

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

#############
# functions #
#############


def parse_prior_option(option, L):
    """``kind[:sigma_H2[:r]]`` for L packets, e.g. iid:1, exponential:1:0.5, slow_fading."""
    parts = option.split(':')
    kind = parts[0]
    try:
        values = [float(p) for p in parts[1:]]
    except ValueError:
        raise ConfigError('prior', 'cannot parse {!r}'.format(option)) from None
    if kind not in ('iid', 'slow_fading', 'exponential') or len(values) > (2 if kind == 'exponential' else 1):
        raise ConfigError('prior', 'expected iid[:s2], slow_fading[:s2] or exponential[:s2[:r]], got {!r}'.format(option))
    sigma_H2 = values[0] if values else 1.
    try:
        if kind == 'exponential':
            return ChannelPrior.exponential(L, sigma_H2, values[1] if len(values) > 1 else 0.5)
        return ChannelPrior(L, kind, sigma_H2)
    except ModelError as error:
        raise ConfigError('prior', str(error)) from None


def _scenario(args):
    """Scenario of --config, or the default dipole receiver; --noise-var and
    --F override."""
    if args.config:
        scenario = scenario_from_config(load_config(args.config))
    else:
        scenario = ReceiverScenario.dipole_default()
    if args.noise_var is not None:
        scenario = scenario.with_noise_var(args.noise_var)
    if args.F is not None:
        scenario = scenario.with_F(hybridcal.io.parse_complex(args.F, '--F'))
    return scenario


def cmd_sweep(args):
    started = timestamp()
    cfg = load_config(args.config)
    config = sweep_config_from_dict(cfg, seed=args.seed, threads=args.threads)
    records = run_study(config, progress=not args.quiet)
    write_metrics_csv(records, args.out, trimmed=config.trim > 0)
    outputs = [args.out]
    if not args.no_manifest:
        path = manifest_path(args.out)
        outputs.append(path)
        manifest = RunManifest({'file': cfg, 'resolved': config.to_dict()}, config.seed,
                               hybridcal.__version__, started, timestamp(), outputs)
        manifest.write(path)
    logger.info('wrote %d records to %s', len(records), args.out)
    if failure_rate_exceeded(records, config.failure_threshold):
        worst = max(records, key=lambda r: r.failure_rate)
        logger.error('solver failure rate %.3g (%s, snr %g dB, L %d) exceeds %.3g',
                     worst.failure_rate, worst.estimator, worst.snr_db, worst.L, config.failure_threshold)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_estimate(args):
    stats = load_stats_csv(args.stats)
    prior = parse_prior_option(args.prior, stats.L)
    settings = solver_settings_from_config(load_config(args.config)) if args.config else None
    result = estimate(args.method, stats, prior, settings)
    z1, z2 = (hybridcal.io.parse_complex(z, name) for z, name in ((args.z1, '--z1'), (args.z2, '--z2')))
    try:
        antenna = impedance_from_f(result.F_hat, z1, z2)
    except ModelError as error:
        logger.warning('no passive antenna impedance for F_hat: %s', error)
        antenna = None

    if args.json:
        out = result.to_dict()
        out['antenna'] = None if antenna is None else complex_pair(antenna.z)
        print(json.dumps(out, indent=2))
        return EXIT_OK

    print('method    ', result.method)
    print('F_hat     ', '{:.10g}'.format(result.F_hat))
    print('Z_A       ', antenna if antenna is not None else 'not passive')
    print('loglik    ', '{:.10g}'.format(result.loglik))
    if result.residual is not None:
        print('residual  ', '{:.3g}'.format(result.residual))
    for F, ll in result.candidates:
        print('candidate ', '{:.10g}'.format(F), '{:.10g}'.format(ll))
    print('H_hat')
    for i, h in enumerate(result.H_hat):
        print('{:6d}  {:.10g}'.format(i, h))
    return EXIT_OK


def cmd_bound(args):
    scenario = _scenario(args)
    prior = parse_prior_option(args.prior, args.L)
    report = hcrb(scenario.F, prior, scenario.S1, scenario.S2, scenario.noise_var)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
        return EXIT_OK
    print('F                 ', '{:.10g}'.format(scenario.F))
    print('h_block diagonal / sigma_H^2')
    for i, h in enumerate(report.h_relative_diagonal):
        print('{:6d}  {:.10g}'.format(i, h))
    print('h_relative        ', '{:.10g}'.format(report.h_relative))
    print('f_bound           ', '{:.10g}'.format(report.f_bound))
    print('f_bound / |F|^2   ', '{:.10g}'.format(report.f_relative))
    return EXIT_OK


def cmd_gen(args):
    training = zadoff_chu(args.T, args.u, args.K)
    z1, z2 = (hybridcal.io.parse_complex(z, name) for z, name in ((args.z1, '--z1'), (args.z2, '--z2')))
    antenna = hybridcal.io.parse_complex(args.antenna, '--antenna')
    plan = LoadSwitchPlan(z1, z2, training.K, training.T)
    scenario = ReceiverScenario(Impedance.from_complex(antenna), plan, training,
                                1. if args.noise_var is None else args.noise_var)
    write_training(args.out, training, scenario, root=args.u)
    logger.info('wrote a length-%d training sequence to %s', training.T, args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='hybridcal',
                                     description='Joint channel and antenna impedance estimation '
                                                 'from switched-load training.')
    parser.add_argument('--version', action='version', version=hybridcal.__version__)
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more log output')
    parser.add_argument('-q', '--quiet', action='store_true', help='warnings and errors only, no progress bars')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('sweep', help='run a Monte Carlo study from a TOML configuration')
    p.add_argument('--config', required=True)
    p.add_argument('--out', required=True, help='CSV table to write')
    p.add_argument('--seed', type=int, help='override sweep.seed')
    p.add_argument('--threads', type=int, help='worker processes')
    p.add_argument('--no-manifest', action='store_true', help='skip the JSON run manifest')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('estimate', help='estimate H and F from a sufficient-statistics CSV')
    p.add_argument('stats', help='CSV written by write_stats_csv')
    p.add_argument('--prior', default='iid:1', help='kind[:sigma_H2[:r]]')
    p.add_argument('--method', default='map_ml_general', choices=METHODS + ('map_ml_general',))
    p.add_argument('--config', help='TOML file with an optional [solver] section')
    p.add_argument('--z1', default='50', help='first load impedance, "re+imj"')
    p.add_argument('--z2', default='50+20j', help='second load impedance, "re+imj"')
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser('bound', help='print the hybrid Cramér-Rao bound')
    p.add_argument('--config', help='TOML file with a [scenario] section')
    p.add_argument('--prior', default='iid:1', help='kind[:sigma_H2[:r]]')
    p.add_argument('--L', type=int, default=1)
    p.add_argument('--noise-var', type=float)
    p.add_argument('--F', help='impedance parameter "re+imj", overrides the scenario')
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser('gen', help='write a Zadoff-Chu training sequence and scenario skeleton')
    p.add_argument('--T', type=int, default=64)
    p.add_argument('--K', type=int)
    p.add_argument('--u', type=int, default=1, help='root index')
    p.add_argument('--z1', default='50')
    p.add_argument('--z2', default='50+20j')
    p.add_argument('--antenna', default='73+42.5j')
    p.add_argument('--noise-var', type=float)
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.quiet else (logging.DEBUG if args.verbose else logging.INFO)
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    try:
        return args.func(args)
    except ConfigError as error:
        logger.error('configuration error: %s', error)
        return EXIT_CONFIG
    except ModelError as error:
        logger.error('invalid input: %s', error)
        return EXIT_CONFIG
    except (SolverError, UnidentifiableError) as error:
        logger.error('numerical failure: %s', error)
        return EXIT_NUMERICAL
    except OSError as error:
        logger.error('%s', error)
        return EXIT_IO
