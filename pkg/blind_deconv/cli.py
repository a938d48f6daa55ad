#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Command line interface: deconvolution of a single observation,
the recovery experiments and the theory checks

Every command writes its artifacts (CSV, PGM) together with a
manifest and the canonical configuration into the output folder.
"""
import argparse
import configparser
import logging
import os
import sys

import numpy as np

from . import __version__
from ._helpers import ConfigError, DeconvError, trial_rng
from .config import cfg_creator as configupdater
from .experiments import _io
from .experiments.channel import RECORD_FIELDS as CHANNEL_FIELDS
from .experiments.channel import SUMMARY_FIELDS as CHANNEL_SUMMARY_FIELDS
from .experiments.channel import run_channel_sim
from .experiments.deblur import box_kernel_support, run_deblur
from .experiments.instances import make_planted
from .experiments.phase import RECORD_FIELDS as PHASE_FIELDS
from .experiments.phase import SUMMARY_FIELDS as PHASE_SUMMARY_FIELDS
from .experiments.phase import PhaseGridSpec, run_phase_diagram
from .experiments.shapes import shapes_image
from .experiments.sweeps import RECORD_FIELDS as SWEEP_FIELDS
from .experiments.sweeps import SUMMARY_FIELDS as SWEEP_SUMMARY_FIELDS
from .experiments.sweeps import (noise_amplitude_slope, oversampling_lengths,
                                 run_noise_sweep, run_oversampling_sweep)
from .operator import build_operator
from .signal import fourier_columns
from .solver import align_and_error, extract_rank1, format_trace, solve_noisy
from .subspace import make_basis
from .theory import REPORT_FIELDS, run_theory_checks
from .visualize.pgm import read_pgm, write_heatmap, write_pgm

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2
EXIT_INVARIANT = 3

DECONVOLVE_TAG = 0
HEATMAP_CELL = 8


def _common_arguments():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', metavar='run_config.ini', default=argparse.SUPPRESS,
                        help='Provide a configuration file; missing keys keep their defaults')
    common.add_argument('-s', '--seed', metavar='SEED', type=int, default=argparse.SUPPRESS,
                        help='Seed of every random stream of the run')
    common.add_argument('-o', '--out', metavar='/some/example/path/', default=argparse.SUPPRESS,
                        help='Output folder for artifacts and the manifest')
    common.add_argument('-t', '--threads', metavar='N', type=int, default=argparse.SUPPRESS,
                        help='Number of worker processes (default: all cores)')
    common.add_argument('--trace', action='store_true', default=argparse.SUPPRESS,
                        help='Write the solver iteration trace')
    common.add_argument('--publication', action='store_true', default=argparse.SUPPRESS,
                        help='Use the publication number of trials for phase diagrams')
    common.add_argument('--write-config', metavar='PATH', dest='write_config',
                        default=argparse.SUPPRESS,
                        help='Write the effective configuration to PATH and exit')
    common.add_argument('-v', '--verbose', metavar='DEBUG', default=argparse.SUPPRESS,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Set the level of verbosity [DEBUG, INFO, WARNING, ERROR]')
    return common


def get_args(argv=None):
    common = _common_arguments()
    parser = argparse.ArgumentParser(prog='deconv', parents=[common],
                                     description='Blind deconvolution by low-rank '
                                                 'recovery of the lifted matrix')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    deconvolve = subparsers.add_parser('deconvolve', parents=[common],
                                       help='Recover h and m from one observation')
    deconvolve.add_argument('-i', '--input', metavar='INPUT_FILE', default=argparse.SUPPRESS,
                            help='One-column text file with the observed signal')
    for name, text in [('phase-diagram', 'Success rate over a (K, N) grid'),
                       ('noise-sweep', 'Relative error against SNR'),
                       ('oversample', 'Relative error against L'),
                       ('channel', 'Coded message over a sparse multipath channel'),
                       ('deblur', 'Blind deblurring of an image'),
                       ('theory-check', 'Numerical checks of the recovery guarantees')]:
        subparsers.add_parser(name, parents=[common], help=text)
    parsed_args = vars(parser.parse_args(argv))
    parsed_args.setdefault('verbose', 'INFO')
    return parsed_args


def setup_logging(verbose, logfile=None):
    assert verbose in ["DEBUG", "INFO", "WARNING", "ERROR"]
    handlers = [logging.StreamHandler()]
    if logfile is not None:
        handlers.insert(0, logging.FileHandler(logfile))
    logging.basicConfig(
        level=logging.getLevelName(verbose),
        format="%(levelname)s - %(name)s - %(funcName)s - %(message)s",
        handlers=handlers)


def build_config(args):
    """
    Defaults, then the configuration file, then command-line flags
    """
    cfg = configupdater.load_config(args.get('config'))
    configupdater.apply_overrides(cfg, command=args.get('command'), seed=args.get('seed'),
                                  threads=args.get('threads'), trace=args.get('trace'),
                                  out=args.get('out'))
    if 'input' in args:
        cfg.set('experiment', 'input', args['input'])
    return cfg


def _wants(cfg, fmt):
    return fmt in cfg.get('output', 'formats')


def _write_table(cfg, artifacts, name, header, rows):
    if _wants(cfg, 'csv'):
        artifacts.append(_io.write_csv(os.path.join(cfg.get('output', 'out'), name), header, rows))


def _write_image(cfg, artifacts, name, values, vmin=0.0, vmax=1.0):
    if _wants(cfg, 'pgm'):
        artifacts.append(write_pgm(os.path.join(cfg.get('output', 'out'), name), values, vmin,
                                   vmax))


def cmd_deconvolve(cfg, artifacts, publication=False):
    """
    Recover h and m from an input signal or from a planted instance
    """
    dims, bases, exp = cfg['dimensions'], cfg['bases'], cfg['experiment']
    opts = cfg.solver_options()
    rng = trial_rng(cfg.seed, DECONVOLVE_TAG)
    truth = None
    if exp['input']:
        y = np.loadtxt(exp['input'], ndmin=1)
        if y.ndim != 1:
            raise DeconvError('{} must hold a single column'.format(exp['input']))
        L = y.size
        B = make_basis(bases['B_kind'], L, dims['K'], rng)
        C = make_basis(bases['C_kind'], L, dims['N'], rng)
        op = build_operator(B, C)
        y_hat = fourier_columns(y)
        logger.info('Deconvolving {} (L={})'.format(exp['input'], L))
    elif exp['planted']:
        instance = make_planted(dims['L'], dims['K'], dims['N'], bases['B_kind'],
                                bases['C_kind'], rng)
        op, y_hat, truth = instance.op, instance.y_hat, (instance.h, instance.m)
        logger.info('Deconvolving a planted instance L={} K={} N={}'.format(*op.dims))
    else:
        raise ConfigError('deconvolve needs an input file or planted = true')

    result = solve_noisy(op, y_hat, exp['delta'], opts,
                         seed=trial_rng(cfg.seed, DECONVOLVE_TAG, 1))
    h_est, m_est, s1, ratio = extract_rank1(result.factors)
    diagnostics = [['L', op.L], ['K', op.K], ['N', op.N],
                   ['residual', result.final_residual], ['outer_iters', result.outer_iters],
                   ['converged', result.converged], ['rank_deficient', result.rank_deficient],
                   ['deficiency_ratio', ratio], ['top_singular_value', s1]]
    if truth is not None:
        err_h, err_m, err_X = align_and_error(h_est, m_est, *truth)
        diagnostics += [['err_h', err_h], ['err_m', err_m], ['err_X', err_X]]
        print('err_X={:.6g}'.format(err_X))
    _write_table(cfg, artifacts, 'deconvolve_h.csv', ['index', 'h'], enumerate(h_est))
    _write_table(cfg, artifacts, 'deconvolve_m.csv', ['index', 'm'], enumerate(m_est))
    _write_table(cfg, artifacts, 'deconvolve_diagnostics.csv', ['quantity', 'value'], diagnostics)
    if cfg.get('run', 'trace'):
        filename = os.path.join(cfg.get('output', 'out'), 'deconvolve_trace.txt')
        with open(filename, 'w') as f:
            f.write(format_trace(result))
        artifacts.append(filename)
    if not result.converged:
        logger.warning('Solver did not converge (residual {:.3e})'.format(result.final_residual))
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_phase_diagram(cfg, artifacts, publication=False):
    dims, bases, exp = cfg['dimensions'], cfg['bases'], cfg['experiment']
    spec = PhaseGridSpec(L=dims['L'], K_values=dims['K_values'], N_values=dims['N_values'],
                         trials_per_cell=exp['publication_trials'] if publication else exp['trials'],
                         B_kind=bases['B_kind'], C_kind=bases['C_kind'],
                         success_threshold=exp['success_threshold'], seed=cfg.seed)
    result = run_phase_diagram(spec, cfg.solver_options(), cfg.threads)
    _write_table(cfg, artifacts, 'phase_records.csv', PHASE_FIELDS, result.records)
    _write_table(cfg, artifacts, 'phase_summary.csv', PHASE_SUMMARY_FIELDS, result.summary_rows())
    if _wants(cfg, 'pgm'):
        artifacts.append(write_heatmap(os.path.join(cfg.get('output', 'out'), 'phase_success.pgm'),
                                       result.success, HEATMAP_CELL))
    return EXIT_OK


def cmd_noise_sweep(cfg, artifacts, publication=False):
    dims, bases, exp = cfg['dimensions'], cfg['bases'], cfg['experiment']
    result = run_noise_sweep(dims['L'], dims['K'], dims['N'], exp['snr_list'], exp['trials'],
                             cfg.seed, cfg.solver_options(), cfg.threads, bases['B_kind'],
                             bases['C_kind'])
    logger.info('Slope of error against noise amplitude: {:.3f}'.format(
        noise_amplitude_slope(result)))
    _write_table(cfg, artifacts, 'noise_records.csv', SWEEP_FIELDS, result.records)
    _write_table(cfg, artifacts, 'noise_summary.csv', SWEEP_SUMMARY_FIELDS, result.summary_rows())
    return EXIT_OK


def cmd_oversample(cfg, artifacts, publication=False):
    dims, bases, exp = cfg['dimensions'], cfg['bases'], cfg['experiment']
    L_values = dims['L_values'] or oversampling_lengths(dims['K'], dims['N'])
    result = run_oversampling_sweep(dims['K'], dims['N'], L_values, exp['snr_db'],
                                    exp['trials'], cfg.seed, cfg.solver_options(), cfg.threads,
                                    bases['B_kind'], bases['C_kind'])
    _write_table(cfg, artifacts, 'oversample_records.csv', SWEEP_FIELDS, result.records)
    _write_table(cfg, artifacts, 'oversample_summary.csv', SWEEP_SUMMARY_FIELDS,
                 result.summary_rows())
    return EXIT_OK


def cmd_channel(cfg, artifacts, publication=False):
    dims, exp = cfg['dimensions'], cfg['experiment']
    report = run_channel_sim(dims['N'], dims['K'], dims['L'], exp['delay_support'] or None,
                             exp['snr_db'], exp['trials'], cfg.seed, cfg.solver_options(),
                             cfg.threads)
    logger.info('Message recovered in {:.0%} of trials'.format(report.message_success_rate))
    _write_table(cfg, artifacts, 'channel_records.csv', CHANNEL_FIELDS, report.records)
    _write_table(cfg, artifacts, 'channel_summary.csv', CHANNEL_SUMMARY_FIELDS,
                 report.summary_rows())
    return EXIT_OK


def cmd_deblur(cfg, artifacts, publication=False):
    exp = cfg['experiment']
    if exp['image']:
        img = read_pgm(exp['image'])
    else:
        img = shapes_image(exp['image_size'], exp['image_size'])
    result = run_deblur(img, box_kernel_support(img.shape, exp['kernel_size']),
                        wavelet_support=exp['wavelet_support'], N=exp['wavelet_count'] or None,
                        seed=cfg.seed, energy_fraction=exp['energy_fraction'],
                        observe=exp['observe'], opts=cfg.solver_options())
    logger.info('Image error {:.3e}, kernel error {:.3e}'.format(result.err_image,
                                                                   result.err_kernel))
    rows = [['N', result.N], ['support_energy', result.support_energy],
            ['err_image', result.err_image], ['err_kernel', result.err_kernel],
            ['err_X', result.err_X], ['converged', result.converged]]
    _write_table(cfg, artifacts, 'deblur_summary.csv', ['quantity', 'value'], rows)
    _write_image(cfg, artifacts, 'deblur_original.pgm', img)
    _write_image(cfg, artifacts, 'deblur_blurred.pgm', result.blurred)
    _write_image(cfg, artifacts, 'deblur_recovered.pgm', result.image)
    _write_image(cfg, artifacts, 'deblur_kernel.pgm', result.kernel, 0.0,
                 max(float(result.kernel.max()), 1e-12))
    return EXIT_OK


def cmd_theory_check(cfg, artifacts, publication=False):
    exp = cfg['experiment']
    report = run_theory_checks(seed=cfg.seed, seeds=exp['theory_seeds'],
                               gram_seeds=exp['theory_gram_seeds'],
                               golfing_seeds=exp['theory_golfing_seeds'],
                               mc_samples=exp['mc_samples'], alpha=exp['alpha'],
                               max_retries=exp['max_retries'])
    text = report.to_text()
    print(text, end='')
    filename = os.path.join(cfg.get('output', 'out'), 'theory_report.txt')
    with open(filename, 'w') as f:
        f.write(text)
    artifacts.append(filename)
    _write_table(cfg, artifacts, 'theory_report.csv', REPORT_FIELDS, report.records())
    if report.invariant_failed:
        logger.error('A deterministic invariant failed')
        return EXIT_INVARIANT
    return EXIT_OK


COMMANDS = {
    'deconvolve': cmd_deconvolve,
    'phase-diagram': cmd_phase_diagram,
    'noise-sweep': cmd_noise_sweep,
    'oversample': cmd_oversample,
    'channel': cmd_channel,
    'deblur': cmd_deblur,
    'theory-check': cmd_theory_check,
}


def run(cfg, publication=False):
    """
    Run the configured command and write its manifest

    Return
    ------
    int
        exit code
    """
    out = cfg.get('output', 'out')
    os.makedirs(out, exist_ok=True)
    artifacts = []
    code = COMMANDS[cfg.command](cfg, artifacts, publication)
    _io.write_manifest(out, cfg.command, cfg.seed, configupdater.serialize_config(cfg), artifacts,
                       __version__)
    logger.info('{} finished with exit code {}'.format(cfg.command, code))
    return code


def main(argv=None):
    args = get_args(argv)
    try:
        cfg = build_config(args)
    except (ConfigError, OSError, configparser.Error) as err:
        setup_logging(args['verbose'])
        logger.error('Configuration could not be loaded: {}'.format(err))
        return EXIT_CONFIG

    if 'write_config' in args:
        setup_logging(args['verbose'])
        configupdater.write_config(cfg, args['write_config'])
        return EXIT_OK

    try:
        os.makedirs(cfg.get('output', 'out'), exist_ok=True)
        setup_logging(args['verbose'], os.path.join(cfg.get('output', 'out'), 'deconv.log'))
        return run(cfg, publication=args.get('publication', False))
    except (ConfigError, OSError, configparser.Error, DeconvError, ValueError) as err:
        logger.error(err)
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())
