# Copyright (C) 2024-  dacsec developers

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.



import contextlib
import csv
import logging
import math
import os
import re
import sys
from dataclasses import dataclass, field

from . import analytic
from .core import (ANKind, ConfigError, DacModel, DacsecError,
                   InvalidRegime, NoSolution, SystemConfig, derive_params)
from .montecarlo import DEFAULT_TRIALS, run_ergodic
from .optimizer import (DEFAULT_TOL, RHO_PROBE, best_phi,
                        find_snr_threshold_numeric, maximize_phi)
from .quantizer import MAX_BITS, write_rho_table
from .utils import inclusive_range, linear_to_db

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2

SWEEP_HEADER = ['param', 'value', 'R_analytic', 'Cbar_analytic',
                'Rsec_analytic', 'R_mc', 'R_mc_se', 'C_mc', 'C_mc_se',
                'Rsec_mc', 'trials', 'error']
OPTIMAL_HEADER = ['snr_db', 'dac_bits', 'phi_star', 'phi_method',
                  'Rsec_analytic', 'Rsec_mc', 'Rsec_mc_se', 'trials',
                  'error']
SWEEP_PARAMS = ('snr_db', 'phi', 'beta', 'alpha', 'dac_bits')
MODES = ('analytic', 'mc', 'both')
DAC_SERIES = ('1', '2', '3', 'inf')

CONFIG_KEYS = {
    'n': int, 'k': int, 'm': int, 'snr_db': float, 'phi': float,
    'dac_bits': str, 'rho': float, 'an': str, 'total_power': float,
    'trials': int, 'seed': int, 'mode': str, 'workers': int,
}
REQUIRED_KEYS = ('n', 'k', 'm')
DEFAULTS = {
    'n': None, 'k': None, 'm': None, 'snr_db': 10.0, 'phi': 0.8,
    'dac_bits': 'inf', 'rho': None, 'an': 'null', 'total_power': 1.0,
    'trials': DEFAULT_TRIALS, 'seed': 0, 'mode': 'analytic', 'workers': 1,
}

_CONFIG_LINE = re.compile(r'^\s*([A-Za-z_]\w*)\s*=\s*([^=]*?)\s*$')


@dataclass(frozen=True)
class RunOptions:
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    mode: str = 'analytic'
    workers: int = 1

    @property
    def analytic(self):
        return self.mode in ('analytic', 'both')

    @property
    def monte_carlo(self):
        return self.mode in ('mc', 'both')


@dataclass(frozen=True)
class SweepSpec:

    """
    One-parameter sweep of `config`.  ``beta`` and ``alpha`` sweeps use
    the exact ratio analytically and the nearest antenna count in
    simulation.  A ``dac_bits`` sweep with ``stop = inf`` runs up to
    :data:`~dacsec.quantizer.MAX_BITS` and then adds the ideal DAC.
    """

    param: str
    start: float
    stop: float
    step: float
    config: SystemConfig
    options: RunOptions = field(default_factory=RunOptions)

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise ConfigError("cannot sweep {0!r}; choose one of {1}".format(
                self.param, ', '.join(SWEEP_PARAMS)))
        if not self.step > 0:
            raise ConfigError("sweep step must be positive")
        if self.start > self.stop:
            raise ConfigError("sweep start {0!r} exceeds stop {1!r}".format(
                self.start, self.stop))
        if not math.isfinite(self.start) or (
                math.isinf(self.stop) and self.param != 'dac_bits'):
            raise ConfigError("only a dac_bits sweep may stop at inf")

    def values(self):
        if math.isinf(self.stop):
            finite = inclusive_range(self.start, max(self.start, MAX_BITS),
                                     self.step)
            return [value for value in finite if value <= MAX_BITS] \
                + [math.inf]
        return inclusive_range(self.start, self.stop, self.step)


def _coerce(key, raw, lineno=None):
    try:
        return CONFIG_KEYS[key](raw)
    except (TypeError, ValueError):
        raise ConfigError("bad value {0!r} for {1}".format(raw, key), lineno)


def read_config_file(path):
    """
    Read ``key = value`` lines; ``#`` starts a comment.
    """
    values = {}
    with open(path) as stream:
        for lineno, line in enumerate(stream, 1):
            line = line.split('#', 1)[0]
            if not line.strip():
                continue
            match = _CONFIG_LINE.match(line)
            if not match:
                raise ConfigError(
                    "malformed line {0!r}".format(line.strip()), lineno)
            key, raw = match.groups()
            if key not in CONFIG_KEYS:
                raise ConfigError("unknown key {0!r}".format(key), lineno)
            values[key] = _coerce(key, raw, lineno)
    _logger.debug("read %d keys from %s", len(values), path)
    return values


def parse_config(path=None, overrides=None, required=REQUIRED_KEYS):
    """
    Build ``(SystemConfig, RunOptions)`` from defaults, the file at `path`
    and `overrides`, later sources winning.  None in `overrides` means
    "not given".

    :raises ConfigError: on malformed input, unknown or missing keys.

    """
    values = dict(DEFAULTS)
    if path is not None:
        values.update(read_config_file(path))
    given = {}
    for key, value in (overrides or {}).items():
        if key not in CONFIG_KEYS:
            raise ConfigError("unknown key {0!r}".format(key))
        if value is not None:
            given[key] = _coerce(key, value)
    # a --dac-bits flag replaces a rho read from the file
    if 'dac_bits' in given and 'rho' not in given:
        values['rho'] = None
    values.update(given)

    missing = [key for key in required if values[key] is None]
    if missing:
        raise ConfigError("missing required key(s): " + ', '.join(missing))
    if values['mode'] not in MODES:
        raise ConfigError("mode must be one of {0}, got {1!r}".format(
            ', '.join(MODES), values['mode']))

    if values['rho'] is not None:
        dac = DacModel.from_rho(values['rho'])
    else:
        dac = DacModel.parse(values['dac_bits'])
    config = SystemConfig(
        n=values['n'] or 0, k=values['k'] or 0, m=values['m'] or 0,
        snr_db=values['snr_db'], phi=values['phi'], dac=dac,
        an_kind=ANKind.parse(values['an']),
        total_power=values['total_power'])
    options = RunOptions(trials=values['trials'], seed=values['seed'],
                         mode=values['mode'], workers=values['workers'])
    return config, options


def format_value(value, full_precision=False):
    """
    >>> format_value(1.0 / 3)
    '0.333333'
    >>> format_value(None), format_value(12)
    ('', '12')

    """
    if value is None:
        return ''
    if isinstance(value, float):
        return ('%.17g' if full_precision else '%.6g') % value
    return str(value)


def point_config(base, param, value):
    """
    Return ``(config, alpha, beta)`` for one sweep point; `alpha` and
    `beta` are the exact ratios for ratio sweeps, else None.
    """
    if param == 'snr_db':
        return base.evolve(snr_db=value), None, None
    if param == 'phi':
        return base.evolve(phi=value), None, None
    if param == 'dac_bits':
        return base.evolve(dac=DacModel.parse(format_value(value))), \
            None, None
    if param == 'beta':
        return base.evolve(k=int(round(value * base.n))), None, value
    if param == 'alpha':
        return base.evolve(m=int(round(value * base.n))), value, None
    raise ConfigError("cannot sweep {0!r}".format(param))


def evaluate_point(config, options, alpha=None, beta=None):
    """
    Analytic and/or Monte Carlo rates of one configuration as a row dict
    keyed by :data:`SWEEP_HEADER` columns.  Failures go to ``error``.
    """
    row = dict.fromkeys(SWEEP_HEADER[2:])
    errors = []
    if options.analytic:
        try:
            params = derive_params(config, alpha=alpha, beta=beta)
            row['R_analytic'] = analytic.user_rate_bound(
                params, config.an_kind)
            rates = analytic.secrecy_bound(params, config.an_kind)
            row['Cbar_analytic'] = rates.eve_capacity_bound
            row['Rsec_analytic'] = rates.secrecy_bound
        except DacsecError as err:
            errors.append(str(err))
    if options.monte_carlo:
        try:
            report = run_ergodic(config, trials=options.trials,
                                 seed=options.seed, workers=options.workers)
        except DacsecError as err:
            errors.append('mc: {0}'.format(err))
        else:
            row.update(R_mc=report.user_rate, R_mc_se=report.user_rate_se,
                       C_mc=report.eve_capacity,
                       C_mc_se=report.eve_capacity_se,
                       Rsec_mc=report.secrecy_rate, trials=report.trials)
    row['error'] = '; '.join(errors) or None
    return row


def cmd_sweep(spec, stream=sys.stdout, full_precision=False):
    """
    Write one CSV row per value of `spec` to `stream`.
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(SWEEP_HEADER)
    for value in spec.values():
        try:
            config, alpha, beta = point_config(spec.config, spec.param, value)
            row = evaluate_point(config, spec.options, alpha, beta)
        except DacsecError as err:
            row = dict.fromkeys(SWEEP_HEADER[2:])
            row['error'] = str(err)
        writer.writerow(
            [spec.param, format_value(value, full_precision)]
            + [format_value(row[column], full_precision)
               for column in SWEEP_HEADER[2:]])
    _logger.info("swept %s over %d values", spec.param, len(spec.values()))


def _fmt_db(gamma):
    return '{0:.4f} dB ({1:.6g} linear)'.format(linear_to_db(gamma), gamma)


def _show(stream, name, value):
    if value is None:
        value = 'n/a'
    elif isinstance(value, float):
        value = '{0:.6g}'.format(value)
    print('{0:<16} = {1}'.format(name, value), file=stream)


def cmd_analytic(config, stream=sys.stdout):
    """
    Print the closed-form rates, thresholds and optimal power split.
    """
    params = derive_params(config)
    kind = config.an_kind
    rates = analytic.secrecy_bound(params, kind)
    limits = analytic.thresholds(params, kind)
    try:
        closed = analytic.optimal_phi_closed(params, kind)
    except NoSolution as err:
        _logger.info("closed-form phi: %s", err)
        closed = None
    numeric = maximize_phi(params, kind)

    _show(stream, 'rho', params.rho)
    _show(stream, 'R', rates.user_rate)
    _show(stream, 'Cbar', rates.eve_capacity_bound)
    _show(stream, 'R_sec', rates.secrecy_bound)
    _show(stream, 'beta_bar', limits.beta_bar)
    _show(stream, 'alpha_bar', limits.alpha_bar)
    _show(stream, 'snr_threshold',
          None if limits.snr_threshold is None
          else _fmt_db(limits.snr_threshold))
    _show(stream, 'phi_closed', closed)
    _show(stream, 'phi_numeric', numeric.phi)
    _show(stream, 'R_sec_at_phi', numeric.value)
    if numeric.local_maxima:
        _show(stream, 'local_maxima',
              ', '.join('%.4f' % phi for phi in numeric.local_maxima))
    return rates


def cmd_simulate(config, options, stream=sys.stdout):
    """
    Print Monte Carlo estimates next to the closed-form bounds.
    """
    report = run_ergodic(config, trials=options.trials, seed=options.seed,
                         workers=options.workers)
    _show(stream, 'trials', report.trials)
    _show(stream, 'seed', report.seed)
    _show(stream, 'mean_siqnr', report.mean_siqnr)
    _show(stream, 'R_mc', '{0:.6g} +/- {1:.2g}'.format(
        report.user_rate, report.user_rate_se))
    _show(stream, 'C_mc', '{0:.6g} +/- {1:.2g}'.format(
        report.eve_capacity, report.eve_capacity_se))
    _show(stream, 'R_sec_mc', '{0:.6g} +/- {1:.2g}'.format(
        report.secrecy_rate, report.secrecy_rate_se))
    try:
        rates = analytic.secrecy_bound(derive_params(config), config.an_kind)
    except DacsecError as err:
        _show(stream, 'R_sec_bound', 'n/a ({0})'.format(err))
    else:
        _show(stream, 'R_bound', rates.user_rate)
        _show(stream, 'Cbar', rates.eve_capacity_bound)
        _show(stream, 'R_sec_bound', rates.secrecy_bound)
    return report


def cmd_optimize_phi(config, stream=sys.stdout, tol=DEFAULT_TOL):
    params = derive_params(config)
    kind = config.an_kind
    try:
        closed = analytic.optimal_phi_closed(params, kind)
    except NoSolution as err:
        _logger.info("closed-form phi: %s", err)
        closed = None
    numeric = maximize_phi(params, kind, tol=tol)
    best = best_phi(params, kind, tol=tol)
    _show(stream, 'phi_closed', closed)
    _show(stream, 'phi_numeric', numeric.phi)
    _show(stream, 'R_sec_numeric', numeric.value)
    _show(stream, 'evaluations', numeric.iterations)
    _show(stream, 'phi_best', '{0:.6g} ({1})'.format(best.phi, best.method))
    _show(stream, 'R_sec_best', best.value)
    return best


def cmd_threshold(config, stream=sys.stdout, rho_probe=RHO_PROBE):
    params = derive_params(config)
    kind = config.an_kind
    coeffs = analytic.rho_derivative_coeffs(params, kind)
    for name in ('a', 'b', 'c', 'd'):
        _show(stream, name, getattr(coeffs, name))
    try:
        closed = _fmt_db(analytic.snr_threshold(params, kind))
    except NoSolution as err:
        closed = 'n/a ({0})'.format(err)
    try:
        numeric = _fmt_db(
            find_snr_threshold_numeric(params, kind, rho_probe=rho_probe))
    except NoSolution as err:
        numeric = 'n/a ({0})'.format(err)
    _show(stream, 'closed_form', closed)
    _show(stream, 'numeric', numeric)


def cmd_rho_table(stream=sys.stdout, max_bits=MAX_BITS,
                  full_precision=False):
    write_rho_table(stream, max_bits,
                    float_format='%.17g' if full_precision else '%.6g')


# Figures

@dataclass(frozen=True)
class FigureSpec:
    caption: str
    base: SystemConfig = None
    param: str = None
    grid: tuple = ()
    y: str = 'Rsec_analytic'


def _base(n, k, m, phi, an, snr_db=10.0):
    return SystemConfig(n=n, k=k, m=m, snr_db=snr_db, phi=phi,
                        an_kind=ANKind.parse(an))


FIGURES = {
    2: FigureSpec('eavesdropper capacity vs beta, N=100, M=7, phi=0.7',
                  _base(100, 10, 7, 0.7, 'null'), 'beta', (0.1, 0.9, 0.02),
                  'Cbar_analytic'),
    3: FigureSpec('eavesdropper capacity vs phi, N=100, K=10, M=5',
                  _base(100, 10, 5, 0.7, 'null'), 'phi', (0.02, 1.0, 0.02),
                  'Cbar_analytic'),
    4: FigureSpec('secrecy rate vs SNR, null-space AN, '
                  'N=128, K=8, M=16, phi=0.8',
                  _base(128, 8, 16, 0.8, 'null'), 'snr_db', (0, 20, 1)),
    5: FigureSpec('secrecy rate vs SNR, random AN, '
                  'N=128, K=8, M=6, phi=0.7',
                  _base(128, 8, 6, 0.7, 'random'), 'snr_db', (0, 20, 1)),
    6: FigureSpec('alpha_bar vs beta at 10 dB', y='alpha_bar_null'),
    7: FigureSpec('secrecy rate vs phi, null-space AN, N=128, K=8, M=16',
                  _base(128, 8, 16, 0.8, 'null'), 'phi', (0.02, 1.0, 0.02)),
    8: FigureSpec('secrecy rate vs phi, random AN, N=128, K=8, M=16',
                  _base(128, 8, 16, 0.8, 'random'), 'phi',
                  (0.02, 1.0, 0.02)),
    9: FigureSpec('secrecy rate at the optimal phi vs SNR, random AN, '
                  'N=128, K=8, M=12',
                  _base(128, 8, 12, 0.8, 'random'), 'snr_db', (0, 20, 1),
                  'Rsec_analytic'),
    10: FigureSpec('secrecy rate at the optimal phi vs SNR, null-space AN, '
                   'N=128, K=8, M=16',
                   _base(128, 8, 16, 0.8, 'null'), 'snr_db', (0, 20, 1),
                   'Rsec_analytic'),
}
PHI_SNRS_DB = (0.0, 5.0)

PLOT_TEMPLATE = '''\
"""
{caption}

Reads the CSV files written next to this script and plots {y} against
{x}.  Requires matplotlib.
"""

import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
SERIES = {series!r}


def column(rows, name):
    return [float(row[name]) if row[name] else float('nan') for row in rows]


for filename in SERIES:
    with open(os.path.join(HERE, filename)) as stream:
        rows = list(csv.DictReader(stream))
    plt.plot(column(rows, {x!r}), column(rows, {y!r}), label=filename)
plt.xlabel({x!r})
plt.ylabel({y!r})
plt.legend()
plt.savefig(os.path.join(HERE, 'fig{fig_id}.png'))
'''


def _write_csv(path, header, rows):
    with open(path, 'w', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
    _logger.info("wrote %s", path)
    return path


def _figure_sweep(path, spec, full_precision):
    with open(path, 'w', newline='') as stream:
        cmd_sweep(spec, stream, full_precision)
    _logger.info("wrote %s", path)
    return path


def _dac_series(base):
    for bits in DAC_SERIES:
        yield bits, base.evolve(dac=DacModel.parse(bits))


def _sweep_series(prefix, fig, options, full_precision, base=None):
    paths = []
    for bits, config in _dac_series(base or fig.base):
        spec = SweepSpec(fig.param, *fig.grid, config=config,
                         options=options)
        path = '{0}_b{1}.csv'.format(prefix, bits)
        paths.append(_figure_sweep(path, spec, full_precision))
    return paths


def _beta_bar_rows(fig, fp):
    rows = []
    for bits, config in _dac_series(fig.base):
        params = derive_params(config)
        rows.append([bits, format_value(analytic.beta_bar(
            params.alpha, params.phi, params.rho_tilde), fp)])
    return rows


def _threshold_rows(base, fp):
    params = derive_params(base)
    kind = base.an_kind
    closed = analytic.snr_threshold(params, kind)
    try:
        numeric = linear_to_db(find_snr_threshold_numeric(params, kind))
    except NoSolution as err:
        _logger.warning("numeric threshold: %s", err)
        numeric = None
    return [[kind.value, format_value(linear_to_db(closed), fp),
             format_value(numeric, fp)]]


def _alpha_bar_rows(bits, fp):
    config = _base(100, 10, 1, 0.5, 'null').evolve(dac=DacModel.parse(bits))
    rows = []
    for beta in inclusive_range(0.02, 0.98, 0.02):
        params = derive_params(config, beta=beta, alpha=1e-6)
        rows.append([format_value(beta, fp)] + [
            format_value(analytic.alpha_bar(params, kind), fp)
            for kind in (ANKind.NULL_SPACE, ANKind.RANDOM)])
    return rows


def _optimal_phi_rows(config, bits, grid, options, fp):
    rows = []
    for snr_db in inclusive_range(*grid):
        point = config.evolve(snr_db=snr_db)
        best = best_phi(derive_params(point), point.an_kind)
        mc, error = [None, None, None], None
        if options.monte_carlo:
            try:
                report = run_ergodic(
                    point.evolve(phi=best.phi), trials=options.trials,
                    seed=options.seed, workers=options.workers)
                mc = [report.secrecy_rate, report.secrecy_rate_se,
                      report.trials]
            except DacsecError as err:
                error = 'mc: {0}'.format(err)
        rows.append(
            [format_value(snr_db, fp), bits, format_value(best.phi, fp),
             best.method.value, format_value(best.value, fp)]
            + [format_value(value, fp) for value in mc] + [error or ''])
    return rows


def _phi_optimum_rows(fig, fp):
    rows = []
    for snr_db in PHI_SNRS_DB:
        for bits, config in _dac_series(fig.base.evolve(snr_db=snr_db)):
            params = derive_params(config)
            try:
                closed = analytic.optimal_phi_closed(params, config.an_kind)
            except NoSolution:
                closed = None
            numeric = maximize_phi(params, config.an_kind)
            rows.append([format_value(snr_db, fp), bits,
                         format_value(closed, fp),
                         format_value(numeric.phi, fp),
                         format_value(numeric.value, fp)])
    return rows


def cmd_figure(fig_id, outdir='.', options=RunOptions(mode='both'),
               plot_script=False, full_precision=False):
    """
    Write the data files of reference figure `fig_id` into `outdir` and
    return their paths.
    """
    if fig_id not in FIGURES:
        raise ConfigError("unknown figure {0!r}; choose from {1}".format(
            fig_id, ', '.join(map(str, sorted(FIGURES)))))
    fig = FIGURES[fig_id]
    fp = full_precision
    os.makedirs(outdir, exist_ok=True)
    stem = os.path.join(outdir, 'fig{0}'.format(fig_id))
    series = []
    extra = []

    if fig_id == 6:
        for bits in DAC_SERIES:
            path = '{0}_b{1}.csv'.format(stem, bits)
            series.append(_write_csv(
                path, ['beta', 'alpha_bar_null', 'alpha_bar_random'],
                _alpha_bar_rows(bits, fp)))
        x = 'beta'
    elif fig_id in (9, 10):
        for bits, config in _dac_series(fig.base):
            path = '{0}_b{1}.csv'.format(stem, bits)
            series.append(_write_csv(path, OPTIMAL_HEADER, _optimal_phi_rows(
                config, bits, fig.grid, options, fp)))
        x = 'snr_db'
    elif fig_id in (7, 8):
        for snr_db in PHI_SNRS_DB:
            series.extend(_sweep_series(
                '{0}_{1:g}dB'.format(stem, snr_db), fig, options, fp,
                base=fig.base.evolve(snr_db=snr_db)))
        extra.append(_write_csv(
            stem + '_optimal.csv',
            ['snr_db', 'dac_bits', 'phi_closed', 'phi_numeric',
             'Rsec_at_numeric'], _phi_optimum_rows(fig, fp)))
        x = 'value'
    else:
        series.extend(_sweep_series(stem, fig, options, fp))
        if fig_id == 2:
            extra.append(_write_csv(stem + '_beta_bar.csv',
                                    ['dac_bits', 'beta_bar'],
                                    _beta_bar_rows(fig, fp)))
        elif fig_id in (4, 5):
            extra.append(_write_csv(
                stem + '_threshold.csv',
                ['an', 'closed_form_db', 'numeric_db'],
                _threshold_rows(fig.base, fp)))
        x = 'value'

    if plot_script:
        script = stem + '_plot.py'
        with open(script, 'w') as stream:
            stream.write(PLOT_TEMPLATE.format(
                caption=fig.caption, fig_id=fig_id, x=x, y=fig.y,
                series=[os.path.basename(path) for path in series]))
        extra.append(script)
    return series + extra


# Command line

def setuplogfile(logger=None, filename='dacsec.log'):
    """
    Send every record of `logger` (default: the package logger) to
    `filename`.  Returns the handler so the caller can remove it.
    """
    if logger is None:
        logger = logging.getLogger('dacsec')
    ch = logging.FileHandler(filename=filename, mode='w')
    ch.setLevel(logging.DEBUG)
    ch.setFormatter(logging.Formatter(
        '%(asctime)s %(levelname)s %(threadName)s %(name)s: %(message)s'))
    logger.addHandler(ch)
    logger.setLevel(logging.DEBUG)
    return ch


@contextlib.contextmanager
def _output(path):
    if path is None or path == '-':
        yield sys.stdout
    else:
        with open(path, 'w', newline='') as stream:
            yield stream


def _overrides(ns):
    return dict((key, getattr(ns, key, None)) for key in CONFIG_KEYS)


def _load(ns, required=REQUIRED_KEYS):
    return parse_config(ns.config, _overrides(ns), required=required)


def _run_analytic(ns):
    config, _ = _load(ns)
    with _output(ns.out) as stream:
        cmd_analytic(config, stream)


def _run_simulate(ns):
    config, options = _load(ns)
    with _output(ns.out) as stream:
        cmd_simulate(config, options, stream)


def _run_sweep(ns):
    config, options = _load(ns)
    spec = SweepSpec(ns.param, ns.start, ns.stop, ns.step, config=config,
                     options=options)
    with _output(ns.out) as stream:
        cmd_sweep(spec, stream, ns.full_precision)


def _run_figure(ns):
    if ns.mode is None:
        ns.mode = 'both'
    _, options = _load(ns, required=())
    paths = cmd_figure(ns.id, ns.out or '.', options,
                       plot_script=ns.plot_script,
                       full_precision=ns.full_precision)
    for path in paths:
        print(path)


def _run_optimize_phi(ns):
    config, _ = _load(ns)
    with _output(ns.out) as stream:
        cmd_optimize_phi(config, stream, tol=ns.tol)


def _run_threshold(ns):
    config, _ = _load(ns)
    with _output(ns.out) as stream:
        cmd_threshold(config, stream, rho_probe=ns.rho_probe)


def _run_rho_table(ns):
    with _output(ns.out) as stream:
        cmd_rho_table(stream, ns.max_bits, ns.full_precision)


def _common_parser():
    import argparse
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group('system')
    group.add_argument('--n', type=int, help='base station antennas N')
    group.add_argument('--k', type=int, help='users K')
    group.add_argument('--m', type=int, help='eavesdropper antennas M')
    group.add_argument('--snr-db', type=float, help='transmit SNR in dB')
    group.add_argument('--phi', type=float,
                       help='fraction of power spent on data')
    group.add_argument('--dac-bits', help="DAC resolution, 1..8 or 'inf'")
    group.add_argument('--rho', type=float,
                       help='explicit distortion factor (overrides '
                       '--dac-bits)')
    group.add_argument('--an', choices=[kind.value for kind in ANKind],
                       help='artificial noise shaping')
    group.add_argument('--total-power', type=float)
    group = common.add_argument_group('run')
    group.add_argument('--trials', type=int, help='Monte Carlo trials')
    group.add_argument('--seed', type=int)
    group.add_argument('--workers', type=int,
                       help='Monte Carlo worker threads')
    group.add_argument('--mode', choices=MODES)
    group.add_argument('--config', help='key = value configuration file')
    group.add_argument('--out', help='output file (directory for figure)')
    group.add_argument('--full-precision', action='store_true',
                       default=False,
                       help='print floats with 17 significant digits')
    group = common.add_argument_group('diagnostics')
    group.add_argument('-v', '--verbose', action='count', default=0)
    group.add_argument('--log-file')
    group.add_argument(
        '--pdb', dest='debugger', const='pdb', action='store_const',
        help='start pdb when error occurs.')
    group.add_argument(
        '--ipdb', dest='debugger', const='ipdb', action='store_const',
        help='start ipdb when error occurs.')
    group.add_argument(
        '--log-traceback', action='store_true', default=False)
    return common


def main(args=None):
    """
    Secrecy rates of a massive MIMO downlink with low-resolution DACs.

    Example usage::

        python -m dacsec.cli analytic --n 128 --k 8 --m 16 --snr-db 0 \\
            --phi 0.3452 --dac-bits inf --an null
        python -m dacsec.cli sweep --n 128 --k 8 --m 16 --phi 0.8 \\
            --param snr_db --from 0 --to 20 --step 1 --mode both

    Options missing on the command line are taken from --config, then
    from the built-in defaults.  Returns 0 on success, 2 for invalid
    parameters and 1 for anything else.

    """
    import argparse
    from textwrap import dedent
    formatter = type('DacsecHelpFormatter',
                     (argparse.ArgumentDefaultsHelpFormatter,
                      argparse.RawDescriptionHelpFormatter),
                     {})
    parser = argparse.ArgumentParser(
        formatter_class=formatter, description=dedent(main.__doc__))
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True
    common = [_common_parser()]

    def add(name, func, help):
        sub = subparsers.add_parser(name, parents=common, help=help,
                                    formatter_class=formatter)
        sub.set_defaults(func=func)
        return sub

    add('analytic', _run_analytic, 'closed-form rates and thresholds')
    add('simulate', _run_simulate, 'Monte Carlo rates')
    sub = add('sweep', _run_sweep, 'sweep one parameter into a CSV file')
    sub.add_argument('--param', required=True, choices=SWEEP_PARAMS)
    sub.add_argument('--from', dest='start', type=float, required=True)
    sub.add_argument('--to', dest='stop', type=float, required=True,
                     help="last value; a dac_bits sweep may end at 'inf'")
    sub.add_argument('--step', type=float, required=True)
    sub = add('figure', _run_figure, 'data files of a reference figure')
    sub.add_argument('--id', type=int, required=True, choices=sorted(FIGURES))
    sub.add_argument('--plot-script', action='store_true', default=False,
                     help='also write a matplotlib script for the CSVs')
    sub = add('optimize-phi', _run_optimize_phi, 'optimal power split')
    sub.add_argument('--tol', type=float, default=DEFAULT_TOL)
    sub = add('threshold', _run_threshold, 'SNR threshold on DAC benefit')
    sub.add_argument('--rho-probe', type=float, default=RHO_PROBE)
    sub = add('rho-table', _run_rho_table, 'Lloyd-Max distortion factors')
    sub.add_argument('--max-bits', type=int, default=MAX_BITS)
    ns = parser.parse_args(args)

    package_logger = logging.getLogger('dacsec')
    level = package_logger.level
    if ns.verbose:
        logging.basicConfig(
            format='%(levelname)s %(name)s: %(message)s')
        package_logger.setLevel(
            logging.INFO if ns.verbose == 1 else logging.DEBUG)
    handler = setuplogfile(filename=ns.log_file) if ns.log_file else None

    try:
        ns.func(ns)
        return EXIT_OK
    except (InvalidRegime, ConfigError) as err:
        print('error: {0}'.format(err), file=sys.stderr)
        for violation in getattr(err, 'violations', ()):
            print('  violated: {0}'.format(violation), file=sys.stderr)
        return EXIT_INVALID
    except Exception as err:
        if ns.log_traceback or ns.debugger:
            _logger.exception('Unexpected error in %s', ns.command)
        else:
            _logger.error('Unexpected error in %s: %r', ns.command, err)
        print('internal error: {0!r}'.format(err), file=sys.stderr)
        if ns.debugger:
            debugger = __import__(ns.debugger)
            debugger.post_mortem(sys.exc_info()[2])
        return EXIT_INTERNAL
    finally:
        if handler is not None:
            package_logger.removeHandler(handler)
            handler.close()
        package_logger.setLevel(level)


def run():
    sys.exit(main())


if __name__ == '__main__':
    run()
