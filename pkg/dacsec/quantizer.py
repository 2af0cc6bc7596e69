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



"""
Low-resolution DAC model.

The quantizer of a ``b``-bit DAC is the Lloyd-Max quantizer of a unit
variance Gaussian.  Its mean squared error is the distortion factor
``rho`` entering the Bussgang decomposition ``Q(x) = (1-rho) x + d`` of
the raw quantizer, or ``sqrt(1-rho) x + n_DA`` once the output is
rescaled to unit power.
"""

import csv
import functools
import logging
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize
from scipy.stats import norm

from .core import MAX_DAC_BITS as MAX_BITS, InvalidRegime, NumericalFailure

_logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
MAX_ITERATIONS = 1000
POLISH_RESIDUAL = 1e-8


@dataclass(frozen=True)
class QuantizerSpec:

    """
    A symmetric Lloyd-Max quantizer for a unit-variance Gaussian input.

    ``levels`` has ``2**bits`` increasing entries and ``thresholds``
    the ``2**bits - 1`` boundaries between them, both in units of the
    input standard deviation.

    """

    bits: int
    levels: tuple
    thresholds: tuple
    rho: float
    iterations: int = 0

    @property
    def num_levels(self):
        return len(self.levels)


BussgangEstimate = namedtuple(
    'BussgangEstimate', ['gain', 'residual_rho', 'cross_correlation'])


def _edges(thresholds):
    return np.concatenate(([-np.inf], thresholds, [np.inf]))


def _centroids(thresholds):
    edges = _edges(thresholds)
    mass = np.diff(norm.cdf(edges))
    # E[x; lo < x < hi] = pdf(lo) - pdf(hi) for a standard normal
    return -np.diff(norm.pdf(edges)) / mass


def _midpoints(levels):
    return 0.5 * (levels[:-1] + levels[1:])


def _symmetrize(values):
    return 0.5 * (values - values[::-1])


def _mean_squared_error(levels, thresholds):
    edges = _edges(thresholds)
    total = 0.0
    for lo, hi, level in zip(edges[:-1], edges[1:], levels):
        part, _ = integrate.quad(
            lambda x, c: (x - c) ** 2 * norm.pdf(x), lo, hi, args=(level,))
        total += part
    return total


def lloyd_max_design(bits, tolerance=DEFAULT_TOLERANCE,
                     max_iterations=MAX_ITERATIONS):
    """
    Design the ``bits``-bit Lloyd-Max quantizer of a standard normal.

    Levels start from the companded (``pdf**(1/3)``) point density and
    alternate the centroid and nearest-neighbour conditions until no
    threshold moves by more than `tolerance`.  If the iteration cap is
    reached first, the fixed-point equation is handed to
    :func:`scipy.optimize.root` starting from the last iterate.

    >>> spec = lloyd_max_design(1)
    >>> round(spec.rho, 6) == round(1 - 2 / math.pi, 6)
    True

    :raises NumericalFailure: when neither stage converges.

    """
    if not 1 <= bits <= MAX_BITS:
        raise ValueError(
            "bits must be in [1, {0}], got {1!r}".format(MAX_BITS, bits))
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")

    num_levels = 2 ** bits
    probs = np.arange(1, num_levels) / num_levels
    thresholds = math.sqrt(3.0) * norm.ppf(probs)

    for iteration in range(1, max_iterations + 1):
        updated = _midpoints(_centroids(thresholds))
        change = np.max(np.abs(updated - thresholds))
        thresholds = updated
        if change < tolerance:
            break
    else:
        _logger.warning(
            "Lloyd-Max (%d bits) not converged after %d iterations "
            "(last change %.3g); polishing with a root finder",
            bits, max_iterations, change)
        solution = optimize.root(
            lambda t: _midpoints(_centroids(t)) - t, thresholds,
            tol=tolerance)
        residual = np.max(np.abs(solution.fun)) if solution.success else None
        if residual is None or residual > POLISH_RESIDUAL:
            raise NumericalFailure(
                "Lloyd-Max design for {0} bits did not converge: {1}"
                .format(bits, solution.message))
        thresholds = solution.x

    thresholds = _symmetrize(np.asarray(thresholds, dtype=float))
    levels = _symmetrize(_centroids(thresholds))
    rho = _mean_squared_error(levels, thresholds)
    _logger.debug("Lloyd-Max %d bits: rho=%.6f after %d iterations",
                  bits, rho, iteration)
    return QuantizerSpec(bits=bits, levels=tuple(levels),
                         thresholds=tuple(thresholds), rho=rho,
                         iterations=iteration)


@functools.lru_cache(maxsize=None)
def design_for(bits):
    """
    Cached :func:`lloyd_max_design` with default tolerance.
    """
    return lloyd_max_design(bits)


def distortion_factor(dac):
    """
    Distortion factor ``rho`` of a :class:`~dacsec.core.DacModel`.

    >>> from dacsec.core import DacModel
    >>> distortion_factor(DacModel.ideal_dac())
    0.0
    >>> round(distortion_factor(DacModel.from_bits(3)), 4)
    0.0345

    """
    if dac.ideal:
        return 0.0
    if dac.rho is not None:
        return float(dac.rho)
    return design_for(dac.bits).rho


def rho_table(max_bits=MAX_BITS):
    """
    List of ``(bits, rho)`` for 1 to `max_bits` bits.
    """
    return [(bits, design_for(bits).rho) for bits in range(1, max_bits + 1)]


def write_rho_table(stream, max_bits=MAX_BITS, float_format='%.6g'):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['bits', 'rho'])
    for bits, rho in rho_table(max_bits):
        writer.writerow([bits, float_format % rho])


def component_scale(variance):
    """
    Standard deviation of each real component of a circular complex
    Gaussian of the given total `variance`.
    """
    return math.sqrt(variance / 2.0)


def scalar_quantize(x, spec, scale=1.0, unit_power=False):
    """
    Quantize `x` with `spec`, the input having standard deviation `scale`.

    Complex input is quantized per real component; `scale` is then the
    standard deviation of one component (see :func:`component_scale`).
    A value exactly on a threshold maps to the level above it.

    :type unit_power: bool
    :arg  unit_power:
        Rescale the output levels by ``1/sqrt(1-rho)`` so that the output
        power equals the input power.

    """
    levels = np.asarray(spec.levels) * scale
    if unit_power:
        levels = levels / math.sqrt(1 - spec.rho)
    thresholds = np.asarray(spec.thresholds)

    def component(u):
        return levels[np.searchsorted(thresholds, u / scale, side='right')]

    x = np.asarray(x)
    if np.iscomplexobj(x):
        return component(x.real) + 1j * component(x.imag)
    return component(x)


def bussgang_quantize(x, rho, cov_diag, rng):
    """
    Additive Bussgang surrogate of the DAC: ``sqrt(1-rho) x + n_DA``.

    ``n_DA`` is circular complex Gaussian with per-antenna variance
    ``rho * cov_diag``.  `x` is a length-N vector or an N x T block of
    transmit vectors.

    >>> rng = np.random.default_rng(0)
    >>> x = np.ones(3, dtype=complex)
    >>> bool((bussgang_quantize(x, 0.0, np.ones(3), rng) == x).all())
    True

    """
    if not 0 <= rho < 1:
        raise InvalidRegime(
            "distortion factor {0!r} not in [0, 1)".format(rho),
            ['rho∉[0,1)'])
    cov_diag = np.asarray(cov_diag, dtype=float)
    if np.any(cov_diag < 0):
        raise ValueError("negative entry in the quantization covariance")
    x = np.asarray(x)
    if rho == 0:
        return x.copy()
    std = np.sqrt(rho * cov_diag / 2.0)
    if x.ndim == 2:
        std = std[:, np.newaxis]
    noise = std * (rng.standard_normal(x.shape)
                   + 1j * rng.standard_normal(x.shape))
    return math.sqrt(1 - rho) * x + noise


def estimate_bussgang(inputs, outputs):
    """
    Empirical Bussgang decomposition ``outputs = gain * inputs + residual``.

    Returns a :class:`BussgangEstimate` with the least-squares `gain`,
    the residual power relative to the input power and the magnitude of
    the normalized correlation between residual and input.

    >>> fit = estimate_bussgang([1.0, -2.0, 3.0], [0.5, -1.0, 1.5])
    >>> fit.gain, fit.residual_rho
    (0.5, 0.0)

    """
    x = np.ravel(np.asarray(inputs))
    y = np.ravel(np.asarray(outputs))
    if x.shape != y.shape:
        raise ValueError("inputs and outputs differ in size")
    power = np.vdot(x, x).real
    if not power > 0:
        raise ValueError("zero-variance input; gain is undefined")
    gain = np.vdot(x, y).real / power
    residual = y - gain * x
    residual_power = np.vdot(residual, residual).real
    if residual_power > 0:
        cross = abs(np.vdot(x, residual)) / math.sqrt(power * residual_power)
    else:
        cross = 0.0
    return BussgangEstimate(float(gain), float(residual_power / power),
                            float(cross))
