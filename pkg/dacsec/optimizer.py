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
Numeric optimization of the power split and numeric SNR thresholds.
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import analytic
from .core import ANKind, InvalidRegime, NoSignChange, NoSolution

_logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / golden ratio
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / golden ratio**2

COARSE_POINTS = 64
DEFAULT_TOL = 1e-4
PHI_FLOOR = 1e-6
RHO_PROBE = 1e-3
MAX_EXPANSIONS = 60


class Method(enum.Enum):
    CLOSED_FORM = 'closed-form'
    GOLDEN_SECTION = 'golden-section'
    GRID_REFINE = 'grid-refine'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class OptResult:

    """
    Optimal power split ``phi`` and the secrecy bound ``value`` there.

    ``local_maxima`` lists every local maximizer found on the coarse grid
    when there is more than one.
    """

    phi: float
    value: float
    iterations: int
    method: Method
    local_maxima: tuple = ()


def golden_section_max(f, a, b, tol=DEFAULT_TOL):
    """
    Golden-section search for the maximum of a unimodal `f` on [a, b].

    Returns ``(lo, hi, evaluations)`` with ``hi - lo <= tol`` bracketing
    the maximizer.

    >>> lo, hi, _ = golden_section_max(lambda x: -(x - 0.3) ** 2, 0, 1, 1e-6)
    >>> abs((lo + hi) / 2 - 0.3) < 1e-6
    True

    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b, 0

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(steps - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    evaluations = steps + 1
    if yc > yd:
        return a, d, evaluations
    else:
        return c, b, evaluations


def _objective(params, an_kind):
    def secrecy(phi):
        try:
            return analytic.secrecy_bound(
                params.evolve(phi=phi), an_kind).secrecy_bound
        except InvalidRegime:
            return 0.0
    return secrecy


def _local_maxima(values):
    last = len(values) - 1
    peaks = []
    for i, value in enumerate(values):
        if value <= 0:
            continue
        if i > 0 and not value > values[i - 1]:
            continue
        if i < last and not value >= values[i + 1]:
            continue
        peaks.append(i)
    return peaks


def maximize_phi(params, an_kind, rho=None, tol=DEFAULT_TOL):
    """
    Maximize the secrecy bound over ``phi`` in (0, 1].

    A coarse grid of :data:`COARSE_POINTS` points locates the local maxima
    and each is refined by :func:`golden_section_max` on the bracket of
    its grid neighbours.  A maximum on the last grid point is compared
    with ``phi = 1`` itself.
    """
    if not tol > 0:
        raise ValueError("tol must be positive, got {0!r}".format(tol))
    if rho is not None:
        params = params.evolve(rho=rho)
    f = _objective(params, an_kind)
    grid = np.arange(1, COARSE_POINTS + 1) / COARSE_POINTS
    values = [f(x) for x in grid]
    evaluations = len(grid)
    peaks = _local_maxima(values)
    if not peaks:
        _logger.debug("secrecy bound is zero on the whole grid")
        return OptResult(phi=float(grid[0]), value=0.0,
                         iterations=evaluations, method=Method.GRID_REFINE)

    candidates = []
    for i in peaks:
        lo = grid[i - 1] if i > 0 else PHI_FLOOR
        hi = grid[i + 1] if i + 1 < len(grid) else 1.0
        a, b, used = golden_section_max(f, lo, hi, tol)
        evaluations += used
        phi = 0.5 * (a + b)
        value, method = f(phi), Method.GOLDEN_SECTION
        if i + 1 == len(grid) and values[i] >= value:
            phi, value, method = 1.0, values[i], Method.GRID_REFINE
        candidates.append((value, phi, method))

    value, phi, method = max(candidates, key=lambda c: c[0])
    local_maxima = ()
    if len(candidates) > 1:
        local_maxima = tuple(sorted(c[1] for c in candidates))
        _logger.warning("secrecy bound has %d local maxima in phi: %s",
                        len(candidates), local_maxima)
    return OptResult(phi=float(phi), value=float(value),
                     iterations=evaluations, method=method,
                     local_maxima=local_maxima)


def best_phi(params, an_kind, rho=None, tol=DEFAULT_TOL):
    """
    Closed-form optimal ``phi`` when it exists and is no worse than the
    numeric one, otherwise the numeric optimum.
    """
    if rho is not None:
        params = params.evolve(rho=rho)
    numeric = maximize_phi(params, an_kind, tol=tol)
    try:
        phi = analytic.optimal_phi_closed(params, an_kind)
    except NoSolution as err:
        _logger.info("closed-form phi unavailable (%s); using %s",
                     err, numeric.method)
        return numeric
    value = _objective(params, an_kind)(phi)
    if value + 1e-12 < numeric.value:
        return numeric
    return OptResult(phi=phi, value=value, iterations=numeric.iterations,
                     method=Method.CLOSED_FORM,
                     local_maxima=numeric.local_maxima)


def _rho_slope(params, an_kind, rho_probe, step):
    def margin(rho):
        return analytic.secrecy_margin(params, an_kind, rho=rho)
    return (margin(rho_probe + step) - margin(rho_probe - step)) / (2 * step)


def find_snr_threshold_numeric(params, an_kind, rho_probe=RHO_PROBE):
    """
    Linear SNR where the finite-difference ``dRsec/drho`` at `rho_probe`
    changes sign, found by bisection in log SNR.

    :raises NoSignChange: when no sign change is found or the secrecy
        bound is zero at the threshold.

    """
    if not 0 < rho_probe < 1:
        raise ValueError("rho_probe must be in (0, 1)")
    kind = ANKind.parse(an_kind)
    step = min(analytic.FD_STEP, rho_probe / 2)

    def slope(log_gamma):
        return _rho_slope(params.evolve(gamma0=math.exp(log_gamma)), kind,
                          rho_probe, step)

    lo = hi = 0.0
    f_lo = f_hi = slope(0.0)
    for _ in range(MAX_EXPANSIONS):
        if f_lo > 0 > f_hi:
            break
        if f_lo <= 0:
            lo -= 1.0
            f_lo = slope(lo)
        if f_hi >= 0:
            hi += 1.0
            f_hi = slope(hi)
    if not f_lo > 0 > f_hi:
        raise NoSignChange(
            "dRsec/drho does not change sign over SNR in [{0:.3g}, {1:.3g}]"
            .format(math.exp(lo), math.exp(hi)))

    root = optimize.bisect(slope, lo, hi, xtol=1e-12)
    gamma = math.exp(root)
    at_root = params.evolve(gamma0=gamma, rho=rho_probe)
    if analytic.secrecy_bound(at_root, kind).secrecy_bound <= 0:
        raise NoSignChange(
            "secrecy bound is zero at the sign change (SNR {0:.6g})"
            .format(gamma))
    return gamma
