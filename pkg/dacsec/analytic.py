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
Large-system closed forms.

Every function takes a :class:`~dacsec.core.DerivedParams` and, where it
matters, an :class:`~dacsec.core.ANKind`.  An explicit `rho` argument
evaluates the expression at that distortion factor instead of
``params.rho``.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import (ANKind, InvalidRegime, NoSolution,
                   SingularEavesdropperMatrix)

_logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
FD_STEP = 1e-6


class QuadraticCoeffs(NamedTuple):
    """
    ``dRsec/drho = (a gamma0**2 + b gamma0 + c) / d`` near
    ``rho = 0``.
    """
    a: float
    b: float
    c: float
    d: float


@dataclass(frozen=True)
class RateBreakdown:
    user_rate: float
    eve_capacity_bound: float
    secrecy_bound: float
    an_kind: ANKind


@dataclass(frozen=True)
class ThresholdSet:

    """
    ``beta_bar``: user loading that minimizes the eavesdropper capacity.
    ``alpha_bar``: eavesdropper antenna ratio above which no positive
    secrecy rate is achievable.
    ``snr_threshold``: linear SNR below which coarser DACs help.

    Each is None where it is undefined.
    """

    beta_bar: Optional[float]
    alpha_bar: Optional[float]
    snr_threshold: Optional[float]


def _at(params, rho=None, phi=None):
    changes = {}
    if rho is not None and rho != params.rho:
        changes['rho'] = rho
    if phi is not None and phi != params.phi:
        changes['phi'] = phi
    return params.evolve(**changes) if changes else params


def _load(beta):
    return 1.0 / beta - 1.0


def _require_ratios(params):
    if params.nu <= 0:
        raise InvalidRegime(
            "eavesdropper bound needs alpha+beta<1 (alpha={0:g}, beta={1:g})"
            .format(params.alpha, params.beta), ['alpha+beta≥1'])


def asymptotic_siqnr(params, an_kind, rho=None):
    """
    Deterministic equivalent of the per-user SIQNR.

    >>> from dacsec.core import DerivedParams
    >>> params = DerivedParams(alpha=0.125, beta=0.0625, phi=1.0, rho=0.0,
    ...                        gamma0=1.0, n=128)
    >>> asymptotic_siqnr(params, ANKind.RANDOM)
    15.0

    """
    dp = _at(params, rho)
    signal = (1 - dp.rho) * _load(dp.beta) * dp.phi * dp.gamma0
    noise = dp.rho * dp.gamma0 + 1
    if ANKind.parse(an_kind) is ANKind.RANDOM:
        noise += (1 - dp.rho) * (1 - dp.phi) * dp.gamma0
    return signal / noise


def user_rate_bound(params, an_kind, rho=None):
    return math.log2(1 + asymptotic_siqnr(params, an_kind, rho))


def eve_capacity_bound(params, rho=None):
    """
    Upper bound on the eavesdropper's ergodic capacity per stream.

    :raises InvalidRegime: when ``alpha + beta >= 1``.
    :raises SingularEavesdropperMatrix: without AN and quantization noise.

    """
    dp = _at(params, rho)
    _require_ratios(dp)
    a, b, phi, rt = dp.alpha, dp.beta, dp.phi, dp.rho_tilde
    denominator = ((1 - a / (1 - b)) * (1 - phi) ** 2
                   + 2 * (1 - a) * (1 - phi) * rt + (1 - a) * rt ** 2)
    if denominator <= 0:
        raise SingularEavesdropperMatrix(
            "X singular at phi={0:g}, rho={1:g}".format(phi, dp.rho),
            ['X singular'])
    return math.log2(1 + (a / b) * phi * (1 - phi + rt) / denominator)


def _eve_snr(dp):
    _require_ratios(dp)
    denominator = (dp.nu + dp.alpha * dp.beta) * dp.mu ** 2 - dp.zeta
    if denominator <= 0:
        raise SingularEavesdropperMatrix(
            "X singular at phi={0:g}, rho={1:g}".format(dp.phi, dp.rho),
            ['X singular'])
    return dp.alpha * dp.phi * _load(dp.beta) * dp.mu / denominator, \
        denominator


def eve_capacity_compact(params, rho=None):
    """
    :func:`eve_capacity_bound` written with ``nu``, ``mu`` and ``zeta``.
    """
    snr, _ = _eve_snr(_at(params, rho))
    return math.log2(1 + snr)


def secrecy_margin(params, an_kind, rho=None, phi=None):
    """
    ``R - Cbar`` without clipping at zero.
    """
    dp = _at(params, rho, phi)
    return user_rate_bound(dp, an_kind) - eve_capacity_compact(dp)


def secrecy_bound(params, an_kind, rho=None):
    """
    Lower bound on the per-user secrecy rate, ``[R - Cbar]+``.

    >>> from dacsec.core import DerivedParams
    >>> params = DerivedParams(alpha=0.125, beta=0.0625, phi=0.3452,
    ...                        rho=0.0, gamma0=1.0, n=128)
    >>> round(secrecy_bound(params, ANKind.NULL_SPACE).secrecy_bound, 4)
    1.4788

    """
    dp = _at(params, rho)
    kind = ANKind.parse(an_kind)
    rate = user_rate_bound(dp, kind)
    capacity = eve_capacity_compact(dp)
    return RateBreakdown(user_rate=rate, eve_capacity_bound=capacity,
                         secrecy_bound=max(rate - capacity, 0.0),
                         an_kind=kind)


def beta_bar(alpha, phi, rho_tilde):
    """
    User loading ratio minimizing the eavesdropper capacity bound, or
    None without AN (``phi == 1``).

    >>> round(beta_bar(0.07, 0.7, 0.0), 4)
    0.7354

    """
    if phi >= 1:
        return None
    jam = alpha * (1 - phi) ** 2
    return 1 - math.sqrt(
        jam / ((1 - alpha) * ((1 - phi) + rho_tilde) ** 2 + jam))


def alpha_bar(params, an_kind, rho=None):
    """
    Largest eavesdropper antenna ratio that still allows a positive
    secrecy rate (as ``phi`` goes to zero).
    """
    dp = _at(params, rho)
    g, b, r = dp.gamma0, dp.beta, dp.rho
    if ANKind.parse(an_kind) is ANKind.NULL_SPACE:
        scale = (r + 1) * g
    else:
        scale = 2 * g
    return (1 - b) * g / (scale + 1 - b * g * r * (2 - r))


def alpha_bar_limit(gamma0, rho, an_kind):
    """
    :func:`alpha_bar` for a vanishing user loading ratio.

    >>> round(alpha_bar_limit(10.0, 0.0, ANKind.RANDOM), 4)
    0.4762

    """
    if ANKind.parse(an_kind) is ANKind.NULL_SPACE:
        return gamma0 / ((rho + 1) * gamma0 + 1)
    return gamma0 / (2 * gamma0 + 1)


def rho_derivative_coeffs(params, an_kind):
    """
    Coefficients of the numerator of ``dRsec/drho`` seen as a quadratic
    in the SNR, specialized to ``rho -> 0``.  ``d`` is evaluated at
    ``params.gamma0``.
    """
    a_, b_, phi, nu = params.alpha, params.beta, params.phi, params.nu
    g, load = params.gamma0, _load(b_)
    a = -nu * (1 - phi) * phi * (nu * (1 - phi) + a_ * phi * load)
    b = (2 * a_ ** 2 * phi ** 2 * (1 - b_) + a_ * phi ** 3 * nu * load
         - nu ** 2 * (1 - phi) ** 2 * phi)
    c = a_ * phi * (nu + 2 * a_ * b_)
    d = LN2 * nu * (1 - phi) * (nu * (1 - phi) * b_ / (1 - b_) + a_ * phi)
    if ANKind.parse(an_kind) is ANKind.NULL_SPACE:
        d *= load * phi * g + 1
    else:
        a += a_ * phi * (1 - phi) * (nu + 2 * a_ * b_) * (
            load * phi + 1 - phi)
        b += 2 * a_ * phi * (1 - phi) * (nu + 2 * a_ * b_)
        d *= ((1 - phi) * g + 1) * (load * phi * g + (1 - phi) * g + 1)
    return QuadraticCoeffs(a, b, c, d)


def positive_root(coeffs):
    """
    The positive root of ``a x**2 + b x + c`` for ``a < 0 < c``.

    >>> positive_root(QuadraticCoeffs(-1.0, 0.0, 4.0, 1.0))
    2.0

    :raises NoSolution: when ``a >= 0`` or ``c <= 0``.

    """
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    if not (a < 0 < c):
        raise NoSolution(
            "no positive SNR threshold (a={0:.6g}, c={1:.6g})".format(a, c))
    root = math.sqrt(b * b - 4 * a * c)
    # Cancellation-free pair of roots; exactly one is positive.
    half = -0.5 * (b + math.copysign(root, b))
    first, second = half / a, c / half
    return first if first > 0 else second


def snr_threshold(params, an_kind):
    """
    Linear SNR at which ``dRsec/drho`` changes sign.

    :raises NoSolution: when the quadratic has no positive root.
    """
    return positive_root(rho_derivative_coeffs(params, an_kind))


def _fd(func, x, step=FD_STEP):
    return (func(x + step) - func(x - step)) / (2 * step)


def rho_derivative(params, an_kind, rho=None):
    """
    ``dRsec/drho`` of the unclipped secrecy bound, in bits per unit of
    ``rho``: exact for null-space AN, a centered difference otherwise.
    """
    dp = _at(params, rho)
    if ANKind.parse(an_kind) is ANKind.RANDOM:
        step = min(FD_STEP, dp.rho / 2) if dp.rho > 0 else FD_STEP
        return _fd(lambda r: secrecy_margin(dp, ANKind.RANDOM, rho=r),
                   dp.rho, step)
    g, r, load, phi = dp.gamma0, dp.rho, _load(dp.beta), dp.phi
    rate_term = -(load * phi * (g + 1) * g) / (
        LN2 * (r * g + 1) * (r * g + (1 - r) * load * phi * g + 1))
    snr, denominator = _eve_snr(dp)
    core = (dp.nu + dp.alpha * dp.beta) * dp.mu ** 2
    eve_term = dp.alpha * phi * load * (core + dp.zeta) / (
        LN2 * (1 - r) ** 2 * denominator
        * (denominator + dp.alpha * phi * load * dp.mu))
    return rate_term + eve_term


def phi_derivative(params, an_kind, phi=None, rho=None):
    """
    ``dRsec/dphi`` of the unclipped secrecy bound at `phi`.
    """
    dp = _at(params, rho, phi)
    if not 0 < dp.phi < 1:
        raise InvalidRegime(
            "phi derivative needs 0 < phi < 1, got {0!r}".format(dp.phi),
            ['phi∉(0,1)'])
    if ANKind.parse(an_kind) is ANKind.RANDOM:
        step = min(FD_STEP, dp.phi / 2, (1 - dp.phi) / 2)
        return _fd(lambda x: secrecy_margin(dp, ANKind.RANDOM, phi=x),
                   dp.phi, step)
    g, r, load, phi = dp.gamma0, dp.rho, _load(dp.beta), dp.phi
    a_, ab, mu = dp.alpha, dp.alpha * dp.beta, dp.mu
    rate_term = (1 - r) * load * g / (
        LN2 * (r * g + 1 + (1 - r) * load * g * phi))
    _, denominator = _eve_snr(dp)
    numerator = ((dp.nu + ab) * mu ** 2 / (1 - r)
                 - 2 * ab * mu * phi * (1 - phi)
                 - ab * (1 - phi) ** 2 * (mu - phi))
    eve_term = a_ * load * numerator / (
        LN2 * denominator * (denominator + a_ * phi * load * mu))
    return rate_term - eve_term


def phi_derivative_approx(params, phi=None, rho=None):
    """
    Null-space ``dRsec/dphi`` with the ``alpha * beta`` terms dropped.
    :func:`optimal_phi_closed` is its root.
    """
    dp = _at(params, rho, phi)
    g, r, load, phi = dp.gamma0, dp.rho, _load(dp.beta), dp.phi
    rate_term = (1 - r) * load * g / (
        LN2 * (r * g + 1 + (1 - r) * load * g * phi))
    eve_term = dp.alpha * load / (
        LN2 * (1 - r) * (dp.nu * dp.mu ** 2 + dp.alpha * phi * load * dp.mu))
    return rate_term - eve_term


def optimal_phi_closed(params, an_kind, rho=None):
    """
    Approximate secrecy-maximizing power split, valid for
    ``alpha * beta << 1``.  Values above one are clipped to one.

    >>> from dacsec.core import DerivedParams
    >>> params = DerivedParams(alpha=0.125, beta=0.0625, phi=0.5, rho=0.0,
    ...                        gamma0=1.0, n=128)
    >>> round(optimal_phi_closed(params, ANKind.NULL_SPACE), 4)
    0.3452
    >>> round(optimal_phi_closed(params, ANKind.RANDOM), 4)
    0.3885

    :raises NoSolution: for a negative discriminant or a non-positive
        result.

    """
    dp = _at(params, rho)
    a_, b_, g, r, nu = dp.alpha, dp.beta, dp.gamma0, dp.rho, dp.nu
    spread = 1 - b_ - a_ / b_
    if ANKind.parse(an_kind) is ANKind.NULL_SPACE:
        discriminant = nu ** 2 + (a_ * r + a_ / g - nu) * spread
        head = nu
        denominator = (1 - r) * spread
    else:
        discriminant = a_ * (1 + g) * (
            _load(b_) * (nu - a_) + spread / g)
        head = (1 + g) * (nu - a_)
        denominator = (1 - r) * (spread + g * (nu - a_))
    if discriminant < 0 or denominator == 0:
        raise NoSolution(
            "no closed-form optimal phi (discriminant {0:.6g})"
            .format(discriminant))
    phi = (head - math.sqrt(discriminant)) / denominator
    if not phi > 0:
        raise NoSolution(
            "closed-form optimal phi is not positive ({0:.6g})".format(phi))
    return min(phi, 1.0)


def wishart_moment_match(params, rho=None):
    """
    Degrees of freedom ``eta`` and scale ``lambda`` of the Wishart matrix
    matching the first two moments of the eavesdropper's
    AN-plus-distortion matrix.

    >>> from dacsec.core import DerivedParams
    >>> params = DerivedParams(alpha=0.05, beta=0.1, phi=0.7, rho=0.0,
    ...                        gamma0=1.0, n=100)
    >>> eta, lam = wishart_moment_match(params)
    >>> round(eta, 9), round(lam * 300, 9)
    (90.0, 1.0)

    """
    dp = _at(params, rho)
    _require_ratios(dp)
    total = (1 - dp.rho) * (1 - dp.phi) + dp.rho
    an = (1 - dp.rho) * (1 - dp.phi)
    if total <= 0:
        raise SingularEavesdropperMatrix(
            "X singular at phi={0:g}, rho={1:g}".format(dp.phi, dp.rho),
            ['X singular'])
    spread = total ** 2 + an ** 2 * dp.beta / (1 - dp.beta)
    eta = dp.n * total ** 2 / spread
    lam = dp.total_power / dp.n * spread / total
    return eta, lam


def eve_capacity_wishart(params, rho=None):
    """
    Eavesdropper capacity bound computed from the moment-matched Wishart
    model; equal to :func:`eve_capacity_bound`.
    """
    dp = _at(params, rho)
    eta, lam = wishart_moment_match(dp)
    excess = eta - dp.m
    if excess <= 0:
        raise InvalidRegime(
            "Wishart model not invertible (eta - M = {0:.6g})".format(excess),
            ['eta≤M'])
    return math.log2(1 + (1 - dp.rho) * dp.p * dp.m / (lam * excess))


def thresholds(params, an_kind):
    """
    :class:`ThresholdSet` of `params`.
    """
    try:
        gamma_bar = snr_threshold(params, an_kind)
    except NoSolution as err:
        _logger.debug("no SNR threshold: %s", err)
        gamma_bar = None
    return ThresholdSet(
        beta_bar=beta_bar(params.alpha, params.phi, params.rho_tilde),
        alpha_bar=alpha_bar(params, an_kind),
        snr_threshold=gamma_bar,
    )
