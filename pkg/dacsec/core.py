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
System description shared by every layer: configuration, DAC model,
artificial-noise kind, the per-configuration derived constants and the
exception hierarchy.
"""

import enum
import logging
import math
from dataclasses import dataclass, field, replace

from numpy.linalg import LinAlgError

from .utils import db_to_linear

_logger = logging.getLogger(__name__)

MAX_DAC_BITS = 8


class DacsecError(Exception):
    """
    All errors raised by this package are derived from this class.
    """


class InvalidRegime(DacsecError, ValueError):

    """
    Parameters fall outside the region where the model is defined.

    .. attribute:: violations

       List of short strings naming each violated condition,
       e.g. ``"K≥N"`` or ``"alpha+beta≥1"``.

    """

    def __init__(self, message, violations=()):
        super(InvalidRegime, self).__init__(message)
        self.violations = list(violations)


class SingularChannel(DacsecError, LinAlgError):
    """
    A channel realization is rank deficient.
    """


class SingularEavesdropperMatrix(InvalidRegime, SingularChannel):
    """
    The interference-plus-distortion matrix seen by the eavesdropper is
    singular (no AN and an ideal DAC).
    """


class NoSolution(DacsecError, ArithmeticError):
    """
    A closed-form threshold or optimum does not exist for these parameters.
    """


class NoSignChange(NoSolution):
    """
    A numeric root search found no bracketing interval.
    """


class NumericalFailure(DacsecError, RuntimeError):
    """
    An iterative solver did not converge.
    """


class ConfigError(DacsecError, ValueError):

    """
    A configuration file or command line value is malformed.

    .. attribute:: lineno

       Line number in the configuration file, or None.

    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = 'line {0}: {1}'.format(lineno, message)
        super(ConfigError, self).__init__(message)
        self.lineno = lineno


class ANKind(enum.Enum):

    """
    Shape of the artificial noise.

    >>> ANKind.parse('null')
    <ANKind.NULL_SPACE: 'null'>
    >>> ANKind.parse('random').value
    'random'

    """

    NULL_SPACE = 'null'
    RANDOM = 'random'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(
                "unknown AN kind {0!r} (expected 'null' or 'random')"
                .format(value))

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class DacModel:

    """
    DAC resolution: a bit count, an explicit distortion factor, or ideal.

    >>> DacModel.parse('inf')
    DacModel(bits=None, rho=None, ideal=True)
    >>> str(DacModel.from_bits(3))
    '3'

    """

    bits: int = None
    rho: float = None
    ideal: bool = False

    def __post_init__(self):
        given = [self.bits is not None, self.rho is not None, self.ideal]
        if sum(given) != 1:
            raise ValueError(
                "DacModel needs exactly one of bits, rho or ideal")
        if self.bits is not None and not 1 <= self.bits <= MAX_DAC_BITS:
            raise InvalidRegime(
                "DAC resolution must be 1 to {0} bits, got {1!r}"
                .format(MAX_DAC_BITS, self.bits), ["bits∉[1,8]"])
        if self.rho is not None and not 0 <= self.rho < 1:
            raise InvalidRegime(
                "distortion factor {0!r} not in [0, 1)".format(self.rho),
                ["rho∉[0,1)"])

    @classmethod
    def ideal_dac(cls):
        return cls(ideal=True)

    @classmethod
    def from_bits(cls, bits):
        return cls(bits=int(bits))

    @classmethod
    def from_rho(cls, rho):
        return cls(rho=float(rho))

    @classmethod
    def parse(cls, text):
        text = str(text).strip().lower()
        if text in ('inf', 'infinity', 'ideal'):
            return cls.ideal_dac()
        try:
            bits = int(text)
        except ValueError:
            raise ConfigError(
                "DAC resolution must be a bit count or 'inf', got {0!r}"
                .format(text))
        return cls.from_bits(bits)

    def __str__(self):
        if self.ideal:
            return 'inf'
        if self.bits is not None:
            return str(self.bits)
        return 'rho={0:g}'.format(self.rho)


@dataclass(frozen=True)
class SystemConfig:

    """
    One operating point of the downlink.

    :type n: int
    :arg  n: Number of base station antennas.
    :type k: int
    :arg  k: Number of single-antenna users.
    :type m: int
    :arg  m: Number of eavesdropper antennas.
    :type snr_db: float
    :arg  snr_db: Transmit SNR ``P / sigma^2`` in dB.
    :type phi: float
    :arg  phi: Fraction of the power spent on data, in (0, 1].

    """

    n: int
    k: int
    m: int
    snr_db: float = 10.0
    phi: float = 0.8
    dac: DacModel = field(default_factory=DacModel.ideal_dac)
    an_kind: ANKind = ANKind.NULL_SPACE
    total_power: float = 1.0

    @property
    def gamma0(self):
        return db_to_linear(self.snr_db)

    @property
    def noise_power(self):
        return self.total_power / self.gamma0

    def evolve(self, **changes):
        return replace(self, **changes)


def validate_regime(config):
    """
    Return the list of violated preconditions of `config` (empty if valid).

    >>> validate_regime(SystemConfig(n=8, k=8, m=1))
    ['K≥N', 'alpha+beta≥1']

    """
    violations = []
    for name, value in (('N', config.n), ('K', config.k), ('M', config.m)):
        if value < 1:
            violations.append('{0}<1'.format(name))
    if config.k >= config.n:
        violations.append('K≥N')
    if config.m + config.k >= config.n:
        violations.append('alpha+beta≥1')
    if not 0 < config.phi <= 1:
        violations.append('phi∉(0,1]')
    if config.total_power <= 0:
        violations.append('P≤0')
    return violations


def ratio_violations(alpha, beta, phi):
    """
    Preconditions of the large-system formulas on the antenna ratios.

    >>> ratio_violations(0.6, 0.5, 0.8)
    ['alpha+beta≥1']

    """
    violations = []
    if not 0 < beta < 1:
        violations.append('beta∉(0,1)')
    if not alpha > 0:
        violations.append('alpha≤0')
    if alpha + beta >= 1:
        violations.append('alpha+beta≥1')
    if not 0 < phi <= 1:
        violations.append('phi∉(0,1]')
    return violations


def _ratio(num, den):
    # Out-of-regime inputs are reported by DerivedParams.check().
    return num / den if den > 0 else math.inf


@dataclass(frozen=True)
class DerivedParams:

    """
    Constants of one configuration used by the analytic and simulation
    layers.  ``alpha`` and ``beta`` may be fractional so that sweeps over
    antenna ratios need not round to integer antenna counts.

    Derived on construction:

    ``p``, ``q``
       Per-stream data and AN power, ``p*K + q*(N-K) = P``.
    ``rho_tilde``
       ``rho / (1 - rho)``.
    ``nu``
       ``1 - alpha - beta``.
    ``mu``
       ``(1 - phi) + rho_tilde``.
    ``zeta``
       ``alpha * beta * (1 - phi)**2``.

    """

    alpha: float
    beta: float
    phi: float
    rho: float
    gamma0: float
    n: float
    total_power: float = 1.0
    p: float = field(init=False)
    q: float = field(init=False)
    rho_tilde: float = field(init=False)
    nu: float = field(init=False)
    mu: float = field(init=False)
    zeta: float = field(init=False)

    def __post_init__(self):
        k = self.beta * self.n
        derived = dict(
            p=_ratio(self.phi * self.total_power, k),
            q=_ratio((1 - self.phi) * self.total_power, self.n - k),
            rho_tilde=_ratio(self.rho, 1 - self.rho),
            nu=1 - self.alpha - self.beta,
            zeta=self.alpha * self.beta * (1 - self.phi) ** 2,
        )
        derived['mu'] = (1 - self.phi) + derived['rho_tilde']
        for name, value in derived.items():
            object.__setattr__(self, name, value)

    @property
    def k(self):
        return self.beta * self.n

    @property
    def m(self):
        return self.alpha * self.n

    @property
    def noise_power(self):
        return self.total_power / self.gamma0

    def evolve(self, **changes):
        """
        Copy with some inputs replaced; derived fields are recomputed.
        """
        return replace(self, **changes)

    def violations(self):
        violations = ratio_violations(self.alpha, self.beta, self.phi)
        if not 0 <= self.rho < 1:
            violations.append('rho∉[0,1)')
        return violations

    def check(self):
        violations = self.violations()
        if violations:
            raise InvalidRegime(
                'invalid regime: ' + ', '.join(violations), violations)
        return self


def derive_params(config, alpha=None, beta=None):
    """
    Compute :class:`DerivedParams` of `config`.

    `alpha` and `beta` override ``M/N`` and ``K/N``; the regime is then
    checked on the ratios instead of the integer antenna counts.

    :raises InvalidRegime: when a precondition is violated.

    """
    from .quantizer import distortion_factor

    if alpha is None and beta is None:
        violations = validate_regime(config)
        if violations:
            raise InvalidRegime(
                'invalid regime: ' + ', '.join(violations), violations)
    params = DerivedParams(
        alpha=config.m / config.n if alpha is None else alpha,
        beta=config.k / config.n if beta is None else beta,
        phi=config.phi,
        rho=distortion_factor(config.dac),
        gamma0=config.gamma0,
        n=config.n,
        total_power=config.total_power,
    ).check()
    _logger.debug("derived %r", params)
    return params
