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
Monte Carlo estimation of the ergodic user rate, eavesdropper capacity
and secrecy rate.
"""

import logging
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .channel import sample_realization, transmit_power_diag
from .core import SingularEavesdropperMatrix, derive_params
from .utils import autolog, map_indexed, trial_rng

_logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 1000
MAX_CONDITION = 1e12

SiqnrTerms = namedtuple(
    'SiqnrTerms', ['signal', 'interference', 'quantization', 'an_leakage'])


@dataclass(frozen=True)
class MonteCarloReport:

    """
    Trial averages with their standard errors.

    ``secrecy_rate`` is ``max(user_rate - eve_capacity, 0)``;
    ``secrecy_rate_se`` is the standard error of the per-trial
    difference.
    """

    user_rate: float
    user_rate_se: float
    eve_capacity: float
    eve_capacity_se: float
    secrecy_rate: float
    secrecy_rate_se: float
    mean_siqnr: float
    trials: int
    seed: int


def siqnr_terms(real, rho, p, q):
    """
    Per-user signal, inter-user interference, DAC distortion and AN
    leakage powers (each a length-K array).
    """
    G = real.H @ real.W
    gains = np.abs(G) ** 2
    own = np.diag(gains)
    signal = (1 - rho) * p * own
    interference = (1 - rho) * p * (gains.sum(axis=1) - own)
    distortion = rho * transmit_power_diag(real, p, q)
    quantization = (np.abs(real.H) ** 2) @ distortion
    if q > 0:
        an_leakage = (1 - rho) * q * np.sum(
            np.abs(real.H @ real.V) ** 2, axis=1)
    else:
        an_leakage = np.zeros_like(signal)
    return SiqnrTerms(signal, interference, quantization, an_leakage)


def siqnr_per_user(real, rho, p, q, noise_power):
    """
    Instantaneous SIQNR of every user.
    """
    terms = siqnr_terms(real, rho, p, q)
    return terms.signal / (terms.interference + terms.quantization
                           + terms.an_leakage + noise_power)


def user_rate(gamma):
    """
    Mean of ``log2(1 + gamma_k)`` over users.
    """
    return float(np.mean(np.log2(1 + np.asarray(gamma))))


def eavesdropper_matrix(real, rho, p, q):
    """
    AN-plus-distortion covariance at the eavesdropper,
    ``(1-rho) q He V V^H He^H + He C_DA He^H``.
    """
    distortion = rho * transmit_power_diag(real, p, q)
    X = (real.He * distortion) @ real.He.conj().T
    if q > 0:
        leak = real.He @ real.V
        X = X + (1 - rho) * q * (leak @ leak.conj().T)
    return X


def eve_capacity(real, rho, p, q, k=None):
    """
    Eavesdropper capacity on user `k`'s stream, or the mean over users
    when `k` is None.

    :raises SingularEavesdropperMatrix:
        when the eavesdropper matrix is singular, i.e. without AN and
        with an ideal DAC.

    """
    X = eavesdropper_matrix(real, rho, p, q)
    with np.errstate(all='ignore'):
        condition = np.linalg.cond(X) if np.any(X) else np.inf
    if not condition <= MAX_CONDITION:
        raise SingularEavesdropperMatrix(
            "X singular: no AN and an ideal DAC (condition number {0:.3g})"
            .format(condition), ['X singular'])
    G = real.He @ real.W
    quad = np.real(np.sum(G.conj() * np.linalg.solve(X, G), axis=0))
    capacity = np.log2(1 + (1 - rho) * p * quad)
    if k is None:
        return float(capacity.mean())
    return float(capacity[k])


def _standard_error(samples):
    if len(samples) < 2:
        return 0.0
    return float(np.std(samples, ddof=1) / math.sqrt(len(samples)))


class ErgodicEstimator(object):

    """
    Run independent trials of a :class:`~dacsec.core.SystemConfig`.

    Trial ``t`` draws everything from ``trial_rng(seed, t)`` so results do
    not depend on `workers`.
    """

    logger = _logger

    def __init__(self, workers=1):
        self.workers = max(1, int(workers))

    def trial(self, config, params, seed, index):
        """
        Return ``(mean SIQNR, user rate, eavesdropper capacity)`` of one
        trial.
        """
        rng = trial_rng(seed, index)
        real = sample_realization(config.n, config.k, config.m,
                                  config.an_kind, rng)
        gamma = siqnr_per_user(real, params.rho, params.p, params.q,
                               config.noise_power)
        return (float(np.mean(gamma)), user_rate(gamma),
                eve_capacity(real, params.rho, params.p, params.q))

    @autolog('debug')
    def run(self, config, trials=DEFAULT_TRIALS, seed=0):
        if trials < 1:
            raise ValueError("trials must be positive, got {0!r}"
                             .format(trials))
        params = derive_params(config)
        samples = np.array(map_indexed(
            lambda index: self.trial(config, params, seed, index),
            trials, workers=self.workers, owner=self))
        gamma, rate, capacity = samples.T
        secrecy = rate - capacity
        report = MonteCarloReport(
            user_rate=float(rate.mean()),
            user_rate_se=_standard_error(rate),
            eve_capacity=float(capacity.mean()),
            eve_capacity_se=_standard_error(capacity),
            secrecy_rate=max(float(rate.mean() - capacity.mean()), 0.0),
            secrecy_rate_se=_standard_error(secrecy),
            mean_siqnr=float(gamma.mean()),
            trials=trials,
            seed=seed,
        )
        self.logger.info(
            "N=%d K=%d M=%d snr=%gdB phi=%g dac=%s an=%s: R=%.4f C=%.4f "
            "Rsec=%.4f (%d trials)", config.n, config.k, config.m,
            config.snr_db, config.phi, config.dac, config.an_kind,
            report.user_rate, report.eve_capacity, report.secrecy_rate,
            trials)
        return report


def run_ergodic(config, trials=DEFAULT_TRIALS, seed=0, workers=1):
    """
    Monte Carlo estimate of the rates of `config`.

    :raises InvalidRegime: for an invalid configuration or a singular
        eavesdropper matrix.

    """
    return ErgodicEstimator(workers).run(config, trials=trials, seed=seed)
