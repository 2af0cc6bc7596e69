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
Channel realizations, zero-forcing precoding and AN shaping.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import ANKind, InvalidRegime, SingularChannel

_logger = logging.getLogger(__name__)


def complex_gaussian(rng, shape, variance=1.0):
    """
    Circular complex Gaussian samples, ``variance/2`` per real component.
    """
    std = math.sqrt(variance / 2.0)
    return std * (rng.standard_normal(shape)
                  + 1j * rng.standard_normal(shape))


def sample_channels(n, k, m, rng):
    """
    Draw the user channel ``H`` (K x N) and eavesdropper channel ``He``
    (M x N), both with i.i.d. CN(0, 1) entries.
    """
    H = complex_gaussian(rng, (k, n))
    He = complex_gaussian(rng, (m, n))
    return H, He


def zf_precoder(H):
    """
    Zero-forcing precoder normalized to ``||W||_F**2 = K``.

    ``H @ W`` is ``c * I`` with ``c = sqrt(K / tr((H H^H)^-1))``.

    :raises SingularChannel: when ``H`` has rank below K.

    """
    k, n = H.shape
    if k >= n:
        raise InvalidRegime(
            "zero forcing needs K < N (K={0}, N={1})".format(k, n), ['K≥N'])
    if np.linalg.matrix_rank(H) < k:
        raise SingularChannel(
            "user channel has rank below K={0}".format(k))
    W = np.linalg.pinv(H)
    return W * math.sqrt(k / np.linalg.norm(W, 'fro') ** 2)


def null_space_an(H):
    """
    Orthonormal basis (N x (N-K)) of the null space of ``H``.
    """
    k, n = H.shape
    V = scipy.linalg.null_space(H)
    if V.shape[1] != n - k:
        raise SingularChannel(
            "null space of H has dimension {0}, expected {1}"
            .format(V.shape[1], n - k))
    return V


def random_an(n, k, rng):
    """
    N x (N-K) matrix of i.i.d. complex Gaussian columns scaled to unit norm.
    """
    V = complex_gaussian(rng, (n, n - k))
    return V / np.linalg.norm(V, axis=0)


def make_an(an_kind, H, rng):
    k, n = H.shape
    if ANKind.parse(an_kind) is ANKind.NULL_SPACE:
        return null_space_an(H)
    return random_an(n, k, rng)


@dataclass(frozen=True)
class ChannelRealization:

    """
    One draw of the downlink.

    ``H`` is K x N, ``He`` is M x N, ``W`` is the N x K ZF precoder and
    ``V`` the N x (N-K) AN shaping matrix.

    """

    H: np.ndarray
    He: np.ndarray
    W: np.ndarray
    V: np.ndarray
    an_kind: ANKind

    @property
    def n(self):
        return self.H.shape[1]

    @property
    def k(self):
        return self.H.shape[0]

    @property
    def m(self):
        return self.He.shape[0]


def sample_realization(n, k, m, an_kind, rng):
    H, He = sample_channels(n, k, m, rng)
    W = zf_precoder(H)
    V = make_an(an_kind, H, rng)
    return ChannelRealization(H=H, He=He, W=W, V=V,
                              an_kind=ANKind.parse(an_kind))


def draw_symbols(k, n, rng, length=None):
    """
    Data symbols ``s`` (K) and AN symbols ``z`` (N-K), i.i.d. CN(0, 1).

    With `length`, blocks of `length` independent vectors are drawn
    (K x length and (N-K) x length).
    """
    tail = () if length is None else (length,)
    return (complex_gaussian(rng, (k,) + tail),
            complex_gaussian(rng, (n - k,) + tail))


def transmit_signal(real, s, z, p, q):
    """
    Unquantized transmit vector ``sqrt(p) W s + sqrt(q) V z``.
    """
    return math.sqrt(p) * (real.W @ s) + math.sqrt(q) * (real.V @ z)


def transmit_power_diag(real, p, q):
    """
    Diagonal of the transmit covariance ``p W W^H + q V V^H``.

    Scaled by ``rho`` this is the diagonal of the DAC distortion
    covariance.
    """
    return (p * np.sum(np.abs(real.W) ** 2, axis=1)
            + q * np.sum(np.abs(real.V) ** 2, axis=1))
