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



import numpy as np

from ..channel import (draw_symbols, null_space_an, random_an,
                       sample_channels, sample_realization,
                       transmit_power_diag,
                       transmit_signal, zf_precoder)
from ..core import ANKind, InvalidRegime, SingularChannel
from ..quantizer import bussgang_quantize
from .utils import BaseTestCase, RHO_2BIT


class TestChannels(BaseTestCase):

    def test_shapes_and_determinism(self):
        H, He = sample_channels(64, 4, 6, np.random.default_rng(11))
        self.assertEqual(H.shape, (4, 64))
        self.assertEqual(He.shape, (6, 64))
        H2, He2 = sample_channels(64, 4, 6, np.random.default_rng(11))
        self.assertTrue(np.array_equal(H, H2))
        self.assertTrue(np.array_equal(He, He2))

    def test_entry_variance(self):
        H, He = sample_channels(1000, 500, 500, np.random.default_rng(13))
        entries = np.concatenate([H.ravel(), He.ravel()])
        self.assertEqual(entries.size, 10 ** 6)
        for block in (H, He, entries):
            variance = np.var(block)
            self.assertGreaterEqual(variance, 0.99)
            self.assertLessEqual(variance, 1.01)
        self.assertClose(np.var(entries.real), 0.5, abs_tol=0.005)
        self.assertClose(np.var(entries.imag), 0.5, abs_tol=0.005)
        self.assertLess(abs(entries.mean()), 0.005)

    def test_gram_normalization(self):
        rng = np.random.default_rng(12)
        n, k = 512, 8
        gram = np.zeros((k, k), dtype=complex)
        draws = 100
        for _ in range(draws):
            H, _ = sample_channels(n, k, 1, rng)
            gram += H @ H.conj().T / n
        gram /= draws
        np.testing.assert_allclose(gram, np.eye(k), atol=0.02)


class TestZeroForcing(BaseTestCase):

    def test_diagonal_gain(self):
        rng = np.random.default_rng(21)
        H, _ = sample_channels(128, 8, 1, rng)
        W = zf_precoder(H)
        G = H @ W
        c = G[0, 0].real
        self.assertGreater(c, 0)
        np.testing.assert_allclose(G, c * np.eye(8), atol=1e-10)
        self.assertAlmostEqual(np.linalg.norm(W, 'fro') ** 2, 8)
        trace = np.trace(np.linalg.inv(H @ H.conj().T)).real
        self.assertAlmostEqual(c, np.sqrt(8 / trace))

    def test_per_antenna_power(self):
        rng = np.random.default_rng(22)
        n, k, draws = 256, 16, 100
        w_diag = np.zeros(n)
        v_diag = np.zeros(n)
        for _ in range(draws):
            H, _ = sample_channels(n, k, 1, rng)
            w_diag += np.sum(np.abs(zf_precoder(H)) ** 2, axis=1) / draws
            v_diag += np.sum(np.abs(null_space_an(H)) ** 2, axis=1) / draws
        deviation = np.mean(np.abs(w_diag - k / n)) / (k / n)
        self.assertLess(deviation, 0.05)
        np.testing.assert_allclose(v_diag, (n - k) / n, rtol=0.05)

    def test_asymptotic_gain(self):
        rng = np.random.default_rng(23)
        H, _ = sample_channels(256, 16, 1, rng)
        trace = np.trace(np.linalg.inv(H @ H.conj().T)).real
        self.assertClose(trace, 16 / 240, rel_tol=0.05)
        c = (H @ zf_precoder(H))[0, 0].real
        self.assertClose(c ** 2, 240, rel_tol=0.05)

    def test_rank_deficient(self):
        H = np.ones((3, 10), dtype=complex)
        with self.assertRaises(SingularChannel):
            zf_precoder(H)

    def test_too_many_users(self):
        with self.assertRaises(InvalidRegime):
            zf_precoder(np.eye(4, dtype=complex))


class TestArtificialNoise(BaseTestCase):

    def test_null_space(self):
        rng = np.random.default_rng(31)
        H, _ = sample_channels(128, 8, 1, rng)
        V = null_space_an(H)
        self.assertEqual(V.shape, (128, 120))
        self.assertLess(np.abs(H @ V).max(), 1e-10)
        np.testing.assert_allclose(V.conj().T @ V, np.eye(120), atol=1e-10)
        self.assertAlmostEqual(np.linalg.norm(V, 'fro') ** 2, 120)

    def test_random(self):
        rng = np.random.default_rng(32)
        V = random_an(128, 8, rng)
        self.assertEqual(V.shape, (128, 120))
        np.testing.assert_allclose(np.linalg.norm(V, axis=0), 1.0)
        H, _ = sample_channels(128, 8, 1, rng)
        leak = np.sum(np.abs(H @ V) ** 2, axis=1) / 120
        np.testing.assert_allclose(leak, 1.0, rtol=0.4)

    def test_random_columns_nearly_orthogonal(self):
        V = random_an(512, 8, np.random.default_rng(33))
        gram = np.abs(V.conj().T @ V)
        off_diagonal = gram[~np.eye(gram.shape[0], dtype=bool)]
        self.assertLess(off_diagonal.mean(), 0.06)

    def test_quantization_leaks_null_space_an(self):
        rng = np.random.default_rng(34)
        real = sample_realization(128, 8, 16, ANKind.NULL_SPACE, rng)
        _, z = draw_symbols(8, 128, rng, length=2000)
        x = real.V @ z
        self.assertLess(np.abs(real.H @ x).max(), 1e-9)
        cov_diag = transmit_power_diag(real, 0.0, 1.0)
        xq = bussgang_quantize(x, RHO_2BIT, cov_diag, rng)
        leak = np.mean(np.abs(real.H @ xq) ** 2, axis=1)
        expected = RHO_2BIT * (np.abs(real.H) ** 2) @ cov_diag
        np.testing.assert_allclose(leak, expected, rtol=0.1)
        self.assertGreater(leak.min(), 0.5 * RHO_2BIT * 120)

    def test_null_space_rank_check(self):
        H = np.zeros((2, 6), dtype=complex)
        H[0, 0] = H[1, 0] = 1.0
        with self.assertRaises(SingularChannel):
            null_space_an(H)


class TestRealization(BaseTestCase):

    def test_sample_realization(self):
        real = sample_realization(64, 4, 6, ANKind.NULL_SPACE,
                                  np.random.default_rng(41))
        self.assertEqual((real.n, real.k, real.m), (64, 4, 6))
        self.assertEqual(real.V.shape, (64, 60))
        self.assertIs(real.an_kind, ANKind.NULL_SPACE)
        again = sample_realization(64, 4, 6, 'null',
                                   np.random.default_rng(41))
        self.assertTrue(np.array_equal(real.W, again.W))

    def test_transmit_power(self):
        rng = np.random.default_rng(42)
        n, k, p, q = 64, 4, 0.2, 0.005
        real = sample_realization(n, k, 2, ANKind.RANDOM, rng)
        s, z = draw_symbols(k, n, rng, length=50000)
        self.assertEqual(s.shape, (k, 50000))
        self.assertEqual(z.shape, (n - k, 50000))
        x = transmit_signal(real, s, z, p, q)
        empirical = np.mean(np.abs(x) ** 2, axis=1)
        np.testing.assert_allclose(empirical,
                                   transmit_power_diag(real, p, q),
                                   rtol=0.05)
        self.assertAlmostEqual(transmit_power_diag(real, p, q).sum(),
                               p * k + q * (n - k))
