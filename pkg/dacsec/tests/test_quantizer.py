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



import io
import math

import numpy as np

from ..core import DacModel, InvalidRegime
from ..quantizer import (bussgang_quantize, component_scale, design_for,
                         distortion_factor, estimate_bussgang,
                         lloyd_max_design, rho_table, scalar_quantize,
                         write_rho_table)
from .utils import BaseTestCase, RHO_1BIT, RHO_2BIT, RHO_3BIT


class TestLloydMax(BaseTestCase):

    def test_one_bit(self):
        spec = lloyd_max_design(1)
        self.assertAlmostEqual(spec.rho, 1 - 2 / math.pi, places=4)
        self.assertAlmostEqual(spec.levels[1], math.sqrt(2 / math.pi),
                               places=6)
        self.assertEqual(spec.thresholds, (0.0,))

    def test_two_and_three_bits(self):
        self.assertAlmostEqual(lloyd_max_design(2).rho, RHO_2BIT, places=4)
        self.assertAlmostEqual(lloyd_max_design(3).rho, RHO_3BIT, places=4)

    def test_two_bit_levels(self):
        spec = lloyd_max_design(2)
        np.testing.assert_allclose(spec.levels,
                                   [-1.5104, -0.4528, 0.4528, 1.5104],
                                   atol=1e-4)
        np.testing.assert_allclose(spec.thresholds, [-0.9816, 0.0, 0.9816],
                                   atol=1e-4)

    def test_structure(self):
        for bits in (1, 2, 3, 4):
            spec = lloyd_max_design(bits)
            levels = np.asarray(spec.levels)
            thresholds = np.asarray(spec.thresholds)
            self.assertEqual(spec.num_levels, 2 ** bits)
            self.assertEqual(len(thresholds), 2 ** bits - 1)
            self.assertTrue(np.all(np.diff(levels) > 0))
            # interleaving
            self.assertTrue(np.all(levels[:-1] < thresholds))
            self.assertTrue(np.all(thresholds < levels[1:]))
            np.testing.assert_allclose(levels, -levels[::-1], atol=1e-12)
            self.assertTrue(0 < spec.rho < 1)

    def test_rho_decreases_with_bits(self):
        table = rho_table()
        self.assertEqual([bits for bits, _ in table], list(range(1, 9)))
        rhos = [rho for _, rho in table]
        self.assertTrue(all(a > b for a, b in zip(rhos, rhos[1:])))

    def test_bad_arguments(self):
        self.assertRaises(ValueError, lloyd_max_design, 0)
        self.assertRaises(ValueError, lloyd_max_design, 9)
        self.assertRaises(ValueError, lloyd_max_design, 2, tolerance=0)

    def test_iteration_cap_falls_back_to_root_finder(self):
        spec = lloyd_max_design(3, max_iterations=2)
        self.assertAlmostEqual(spec.rho, RHO_3BIT, places=4)

    def test_cached(self):
        self.assertIs(design_for(2), design_for(2))

    def test_write_rho_table(self):
        stream = io.StringIO()
        write_rho_table(stream, max_bits=3)
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0], 'bits,rho')
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[1].startswith('1,0.3633'))


class TestDistortionFactor(BaseTestCase):

    def test_sources(self):
        self.assertEqual(distortion_factor(DacModel.ideal_dac()), 0.0)
        self.assertEqual(distortion_factor(DacModel.from_rho(0.2)), 0.2)
        self.assertAlmostEqual(distortion_factor(DacModel.from_bits(1)),
                               RHO_1BIT, places=4)


class TestScalarQuantize(BaseTestCase):

    def test_one_bit_levels(self):
        spec = design_for(1)
        out = scalar_quantize(np.array([0.3 + 2j, -1.0 - 0.1j]), spec,
                              scale=2.0)
        level = 2.0 * math.sqrt(2 / math.pi)
        np.testing.assert_allclose(out, [level + 1j * level,
                                         -level - 1j * level])

    def test_tie_goes_up(self):
        spec = design_for(1)
        self.assertGreater(scalar_quantize(0.0, spec), 0)
        spec = design_for(2)
        self.assertAlmostEqual(
            float(scalar_quantize(spec.thresholds[2], spec)), spec.levels[3])

    def test_bucket_index(self):
        spec = design_for(3)
        rng = np.random.default_rng(4)
        x = rng.standard_normal(1000)
        out = scalar_quantize(x, spec)
        thresholds = np.asarray(spec.thresholds)
        for value, level in zip(x, out):
            index = int(np.sum(value >= thresholds))
            self.assertEqual(level, spec.levels[index])

    def test_unit_power(self):
        spec = design_for(1)
        out = scalar_quantize(np.array([1.0, -1.0]), spec, unit_power=True)
        np.testing.assert_allclose(out, [1.0, -1.0])


class TestBussgang(BaseTestCase):

    def test_true_quantizer_matches_model(self):
        rng = np.random.default_rng(2024)
        x = rng.standard_normal(10 ** 6)
        for bits, rho in ((1, RHO_1BIT), (2, RHO_2BIT), (3, RHO_3BIT)):
            fit = estimate_bussgang(
                x, scalar_quantize(x, design_for(bits), unit_power=True))
            self.assertClose(fit.gain, math.sqrt(1 - rho), rel_tol=0.01)
            self.assertClose(fit.residual_rho, rho, rel_tol=0.02)
            self.assertLess(fit.cross_correlation, 0.01)

    def test_complex_component_quantization(self):
        rng = np.random.default_rng(7)
        variance = 4.0
        x = (rng.standard_normal(10 ** 5)
             + 1j * rng.standard_normal(10 ** 5)) * component_scale(variance)
        out = scalar_quantize(x, design_for(1),
                              scale=component_scale(variance),
                              unit_power=True)
        fit = estimate_bussgang(x, out)
        self.assertClose(fit.gain, math.sqrt(1 - RHO_1BIT), rel_tol=0.01)
        self.assertClose(fit.residual_rho, RHO_1BIT, rel_tol=0.02)

    def test_trivial_fits(self):
        x = np.random.default_rng(0).standard_normal(100)
        fit = estimate_bussgang(x, x)
        self.assertAlmostEqual(fit.gain, 1.0)
        self.assertAlmostEqual(fit.residual_rho, 0.0)
        fit = estimate_bussgang(x, 0.5 * x)
        self.assertAlmostEqual(fit.gain, 0.5)
        self.assertAlmostEqual(fit.residual_rho, 0.0)

    def test_degenerate_input(self):
        self.assertRaises(ValueError, estimate_bussgang, np.zeros(10),
                          np.ones(10))

    def test_ideal_is_identity(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        self.assertTrue(np.array_equal(
            bussgang_quantize(x, 0.0, np.ones(8), rng), x))

    def test_noise_variance(self):
        rng = np.random.default_rng(3)
        out = bussgang_quantize(np.zeros((4, 250000)), 0.5, np.ones(4), rng)
        variance = np.mean(np.abs(out) ** 2, axis=1)
        np.testing.assert_allclose(variance, 0.5, rtol=0.01)
        self.assertLess(abs(out.mean()), 0.005)

    def test_output_power(self):
        rng = np.random.default_rng(5)
        cov_diag = np.array([0.5, 1.0, 2.0, 4.0])
        x = (rng.standard_normal((4, 100000))
             + 1j * rng.standard_normal((4, 100000))) / math.sqrt(2)
        rho = 0.3
        out = bussgang_quantize(x, rho, cov_diag, rng)
        expected = (1 - rho) * np.mean(np.sum(np.abs(x) ** 2, axis=0)) \
            + rho * cov_diag.sum()
        self.assertClose(np.mean(np.sum(np.abs(out) ** 2, axis=0)),
                         expected, rel_tol=0.01)
        residual = out - math.sqrt(1 - rho) * x
        np.testing.assert_allclose(np.mean(np.abs(residual) ** 2, axis=1),
                                   rho * cov_diag, rtol=0.02)

    def test_invalid_inputs(self):
        rng = np.random.default_rng(0)
        self.assertRaises(ValueError, bussgang_quantize, np.ones(2), 0.2,
                          np.array([1.0, -1.0]), rng)
        self.assertRaises(InvalidRegime, bussgang_quantize, np.ones(2), 1.0,
                          np.ones(2), rng)
