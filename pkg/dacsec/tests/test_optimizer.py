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


import itertools

import numpy as np

from ..analytic import optimal_phi_closed, secrecy_bound, snr_threshold
from ..core import ANKind, NoSignChange
from ..optimizer import (COARSE_POINTS, Method, best_phi,
                         find_snr_threshold_numeric, golden_section_max,
                         maximize_phi)
from ..utils import linear_to_db
from .utils import BaseTestCase, RHO_1BIT, RHO_2BIT, RHO_3BIT, ratios

NULL = ANKind.NULL_SPACE
RANDOM = ANKind.RANDOM


class TestGoldenSection(BaseTestCase):

    def test_quadratic(self):
        lo, hi, evaluations = golden_section_max(
            lambda x: -(x - 0.3) ** 2, 0, 1, 1e-8)
        self.assertLessEqual(hi - lo, 1e-8)
        self.assertAlmostEqual((lo + hi) / 2, 0.3, places=7)
        self.assertGreater(evaluations, 30)

    def test_maximum_at_edge(self):
        lo, hi, _ = golden_section_max(lambda x: x, 0, 1, 1e-6)
        self.assertAlmostEqual(hi, 1.0, places=5)

    def test_reversed_bounds(self):
        lo, hi, _ = golden_section_max(lambda x: -abs(x - 2), 3, 1, 1e-6)
        self.assertLess(lo, hi)
        self.assertAlmostEqual(lo, 2, places=5)

    def test_narrow_bracket(self):
        self.assertEqual(golden_section_max(abs, 0.5, 0.5, 1e-3),
                         (0.5, 0.5, 0))


class TestMaximizePhi(BaseTestCase):

    def check_optimum(self, params, kind, phi, value):
        result = maximize_phi(params, kind)
        self.assertAlmostEqual(result.phi, phi, places=3)
        self.assertAlmostEqual(result.value, value, places=4)
        self.assertEqual(result.method, Method.GOLDEN_SECTION)
        self.assertEqual(result.local_maxima, ())
        self.assertGreater(result.iterations, COARSE_POINTS)

    def test_null_space_ideal(self):
        self.check_optimum(ratios(), NULL, 0.3452, 1.4788)

    def test_random_ideal(self):
        self.check_optimum(ratios(), RANDOM, 0.3885, 0.90446)

    def test_null_space_one_bit(self):
        self.check_optimum(ratios(rho=RHO_1BIT), NULL, 0.5144, 1.1217)
        self.assertAlmostEqual(
            optimal_phi_closed(ratios(rho=RHO_1BIT), NULL), 0.5117,
            places=3)

    def test_rho_argument(self):
        self.assertEqual(maximize_phi(ratios(), NULL, rho=RHO_1BIT),
                         maximize_phi(ratios(rho=RHO_1BIT), NULL))

    def test_full_power_on_data(self):
        params = ratios(alpha=12 / 128, rho=RHO_1BIT)
        for snr_db, value in ((10.0, 2.4701), (20.0, 2.7686)):
            result = maximize_phi(params.evolve(gamma0=10 ** (snr_db / 10)),
                                  RANDOM)
            self.assertEqual(result.phi, 1.0)
            self.assertEqual(result.method, Method.GRID_REFINE)
            self.assertAlmostEqual(result.value, value, places=4)

    def test_interior_at_low_snr(self):
        params = ratios(alpha=12 / 128, rho=RHO_1BIT)
        result = maximize_phi(params, RANDOM)
        self.assertAlmostEqual(result.phi, 0.710, places=2)

    def test_no_secrecy(self):
        result = maximize_phi(ratios(alpha=0.8, beta=0.1, snr_db=-10.0),
                              RANDOM)
        self.assertEqual(result.value, 0.0)
        self.assertEqual(result.method, Method.GRID_REFINE)

    def test_not_below_fine_grid(self):
        grid = np.linspace(0.001, 0.999, 999)
        for snr_db in (0.0, 5.0, 10.0, 20.0):
            for rho in (0.0, 0.1, RHO_1BIT):
                for kind in (NULL, RANDOM):
                    params = ratios(rho=rho, snr_db=snr_db)
                    best = max(
                        secrecy_bound(params.evolve(phi=phi), kind)
                        .secrecy_bound for phi in grid)
                    self.assertGreaterEqual(
                        maximize_phi(params, kind).value, best - 1e-6)

    def test_closed_form_tracks_numeric(self):
        grid = itertools.product(
            (0.05, 0.1, 0.125, 0.15), (0.05, 0.0625, 0.08),
            (0.0, RHO_3BIT, RHO_2BIT, RHO_1BIT), (-5.0, 0.0, 5.0, 10.0),
            (NULL, RANDOM))
        for alpha, beta, rho, snr_db, kind in grid:
            if alpha * beta > 0.01:
                continue
            params = ratios(alpha=alpha, beta=beta, rho=rho, snr_db=snr_db)
            self.assertClose(optimal_phi_closed(params, kind),
                             maximize_phi(params, kind).phi, abs_tol=0.02)

    def test_invalid_tolerance(self):
        with self.assertRaises(ValueError):
            maximize_phi(ratios(), NULL, tol=0)


class TestBestPhi(BaseTestCase):

    def test_never_worse_than_numeric(self):
        for rho in (0.0, RHO_1BIT):
            for kind in (NULL, RANDOM):
                params = ratios(rho=rho)
                numeric = maximize_phi(params, kind)
                result = best_phi(params, kind)
                self.assertGreaterEqual(result.value, numeric.value - 1e-12)
                if result.method is Method.CLOSED_FORM:
                    self.assertEqual(result.phi,
                                     optimal_phi_closed(params, kind))

    def test_falls_back_without_closed_form(self):
        params = ratios(alpha=0.5, beta=0.1, snr_db=-10.0)
        self.assertIsNot(best_phi(params, NULL).method, Method.CLOSED_FORM)


class TestNumericThreshold(BaseTestCase):

    def test_null_space(self):
        gamma = find_snr_threshold_numeric(ratios(), NULL)
        self.assertAlmostEqual(linear_to_db(gamma), 5.6791, places=2)
        self.assertClose(linear_to_db(gamma),
                         linear_to_db(snr_threshold(ratios(), NULL)),
                         abs_tol=0.3)

    def test_random(self):
        params = ratios(alpha=6 / 128, phi=0.7)
        gamma = find_snr_threshold_numeric(params, RANDOM)
        self.assertAlmostEqual(linear_to_db(gamma), 6.0962, places=2)
        self.assertClose(linear_to_db(gamma),
                         linear_to_db(snr_threshold(params, RANDOM)),
                         abs_tol=0.3)

    def test_no_sign_change(self):
        with self.assertRaises(NoSignChange):
            find_snr_threshold_numeric(
                ratios(alpha=0.6, beta=0.0625, phi=0.7), RANDOM)

    def test_probe_range(self):
        with self.assertRaises(ValueError):
            find_snr_threshold_numeric(ratios(), NULL, rho_probe=0.0)


class TestRandomPeak(BaseTestCase):

    def test_insensitive_to_resolution(self):
        peaks = [maximize_phi(ratios(rho=rho), RANDOM).value
                 for rho in (RHO_1BIT, 0.1174834, 0.0345495, 0.0)]
        self.assertLess(max(peaks) - min(peaks), 0.01)
        self.assertClose(max(peaks), 0.9113, rel_tol=0.02)
