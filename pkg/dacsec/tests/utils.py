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
import logging
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import contextmanager

from ..core import DerivedParams


@contextmanager
def mockedattr(object, name, replace):
    """
    Mock `object.name` attribute using `replace`.
    """
    original = getattr(object, name)
    try:
        setattr(object, name, replace)
        yield
    finally:
        setattr(object, name, original)


@contextmanager
def temporary_logger_handler(logger, handler):
    logger.addHandler(handler)
    try:
        yield
    finally:
        logger.removeHandler(handler)


def logging_to_stdout(logger):
    handler = logging.StreamHandler(stream=sys.stdout)
    return temporary_logger_handler(logger, handler)


class CaptureStdIO(object):

    def __enter__(self):
        self._orig_stdout = sys.stdout
        self._orig_stderr = sys.stderr

        self.stdout = sys.stdout = io.StringIO()
        self.stderr = sys.stderr = io.StringIO()
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        sys.stdout = self._orig_stdout
        sys.stderr = self._orig_stderr

    def read_stdout(self):
        return self.stdout.getvalue()

    def read_stderr(self):
        return self.stderr.getvalue()


def ratios(alpha=0.125, beta=0.0625, phi=0.8, rho=0.0, snr_db=0.0, n=128):
    """
    :class:`DerivedParams` with the default N=128, K=8, M=16 ratios.
    """
    return DerivedParams(alpha=alpha, beta=beta, phi=phi, rho=rho,
                         gamma0=10.0 ** (snr_db / 10.0), n=n)


# Lloyd-Max distortion factors for 1, 2 and 3 bits
RHO_1BIT = 0.3633802276324187
RHO_2BIT = 0.11748
RHO_3BIT = 0.03455


class BaseTestCase(unittest.TestCase):

    FULL = os.getenv('DACSEC_FULL_TESTS')

    if FULL:
        trials = 1000
    else:
        trials = 200

    def assertClose(self, actual, expected, rel_tol=0.0, abs_tol=0.0,
                    msg=None):
        """
        Assert ``|actual - expected| <= max(rel_tol * |expected|, abs_tol)``.
        """
        limit = max(rel_tol * abs(expected), abs_tol)
        error = abs(actual - expected)
        if not error <= limit:
            self.fail(msg or '{0!r} != {1!r} (error {2:.3g} > {3:.3g})'
                      .format(actual, expected, error, limit))


class TemporaryDirectoryTestCase(BaseTestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp(prefix='dacsec-test-')

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def path(self, *names):
        return os.path.join(self.tmpdir, *names)
