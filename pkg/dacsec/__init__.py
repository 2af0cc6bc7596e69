# [[[cog import cog; cog.outl('"""\n%s\n"""' % open('../README.rst').read())]]]
"""
Secrecy-rate analysis for massive MIMO with low-resolution DACs
===============================================================

dacsec reproduces, at desk scale, the secrecy-rate analysis of a
multiuser massive-MIMO downlink whose base station uses low-resolution
digital-to-analog converters (DACs) and injects artificial noise (AN)
to jam a passive multi-antenna eavesdropper.

What is this?
-------------

* A Bussgang-linearized DAC model: the quantized transmit vector is
  ``sqrt(1 - rho) * x + n_DA`` where the distortion factor ``rho`` comes
  from a Lloyd-Max quantizer designed for a Gaussian input.
* Zero-forcing precoding with null-space or random AN shaping.
* A Monte Carlo engine for the ergodic user rate, the eavesdropper
  capacity and the resulting secrecy rate.
* The closed-form layer: asymptotic SIQNR, rate bounds, the eavesdropper
  capacity bound, the secrecy lower bound, the ``beta_bar`` /
  ``alpha_bar`` / SNR thresholds and the optimal power allocation
  ``phi*``, each cross-checked against simulation or a numeric oracle.

Install
-------

To install dacsec and its dependencies (numpy_ and scipy_), run::

   pip install .

.. _numpy: https://numpy.org
.. _scipy: https://scipy.org


Usage
-----

Evaluate the closed forms for one configuration::

   python -m dacsec.cli analytic --n 128 --k 8 --m 16 \
       --snr-db 0 --phi 0.3452 --dac-bits inf --an null

Run the Monte Carlo estimator for the same point::

   python -m dacsec.cli simulate --n 128 --k 8 --m 16 \
       --snr-db 0 --phi 0.3452 --dac-bits 2 --an null --trials 1000

Sweep a parameter into a CSV file, or regenerate the data behind one of
the reference figures::

   python -m dacsec.cli sweep --n 128 --k 8 --m 16 --phi 0.8 \
       --param snr_db --from 0 --to 20 --step 1 --mode both --out fig4.csv
   python -m dacsec.cli figure --id 4 --out figures/ --plot-script

Parameters can also be read from a ``key = value`` file with
``--config``; flags given on the command line win over the file.

From Python::

   from dacsec.core import SystemConfig, DacModel, ANKind, derive_params
   from dacsec.analytic import secrecy_bound

   config = SystemConfig(n=128, k=8, m=16, snr_db=0, phi=0.3452,
                         dac=DacModel.ideal_dac(), an_kind=ANKind.NULL_SPACE)
   print(secrecy_bound(derive_params(config), config.an_kind))


License
-------

dacsec is licensed under GPL v3.
See COPYING for details.

"""
# [[[end]]]

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


__version__ = '0.1.0.dev0'
__author__ = 'dacsec developers'
__license__ = 'GNU General Public License v3 (GPLv3)'
