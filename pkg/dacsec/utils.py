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



import functools
import itertools
import logging
import math
import queue
import reprlib
import threading

import numpy as np

_logger = logging.getLogger(__name__)

_worker_ids = itertools.count(1)

_short_repr = reprlib.Repr()
_short_repr.maxstring = 60
_short_repr.maxother = 60


def autolog(level):
    """
    Log each call of a method and its result through ``self.logger``.

    Arguments are abbreviated with :mod:`reprlib` so that large arrays do
    not flood the log.
    """
    if isinstance(level, str):
        level = getattr(logging, level.upper())

    def decorate(method):
        @functools.wraps(method)
        def traced(self, *args, **kwds):
            name = '{0}.{1}'.format(type(self).__name__, method.__name__)
            if self.logger.isEnabledFor(level):
                shown = [_short_repr.repr(arg) for arg in args]
                shown += ['{0}={1}'.format(key, _short_repr.repr(kwds[key]))
                          for key in sorted(kwds)]
                self.logger.log(level, "%s(%s) started", name,
                                ', '.join(shown))
            result = method(self, *args, **kwds)
            self.logger.log(level, "%s -> %s", name,
                            _short_repr.repr(result))
            return result
        return traced
    return decorate


def _worker_prefix(owner):
    if isinstance(owner, str):
        return owner
    return type(owner).__name__


def map_indexed(func, count, workers=1, owner='DacsecWorker'):
    """
    Return ``[func(0), ..., func(count - 1)]``, computed by `workers` threads.

    Workers pull indices from a shared queue and store each result in its
    own slot, so the returned list is always in index order.  When several
    indices fail, the exception of the lowest one is re-raised.  Threads
    are named after `owner`, a string or the object running the pool.

    >>> map_indexed(lambda i: i * i, 5, workers=3)
    [0, 1, 4, 9, 16]

    """
    if workers <= 1 or count <= 1:
        return [func(i) for i in range(count)]

    tasks = queue.Queue()
    for i in range(count):
        tasks.put(i)
    results = [None] * count
    failures = {}

    def target():
        while True:
            try:
                i = tasks.get_nowait()
            except queue.Empty:
                return
            try:
                results[i] = func(i)
            except Exception as err:
                failures[i] = err

    prefix = _worker_prefix(owner)
    threads = [threading.Thread(target=target, name='{0}-{1}'.format(
        prefix, next(_worker_ids))) for _ in range(min(workers, count))]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    if failures:
        first = min(failures)
        _logger.debug("%d of %d tasks failed; first failure at index %d",
                      len(failures), count, first)
        raise failures[first]
    return results


def db_to_linear(value_db):
    """
    >>> db_to_linear(10.0)
    10.0
    """
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value):
    """
    >>> linear_to_db(100.0)
    20.0
    """
    return 10.0 * math.log10(value)


def trial_rng(seed, trial):
    """
    Random generator for Monte Carlo trial number `trial` of run `seed`.

    The stream depends only on ``(seed, trial)``, never on which thread
    draws it or in which order trials are scheduled.

    >>> a = trial_rng(7, 3).standard_normal(4)
    >>> b = trial_rng(7, 3).standard_normal(4)
    >>> bool((a == b).all())
    True

    """
    sequence = np.random.SeedSequence(seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(sequence))


def inclusive_range(start, stop, step):
    """
    Grid from `start` to `stop` by `step`, including `stop` when the grid
    lands on it.

    >>> inclusive_range(0, 1, 0.25)
    [0.0, 0.25, 0.5, 0.75, 1.0]
    >>> inclusive_range(0.1, 0.9, 0.02)[-1]
    0.9

    """
    if step <= 0:
        raise ValueError("step must be positive, got {0!r}".format(step))
    if stop < start:
        raise ValueError("empty range: {0!r} > {1!r}".format(start, stop))
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]
