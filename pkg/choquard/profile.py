# -*- mode: python; indent-tabs-mode: nil -*-

# Part of choquard-harness: numerics for Choquard-Hardy-Sobolev problems
# Copyright (C) 2026  The choquard-harness authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Opt-in CPU accounting for the expensive numerical entry points.

Set CHOQUARD_CPU_PROFILE=1 to enable; the CLI prints the table at exit.
Each tracked call is charged the CPU time of the thread that ran it (sweep
rows run on pool threads) plus its wall time; the header line compares
process CPU with wall time since import.
"""

import os
import sys
import time
import functools
import threading

__all__ = ('enabled', 'trackcpu', 'dump_cpu_profiles', 'tracked')

enabled = bool(int(os.environ.get('CHOQUARD_CPU_PROFILE', '0')))


class CallStats(object):
    """Accumulated cost of one tracked function."""

    def __init__(self, name):
        self.name = name
        self.calls = 0
        self.cpu = 0.0
        self.wall = 0.0

    def charge(self, cpu, wall):
        self.calls += 1
        self.cpu += cpu
        self.wall += wall


_stats = []
_lock = threading.Lock()
_started_cpu = time.process_time()
_started_wall = time.monotonic()


def _thread_cpu():
    return time.clock_gettime(time.CLOCK_THREAD_CPUTIME_ID)


def tracked():
    """Snapshot of (name, calls, cpu, wall), costliest first."""
    with _lock:
        rows = [(st.name, st.calls, st.cpu, st.wall) for st in _stats if st.calls]
    return sorted(rows, key=lambda row: row[2], reverse=True)


def trackcpu(f, name=None):
    if not enabled:
        return f

    stats = CallStats(name if name is not None else f.__module__ + '.' + f.__qualname__)
    with _lock:
        _stats.append(stats)

    @functools.wraps(f)
    def cpu_measurement_wrapper(*args, **kwargs):
        cpu0, wall0 = _thread_cpu(), time.monotonic()
        try:
            return f(*args, **kwargs)
        finally:
            cpu1, wall1 = _thread_cpu(), time.monotonic()
            with _lock:
                stats.charge(cpu1 - cpu0, wall1 - wall0)

    return cpu_measurement_wrapper


def dump_cpu_profiles(tofile=None):
    if not enabled:
        return
    if tofile is None:
        tofile = sys.stderr

    total_cpu = time.process_time() - _started_cpu
    total_wall = time.monotonic() - _started_wall
    print('Elapsed {0:.1f}s wall, {1:.1f}s CPU ({2:.0f}%)'.format(
        total_wall, total_cpu, 100.0 * total_cpu / max(total_wall, 1e-9)), file=tofile)
    print('{0:60s} {1:>6s} {2:>9s} {3:>9s} {4:>10s} {5:>6s}'.format(
        'Function', 'Calls', 'CPU(s)', 'Wall(s)', 'CPU/call', 'Frac'), file=tofile)
    for name, calls, cpu, wall in tracked():
        print('{0:60s} {1:6d} {2:9.3f} {3:9.3f} {4:8.1f}ms {5:5.1f}%'.format(
            name, calls, cpu, wall, cpu * 1e3 / calls, 100.0 * cpu / max(total_cpu, 1e-9)), file=tofile)
    tofile.flush()


if enabled:
    print('CPU profiling enabled', file=sys.stderr)
