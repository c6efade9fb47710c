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

"""Poor man's configuration system: numerical defaults in one place."""

# relative tolerance when deciding p == 2_alpha^* or q == 2^*(s)
EXPONENT_RTOL = 1e-9

# default domain and grid
DEFAULT_RADIUS = 1.0
GRID_POINTS = 512
GRID_GRADING = 2.0

# sharp-constant quadratures
CONSTANT_EPSREL = 1e-11
CONSTANT_LIMIT = 500

# mountain pass solver
SOLVER_TOL = 1e-6
SOLVER_MAX_ITERS = 5000
SOLVER_PATH_POINTS = 32
SOLVER_BACKTRACKING = 0.5
SOLVER_ARMIJO = 1e-4
# smallest line-search step before we give up on the current iteration
SOLVER_MIN_STEP = 1e-14
# a solution with ||u*|| below this is the trivial critical point
SOLVER_TRIVIAL_NORM = 1e-4
# log progress every this many iterations
SOLVER_LOG_INTERVAL = 50
# concentration index reported with a result: share of Dirichlet energy in B(0, R/10)
CONCENTRATION_FRACTION = 0.1

# concentration diagnostics: balls B(0, R 2^-j) for j = 0..5
CONCENTRATION_LEVELS = 5
CONCENTRATION_WINDOW = 20
CONCENTRATION_THRESHOLD = 0.5
# gradient "stalls" when it shrinks by less than this factor over the window
STALL_FACTOR = 2.0

# mountain pass geometry scan
GEOMETRY_MIN_NORM = 1e-6
GEOMETRY_SCAN_POINTS = 200

# large-parameter search for cases 3ii / 4ii: multiply by 10 up to this many times
LARGE_PARAMETER_STEPS = 6

# epsilon sweeps
SWEEP_LADDER_STEPS = 8
SWEEP_KERNEL_POINTS = 512
# kernel grid starts at this multiple of the smallest epsilon
SWEEP_KERNEL_FLOOR = 1e-3
# per-row grid for the local terms: geometric from floor*eps with this ratio
SWEEP_LOCAL_FLOOR = 1e-4
SWEEP_LOCAL_RATIO = 1.002
# whole-space references extend the local grid to this multiple of R
SWEEP_WHOLE_SPACE = 1e8
SWEEP_WORKERS = 1
# verdict needs a positive margin at this many trailing ladder points
VERDICT_POINTS = 3

# rate fits
FIT_POINTS = 5
FIT_MIN_POINTS = 4
FIT_TOLERANCE = 0.05
FIT_MIN_R2 = 0.99
LOG_FACTOR_IMPROVEMENT = 10.0

# output
OUTPUT_DIR = 'out'
OUTPUT_FORMATS = ('csv', 'json')
FLOAT_FORMAT = '{:.17g}'
