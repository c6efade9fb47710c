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
Radial numerics on balls B(0,R) in R^N: graded grids, piecewise-linear radial
functions, the explicit bubble families, Dirichlet forms, and the two singular
integrals (Hardy-weighted and Riesz double integral).
"""

__all__ = ['grid', 'function', 'bubble', 'calculus', 'quadrature', 'riesz']

from . import grid
from . import function
from . import bubble
from . import calculus
from . import quadrature
from . import riesz
