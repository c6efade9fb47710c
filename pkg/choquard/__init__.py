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
Numerics for the Choquard-Hardy-Sobolev problem

    -Delta u = lambda (|x|^-alpha * |u|^p) |u|^(p-2) u + mu |u|^(q-2) u / |x|^s   in Omega,
           u = 0 on the boundary,

on balls around the origin: sharp constants, compactness thresholds, the
energy functional, a mountain pass solver and epsilon-sweeps of the bubble
estimates.
"""
