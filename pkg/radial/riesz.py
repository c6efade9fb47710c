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
The Riesz double integral int int |u(x)|^p |u(y)|^p / |x-y|^alpha for radial u.

For radial integrands the kernel reduces to its average over spheres,

    A(r1, r2) = mean over |y| = r2 of |x - y|^-alpha,  |x| = r1
              = r_>^-alpha 2F1(alpha/2, alpha/2 - N/2 + 1; N/2; (r_</r_>)^2),

which is finite off the diagonal and, on it, finite only for alpha < N-1.
The matrix entries integrate A against pairs of hat functions,

    K_ij = omega^2 int int phi_i(r) phi_j(r') A(r,r') r^(N-1) r'^(N-1) dr dr',

so the double integral of the P1 interpolant f of |u|^p is f^T K f, and the
diagonal singularity is integrated rather than sampled.
"""

import logging
import math
import os
import struct
import tempfile

import numpy
import scipy.special

from radial.function import RadialFunction
from radial.quadrature import checked_quad

__all__ = ('KernelMatrix', 'angular_kernel', 'riesz_angular_kernel', 'assemble_riesz_matrix',
           'riesz_pairing', 'riesz_double_integral', 'riesz_potential', 'cache_filename')

glogger = logging.getLogger("riesz")

# tensor Gauss orders per cell pair: well separated, near band, adjacent, diagonal (tau x sigma)
FAR_ORDER = 4
NEAR_ORDER = 8
NEAR_BAND = 3
ADJACENT_ORDER = 12
ADJACENT_GRADING = 3.0
DIAGONAL_ORDER = (16, 8)
DIAGONAL_MAX_GRADING = 12.0

# cells per block in the far-field products
BLOCK_CELLS = 64

# largest z handed to 2F1; pairs closer than this are one rounding step apart
Z_CEILING = 1.0 - 1e-15

# pointwise kernel: radii closer than this relative gap get graded angle panels
CLOSE_GAP = 0.1
ANGLE_PANELS = 40

# cache header: N (int32), alpha, M (int32), R, grading (0 for geometric grids)
_header = struct.Struct('<idi2d')


def _check_alpha(alpha, N):
    if not 0 < alpha < N:
        raise ValueError('alpha must lie in (0, N) = (0, {0}), got {1}'.format(N, alpha))


def angular_kernel(r1, r2, alpha, N):
    """Vectorised closed form of the sphere average of |x-y|^-alpha."""

    r1 = numpy.asarray(r1, dtype=float)
    r2 = numpy.asarray(r2, dtype=float)
    lo = numpy.minimum(r1, r2)
    hi = numpy.maximum(r1, r2)
    z = numpy.minimum((lo / hi) ** 2, Z_CEILING)
    return hi ** (-alpha) * scipy.special.hyp2f1(0.5 * alpha, 0.5 * alpha - 0.5 * N + 1.0, 0.5 * N, z)


def riesz_angular_kernel(r1, r2, alpha, N):
    """Sphere average of |x-y|^-alpha over |y| = r2 for |x| = r1, by adaptive
    quadrature in the polar angle."""

    _check_alpha(alpha, N)
    if r1 < 0 or r2 < 0:
        raise ValueError('radii must be nonnegative')
    if r1 == 0 and r2 == 0:
        raise ValueError('the angular kernel is undefined when both radii are zero')
    if r1 == 0 or r2 == 0:
        return max(r1, r2) ** (-alpha)
    if r1 == r2 and alpha >= N - 1:
        raise ValueError('the sphere average of |x-y|^-{0} diverges on the diagonal in dimension {1}'.format(alpha, N))

    norm = math.sqrt(math.pi) * math.exp(math.lgamma(0.5 * (N - 1)) - math.lgamma(0.5 * N))
    prod = 4.0 * r1 * r2
    diff2 = (r1 - r2) ** 2

    def integrand(theta):
        return (diff2 + prod * math.sin(0.5 * theta) ** 2) ** (-0.5 * alpha) * math.sin(theta) ** (N - 2)

    label = 'angular kernel ({0}, {1})'.format(r1, r2)
    if abs(r1 - r2) > CLOSE_GAP * max(r1, r2):
        total, _ = checked_quad(integrand, 0.0, math.pi, label, epsrel=1e-11)
    else:
        # the peak sits at theta ~ |r1-r2|/r; panels halve toward 0
        total = 0.0
        hi = math.pi
        for _ in range(ANGLE_PANELS):
            lo = 0.5 * hi
            total += checked_quad(integrand, lo, hi, label, epsrel=1e-11)[0]
            hi = lo
        total += checked_quad(integrand, 0.0, hi, label, epsrel=1e-9)[0]

    return total / norm


class KernelMatrix(object):
    """Assembled Galerkin matrix of the Riesz kernel on one grid."""

    def __init__(self, grid, alpha, entries):
        entries = numpy.array(entries, dtype=float)
        if entries.shape != (len(grid), len(grid)):
            raise ValueError('kernel matrix must be {0}x{0}, got {1}'.format(len(grid), entries.shape))
        if not numpy.all(numpy.isfinite(entries)):
            raise ValueError('kernel matrix has non-finite entries')
        entries.setflags(write=False)
        self.grid = grid
        self.alpha = float(alpha)
        self.dimension = grid.dimension
        self.entries = entries

    def __repr__(self):
        return 'KernelMatrix(alpha={0}, {1!r})'.format(self.alpha, self.grid)

    def apply(self, f):
        return numpy.dot(self.entries, f)

    def pairing(self, f):
        return float(numpy.dot(f, numpy.dot(self.entries, f)))

    def check_grid(self, grid):
        if not self.grid.same_as(grid):
            raise ValueError('kernel was assembled on a different grid')


def _gauss01(n):
    x, w = numpy.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _scatter(K, i, j, wi, hi, wj, hj, A):
    """Add the local 2x2 Galerkin blocks of cell pairs (i, j) and their
    transposes. wi/wj are quadrature weights (with r^(N-1)), hi/hj pairs of
    (left hat, right hat) values at the points, A the kernel at the points."""

    for a in (0, 1):
        for b in (0, 1):
            local = numpy.einsum('pk,pkl,pl->p', wi * hi[a], A, wj * hj[b])
            numpy.add.at(K, (i + a, j + b), local)
            numpy.add.at(K, (j + b, i + a), local)


def _far_field(K, nodes, alpha, N):
    a = nodes[:-1]
    h = numpy.diff(nodes)
    cells = len(h)
    x, w = _gauss01(FAR_ORDER)
    n = FAR_ORDER

    pts = a[:, None] + h[:, None] * x
    dens = h[:, None] * w * pts ** (N - 1)
    flat = pts.ravel()
    owner = numpy.repeat(numpy.arange(cells), n)

    P = numpy.zeros((len(nodes), cells * n))
    cols = numpy.arange(cells * n).reshape(cells, n)
    P[numpy.arange(cells)[:, None], cols] = dens * (1.0 - x)
    P[numpy.arange(1, cells + 1)[:, None], cols] += dens * x

    for start in range(0, cells, BLOCK_CELLS):
        stop = min(cells, start + BLOCK_CELLS)
        rows = slice(start * n, stop * n)
        A = angular_kernel(flat[rows, None], flat[None, :], alpha, N)
        A[numpy.abs(owner[rows, None] - owner[None, :]) <= NEAR_BAND] = 0.0
        K += numpy.dot(P[:, rows], numpy.dot(A, P.T))


def _near_band(K, nodes, alpha, N):
    a = nodes[:-1]
    h = numpy.diff(nodes)
    cells = len(h)
    x, w = _gauss01(NEAR_ORDER)
    hats = (1.0 - x, x)

    for delta in range(2, NEAR_BAND + 1):
        if delta >= cells:
            break
        i = numpy.arange(cells - delta)
        j = i + delta
        ri = a[i, None] + h[i, None] * x
        rj = a[j, None] + h[j, None] * x
        wi = h[i, None] * w * ri ** (N - 1)
        wj = h[j, None] * w * rj ** (N - 1)
        A = angular_kernel(ri[:, :, None], rj[:, None, :], alpha, N)
        _scatter(K, i, j, wi, hats, wj, hats, A)


def _adjacent(K, nodes, alpha, N):
    """Cell pairs sharing a node, graded toward the shared corner."""

    a = nodes[:-1]
    h = numpy.diff(nodes)
    cells = len(h)
    t, wt = _gauss01(ADJACENT_ORDER)
    g = ADJACENT_GRADING
    u = t ** g
    jac = g * t ** (g - 1.0) * wt

    i = numpy.arange(cells - 1)
    shared = a[i + 1]
    hi = h[i, None]
    hj = h[i + 1, None]
    ri = shared[:, None] - hi * u
    rj = shared[:, None] + hj * u
    wi = hi * jac * ri ** (N - 1)
    wj = hj * jac * rj ** (N - 1)
    A = angular_kernel(ri[:, :, None], rj[:, None, :], alpha, N)
    # hats of cell i at ri: node i -> u, node i+1 -> 1-u; of cell i+1 at rj: node i+1 -> 1-u, node i+2 -> u
    _scatter(K, i, i + 1, wi, (u, 1.0 - u), wj, (1.0 - u, u), A)


def _diagonal(K, nodes, alpha, N):
    """Each cell against itself: the triangle r < r' with the gap
    delta = h tau^gamma graded toward the diagonal, then mirrored."""

    a = nodes[:-1]
    h = numpy.diff(nodes)
    cells = len(h)
    beta = N - 1 - alpha
    gamma = 3.0 if beta >= 0 else min(DIAGONAL_MAX_GRADING, math.ceil(3.0 / (1.0 + beta)))

    tau, wtau = _gauss01(DIAGONAL_ORDER[0])
    sig, wsig = _gauss01(DIAGONAL_ORDER[1])

    hc = h[:, None, None]
    ac = a[:, None, None]
    gap = hc * tau[None, :, None] ** gamma
    gap_w = hc * gamma * tau[None, :, None] ** (gamma - 1.0) * wtau[None, :, None]
    span = hc - gap
    r = ac + span * sig[None, None, :]
    rp = r + gap
    weight = gap_w * span * wsig[None, None, :] * r ** (N - 1) * rp ** (N - 1) * angular_kernel(r, rp, alpha, N)

    hats_r = ((ac + hc - r) / hc, (r - ac) / hc)
    hats_rp = ((ac + hc - rp) / hc, (rp - ac) / hc)
    idx = numpy.arange(cells)
    for x in (0, 1):
        for y in (0, 1):
            local = numpy.sum(weight * hats_r[x] * hats_rp[y], axis=(1, 2))
            # the triangle r > r' is the mirror image
            numpy.add.at(K, (idx + x, idx + y), local)
            numpy.add.at(K, (idx + y, idx + x), local)


def cache_filename(grid, alpha):
    return 'riesz-N{0}-a{1!r}-{2}.bin'.format(grid.dimension, float(alpha), grid.digest())


def _cache_header(grid, alpha):
    grading = 0.0 if grid.grading is None else float(grid.grading)
    return _header.pack(grid.dimension, float(alpha), len(grid), grid.radius, grading)


def _load_cached(path, grid, alpha):
    M = len(grid)
    try:
        with open(path, 'rb') as f:
            header = f.read(_header.size)
            if header != _cache_header(grid, alpha):
                glogger.warning('Ignoring kernel cache {0}: header mismatch'.format(path))
                return None
            entries = numpy.fromfile(f, dtype='<f8', count=M * M)
    except OSError as e:
        glogger.warning('Ignoring kernel cache {0}: {1}'.format(path, e))
        return None

    if entries.size != M * M:
        glogger.warning('Ignoring kernel cache {0}: truncated'.format(path))
        return None
    return entries.reshape((M, M)).astype(float)


def _store_cached(path, grid, alpha, entries):
    directory = os.path.dirname(path) or '.'
    fd, tmp = tempfile.mkstemp(dir=directory, prefix='.riesz-', suffix='.tmp')
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(_cache_header(grid, alpha))
            f.write(numpy.ascontiguousarray(entries, dtype='<f8').tobytes())
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def assemble_riesz_matrix(grid, alpha, cache_dir=None):
    """Symmetric Galerkin matrix of the Riesz kernel on grid.

    With cache_dir, a previously stored matrix for the same (N, alpha, grid)
    is reused, and a freshly assembled one is stored."""

    N = grid.dimension
    _check_alpha(alpha, N)

    path = None
    if cache_dir is not None:
        path = os.path.join(cache_dir, cache_filename(grid, alpha))
        if os.path.exists(path):
            entries = _load_cached(path, grid, alpha)
            if entries is not None:
                glogger.info('Loaded kernel matrix from {0}'.format(path))
                return KernelMatrix(grid, alpha, entries)

    nodes = numpy.array(grid.nodes)
    K = numpy.zeros((len(nodes), len(nodes)))
    _far_field(K, nodes, alpha, N)
    _near_band(K, nodes, alpha, N)
    _adjacent(K, nodes, alpha, N)
    _diagonal(K, nodes, alpha, N)
    K *= grid.omega ** 2
    K = 0.5 * (K + K.T)

    if path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        _store_cached(path, grid, alpha, K)

    return KernelMatrix(grid, alpha, K)


def riesz_pairing(f, kernel):
    """int int f(x) f(y) / |x-y|^alpha for the P1 interpolant of nodal f."""
    return kernel.pairing(numpy.asarray(f, dtype=float))


def riesz_double_integral(u, p, kernel):
    """int int |u(x)|^p |u(y)|^p / |x-y|^alpha."""

    if p < 1:
        raise ValueError('need p >= 1, got {0}'.format(p))
    kernel.check_grid(u.grid)
    return riesz_pairing(numpy.abs(u.values) ** p, kernel)


def riesz_potential(u, p, kernel):
    """K |u|^p, the Riesz potential of |u|^p tested against each hat
    function. u is a RadialFunction on the kernel grid or bare nodal values.

    The first variation of the double integral in u is
    2p (K |u|^p) sign(u) |u|^(p-1)."""

    if isinstance(u, RadialFunction):
        kernel.check_grid(u.grid)
        u = u.values
    return kernel.apply(numpy.abs(numpy.asarray(u, dtype=float)) ** p)
