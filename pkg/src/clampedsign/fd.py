"""Second-order finite differences for clamped fourth-order problems.

Interval and annulus grids are node-centred with the boundary on a node;
clamping is imposed by ``u = 0`` at the boundary node and the reflection
``u_ghost = u_first_interior`` (central difference for ``u' = 0``).

On the staggered ball grid the outer boundary ``r = 1`` sits halfway
between the last node and the first ghost.  ``U'(1) = 0`` is the mirror
``U_{n+1} = U_n`` and ``U(1) = 0`` fixes the second ghost by quadratic
extrapolation, which keeps both eliminations second order.
The origin needs nothing: the conservation-form flux through ``r = 0``
vanishes identically.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .banded import BandedMatrix
from .errors import InvalidInput
from .grid import ANNULUS, BALL, INTERVAL, Grid, Profile
from .operators import FourthOrderCoeffs

# central stencils over offsets -2..2
_D4 = np.array([1.0, -4.0, 6.0, -4.0, 1.0])
_D3 = np.array([-1.0, 2.0, 0.0, -2.0, 1.0]) / 2.0
_D2 = np.array([0.0, 1.0, -2.0, 1.0, 0.0])
_D1 = np.array([0.0, -1.0, 0.0, 1.0, 0.0]) / 2.0
_D0 = np.array([0.0, 0.0, 1.0, 0.0, 0.0])


def _rows_to_banded(rows: np.ndarray, scale: float) -> BandedMatrix:
    n = rows.shape[0]
    band = np.zeros((5, n))
    for k, d in enumerate(range(-2, 3)):
        # band[2 - d, j] holds A[j - d, j]
        if d >= 0:
            band[2 - d, d:] = rows[: n - d, k]
        else:
            band[2 - d, : n + d] = rows[-d:, k]
    return BandedMatrix(band, 2, 2, scale)


def assemble_1d(coeffs: FourthOrderCoeffs, g: Grid) -> BandedMatrix:
    """Pentadiagonal matrix of ``A4 u'''' + ... + A0 u`` with ``u = u' = 0`` at both ends.

    The band holds ``h^4`` times the operator; ``1/h^4`` is the prefactor.
    """
    if g.kind not in (INTERVAL, ANNULUS):
        raise InvalidInput(f"assemble_1d needs an interval or annulus grid, got {g.describe()}")
    if g.n < 4:
        raise InvalidInput(f"need at least 4 interior nodes, got n={g.n}")
    if coeffs.size != g.n:
        raise InvalidInput(f"coefficients have {coeffs.size} samples, grid has {g.n} nodes")
    h = g.h
    rows = (
        np.outer(coeffs.a4, _D4)
        + np.outer(coeffs.a3 * h, _D3)
        + np.outer(coeffs.a2 * h ** 2, _D2)
        + np.outer(coeffs.a1 * h ** 3, _D1)
        + np.outer(coeffs.a0 * h ** 4, _D0)
    )
    # left end: u_0 = 0, u_{-1} = u_1
    rows[0, 2] += rows[0, 0]
    rows[0, :2] = 0.0
    rows[1, 0] = 0.0
    # right end: u_{n+1} = 0, u_{n+2} = u_n
    rows[-1, 2] += rows[-1, 4]
    rows[-1, 3:] = 0.0
    rows[-2, 4] = 0.0
    return _rows_to_banded(rows, 1.0 / h ** 4)


def _laplacian_weights(r: np.ndarray, h: float, dim: int):
    """``h^2`` times the weights of ``(r^(d-1) U')' / r^(d-1)`` at ``r``.

    Fluxes live at ``r -+ h/2``; the divisor ``r^(d-1)`` is replaced by its
    cell average ``(r_+^d - r_-^d)/(d h)``, which makes the stencil exact
    on ``r^2`` for every ``d`` (plain ``r_j^(d-1)`` is O(1) off at the
    origin when ``d >= 3``).
    """
    rl = np.maximum(r - 0.5 * h, 0.0)
    rr = r + 0.5 * h
    vol = (rr ** dim - rl ** dim) / (dim * h)
    left = rl ** (dim - 1) / vol
    right = rr ** (dim - 1) / vol
    return left, -(left + right), right


def _laplacian_matrix(pos: np.ndarray, h: float, dim: int, rows, ncols: int, offset: int):
    """Dense Laplacian rows for extended indices ``rows`` acting on ``ncols`` columns.

    Extended index ``k`` maps to column ``k - offset``; zero-weight
    neighbours outside the column range are skipped.
    """
    rows = np.asarray(rows)
    left, centre, right = _laplacian_weights(pos[rows], h, dim)
    out = np.zeros((rows.size, ncols))
    for i, k in enumerate(rows):
        for col, w in ((k - 1 - offset, left[i]), (k - offset, centre[i]), (k + 1 - offset, right[i])):
            if 0 <= col < ncols:
                out[i, col] += w
            elif w != 0.0:
                raise AssertionError("stencil leaves the extended vector")
    return out


def _radial_laplacians(g: Grid):
    """Return ``(lap_ext, lap_inner)``, both scaled by ``h^2``.

    ``lap_ext`` maps interior values to the Laplacian on the interior plus
    the nodes the second application needs; ``lap_inner`` maps those
    values back to the interior.
    """
    n, h, d = g.n, g.h, g.dim
    if g.kind == BALL:
        if n < 2:
            raise InvalidInput("ball grid needs n >= 2")
        # extended vector: nodes 1..n+2 at (j - 1/2) h
        pos = (np.arange(n + 2) + 0.5) * h
        ext = np.zeros((n + 2, n))
        ext[:n, :n] = np.eye(n)
        # U'(1) = 0: mirror about r = 1, U_{n+1} = U_n;
        # U(1) = 0: quadratic through U_n, U_{n+1}, U_{n+2}, so U_{n+2} = 9 U_n
        ext[n, n - 1] = 1.0
        ext[n + 1, n - 1] = 9.0
        lap_full = _laplacian_matrix(pos, h, d, np.arange(n + 1), n + 2, 0)
        lap_ext = lap_full @ ext  # nodes 1..n+1
        lap_inner = lap_full[:n, : n + 1]
        return lap_ext, lap_inner
    if g.kind == ANNULUS:
        if g.rho - 0.5 * h <= 0.0 and d > 1:
            raise InvalidInput("annulus grid too coarse: need h < 2 rho")
        # extended vector: nodes -1..n+2 at rho + j h
        pos = g.rho + (np.arange(n + 4) - 1.0) * h
        ext = np.zeros((n + 4, n))
        ext[2 : n + 2, :] = np.eye(n)
        ext[0, 0] = 1.0  # U_{-1} = U_1
        ext[n + 3, n - 1] = 1.0  # U_{n+2} = U_n
        lap_full = _laplacian_matrix(pos, h, d, np.arange(1, n + 3), n + 4, 0)
        lap_ext = lap_full @ ext  # nodes 0..n+1
        lap_inner = _laplacian_matrix(pos, h, d, np.arange(2, n + 2), n + 2, 1)
        return lap_ext, lap_inner
    raise InvalidInput(f"no radial Laplacian on {g.describe()}")


def radial_laplacian(g: Grid) -> np.ndarray:
    """Dense clamped radial Laplacian on the interior nodes (``n x n``)."""
    if g.kind == INTERVAL:
        return assemble_1d(FourthOrderCoeffs.constant(0, 0, 1, 0, 0, g.n), g).to_dense()
    lap_ext, _ = _radial_laplacians(g)
    first = 0 if g.kind == BALL else 1
    return lap_ext[first : first + g.n] / g.h ** 2


def assemble_radial(bigB: float, bigT: float, g: Grid) -> BandedMatrix:
    """Matrix of ``B Delta^2 - T Delta`` acting on radial functions.

    ``Delta = d^2/dr^2 + (d-1)/r d/dr`` in conservation form; ``Delta^2`` is
    the tridiagonal ``Delta`` applied twice through the ghost extension.
    On the interval (Ball(1)) this is ``assemble_1d`` of ``(B, 0, -T, 0, 0)``.

    ``B / h^4`` is carried as the matrix prefactor, so ``(cB, cT)`` yields
    the same band as ``(B, T)`` whenever ``cT/cB`` rounds to ``T/B``.
    """
    if not bigB > 0.0:
        raise InvalidInput(f"B must be positive, got {bigB}")
    if not bigT >= 0.0:
        raise InvalidInput(f"T must be non-negative, got {bigT}")
    ratio = bigT / bigB
    if g.kind == INTERVAL:
        return assemble_1d(FourthOrderCoeffs.constant(1.0, 0, -ratio, 0, 0, g.n), g).scaled(bigB)
    if g.n < 4:
        raise InvalidInput(f"need at least 4 interior nodes, got n={g.n}")
    lap_ext, lap_inner = _radial_laplacians(g)
    first = 0 if g.kind == BALL else 1
    h2 = g.h ** 2
    m = lap_inner @ lap_ext - (ratio * h2) * lap_ext[first : first + g.n]
    # wipe round-off outside the pentadiagonal band
    i, j = np.indices(m.shape)
    m[np.abs(i - j) > 2] = 0.0
    return BandedMatrix.from_dense(m, 2, 2).scaled(bigB / h2 ** 2)


@lru_cache(maxsize=64)
def clamped_operator(bigB: float, bigT: float, g: Grid) -> BandedMatrix:
    """Cached ``B Delta^2 - T Delta`` for any grid kind (factorized on first solve)."""
    return assemble_radial(bigB, bigT, g)


def solve(m: BandedMatrix, rhs):
    """Solve ``m u = rhs``.  Profiles in give profiles out; arrays give arrays."""
    if isinstance(rhs, Profile):
        if rhs.grid.n != m.size:
            raise InvalidInput(f"rhs on {rhs.grid.n} nodes, matrix of size {m.size}")
        return Profile(rhs.grid, m.solve(rhs.values))
    return m.solve(rhs)


def green_matrix(m: BandedMatrix, g: Grid) -> np.ndarray:
    """Discrete Green matrix: column ``j`` solves ``m u = e_j / h``."""
    if m.size != g.n:
        raise InvalidInput(f"matrix of size {m.size} on a grid with {g.n} nodes")
    return m.solve(np.eye(g.n) / g.h)


def _wall_curvature(values, dist, free_offset: bool = False) -> float:
    """``c`` from the fit ``u = s t + c t^2/2 + d t^3/6`` through the samples.

    The slope ``s`` is left free: the discrete solution satisfies
    ``u' = 0`` only up to ``O(h^2)``, and forcing it to zero would turn that
    slope into an ``O(h)`` curvature error.  With ``free_offset`` a constant
    term is fitted as well (needs four samples); the staggered ball grid
    only meets ``U(1) = 0`` up to ``O(h^3)``.
    """
    t = np.asarray(dist, dtype=float)
    cols = [t, t ** 2 / 2.0, t ** 3 / 6.0]
    if free_offset:
        cols.insert(0, np.ones_like(t))
    coef = np.linalg.solve(np.column_stack(cols), np.asarray(values, dtype=float))
    return float(coef[2 if free_offset else 1])


def boundary_second_derivatives(u: Profile) -> tuple:
    """Second-order one-sided ``u''`` at the two ends of the domain.

    Fits a cubic through the nodes nearest each wall.  For the ball the
    first entry is ``nan`` (the origin is not a boundary) and the second is
    ``U''(1)``.
    """
    v, h, g = u.values, u.grid.h, u.grid
    if g.n < 4:
        raise InvalidInput("need four nodes to estimate a boundary second derivative")
    if g.kind == BALL:
        # staggered grid: the wall sits half a cell beyond r_n
        dist = h * np.array([0.5, 1.5, 2.5, 3.5])
        return (float("nan"), _wall_curvature(v[::-1][:4], dist, free_offset=True))
    dist = h * np.array([1.0, 2.0, 3.0])
    return (_wall_curvature(v[:3], dist), _wall_curvature(v[::-1][:3], dist))
