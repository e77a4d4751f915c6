"""Semilinear clamped problems: MEMS-type monotone iteration and a Willmore solver.

The MEMS problem reads ``B Delta^2 u - T Delta u = -lam g(u)`` with clamped
data, where ``g`` is non-negative, non-increasing and positive at zero on an
open interval ``J`` containing 0.  Starting from ``u0 = 0`` the iteration

    B Delta^2 u_n - T Delta u_n = -lam g(u_{n-1})

produces node-wise decreasing iterates as long as the discrete operator is
sign preserving; the limit is the maximal (least negative) solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .banded import BandedMatrix
from .errors import BracketFailure, InvalidInput, NoConvergence
from .fd import clamped_operator
from .grid import INTERVAL, Grid, Profile
from .spectral import principal_eigenpair

LAMBDA_FLOOR = 1e-8


def mems_g(xi):
    """The electrostatic nonlinearity ``1/(1+xi)^2``, singular at ``xi = -1``."""
    return 1.0 / (1.0 + np.asarray(xi, dtype=float)) ** 2


MEMS_J = (-1.0, 1.0)


def _sample_points(J, count=64):
    lo = J[0] if math.isfinite(J[0]) else -10.0
    hi = J[1] if math.isfinite(J[1]) else 10.0
    # stay strictly inside the open interval
    return np.linspace(lo, hi, count + 2)[1:-1]


@dataclass(frozen=True)
class SemilinearProblem:
    """``B Delta^2 u - T Delta u = -lam g(u)`` on ``grid`` with clamped data.

    ``J = (a_J, b_J)`` is the open interval where ``g`` is defined; it must
    contain 0.  ``lam = 0`` is accepted as the trivial limit.
    """

    bigB: float
    bigT: float
    grid: Grid
    g: Callable = field(default=mems_g, compare=False)
    J: tuple = MEMS_J
    lam: float = 1.0

    def __post_init__(self):
        if not self.bigB > 0:
            raise InvalidInput(f"B must be positive, got {self.bigB}")
        if not self.bigT >= 0:
            raise InvalidInput(f"T must be non-negative, got {self.bigT}")
        if not self.lam >= 0 or not math.isfinite(self.lam):
            raise InvalidInput(f"lambda must be finite and non-negative, got {self.lam}")
        a, b = self.J
        if not a < 0 < b:
            raise InvalidInput(f"J=({a}, {b}) must contain 0")
        g0 = float(self.g(0.0))
        if not g0 > 0:
            raise InvalidInput(f"g(0) must be positive, got {g0}")
        xi = _sample_points(self.J)
        with np.errstate(all="ignore"):
            vals = np.asarray(self.g(xi), dtype=float)
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise InvalidInput("g must be finite and non-negative on J")
        if np.any(np.diff(vals) > 1e-12 * np.max(np.abs(vals))):
            raise InvalidInput("g must be non-increasing on J")

    @property
    def a_J(self) -> float:
        return float(self.J[0])

    @property
    def margin(self) -> float:
        """Distance from the ends of ``J`` treated as having left it."""
        a = abs(self.a_J)
        return 1e-6 * a if math.isfinite(a) else 0.0

    def operator(self) -> BandedMatrix:
        return clamped_operator(float(self.bigB), float(self.bigT), self.grid)


@dataclass(frozen=True)
class BranchPoint:
    lam: float
    u: Profile
    iterations: int
    converged: bool
    min_u: float
    max_increase: float
    ordered: Optional[bool] = None  # below the previous branch point, when compared


def _in_J(u, p: SemilinearProblem) -> bool:
    lo, hi = p.J
    d = p.margin
    return bool(np.all(u > lo + d) and np.all(u < hi - d))


def monotone_solve(p: SemilinearProblem, tol: float = 1e-10, maxit: int = 10000) -> BranchPoint:
    """Run the monotone iteration from ``u0 = 0``.

    Leaving ``J`` (up to the safety margin), a non-finite ``g`` value or
    exhausting ``maxit`` are reported as ``converged=False``.  ``max_increase``
    is the largest node-wise rise ``u_n - u_{n-1}`` seen, which is
    non-positive (up to round-off) for a monotone run.
    """
    m = p.operator()
    u = np.zeros(p.grid.n)
    max_increase = -math.inf
    for it in range(1, maxit + 1):
        with np.errstate(all="ignore"):
            try:
                gu = np.asarray(p.g(u), dtype=float)
            except (ArithmeticError, ValueError):
                gu = np.full(u.shape, np.nan)
        if not np.all(np.isfinite(gu)):
            return BranchPoint(p.lam, Profile(p.grid, u), it - 1, False, float(u.min()), max_increase)
        new = m.solve(-p.lam * gu)
        step = new - u
        max_increase = max(max_increase, float(np.max(step)))
        u = new
        if not (np.all(np.isfinite(u)) and _in_J(u, p)):
            finite = np.where(np.isfinite(u), u, p.J[0])
            return BranchPoint(p.lam, Profile(p.grid, finite), it, False, float(finite.min()), max_increase)
        if np.max(np.abs(step)) < tol:
            return BranchPoint(p.lam, Profile(p.grid, u), it, True, float(u.min()), max_increase)
    return BranchPoint(p.lam, Profile(p.grid, u), maxit, False, float(u.min()), max_increase)


def branch_sweep(template: SemilinearProblem, lambdas: Sequence[float], tol: float = 1e-10,
                 maxit: int = 10000) -> list:
    """Solve independently at each ``lam`` and compare consecutive converged points.

    ``ordered`` is set on a point when the previous point also converged:
    True when the new solution lies strictly below the old one at every node.
    """
    lambdas = [float(x) for x in lambdas]
    if any(x <= 0 for x in lambdas) or any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise InvalidInput("lambdas must be positive and strictly increasing")
    out = []
    for lam in lambdas:
        pt = monotone_solve(replace(template, lam=lam), tol, maxit)
        if out and out[-1].converged and pt.converged:
            pt = replace(pt, ordered=bool(np.all(pt.u.values < out[-1].u.values)))
        out.append(pt)
    return out


def lambda_star_bracket(template: SemilinearProblem, lambda_hi0: float = 1.0,
                        tol_lambda: float = 1e-4, tol: float = 1e-10,
                        maxit: int = 10000) -> tuple:
    """Bracket the pull-in value ``lam*`` by bisection on convergence.

    Returns ``(lo, hi)`` with convergence at ``lo``, divergence at ``hi`` and
    ``hi - lo <= tol_lambda``.  The starting guess is halved until the
    iteration converges (BracketFailure below 1e-8) or doubled until it
    diverges (BracketFailure after 200 doublings).
    """
    if not (lambda_hi0 > 0 and tol_lambda > 0):
        raise InvalidInput("lambda_hi0 and tol_lambda must be positive")

    def converges(lam):
        return monotone_solve(replace(template, lam=lam), tol, maxit).converged

    lam = float(lambda_hi0)
    if converges(lam):
        lo = lam
        for _ in range(200):
            hi = 2.0 * lo
            if not converges(hi):
                break
            lo = hi
        else:
            raise BracketFailure(f"iteration still converges at lambda={hi:.3e}")
    else:
        hi = lam
        while True:
            lo = 0.5 * hi
            if lo < LAMBDA_FLOOR:
                raise BracketFailure(f"no convergent lambda found down to {LAMBDA_FLOOR:g}")
            if converges(lo):
                break
            hi = lo
    while hi - lo > tol_lambda:
        mid = 0.5 * (lo + hi)
        if converges(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def lambda_star_bound(template: SemilinearProblem) -> float:
    """Upper bound ``-a_J mu1 / m`` with ``m`` the infimum of ``g`` on ``(a_J, 0]``.

    ``m`` is taken from 10^4 samples; an unbounded ``J`` gives ``inf``.
    """
    a = template.a_J
    if not math.isfinite(a):
        return math.inf
    xi = np.linspace(a, 0.0, 10001)[1:]
    with np.errstate(all="ignore"):
        gm = float(np.min(np.asarray(template.g(xi), dtype=float)))
    if not gm > 0:
        return math.inf
    mu1 = principal_eigenpair(template.operator(), template.grid).mu1
    return -a * mu1 / gm


# --------------------------------------------------------------------------
# Willmore-type graph equation


@dataclass(frozen=True)
class WillmoreProblem:
    """``B (u''/w^a)'' + a B (u' u''^2 / w^(a+1))' - T (u'/sqrt(w))' = f``, ``w = 1 + u'^2``."""

    bigB: float
    bigT: float
    alpha: float
    f: Profile

    def __post_init__(self):
        if not self.bigB > 0:
            raise InvalidInput(f"B must be positive, got {self.bigB}")
        if not self.bigT >= 0:
            raise InvalidInput(f"T must be non-negative, got {self.bigT}")
        if not self.alpha > 0:
            raise InvalidInput(f"alpha must be positive, got {self.alpha}")
        if self.f.grid.kind != INTERVAL:
            raise InvalidInput("the Willmore problem is posed on the interval grid")

    @property
    def grid(self) -> Grid:
        return self.f.grid


def _extended(u):
    """Pad with clamped ghosts: ``u_{-1} = u_1``, ``u_0 = 0``, ``u_{n+1} = 0``, ``u_{n+2} = u_n``."""
    return np.concatenate(([u[0], 0.0], u, [0.0, u[-1]]))


def _node_derivatives(u, h):
    """Central first and second differences at nodes ``0 .. n+1``."""
    e = _extended(u)
    du = (e[2:] - e[:-2]) / (2 * h)
    ddu = (e[2:] - 2 * e[1:-1] + e[:-2]) / h ** 2
    return du, ddu


def willmore_residual(u, p: WillmoreProblem) -> np.ndarray:
    """Discrete residual at the interior nodes."""
    h = p.grid.h
    B, T, al = p.bigB, p.bigT, p.alpha
    du, ddu = _node_derivatives(np.asarray(u, dtype=float), h)
    w = 1.0 + du ** 2
    q = ddu / w ** al
    s = du * ddu ** 2 / w ** (al + 1)
    t = du / np.sqrt(w)
    return (
        B * (q[2:] - 2 * q[1:-1] + q[:-2]) / h ** 2
        + al * B * (s[2:] - s[:-2]) / (2 * h)
        - T * (t[2:] - t[:-2]) / (2 * h)
        - p.f.values
    )


def _jacobian(u, p: WillmoreProblem) -> BandedMatrix:
    """Central-difference Jacobian of the residual.

    The residual has bandwidth 2, so perturbing every fifth unknown at once
    recovers five columns per pair of residual evaluations.
    """
    n = u.size
    band = np.zeros((5, n))
    for colour in range(5):
        cols = np.arange(colour, n, 5)
        step = 1e-5 * (1.0 + np.abs(u[cols]))
        up = u.copy()
        um = u.copy()
        up[cols] += step
        um[cols] -= step
        dr = willmore_residual(up, p) - willmore_residual(um, p)
        for j, hj in zip(cols, step):
            lo, hi = max(0, j - 2), min(n, j + 3)
            band[2 + np.arange(lo, hi) - j, j] = dr[lo:hi] / (2 * hj)  # LAPACK layout
    return BandedMatrix(band, 2, 2)


def willmore_solve(p: WillmoreProblem, tol: float = 1e-10, maxit: int = 50,
                   start: Optional[Union[Profile, np.ndarray]] = None) -> Profile:
    """Damped Newton iteration from ``u = 0`` (or ``start``).

    Each step is halved up to 30 times until the residual sup-norm drops;
    convergence is declared when it falls below ``tol``.  The residual cannot
    be evaluated more accurately than about ``eps * max|u| / h^4``, so large
    loads on fine grids need a correspondingly larger ``tol``.
    """
    if start is None:
        u = np.zeros(p.grid.n)
    else:
        u = np.array(start.values if isinstance(start, Profile) else start, dtype=float)
    r = willmore_residual(u, p)
    norm = float(np.max(np.abs(r)))
    for _ in range(maxit):
        if norm < tol:
            return Profile(p.grid, u)
        delta = _jacobian(u, p).solve(-r)
        t = 1.0
        for _ in range(31):
            trial = u + t * delta
            rt = willmore_residual(trial, p)
            nt = float(np.max(np.abs(rt)))
            if np.isfinite(nt) and nt < norm:
                break
            t *= 0.5
        else:
            raise NoConvergence(f"no decrease along the Newton direction (residual {norm:.3e})")
        u, r, norm = trial, rt, nt
    if norm < tol:
        return Profile(p.grid, u)
    raise NoConvergence(f"Newton did not reach {tol:g} in {maxit} steps (residual {norm:.3e})")


def euler_substitution_residual(u: Profile, p: WillmoreProblem) -> np.ndarray:
    """Evaluate ``(a2 gamma')' + c2 gamma - f`` for a computed ``u``.

    ``gamma = u''/w^(a/2)``, ``a2 = B w^(-a/2)``, ``c2 = -T w^((a-3)/2)``;
    the flux form uses midpoint averages of ``a2``.  Returned on interior
    nodes ``3 .. n-2`` (zero-based ``2 .. n-3``), away from the ghost layer.
    For a converged solution the entries are ``O(h^2)``.
    """
    h = p.grid.h
    al = p.alpha
    du, ddu = _node_derivatives(u.values, h)
    w = 1.0 + du ** 2
    gamma = ddu / w ** (al / 2)
    a2 = p.bigB * w ** (-al / 2)
    c2 = -p.bigT * w ** ((al - 3) / 2)
    a_mid = 0.5 * (a2[1:] + a2[:-1])
    flux = a_mid * np.diff(gamma) / h
    res = np.diff(flux) / h + c2[1:-1] * gamma[1:-1] - p.f.values
    return res[2:-2]
