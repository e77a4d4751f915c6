"""Moreau decomposition in the discrete clamped energy inner product.

Every grid function ``u`` splits uniquely as ``u = v + w`` with ``v`` in the
cone of node-wise non-negative functions, ``w`` in its polar cone and
``<v, w> = 0``.  For a sign-preserving operator the polar cone consists of
non-positive functions, so ``w <= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import InvalidInput, NoConvergence, SingularSystem
from .grid import INTERVAL, Grid, Profile


def _second_difference(n: int, h: float) -> np.ndarray:
    """Map interior values to ``u''`` at nodes ``0 .. n+1`` with clamped ghosts."""
    d2 = np.zeros((n + 2, n))
    d2[0, 0] = 2.0  # u_{-1} = u_1, u_0 = 0
    d2[n + 1, n - 1] = 2.0
    for j in range(1, n + 1):
        d2[j, j - 1] = -2.0
        if j >= 2:
            d2[j, j - 2] = 1.0
        if j <= n - 1:
            d2[j, j] = 1.0
    return d2 / h ** 2


def _first_difference(n: int, h: float) -> np.ndarray:
    """Map interior values to ``u'`` at the half nodes ``1/2 .. n+1/2``."""
    d1 = np.zeros((n + 1, n))
    idx = np.arange(n)
    d1[idx, idx] = 1.0
    d1[idx + 1, idx] = -1.0
    return d1 / h


@dataclass(frozen=True, eq=False)
class EnergyInnerProduct:
    """``<u, v> = B int u''v'' + T int u'v'`` on the interval grid.

    The bending part uses the trapezoid rule on the nodes (half weight at the
    two boundary nodes) and the tension part the midpoint rule on half
    nodes.  With these choices ``gram == h * M`` where ``M`` is the solver
    matrix of ``B u'''' - T u''``, i.e. discrete integration by parts holds
    exactly.
    """

    bigB: float
    bigT: float
    grid: Grid

    def __post_init__(self):
        if not self.bigB > 0:
            raise InvalidInput(f"B must be positive, got {self.bigB}")
        if not self.bigT >= 0:
            raise InvalidInput(f"T must be non-negative, got {self.bigT}")
        if self.grid.kind != INTERVAL:
            raise InvalidInput("the energy inner product is implemented on the interval grid")
        n, h = self.grid.n, self.grid.h
        d2 = _second_difference(n, h)
        d1 = _first_difference(n, h)
        wt = np.ones(n + 2)
        wt[[0, -1]] = 0.5
        gram = h * (self.bigB * d2.T @ (wt[:, None] * d2) + self.bigT * d1.T @ d1)
        gram = 0.5 * (gram + gram.T)
        try:
            cho_factor(gram)
        except LinAlgError as exc:
            raise SingularSystem(f"energy Gram matrix is not positive definite: {exc}") from None
        gram.setflags(write=False)
        object.__setattr__(self, "gram", gram)

    def __call__(self, u, v) -> float:
        return float(_values(u) @ self.gram @ _values(v))

    def norm(self, u) -> float:
        return float(np.sqrt(max(self(u, u), 0.0)))


def _values(u):
    return u.values if isinstance(u, Profile) else np.asarray(u, dtype=float)


@dataclass(frozen=True)
class MoreauSplit:
    v: Profile
    w: Profile
    gap: float
    multipliers: np.ndarray
    active: tuple  # indices pinned at zero in v
    iterations: int


def _equality_solve(gram, gu, free):
    v = np.zeros(gram.shape[0])
    if free.size:
        sub = gram[np.ix_(free, free)]
        v[free] = cho_solve(cho_factor(sub), gu[free])
    return v


def project_cone(u: Profile, ip: EnergyInnerProduct, tol: float = 1e-10) -> MoreauSplit:
    """Project ``u`` onto the non-negative cone in the energy inner product.

    Primal active-set method for ``min 1/2 <v-u, v-u>`` subject to ``v >= 0``.
    The working set starts at the zero entries of ``max(u, 0)``.  Each
    iteration solves the equality problem on the free nodes, then either
    steps to the first blocking constraint or releases the lowest-index
    constraint with a negative multiplier (smallest-index rule against
    cycling).  Multipliers ``mu = G (v - u)`` are compared with
    ``tol * ||G|| * ||u||``.
    """
    if u.grid != ip.grid:
        raise InvalidInput("profile and inner product live on different grids")
    G = ip.gram
    n = u.grid.n
    uv = u.values
    umax = float(np.max(np.abs(uv)))
    gu = G @ uv
    scale = max(float(np.max(np.abs(gu))), float(np.max(np.abs(G))) * umax)
    mu_tol = tol * scale if scale > 0 else tol

    if np.all(uv >= 0.0):  # already in the cone
        zero = Profile(u.grid, np.zeros(n))
        return MoreauSplit(u, zero, 0.0, np.zeros(n), (), 0)

    v = np.maximum(uv, 0.0)
    active = np.zeros(n, dtype=bool)
    active[v == 0.0] = True
    maxit = 10 * n
    for it in range(1, maxit + 1):
        free = np.flatnonzero(~active)
        target = _equality_solve(G, gu, free)
        p = target - v
        if np.max(np.abs(p), initial=0.0) <= tol * umax:
            v = target
            mu = G @ (v - uv)
            negative = np.flatnonzero(active & (mu < -mu_tol))
            if negative.size == 0:
                break
            active[negative[0]] = False
            continue
        # longest feasible step along p
        blocking = np.flatnonzero(~active & (p < 0))
        alpha, hit = 1.0, None
        if blocking.size:
            ratios = -v[blocking] / p[blocking]
            k = int(np.argmin(ratios))  # first index among ties
            if ratios[k] < 1.0:
                alpha, hit = float(ratios[k]), int(blocking[k])
        v = v + alpha * p
        if hit is not None:
            v[hit] = 0.0
            active[hit] = True
    else:
        raise NoConvergence(f"active-set iteration exceeded {maxit} steps")

    v[active] = 0.0
    mu = G @ (v - uv)
    w = uv - v
    vp = Profile(u.grid, v)
    return MoreauSplit(
        v=vp,
        w=Profile(u.grid, w),
        gap=float(v @ G @ w),
        multipliers=mu,
        active=tuple(int(i) for i in np.flatnonzero(active)),
        iterations=it,
    )
