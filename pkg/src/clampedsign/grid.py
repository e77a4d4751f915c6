"""Node layouts for the interval, the ball (radial) and the annulus (radial).

All grids store interior nodes only; the clamped boundary values are
implicit and eliminated during assembly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidInput

INTERVAL = "interval"
BALL = "ball"
ANNULUS = "annulus"


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``n`` interior nodes.

    * interval: ``x_j = -1 + j h``, ``h = 2/(n+1)``, ``j = 1..n``
    * ball (dim >= 2): staggered, ``r_j = (j - 1/2) h``, ``h = 1/n``
    * annulus: ``r_j = rho + j h``, ``h = (1 - rho)/(n+1)``

    Use the classmethod constructors rather than calling this directly.
    Grids are hashable so that factorizations can be cached per grid.
    """

    kind: str
    n: int
    dim: int = 1
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in (INTERVAL, BALL, ANNULUS):
            raise InvalidInput(f"unknown grid kind {self.kind!r}")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInput(f"grid needs at least one interior node, got n={self.n}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidInput(f"dimension must be a positive integer, got {self.dim}")
        if self.kind == INTERVAL and self.dim != 1:
            raise InvalidInput("interval grids have dim=1")
        if self.kind == BALL and self.dim < 2:
            raise InvalidInput("Ball(1) is the interval; use Grid.ball(n, 1) or Grid.interval(n)")
        if self.kind == ANNULUS and not 0.0 < self.rho < 1.0:
            raise InvalidInput(f"annulus inner radius must lie in (0,1), got {self.rho}")

    @classmethod
    def interval(cls, n: int) -> "Grid":
        return cls(INTERVAL, n)

    @classmethod
    def ball(cls, n: int, dim: int) -> "Grid":
        # the unit ball of R^1 is (-1, 1)
        if dim == 1:
            return cls.interval(n)
        return cls(BALL, n, dim)

    @classmethod
    def annulus(cls, n: int, rho: float, dim: int = 2) -> "Grid":
        return cls(ANNULUS, n, dim, float(rho))

    @property
    def radial(self) -> bool:
        return self.kind != INTERVAL

    @property
    def h(self) -> float:
        if self.kind == INTERVAL:
            return 2.0 / (self.n + 1)
        if self.kind == BALL:
            return 1.0 / self.n
        return (1.0 - self.rho) / (self.n + 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        j = np.arange(1, self.n + 1, dtype=float)
        if self.kind == INTERVAL:
            x = -1.0 + j * self.h
        elif self.kind == BALL:
            x = (j - 0.5) * self.h
        else:
            x = self.rho + j * self.h
        x.setflags(write=False)
        return x

    @property
    def left(self) -> float:
        """Left end of the computational domain (0 for the ball)."""
        return {INTERVAL: -1.0, BALL: 0.0, ANNULUS: self.rho}[self.kind]

    def weights(self) -> np.ndarray:
        """Quadrature weights ``h`` (interval) or ``h r^(d-1)`` (radial)."""
        if self.kind == INTERVAL:
            return np.full(self.n, self.h)
        return self.h * self.nodes ** (self.dim - 1)

    def distance_to_boundary(self) -> np.ndarray:
        x = self.nodes
        if self.kind == INTERVAL:
            return 1.0 - np.abs(x)
        if self.kind == BALL:
            return 1.0 - x
        return np.minimum(x - self.rho, 1.0 - x)

    def describe(self) -> str:
        if self.kind == INTERVAL:
            return f"Interval(n={self.n})"
        if self.kind == BALL:
            return f"Ball(d={self.dim}, n={self.n})"
        return f"Annulus(rho={self.rho}, d={self.dim}, n={self.n})"


@dataclass(frozen=True)
class Profile:
    """Grid function sampled at the interior nodes.

    Boundary traces are kept for generality; they are zero for every
    clamped problem handled here.
    """

    grid: Grid
    values: np.ndarray
    boundary_value: tuple = (0.0, 0.0)
    boundary_normal_derivative: tuple = field(default=(0.0, 0.0))

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise InvalidInput(
                f"profile has {v.size} samples, grid {self.grid.describe()} has {self.grid.n}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidInput("profile values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "Profile":
        return cls(grid, np.broadcast_to(fn(grid.nodes), (grid.n,)))

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "Profile":
        return cls(grid, np.full(grid.n, float(value)))

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))
