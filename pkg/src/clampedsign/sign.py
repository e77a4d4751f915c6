"""Discrete checks of the strong sign-preserving property.

A clamped problem is sign preserving when every non-positive,
non-vanishing load produces a strictly negative solution; on the grid
this is positivity of the discrete Green matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DegenerateInput, InvalidInput, SingularSystem
from .fd import assemble_1d, boundary_second_derivatives, green_matrix, solve
from .grid import INTERVAL, Grid, Profile
from .operators import FactorPair, FourthOrderCoeffs, SecondOrderCoeffs, theorem_lambda_max


class Verdict(str, Enum):
    SIGN_PRESERVING = "SignPreserving"
    VIOLATED = "Violated"
    SINGULAR = "Singular"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SignReport:
    verdict: Verdict
    min_green_normalized: float
    violation_location: Optional[tuple]
    boundary_second_derivatives: tuple
    solution_negative: bool
    tol: float


@dataclass(frozen=True)
class GammaReport:
    y0: Optional[float]
    y1: Optional[float]
    gamma_boundary: tuple
    pattern_valid: bool
    positive_arcs: int
    gamma: np.ndarray  # including the two boundary values
    x: np.ndarray


def check_sign_preserving(m, g: Grid, tol: float = 1e-8) -> SignReport:
    """Inspect the Green matrix of ``m`` and the response to the load ``f = -1``.

    The verdict is SignPreserving iff ``min G >= -tol * max|G|``.
    SingularSystem from the factorization propagates.
    """
    G = green_matrix(m, g)
    scale = float(np.max(np.abs(G)))
    normalized = float(np.min(G)) / scale
    if normalized < -tol:
        verdict = Verdict.VIOLATED
        i, j = np.unravel_index(int(np.argmin(G)), G.shape)
        location = (float(g.nodes[i]), float(g.nodes[j]))
    else:
        verdict = Verdict.SIGN_PRESERVING
        location = None
    u = solve(m, Profile.constant(g, -1.0))
    return SignReport(
        verdict=verdict,
        min_green_normalized=normalized,
        violation_location=location,
        boundary_second_derivatives=boundary_second_derivatives(u),
        solution_negative=bool(np.all(u.values < 0.0)),
        tol=tol,
    )


def _crossing(x0, g0, x1, g1):
    if g1 == g0:
        return x0
    t = min(max(-g0 / (g1 - g0), 0.0), 1.0)
    return x0 + t * (x1 - x0)


def gamma_structure(u: Profile, fp: Union[FactorPair, SecondOrderCoeffs], tol: float = 1e-9) -> GammaReport:
    """Locate the positive arc ``(y0, y1)`` of ``gamma = L1 u``.

    For a load ``f <= 0, f != 0`` the expected pattern is a single arc
    where ``gamma > 0`` strictly inside ``(-1, 1)`` with ``gamma(+-1) < 0``.
    Values up to ``tol * max|gamma|`` count as non-positive.

    ``fp`` may be a full factor pair or just the first factor ``L1``; only
    ``L1`` enters.  Passing ``L1 = d^2`` inspects ``u''`` directly, which is
    useful where no admissible factorization is available.
    """
    g = u.grid
    if g.kind != INTERVAL:
        raise InvalidInput("gamma_structure works on interval grids")
    l1 = fp.l1 if isinstance(fp, FactorPair) else fp
    if l1.size != g.n:
        raise InvalidInput(f"L1 has {l1.size} samples, grid has {g.n}")
    v = u.values
    if np.max(np.abs(v)) < 1e-13:
        raise DegenerateInput("u vanishes identically")
    h = g.h
    padded = np.concatenate(([0.0], v, [0.0]))
    d2 = (padded[:-2] - 2.0 * padded[1:-1] + padded[2:]) / h ** 2
    d1 = (padded[2:] - padded[:-2]) / (2.0 * h)
    gam = l1.apply(v, d1, d2)

    # at the boundary u = u' = 0, so gamma = a1 u''
    upp_left, upp_right = boundary_second_derivatives(u)
    a_left = 2.0 * l1.a[0] - l1.a[1]
    a_right = 2.0 * l1.a[-1] - l1.a[-2]
    gb = (float(a_left * upp_left), float(a_right * upp_right))

    xs = np.concatenate(([-1.0], g.nodes, [1.0]))
    gs = np.concatenate(([gb[0]], gam, [gb[1]]))
    thr = tol * float(np.max(np.abs(gs)))
    pos = gs > thr
    edges = np.diff(pos.astype(int))
    starts = list(np.nonzero(edges == 1)[0] + 1)
    ends = list(np.nonzero(edges == -1)[0])
    if pos[0]:
        starts.insert(0, 0)
    if pos[-1]:
        ends.append(len(gs) - 1)
    arcs = len(starts)

    y0 = y1 = None
    if arcs == 1:
        s, e = starts[0], ends[0]
        if s > 0:
            y0 = float(_crossing(xs[s - 1], gs[s - 1], xs[s], gs[s]))
        if e < len(gs) - 1:
            y1 = float(_crossing(xs[e], gs[e], xs[e + 1], gs[e + 1]))
    valid = (
        arcs == 1
        and y0 is not None
        and y1 is not None
        and -1.0 < y0 < y1 < 1.0
        and gb[0] < 0.0
        and gb[1] < 0.0
    )
    return GammaReport(y0, y1, gb, bool(valid), arcs, gs, xs)


def in_theorem_region(a: float, lam: float) -> bool:
    """``lam <= 0`` or ``0 < lam < (a^2 + pi^2)/4``."""
    return lam <= 0.0 or lam < theorem_lambda_max(a)


@dataclass(frozen=True)
class RegionCell:
    a: float
    lam: float
    min_green: float
    in_theorem_region: bool
    verdict: Verdict
    # verdict at twice the resolution, only filled for in-region violations
    refined_verdict: Optional[Verdict] = None

    @property
    def grid_artifact(self) -> bool:
        return self.refined_verdict is Verdict.SIGN_PRESERVING


def _axis(lo: float, hi: float, steps: int) -> np.ndarray:
    if lo == hi or steps == 1:
        return np.array([float(lo)])
    return np.linspace(lo, hi, steps)


def _cell(a: float, lam: float, n: int, tol: float):
    g = Grid.interval(n)
    m = assemble_1d(FourthOrderCoeffs.constant(1.0, a, lam, 0.0, 0.0, n), g)
    try:
        G = green_matrix(m, g)
    except SingularSystem:
        return math.nan, Verdict.SINGULAR
    normalized = float(np.min(G) / np.max(np.abs(G)))
    return normalized, (Verdict.VIOLATED if normalized < -tol else Verdict.SIGN_PRESERVING)


LambdaRange = Union[Sequence[float], Callable[[float], Sequence[float]]]


def region_map(
    a_range: Sequence[float],
    lambda_range: LambdaRange,
    steps: int,
    n: int,
    tol: float = 1e-8,
    refine: bool = True,
) -> list:
    """Sweep ``u'''' + a u''' + lam u''`` over an ``a x lam`` lattice.

    ``lambda_range`` is either ``(lo, hi)`` or a callable ``a -> (lo, hi)``
    for lattices whose lambda extent depends on ``a``.  Rows come out in
    row-major order (``a`` outer, ``lam`` inner).  Violations inside the
    theorem region are re-checked at ``2n`` when ``refine`` is set.
    """
    if int(steps) != steps or steps < 1:
        raise InvalidInput(f"steps must be a positive integer, got {steps}")
    if n < 4:
        raise InvalidInput(f"n must be at least 4, got {n}")
    rows = []
    for a in _axis(a_range[0], a_range[1], steps):
        lo, hi = lambda_range(a) if callable(lambda_range) else lambda_range
        for lam in _axis(lo, hi, steps):
            a, lam = float(a), float(lam)
            normalized, verdict = _cell(a, lam, n, tol)
            inside = in_theorem_region(a, lam)
            refined = None
            if refine and inside and verdict is not Verdict.SIGN_PRESERVING:
                refined = _cell(a, lam, 2 * n, tol)[1]
            rows.append(RegionCell(a, lam, normalized, inside, verdict, refined))
    return rows
