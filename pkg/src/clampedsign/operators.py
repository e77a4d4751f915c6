"""Second-order factor operators and their fourth-order composition.

A second-order operator ``L w = a w'' + b w' + c w`` is stored as node
samples of ``a, b, c`` together with their first and second derivatives.
Composing ``L2`` after ``L1`` (``L u = L2(L1 u)``) gives the fourth-order
operator ``A4 u'''' + A3 u''' + A2 u'' + A1 u' + A0 u`` with

    A4 = a1 a2
    A3 = (2 a1' + b1) a2 + a1 b2
    A2 = (a1'' + 2 b1' + c1) a2 + (a1' + b1) b2 + a1 c2
    A1 = (b1'' + 2 c1') a2 + (b1' + c1) b2 + b1 c2
    A0 = c1'' a2 + c1' b2 + c1 c2

If both factors are uniformly elliptic (``a_i >= eta > 0``) with ``c_i <= 0``,
the composite with clamped conditions ``u = u' = 0`` maps non-positive,
non-vanishing data to strictly negative solutions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, NumericalGuard, OutOfRange
from .grid import INTERVAL, Grid

_FIELDS = ("a", "da", "dda", "b", "db", "ddb", "c", "dc", "ddc")


def _frozen(x, n=None):
    arr = np.array(x, dtype=float)
    if n is not None:
        arr = np.broadcast_to(arr, (n,)).copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SecondOrderCoeffs:
    """Samples of ``a, b, c`` and their derivatives at the grid nodes."""

    a: np.ndarray
    da: np.ndarray
    dda: np.ndarray
    b: np.ndarray
    db: np.ndarray
    ddb: np.ndarray
    c: np.ndarray
    dc: np.ndarray
    ddc: np.ndarray

    def __post_init__(self):
        n = np.size(self.a)
        for name in _FIELDS:
            arr = _frozen(getattr(self, name))
            if arr.ndim == 0:
                arr = _frozen(arr, n)
            if arr.shape != (n,):
                raise InvalidInput(f"coefficient array {name!r} has shape {arr.shape}, expected ({n},)")
            if not np.all(np.isfinite(arr)):
                raise InvalidInput(f"coefficient array {name!r} is not finite")
            object.__setattr__(self, name, arr)
        if np.max(self.c) > 0.0:
            raise InvalidInput(f"zeroth-order coefficient must be <= 0, max is {np.max(self.c):g}")

    @classmethod
    def constant(cls, a: float, b: float, c: float, n: int) -> "SecondOrderCoeffs":
        z = np.zeros(n)
        return cls(np.full(n, float(a)), z, z, np.full(n, float(b)), z, z, np.full(n, float(c)), z, z)

    @property
    def size(self) -> int:
        return self.a.size

    def apply(self, w, dw, ddw) -> np.ndarray:
        """Evaluate ``a w'' + b w' + c w`` from supplied derivative samples."""
        return self.a * ddw + self.b * dw + self.c * w


@dataclass(frozen=True)
class FactorPair:
    """Two uniformly elliptic factors sharing the ellipticity constant ``eta``."""

    l1: SecondOrderCoeffs
    l2: SecondOrderCoeffs
    eta: float

    def __post_init__(self):
        if not self.eta > 0.0:
            raise InvalidInput(f"eta must be positive, got {self.eta}")
        if self.l1.size != self.l2.size:
            raise InvalidInput("factors are sampled on different node counts")
        # relative slack: generated pairs use the exact node minimum
        slack = 1e-14 * max(1.0, self.eta)
        for name, op in (("l1", self.l1), ("l2", self.l2)):
            if np.min(op.a) < self.eta - slack:
                raise InvalidInput(
                    f"{name} is not elliptic with eta={self.eta:g}: min a = {np.min(op.a):g}"
                )

    @property
    def size(self) -> int:
        return self.l1.size


@dataclass(frozen=True)
class FourthOrderCoeffs:
    """Node samples of ``A4 .. A0``."""

    a4: np.ndarray
    a3: np.ndarray
    a2: np.ndarray
    a1: np.ndarray
    a0: np.ndarray

    def __post_init__(self):
        n = np.size(self.a4)
        for name in ("a4", "a3", "a2", "a1", "a0"):
            arr = _frozen(getattr(self, name))
            if arr.ndim == 0:
                arr = _frozen(arr, n)
            if arr.shape != (n,):
                raise InvalidInput(f"{name} has shape {arr.shape}, expected ({n},)")
            object.__setattr__(self, name, arr)

    @classmethod
    def constant(cls, a4, a3, a2, a1, a0, n: int) -> "FourthOrderCoeffs":
        return cls(*(np.full(n, float(v)) for v in (a4, a3, a2, a1, a0)))

    @property
    def size(self) -> int:
        return self.a4.size

    def as_array(self) -> np.ndarray:
        """Stack as an ``(n, 5)`` array with columns ``a4, a3, a2, a1, a0``."""
        return np.column_stack([self.a4, self.a3, self.a2, self.a1, self.a0])


def compose(fp: FactorPair, g: Grid) -> FourthOrderCoeffs:
    """Coefficients of ``L2 L1`` at the nodes of ``g``."""
    if fp.size != g.n:
        raise InvalidInput(f"factor pair has {fp.size} samples, grid has {g.n} nodes")
    p, q = fp.l1, fp.l2
    a4 = p.a * q.a
    a3 = (2.0 * p.da + p.b) * q.a + p.a * q.b
    a2 = (p.dda + 2.0 * p.db + p.c) * q.a + (p.da + p.b) * q.b + p.a * q.c
    a1 = (p.ddb + 2.0 * p.dc) * q.a + (p.db + p.c) * q.b + p.b * q.c
    a0 = p.ddc * q.a + p.dc * q.b + p.c * q.c
    return FourthOrderCoeffs(a4, a3, a2, a1, a0)


def trivial_factor(a: float, lam: float, n: int = 1) -> FactorPair:
    """Split ``u'''' + a u''' + lam u''`` as ``L1 = d^2``, ``L2 = d^2 + a d + lam``.

    Only admissible for ``lam <= 0``.  ``n`` is the number of node samples.
    """
    if lam > 0.0:
        raise InvalidInput(f"trivial factorization needs lambda <= 0, got {lam}")
    l1 = SecondOrderCoeffs.constant(1.0, 0.0, 0.0, n)
    l2 = SecondOrderCoeffs.constant(1.0, a, lam, n)
    return FactorPair(l1, l2, 1.0)


def theorem_lambda_max(a: float) -> float:
    """Upper end ``(a^2 + pi^2)/4`` of the anti-diffusive range."""
    return (a * a + math.pi ** 2) / 4.0


def weight_branch(a: float, lam: float) -> str:
    """Which closed form of the weight ``p`` applies: 'exp', 'critical' or 'cos'."""
    disc = a * a - 4.0 * lam
    if disc > 0.0:
        return "exp"
    if disc == 0.0:
        return "critical"
    return "cos"


def weight(a: float, lam: float, x) -> tuple:
    """Positive solution ``p`` of ``p'' + a p' + lam p = 0`` and ``p', p'', p'''``.

    ``p'''`` comes from differentiating the ODE: ``p''' = -a p'' - lam p'``.
    """
    x = np.asarray(x, dtype=float)
    s = 0.5 * a
    branch = weight_branch(a, lam)
    if branch == "exp":
        k = -0.5 * (a + math.sqrt(a * a - 4.0 * lam))
        p = np.exp(k * x)
        dp = k * p
        ddp = k * k * p
    elif branch == "critical":
        e = np.exp(-s * x)
        p = (2.0 + x) * e
        dp = e * (1.0 - s * (2.0 + x))
        ddp = e * (s * s * (2.0 + x) - 2.0 * s)
    else:
        w = 0.5 * math.sqrt(4.0 * lam - a * a)
        e = np.exp(-s * x)
        cs, sn = np.cos(w * x), np.sin(w * x)
        p = cs * e
        dp = e * (-w * sn - s * cs)
        ddp = e * ((s * s - w * w) * cs + 2.0 * s * w * sn)
    dddp = -a * ddp - lam * dp
    return p, dp, ddp, dddp


def factor_anti_diffusive(a: float, lam: float, g: Grid) -> FactorPair:
    """Split ``u'''' + a u''' + lam u''`` for ``0 < lam < (a^2 + pi^2)/4``.

    With ``gamma = u''/p``, the factors are ``L1 = (1/p) d^2`` and
    ``L2 = p d^2 + (2p' + a p) d``.  Both have zero reaction term, and
    ellipticity holds with ``eta = min(min 1/p, min p)`` over the nodes.
    """
    if g.kind != INTERVAL:
        raise InvalidInput("anti-diffusive factorization is defined on the interval")
    if not 0.0 < lam < theorem_lambda_max(a):
        raise OutOfRange(f"lambda={lam} outside (0, {theorem_lambda_max(a)}) for a={a}")
    p, dp, ddp, dddp = weight(a, lam, g.nodes)
    if np.any(p <= 0.0):
        raise NumericalGuard(f"weight p is non-positive at x={g.nodes[np.argmin(p)]}")
    z = np.zeros(g.n)
    l1 = SecondOrderCoeffs(
        a=1.0 / p,
        da=-dp / p ** 2,
        dda=(2.0 * dp ** 2 - p * ddp) / p ** 3,
        b=z, db=z, ddb=z, c=z, dc=z, ddc=z,
    )
    l2 = SecondOrderCoeffs(
        a=p, da=dp, dda=ddp,
        b=2.0 * dp + a * p,
        db=2.0 * ddp + a * dp,
        ddb=2.0 * dddp + a * ddp,
        c=z, dc=z, ddc=z,
    )
    eta = float(min(np.min(1.0 / p), np.min(p)))
    return FactorPair(l1, l2, eta)


def auto_factor(a: float, lam: float, g: Grid) -> FactorPair:
    """Trivial split for ``lam <= 0``, anti-diffusive split otherwise."""
    if lam <= 0.0:
        return trivial_factor(a, lam, g.n)
    return factor_anti_diffusive(a, lam, g)
