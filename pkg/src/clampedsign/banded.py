"""Banded matrix storage with a cached LU factorization.

Band layout follows LAPACK: ``scale * band[ku + i - j, j] == A[i, j]``.
The factorization (partial pivoting, LAPACK ``gbtrf``) allocates ``kl``
extra superdiagonals for fill-in and is computed once per matrix.

The scalar prefactor lets assemblers keep ``1/h^4``-sized factors out of
the band: stencils stay exactly representable and ``c * A`` shares its
band and factorization bit-for-bit with ``A``.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import lapack

from .errors import InvalidInput, SingularSystem

PIVOT_RTOL = 1e-14


class BandedMatrix:
    """Square matrix ``scale * band`` with ``kl`` sub- and ``ku`` superdiagonals."""

    def __init__(self, band, kl: int, ku: int, scale: float = 1.0):
        band = np.array(band, dtype=float)
        if band.ndim != 2 or band.shape[0] != kl + ku + 1:
            raise InvalidInput(f"band storage must have {kl + ku + 1} rows")
        self.kl = int(kl)
        self.ku = int(ku)
        self.scale = float(scale)
        if not (np.isfinite(self.scale) and self.scale != 0.0):
            raise InvalidInput(f"scale must be finite and non-zero, got {scale}")
        self.size = band.shape[1]
        # zero the unused corners so nothing lives outside the band
        n = self.size
        for k in range(kl + ku + 1):
            off = self.ku - k  # column - row
            if off > 0:
                band[k, :off] = 0.0
            elif off < 0:
                band[k, n + off:] = 0.0
        band.setflags(write=False)
        self.band = band
        self._lu = None

    @classmethod
    def from_dense(cls, a, kl: int, ku: int) -> "BandedMatrix":
        a = np.asarray(a, dtype=float)
        n = a.shape[0]
        if a.shape != (n, n):
            raise InvalidInput("matrix must be square")
        i, j = np.nonzero(a)
        if np.any(i - j > kl) or np.any(j - i > ku):
            raise InvalidInput("dense matrix has entries outside the declared band")
        band = np.zeros((kl + ku + 1, n))
        for d in range(-kl, ku + 1):
            diag = np.diagonal(a, d)
            if d >= 0:
                band[ku - d, d:] = diag
            else:
                band[ku - d, : n + d] = diag
        return cls(band, kl, ku)

    @property
    def shape(self):
        return (self.size, self.size)

    def _band_diagonal(self, offset: int) -> np.ndarray:
        if offset >= 0:
            return self.band[self.ku - offset, offset:]
        return self.band[self.ku - offset, : self.size + offset]

    def diagonal(self, offset: int = 0) -> np.ndarray:
        return self.scale * self._band_diagonal(offset)

    def to_rows(self, unscaled: bool = False) -> np.ndarray:
        """Row-aligned band: ``rows[i, k] = A[i, i - kl + k]`` (zero outside)."""
        n, kl, ku = self.size, self.kl, self.ku
        rows = np.zeros((n, kl + ku + 1))
        for k, d in enumerate(range(-kl, ku + 1)):
            if abs(d) >= n:
                continue
            if d >= 0:
                rows[: n - d, k] = self._band_diagonal(d)
            else:
                rows[-d:, k] = self._band_diagonal(d)
        return rows if unscaled else self.scale * rows

    def to_dense(self) -> np.ndarray:
        n = self.size
        a = np.zeros((n, n))
        for d in range(-self.kl, self.ku + 1):
            if abs(d) < n:
                idx = np.arange(n - abs(d))
                if d >= 0:
                    a[idx, idx + d] = self.diagonal(d)
                else:
                    a[idx - d, idx] = self.diagonal(d)
        return a

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        n = self.size
        y = np.zeros(x.shape)
        for d in range(-self.kl, self.ku + 1):
            if abs(d) >= n:
                continue
            diag = self._band_diagonal(d)
            if x.ndim == 2:
                diag = diag[:, None]
            if d >= 0:
                y[: n - d] += diag * x[d:]
            else:
                y[-d:] += diag * x[: n + d]
        return self.scale * y

    __matmul__ = matvec

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.to_rows()).sum(axis=1)))

    def scaled(self, c: float) -> "BandedMatrix":
        """``c * A``; only the prefactor changes, so any factorization is reused."""
        out = BandedMatrix(self.band, self.kl, self.ku, self.scale * c)
        out._lu = self._lu
        return out

    def factorize(self):
        """Return the (cached) LU factors ``(lu_band, ipiv)`` of the band.

        Raises SingularSystem when a pivot falls below
        ``1e-14 * ||band||_inf`` (the same test for ``A``).
        """
        if self._lu is None:
            kl, ku, n = self.kl, self.ku, self.size
            ab = np.zeros((2 * kl + ku + 1, n), order="F")
            ab[kl:, :] = self.band
            lu, ipiv, info = lapack.dgbtrf(ab, kl, ku)
            if info < 0:
                raise InvalidInput(f"dgbtrf rejected argument {-info}")
            pivots = np.abs(lu[kl + ku, :])
            norm = float(np.max(np.abs(self.to_rows(unscaled=True)).sum(axis=1)))
            if info > 0 or norm == 0.0 or np.min(pivots) < PIVOT_RTOL * norm:
                j = int(np.argmin(pivots))
                raise SingularSystem(
                    f"pivot {pivots[j]:.3e} at row {j} below {PIVOT_RTOL:g}*||A||_inf (={norm:.3e})"
                )
            self._lu = (lu, ipiv)
        return self._lu

    def solve(self, rhs) -> np.ndarray:
        """Solve ``A x = rhs`` for a vector or a matrix of right-hand sides."""
        lu, ipiv = self.factorize()
        b = np.asarray(rhs, dtype=float)
        if b.shape[0] != self.size:
            raise InvalidInput(f"rhs has {b.shape[0]} rows, matrix has {self.size}")
        vector = b.ndim == 1
        b2 = np.array(b.reshape(self.size, -1), order="F")
        x, info = lapack.dgbtrs(lu, self.kl, self.ku, b2, ipiv)
        if info != 0:
            raise InvalidInput(f"dgbtrs rejected argument {-info}")
        if self.scale != 1.0:
            x = x / self.scale
        return x[:, 0] if vector else x

    def __repr__(self):
        return f"BandedMatrix(size={self.size}, kl={self.kl}, ku={self.ku}, scale={self.scale:g})"
