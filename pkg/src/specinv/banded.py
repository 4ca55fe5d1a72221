"""Banded Hermitian matrix utilities: restriction, diagonal extraction, lifting.

Matrices are indexed by the centered set [d]_c on both axes; the band of
half-width ``gamma`` consists of entries with ``|i - j| <= gamma - 1`` (no
circular wrap-around).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError


def hermitianize(M):
    """Hermitian part ``(M + M*) / 2``.

    Idempotent on Hermitian inputs and contractive in Frobenius norm.  The
    construction is bitwise symmetric, so ``H == H.conj().T`` holds exactly.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise GeometryError(f"expected square matrix, got shape {M.shape}")
    return 0.5 * (M + M.conj().T)


def band_mask(d, gamma):
    """Boolean d x d mask of the band ``|i - j| <= gamma - 1``."""
    idx = np.arange(d)
    return np.abs(idx[:, None] - idx[None, :]) <= gamma - 1


def band_restrict(M, gamma):
    """Zero every entry of ``M`` with ``|i - j| > gamma - 1``."""
    M = np.asarray(M)
    if gamma < 1:
        raise GeometryError(f"band half-width must be >= 1, got {gamma}")
    return np.where(band_mask(M.shape[0], gamma), M, 0)


def band_extract(M, kappa):
    """Collect the diagonal bands of ``M`` into a d x (2*kappa - 1) matrix.

    Column ``j`` (indexed over [2*kappa-1]_c) holds ``M[i, i+j]``; column 0 is
    the main diagonal.  Positions where ``i + j`` falls outside the index
    range are zero, so the Frobenius norm of the extraction equals that of the
    band itself.
    """
    M = np.asarray(M)
    d = M.shape[0]
    if kappa < 1:
        raise GeometryError(f"kappa must be >= 1, got {kappa}")
    out = np.zeros((d, 2 * kappa - 1), dtype=M.dtype)
    rows = np.arange(d)
    for jc, j in enumerate(range(-(kappa - 1), kappa)):
        cols = rows + j
        ok = (cols >= 0) & (cols < d)
        out[rows[ok], jc] = M[rows[ok], cols[ok]]
    return out


def lift(M, d):
    """Spread the columns of an s x (2s-1) matrix onto the diagonal bands of a
    d x d matrix: ``lift(M)[i, j] = M[i, j - i]`` wherever both indices are
    addressed, zero elsewhere.  Rows of ``M`` are indexed by [s]_c, columns by
    [2s-1]_c, embedded in [d]_c.
    """
    M = np.asarray(M)
    s = M.shape[0]
    if M.shape[1] != 2 * s - 1:
        raise GeometryError(f"expected s x (2s-1) matrix, got shape {M.shape}")
    if s > d:
        raise GeometryError(f"cannot lift {s} rows into size {d}")
    out = np.zeros((d, d), dtype=M.dtype)
    off = (d - s) // 2  # row i of M sits at storage row i + off
    rows = np.arange(s)
    for kc, k in enumerate(range(-(s - 1), s)):
        cols = rows + off + k
        ok = (cols >= 0) & (cols < d)
        out[rows[ok] + off, cols[ok]] = M[rows[ok], kc]
    return out


@dataclass
class BandedAutocorrelation:
    """Hermitian matrix supported on the band ``|i - j| <= gamma - 1``.

    Approximates the restriction of a rank-one coefficient autocorrelation.
    ``diagnostics`` carries recovery metadata (mask constant, solver info).
    """

    data: np.ndarray
    gamma: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def d(self):
        return self.data.shape[0]

    def validate(self, atol=0.0):
        """Raise if the matrix is not Hermitian or leaks outside its band."""
        if not np.array_equal(self.data, self.data.conj().T):
            if np.abs(self.data - self.data.conj().T).max() > atol:
                raise GeometryError("matrix is not Hermitian")
        leak = np.abs(self.data[~band_mask(self.d, self.gamma)])
        if leak.size and leak.max() > atol:
            raise GeometryError(
                f"entries outside band |i-j| <= {self.gamma - 1} are nonzero"
            )
        return self
