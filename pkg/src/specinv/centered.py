"""Centered-index spectral primitives.

All vectors in this package live on the centered index set ``[n]_c``, the
smallest set of at least ``n`` consecutive integers symmetric about 0.  A
length-``d`` array (``d`` odd) stores index ``p`` at position ``p + (d-1)/2``.
The discrete Fourier transform follows the ``1/d``-normalized convention

    (F_d v)_j = (1/d) * sum_k v_k exp(-2*pi*i*j*k/d),   j, k in [d]_c,

so that ``idft`` needs no extra scaling to invert it.  Keeping everything in
centered order makes shift/band/aliasing arithmetic match the math directly;
conversion to standard FFT order happens only inside :func:`dft`/:func:`idft`.
"""

import numpy as np

from .errors import DivisionHazardError, GeometryError

#: Default magnitude floor for componentwise quotients.
EPS_DIV = 1e-14


def centered_range(n):
    """Return the members of ``[n]_c`` as an int array.

    For odd ``n`` this is ``[(1-n)/2, (n-1)/2]``; an even ``n`` silently
    widens to ``[n+1]_c`` (the returned length records the widened size, so
    callers never widen twice).
    """
    n = int(n)
    if n < 1:
        raise GeometryError(f"index set size must be >= 1, got {n}")
    if n % 2 == 0:
        n += 1
    half = (n - 1) // 2
    return np.arange(-half, half + 1)


def index_of(p, d):
    """Storage position of centered index ``p`` in a length-``d`` array (mod d)."""
    return (p + d // 2) % d


def check_centered(v):
    """Validate that ``v`` is a 1-D odd-length vector; return it as an ndarray."""
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] % 2 == 0:
        raise GeometryError(f"expected odd-length 1-D vector, got shape {v.shape}")
    return v


def dft(v, axis=-1):
    """Centered DFT with 1/d normalization (see module docstring).

    Works along ``axis`` of an n-D array; the transformed axis must have odd
    length.
    """
    v = np.asarray(v)
    d = v.shape[axis]
    if d % 2 == 0:
        raise GeometryError(f"dft axis length must be odd, got {d}")
    out = np.fft.fft(np.fft.ifftshift(v, axes=axis), axis=axis)
    return np.fft.fftshift(out, axes=axis) / d


def idft(v, axis=-1):
    """Exact inverse of :func:`dft` (multiplies by d where numpy divides)."""
    v = np.asarray(v)
    d = v.shape[axis]
    if d % 2 == 0:
        raise GeometryError(f"idft axis length must be odd, got {d}")
    out = np.fft.ifft(np.fft.ifftshift(v, axes=axis), axis=axis)
    return np.fft.fftshift(out, axes=axis) * d


def circular_shift(v, ell):
    """Circular shift ``(S_l v)_p = v_{p+l}`` with indices taken mod d into [d]_c."""
    return np.roll(np.asarray(v), -int(ell), axis=-1)


def pointwise(v, w, mode="product", eps_div=EPS_DIV):
    """Componentwise product / conjugated product / quotient of equal-length vectors.

    Parameters
    ----------
    mode : {'product', 'conj-product', 'quotient'}
        'conj-product' computes ``v * conj(w)``; 'quotient' computes ``v / w``
        and raises :class:`DivisionHazardError` naming the first centered index
        whose denominator magnitude falls below ``eps_div``.
    """
    v = np.asarray(v)
    w = np.asarray(w)
    if v.shape != w.shape:
        raise GeometryError(f"shape mismatch {v.shape} vs {w.shape}")
    if mode == "product":
        return v * w
    if mode == "conj-product":
        return v * np.conj(w)
    if mode == "quotient":
        bad = np.abs(w) < eps_div
        if np.any(bad):
            pos = int(np.argmax(bad))
            index = pos - (len(w) - 1) // 2
            raise DivisionHazardError(index, float(np.abs(w[pos])), eps_div)
        return v / w
    raise ValueError(f"unknown mode {mode!r}")


def fourier_project(coeffs, window):
    """Zero all coefficients outside ``window``.

    ``coeffs`` maps integer frequency -> complex coefficient; ``window`` is an
    iterable of kept frequencies (e.g. from :func:`centered_range`).
    """
    keep = set(int(n) for n in np.asarray(window).ravel())
    return {n: c for n, c in coeffs.items() if n in keep}
