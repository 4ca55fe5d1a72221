"""Spectrogram measurement generation.

``measure_continuous`` integrates |int f(x) m(x - t_l) exp(-i w x) dx|^2 by
periodic trapezoid quadrature on a fine equispaced grid; since the integrands
are smooth and vanish at +/-pi the rule is spectrally accurate, and for
band-limited integrands it is exact to roundoff.  ``discrete_oracle`` is the
exact discrete counterpart built from sampled vectors; it serves as the
ground truth that calibrates the deconvolution normalization.

Shift positions default to the signal grid (2*pi*l/d for l in [d]_c, i.e. a
d x d matrix).  Passing ``n_shifts=L`` measures at the L equispaced positions
2*pi*l/L instead, which is how subsampled acquisition behaves and remains
well-defined when L does not divide d.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .centered import centered_range, circular_shift, dft, index_of
from .errors import ConfigError, GeometryError


@dataclass
class QuadratureConfig:
    """Equispaced composite quadrature on [-pi, pi]."""

    n_nodes: int = 10001

    def __post_init__(self):
        if self.n_nodes % 2 == 0 or self.n_nodes < 1001:
            raise ConfigError(f"n_nodes must be odd and >= 1001, got {self.n_nodes}")


def measure_continuous(f, mask, d, quad=None, n_shifts=None):
    """Squared-magnitude windowed-Fourier measurements of ``f``.

    Parameters
    ----------
    f, mask : callables mapping radians -> complex values.
    d : odd int
        Number of integer frequencies (rows, indexed by [d]_c).
    quad : QuadratureConfig
    n_shifts : int, optional
        Number of equispaced shifts 2*pi*l/n_shifts (columns, indexed by
        [n_shifts]_c).  Defaults to d, producing the full d x d matrix.

    Returns the real nonnegative d x n_shifts matrix.
    """
    if d % 2 == 0:
        raise GeometryError(f"d must be odd, got {d}")
    quad = quad or QuadratureConfig()
    L = d if n_shifts is None else int(n_shifts)
    n = quad.n_nodes - 1  # periodic rule: drop the duplicate endpoint
    h = 2.0 * math.pi / n
    x = -math.pi + h * np.arange(n)
    fx = np.asarray(f(x), dtype=complex)
    freqs = centered_range(d)
    out = np.empty((d, L))
    for li, ell in enumerate(centered_range(L)):
        g = fx * np.asarray(mask(x - 2.0 * math.pi * ell / L), dtype=complex)
        spectrum = np.fft.fft(g)  # node phases exp(i*pi*w) drop under |.|^2
        out[:, li] = (h * np.abs(spectrum[freqs % n])) ** 2
    return out


def discrete_oracle(x, z):
    """Exact discrete spectrogram of sampled vectors:

        T'[w, l] = (4*pi^2/d^2) * |sum_p x_p z_{p-l} exp(-2*pi*i*w*p/d)|^2.
    """
    x = np.asarray(x)
    z = np.asarray(z)
    if x.shape != z.shape:
        raise GeometryError(f"length mismatch {x.shape} vs {z.shape}")
    d = len(x)
    cols = np.stack([x * circular_shift(z, -ell) for ell in centered_range(d)], axis=1)
    u = dft(cols, axis=0)  # (1/d) * the defining sum
    return 4.0 * math.pi**2 * np.abs(u) ** 2


def subsample(M, K, L):
    """Equispaced K x L subsampling: out[k, l] = M[k*d/K, l*d/L] (K | d, L | d)."""
    M = np.asarray(M)
    d = M.shape[0]
    if M.shape[1] != d:
        raise GeometryError(f"expected square matrix, got {M.shape}")
    if d % K or d % L:
        raise GeometryError(f"K={K} and L={L} must divide d={d}")
    rows = index_of(centered_range(K) * (d // K), d)
    cols = index_of(centered_range(L) * (d // L), d)
    return M[np.ix_(rows, cols)]


@dataclass
class MeasurementSet:
    """A K x L block of (possibly noisy) squared-magnitude measurements.

    ``snr_db`` is None for noiseless data.  Noise never mutates the clean
    matrix; negative noisy entries are preserved as-is.
    """

    values: np.ndarray
    d: int
    snr_db: float | None = None
    seed: int | None = None
    provenance: str = "quadrature"
    achieved_snr_db: float | None = None

    @property
    def K(self):
        return self.values.shape[0]

    @property
    def L(self):
        return self.values.shape[1]

    def to_csv(self, path):
        header = "d,K,L,snr_db,seed"
        meta = "%d,%d,%d,%s,%s" % (
            self.d,
            self.K,
            self.L,
            "" if self.snr_db is None else repr(self.snr_db),
            "" if self.seed is None else self.seed,
        )
        body = "\n".join(",".join(repr(v) for v in row) for row in self.values)
        with open(path, "w") as fh:
            fh.write(header + "\n" + meta + "\n" + body + "\n")

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        meta = lines[1].split(",")
        d, K, L = int(meta[0]), int(meta[1]), int(meta[2])
        snr = float(meta[3]) if meta[3] else None
        seed = int(meta[4]) if meta[4] else None
        values = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:]])
        if values.shape != (K, L):
            raise GeometryError(f"body shape {values.shape} != header ({K}, {L})")
        return cls(values, d, snr, seed)


def add_noise(clean, snr_db, seed, d=None):
    """Additive i.i.d. real Gaussian noise calibrated to a target SNR:

        snr_db = 10*log10(||clean||_F^2 / (count * sigma^2)),

    with ``count`` the number of entries.  Returns a MeasurementSet carrying
    the achieved empirical SNR; ``snr_db=None`` (or +inf) leaves the data
    untouched.
    """
    clean = np.asarray(clean, dtype=float)
    d = clean.shape[0] if d is None else d
    if snr_db is None or np.isposinf(snr_db):
        return MeasurementSet(clean.copy(), d, None, seed)
    if not np.isfinite(snr_db):
        raise ConfigError(f"snr_db must be finite or None, got {snr_db}")
    energy = float(np.sum(clean**2))
    if energy == 0.0:
        raise ConfigError("SNR is undefined for identically zero measurements")
    count = clean.size
    sigma2 = energy / (count * 10.0 ** (snr_db / 10.0))
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, math.sqrt(sigma2), size=clean.shape)
    achieved = 10.0 * math.log10(energy / (count * float(np.mean(noise**2))))
    return MeasurementSet(clean + noise, d, float(snr_db), seed, "quadrature", achieved)
