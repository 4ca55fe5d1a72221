"""Mask construction, sampling, and admissibility constants.

Two mask families are supported:

* trigonometric-polynomial masks ``m(x) = sum_{|p| <= rho/2} c_p exp(i p x)``
  (an even ``rho``, so ``rho + 1`` coefficients), and
* compactly supported masks ``m(x) = bump_{(-b,b)}(x) * sum_p c_p exp(i p x / b)``,
  which vanish for ``|x| >= b``.

Deconvolution divides by the transformed mask autocorrelation, so each family
comes with an admissibility constant (``mu1`` for trig masks, ``mu2`` for
compact ones): the minimum modulus of that spectrum over the indices the
division touches.  A zero constant is reportable, not an error; the
deconvolution stage is the place that refuses to divide.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .banded import hermitianize  # noqa: F401  (re-export convenience)
from .centered import centered_range, circular_shift, dft, index_of
from .errors import GeometryError
from .signals import bump


@dataclass
class MaskSpec:
    """Parameters of a mask; ``kind`` is 'trig' or 'compact'.

    ``coeffs`` holds the rho+1 polynomial coefficients indexed by
    [rho+1]_c.  ``b`` (radians) is the support half-width of a compact mask
    and ignored for trig masks.
    """

    kind: str
    rho: int
    coeffs: np.ndarray
    b: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("trig", "compact"):
            raise GeometryError(f"unknown mask kind {self.kind!r}")
        if self.rho % 2 != 0 or self.rho < 2:
            raise GeometryError(f"rho must be a positive even integer, got {self.rho}")
        if len(self.coeffs) != self.rho + 1:
            raise GeometryError(
                f"expected {self.rho + 1} coefficients, got {len(self.coeffs)}"
            )
        if self.kind == "compact" and not (self.b and 0 < self.b < math.pi):
            raise GeometryError(f"compact mask needs 0 < b < pi, got {self.b}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        p = centered_range(self.rho + 1)
        if self.kind == "trig":
            return np.exp(1j * np.outer(x, p)) @ self.coeffs
        poly = np.exp(1j * np.outer(x, p) / self.b) @ self.coeffs
        return bump(-self.b, self.b, x) * poly

    def to_dict(self):
        return {
            "kind": self.kind,
            "rho": self.rho,
            "b": self.b,
            "seed": self.seed,
            "coeffs_re": np.real(self.coeffs).tolist(),
            "coeffs_im": np.imag(self.coeffs).tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        coeffs = np.asarray(data["coeffs_re"]) + 1j * np.asarray(data["coeffs_im"])
        return cls(data["kind"], data["rho"], coeffs, data.get("b"), data.get("seed"))


def complex_gaussian(rng, size):
    """Zero-mean unit-variance complex Gaussian draws (each part N(0, 1/2))."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2)


def sample_mask(mask, d):
    """Mask samples z_p = m(2*pi*p/d) on the centered grid, as a length-d vector."""
    p = centered_range(d)
    return np.asarray(mask(2.0 * math.pi * p / d))


def make_trig_mask(rho, style="gaussian", seed=None):
    """Random trig-poly mask of degree rho/2.

    ``style='gaussian'`` draws i.i.d. complex Gaussian coefficients.
    ``style='structured'`` additionally sorts the magnitudes of the upper
    rho coefficients into a nonincreasing chain and inflates the leading
    coefficient to (2*rho + 1) times the next one, which guarantees a
    strictly positive mu1 with an explicit lower bound.
    """
    rng = np.random.default_rng(seed)
    coeffs = complex_gaussian(rng, rho + 1)
    if style == "structured":
        mags = np.sort(np.abs(coeffs[1:]))[::-1]
        phases = np.angle(coeffs[1:])
        coeffs[1:] = mags * np.exp(1j * phases)
        coeffs[0] = (2 * rho + 1) * mags[0] * np.exp(1j * np.angle(coeffs[0]))
    elif style != "gaussian":
        raise GeometryError(f"unknown trig mask style {style!r}")
    return MaskSpec("trig", rho, coeffs, seed=seed)


def make_compact_mask(b, rho=16, seed=None):
    """Random compactly supported mask: bump on (-b, b) times a random
    polynomial factor with i.i.d. complex Gaussian coefficients."""
    if not 0 < b < math.pi:
        raise GeometryError(f"need 0 < b < pi, got {b}")
    rng = np.random.default_rng(seed)
    coeffs = complex_gaussian(rng, rho + 1)
    return MaskSpec("compact", rho, coeffs, b=b, seed=seed)


def structured_compact_samples(d, start, width, seed=None):
    """Sample vector of a structured compact mask, built directly on the grid.

    Support is the run ``{start, ..., start + width - 1}`` in [d]_c; the
    magnitudes decrease along the run and the first entry is inflated to
    (2*width + 1) times the second, giving a strictly positive mu2 with an
    explicit lower bound.  Only the grid samples are produced; realizing a
    matching continuous mask (e.g. by spline interpolation through the
    samples) is left out of scope.
    """
    if width < 2:
        raise GeometryError(f"support width must be >= 2, got {width}")
    if start < -(d // 2) or start + width - 1 > d // 2:
        raise GeometryError("support run leaves the centered index range")
    rng = np.random.default_rng(seed)
    vals = complex_gaussian(rng, width)
    mags = np.sort(np.abs(vals[1:]))[::-1]
    vals[1:] = mags * np.exp(1j * np.angle(vals[1:]))
    vals[0] = (2 * width + 1) * mags[0] * np.exp(1j * np.angle(vals[0]))
    z = np.zeros(d, dtype=complex)
    z[index_of(np.arange(start, start + width), d)] = vals
    return z


@dataclass
class MuReport:
    """Result of an admissibility scan.

    ``mu`` is the exact minimum modulus; ``argmin`` the (shift, frequency)
    pair attaining it.  When the structured-mask conditions hold,
    ``lower_bound`` carries the guaranteed floor and ``conditions_hold`` is
    True.
    """

    mu: float
    argmin: tuple
    lower_bound: float | None = None
    conditions_hold: bool = False
    extras: dict = field(default_factory=dict)

    def __float__(self):
        return self.mu


def _autocorr_spectrum(v, shifts):
    """Rows: F_d(v o S_p conj(v)) for each shift p in ``shifts``."""
    stacked = np.stack([v * np.conj(circular_shift(v, p)) for p in shifts])
    return dft(stacked, axis=1)


def _trig_conditions(coeffs, d, kappa):
    """Structured-chain check and the mu1 floor it implies."""
    mags = np.abs(coeffs)
    rho = len(coeffs) - 1
    chain = np.all(mags[1:-1] >= mags[2:]) and mags[-1] > 0
    lead = mags[0] > 2 * rho * mags[1]
    if not (chain and lead):
        return False, None
    return True, mags[0] * mags[kappa - 1] / (2 * d)


def mu1(z, kappa, coeffs=None):
    """Trig-mask admissibility: min over shifts |p| <= kappa-1 and all
    frequencies of |F_d(zh o S_p conj(zh))| with zh the mask spectrum.

    If the rho+1 mask coefficients are supplied, the structured-mask
    conditions are evaluated and the corresponding lower bound reported.
    """
    if kappa < 2:
        raise GeometryError(f"kappa must be >= 2, got {kappa}")
    z = np.asarray(z)
    d = len(z)
    zh = dft(z)
    shifts = np.arange(-(kappa - 1), kappa)
    mods = np.abs(_autocorr_spectrum(zh, shifts))
    flat = int(np.argmin(mods))
    pi_, qi = np.unravel_index(flat, mods.shape)
    report = MuReport(
        mu=float(mods[pi_, qi]),
        argmin=(int(shifts[pi_]), int(qi - d // 2)),
    )
    if coeffs is not None:
        ok, bound = _trig_conditions(np.asarray(coeffs), d, kappa)
        report.conditions_hold = ok
        report.lower_bound = bound
    return report


def mu2(z, kappa, s, route_tol=1e-10):
    """Compact-mask admissibility: min over frequencies in [2*kappa-1]_c and
    shifts in [2s-1]_c of |F_d(zh o S_l conj(zh))|.

    The same number equals (1/d) times the minimum of the space-side spectrum
    |F_d(z o S_p conj(z))| over the swapped index sets; both routes are
    computed and must agree to ``route_tol`` relative.
    """
    if kappa < 2:
        raise GeometryError(f"kappa must be >= 2, got {kappa}")
    if s < 1:
        raise GeometryError(f"s must be >= 1, got {s}")
    z = np.asarray(z)
    d = len(z)
    omega_set = centered_range(2 * kappa - 1)
    ell_set = centered_range(2 * s - 1)

    zh = dft(z)
    freq = np.abs(_autocorr_spectrum(zh, ell_set))[:, index_of(omega_set, d)]
    li, wi = np.unravel_index(int(np.argmin(freq)), freq.shape)
    mu_freq = float(freq[li, wi])

    space = np.abs(_autocorr_spectrum(z, omega_set))[:, index_of(ell_set, d)] / d
    mu_space = float(space.min())

    scale = max(mu_freq, mu_space, 1e-300)
    agreement = abs(mu_freq - mu_space) / scale
    if agreement > route_tol:
        raise GeometryError(
            f"mu2 routes disagree: frequency-side {mu_freq:.6e} vs "
            f"space-side {mu_space:.6e}"
        )
    report = MuReport(
        mu=mu_freq,
        argmin=(int(ell_set[li]), int(omega_set[wi])),
        extras={"mu_space_side": mu_space, "route_agreement": agreement},
    )
    _compact_conditions(z, d, kappa, report)
    return report


def _compact_conditions(z, d, kappa, report):
    """Detect a structured support run in z and attach the mu2 floor."""
    nz = np.flatnonzero(np.abs(z) > 0)
    if nz.size < kappa:
        return
    if nz[-1] - nz[0] + 1 != nz.size:
        return  # support not contiguous
    vals = z[nz[0] : nz[-1] + 1]
    width = len(vals)
    mags = np.abs(vals)
    chain = np.all(mags[1:-1] >= mags[2:]) and mags[-1] > 0
    lead = mags[0] > 2 * width * mags[1]
    if chain and lead:
        report.conditions_hold = True
        report.lower_bound = mags[0] * mags[kappa - 1] / (2 * d**2)
