"""Test signals: smooth bump sums, their Fourier coefficients, decay checks.

The stock test function is a complex-weighted sum of shifted C^inf bump
functions supported inside [-pi, pi].  Reference Fourier coefficients are
computed by high-resolution quadrature on an equispaced grid; the integrands
are smooth and compactly supported, so the periodic trapezoid rule converges
spectrally.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationError, GeometryError

#: Default bump support used throughout the experiments.
DEFAULT_C1 = -math.pi / 5
DEFAULT_C2 = math.pi / 5


def bump(c1, c2, x):
    """C^inf bump on (c1, c2): exp(1 - 1/(1 - t^2)) with t the affine map of
    [c1, c2] onto [-1, 1].  Exactly zero outside [c1, c2], peak value 1 at the
    midpoint."""
    if not c1 < c2:
        raise GeometryError(f"invalid support: need c1 < c2, got ({c1}, {c2})")
    x = np.asarray(x, dtype=float)
    t = (2.0 * x - c1 - c2) / (c2 - c1)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
    return out if out.ndim else float(out)


@dataclass
class TestFunctionSpec:
    """A bump-sum test function: f(x) = sum_j amplitudes[j] * bump(x - shifts[j])."""

    amplitudes: np.ndarray
    shifts: np.ndarray
    c1: float = DEFAULT_C1
    c2: float = DEFAULT_C2
    seed: int | None = None

    @property
    def J(self):
        return len(self.amplitudes)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for a, nu in zip(self.amplitudes, self.shifts):
            out += a * bump(self.c1, self.c2, x - nu)
        return out

    def support_radius(self):
        """Smallest a with supp(f) contained in [-a, a]."""
        edge = max(abs(self.c1), abs(self.c2))
        return max(abs(nu) for nu in self.shifts) + edge


def random_test_function(seed, J=4, c1=DEFAULT_C1, c2=DEFAULT_C2, nu_max=None):
    """Draw a random bump-sum test function.

    Amplitudes have i.i.d. uniform [-1, 1] real and imaginary parts.  Shifts
    are drawn without repetition (by permutation) from the 2J-point lattice
    ``-nu_max + j * 2*nu_max/(2J - 1)``.  The default ``nu_max`` keeps the
    support inside [-pi, pi].
    """
    rng = np.random.default_rng(seed)
    if nu_max is None:
        nu_max = 0.9 * math.pi - max(abs(c1), abs(c2))
    if nu_max < 0:
        raise GenerationError(f"nu_max must be nonnegative, got {nu_max}")
    amplitudes = rng.uniform(-1, 1, size=J) + 1j * rng.uniform(-1, 1, size=J)
    lattice = np.array(
        [-nu_max + j * (2 * nu_max / (2 * J - 1)) for j in range(2 * J)]
    )
    shifts = lattice[rng.permutation(2 * J)[:J]]
    spec = TestFunctionSpec(amplitudes, shifts, c1, c2, seed)
    if spec.support_radius() > math.pi:
        raise GenerationError("generated test function leaks outside [-pi, pi]")
    return spec


def periodic_grid(n_nodes):
    """Equispaced nodes on [-pi, pi) plus the step, for periodic quadrature.

    ``n_nodes`` counts gridpoints of the closed interval [-pi, pi]; the
    duplicate right endpoint is dropped so the rule is the exact periodic
    trapezoid sum with weight h = 2*pi/(n_nodes - 1).
    """
    n = int(n_nodes) - 1
    h = 2.0 * math.pi / n
    return -math.pi + h * np.arange(n), h


def fourier_coefficients(f, freqs, n_quad=10001):
    """Quadrature Fourier coefficients (1/2pi) * int f(x) exp(-i n x) dx.

    ``freqs`` is an integer array; one length-(n_quad-1) FFT serves every
    requested frequency.  Exact (to roundoff) for trigonometric polynomials of
    degree below (n_quad-1)/2; spectrally accurate for smooth periodic or
    compactly supported f.
    """
    freqs = np.asarray(freqs, dtype=int)
    x, h = periodic_grid(n_quad)
    vals = np.asarray(f(x), dtype=complex)
    spectrum = np.fft.fft(vals)
    n = len(x)
    if np.max(np.abs(freqs)) >= n // 2:
        raise GeometryError("requested frequency beyond quadrature resolution")
    # node x_i = -pi + i h: exp(-i n x_i) = exp(i pi n) exp(-2 pi i n i / N)
    phase = np.exp(1j * math.pi * freqs)
    return phase * spectrum[freqs % n] / n


def trig_eval(coeffs, freqs, x):
    """Evaluate sum_n coeffs[n] * exp(i * freqs[n] * x) at the points x."""
    x = np.asarray(x, dtype=float)
    return np.exp(1j * np.outer(x, np.asarray(freqs))) @ np.asarray(coeffs)


def window_maxima(indices, mags, beta):
    """D_n = max of |coeff| over the centered window |m - n| < beta/2.

    ``indices`` must be consecutive integers; returns the array of D_n over
    the same indices, treating coefficients outside as zero.
    """
    hw = math.ceil(beta / 2) - 1
    padded = np.concatenate([np.zeros(hw), mags, np.zeros(hw)])
    return np.array(
        [padded[i : i + 2 * hw + 1].max() for i in range(len(indices))]
    )


def check_fourier_decay(coeffs, beta):
    """Test the windowed-max decay condition of order ``beta``.

    ``coeffs`` maps integer frequency -> coefficient.  With
    ``D_n = max_{|m-n| < beta/2} |coeff(m)|``, the condition requires
    ``D_n >= D_n'`` whenever ``|n| <= |n'|`` over the supported range (so D is
    constant on each level |n| = t and nonincreasing across levels).

    Returns ``(ok, violation)`` where ``violation`` is the first offending
    pair ``(n, n')`` or None.
    """
    if beta < 1:
        raise GeometryError(f"beta must be >= 1, got {beta}")
    if not coeffs:
        return True, None
    hw = math.ceil(beta / 2) - 1
    radius = max(abs(n) for n in coeffs) + hw
    indices = np.arange(-radius, radius + 1)
    mags = np.array([abs(coeffs.get(int(n), 0.0)) for n in indices])
    D = window_maxima(indices, mags, beta)
    dmap = dict(zip(indices.tolist(), D))
    # Scan levels |n| = t from the outside in, tracking the running max of D
    # beyond each level; within a level the two D values must agree.
    outer_max = -np.inf
    outer_arg = None
    for t in range(radius, -1, -1):
        members = [t] if t == 0 else [t, -t]
        vals = [dmap[n] for n in members]
        if len(vals) == 2 and vals[0] != vals[1]:
            lo_n = members[int(np.argmin(vals))]
            hi_n = members[int(np.argmax(vals))]
            return False, (lo_n, hi_n)
        if min(vals) < outer_max:
            inner = members[int(np.argmin(vals))]
            return False, (inner, outer_arg)
        if max(vals) > outer_max:
            outer_max = max(vals)
            outer_arg = members[int(np.argmax(vals))]
    return True, None


def random_decay_coefficients(s, seed, beta=2, mag_range=(0.5, 1.5)):
    """Random coefficients on [s]_c with exact decay of every order >= beta.

    Magnitudes are drawn, sorted decreasing, and assigned symmetrically by
    level |n| (the decay definition forces equal windowed maxima on +/-n);
    phases are independent uniform.
    """
    rng = np.random.default_rng(seed)
    from .centered import centered_range

    idx = centered_range(s)
    half = (len(idx) - 1) // 2
    levels = np.sort(rng.uniform(*mag_range, size=half + 1))[::-1]
    mags = levels[np.abs(idx)]
    phases = rng.uniform(-math.pi, math.pi, size=len(idx))
    coeffs = mags * np.exp(1j * phases)
    return idx, coeffs
