"""Alternating-projection baseline (HIO + ER) on the discrete masked-DFT
forward model.

The forward operator maps length-d sample vectors to the K x L complex
pre-modulus measurements

    F(x)[w, l] = (2*pi/d) * sum_p x_p * zmat[p, l] * exp(-2*pi*i*w*p/d),

whose entrywise squared modulus matches the discrete measurement oracle.
Iterations alternate between replacing measured magnitudes and projecting
back to the object domain through the least-squares inverse; HIO applies the
classic feedback update outside the support constraint, ER a plain
projection.
"""

import math
from dataclasses import dataclass

import numpy as np

from .centered import centered_range, dft, idft, index_of
from .errors import ConfigError, GeometryError
from .masks import MaskSpec


@dataclass
class HioConfig:
    """Block schedule: ``hio_per_block`` HIO steps then ``er_per_block`` ER
    steps, repeated until ``total_iters`` is exhausted."""

    hio_per_block: int = 8
    er_per_block: int = 2
    total_iters: int = 30
    beta: float = 0.9
    init: str = "zero"
    seed: int | None = None

    def __post_init__(self):
        if min(self.hio_per_block, self.er_per_block, self.total_iters) < 1:
            raise ConfigError("block sizes and total_iters must be positive")
        if self.init not in ("zero", "random"):
            raise ConfigError(f"unknown init {self.init!r}")

    def schedule(self):
        """Yield 'hio' / 'er' labels for each iteration."""
        out = []
        while len(out) < self.total_iters:
            out.extend(["hio"] * self.hio_per_block)
            out.extend(["er"] * self.er_per_block)
        return out[: self.total_iters]


def shift_samples(mask, d, L):
    """d x L matrix of mask samples per shift: column l holds
    m(2*pi*p/d - 2*pi*l/L)."""
    p = centered_range(d)
    ells = centered_range(L)
    if isinstance(mask, MaskSpec):
        x = 2.0 * math.pi * (p[:, None] / d - ells[None, :] / L)
        return np.asarray(mask(x.ravel())).reshape(d, len(ells))
    z = np.asarray(mask)
    if d % L:
        raise GeometryError(
            "sampled-mask shifts need L | d; pass a MaskSpec for off-grid shifts"
        )
    step = d // L
    return np.stack([np.roll(z, ell * step) for ell in ells], axis=1)


class MaskedFourierOperator:
    """Linear masked-DFT operator with adjoint and least-squares inverse."""

    def __init__(self, zmat, K=None):
        self.zmat = np.asarray(zmat)
        self.d, self.L = self.zmat.shape
        self.K = self.d if K is None else int(K)
        if self.d % self.K:
            raise GeometryError(f"K={self.K} must divide d={self.d}")
        self.rows = index_of(centered_range(self.K) * (self.d // self.K), self.d)
        self._normal_diag = None
        self._normal_dense = None

    def forward(self, x):
        full = 2.0 * math.pi * dft(x[:, None] * self.zmat, axis=0)
        return full[self.rows, :] if self.K != self.d else full

    def adjoint(self, G):
        if self.K != self.d:
            full = np.zeros((self.d, self.L), dtype=complex)
            full[self.rows, :] = G
        else:
            full = G
        return (2.0 * math.pi / self.d) * np.sum(
            np.conj(self.zmat) * idft(full, axis=0), axis=1
        )

    def lsq_inverse(self, G):
        """Solve min_x ||forward(x) - G||_F via the normal equations."""
        rhs = self.adjoint(G)
        if self.K == self.d:
            if self._normal_diag is None:
                scale = (2.0 * math.pi) ** 2 / self.d
                diag = scale * np.sum(np.abs(self.zmat) ** 2, axis=1)
                self._normal_diag = np.where(diag > 0, diag, np.inf)
            return rhs / self._normal_diag
        if self._normal_dense is None:
            eye = np.eye(self.d, dtype=complex)
            cols = [self.adjoint(self.forward(eye[:, j])) for j in range(self.d)]
            self._normal_dense = np.stack(cols, axis=1)
        return np.linalg.solve(self._normal_dense, rhs)


def _phase_of(G):
    mags = np.abs(G)
    out = np.ones_like(G)
    nz = mags > 0
    out[nz] = G[nz] / mags[nz]
    return out


def hio_er(Y, zmat, cfg=None, support=None, K=None):
    """Run the HIO+ER block schedule against measured squared magnitudes.

    Parameters
    ----------
    Y : K x L real array (may contain negative noisy entries).
    zmat : d x L per-shift mask samples (see :func:`shift_samples`).
    support : boolean length-d array or None
        Object-domain constraint; None allows the whole index range.

    Returns ``(x_best, info)`` where ``info`` carries the residual trace and
    the index of the best (lowest-residual) iterate.
    """
    cfg = cfg or HioConfig()
    op = MaskedFourierOperator(zmat, K)
    target = np.sqrt(np.maximum(np.asarray(Y, dtype=float), 0.0))
    if cfg.init == "zero":
        g = np.zeros(op.d, dtype=complex)
    else:
        rng = np.random.default_rng(cfg.seed)
        g = rng.standard_normal(op.d) + 1j * rng.standard_normal(op.d)
    if support is None:
        support = np.ones(op.d, dtype=bool)
    support = np.asarray(support, dtype=bool)

    residuals = []
    best = (np.inf, g.copy())
    for kind in cfg.schedule():
        G = op.forward(g)
        res = float(np.linalg.norm(np.abs(G) - target))
        residuals.append(res)
        if res < best[0]:
            best = (res, g.copy())
        gp = op.lsq_inverse(target * _phase_of(G))
        if kind == "er":
            g = np.where(support, gp, 0.0)
        else:
            g = np.where(support, gp, g - cfg.beta * gp)
    res = float(np.linalg.norm(np.abs(op.forward(g)) - target))
    residuals.append(res)
    if res < best[0]:
        best = (res, g.copy())
    info = {
        "residuals": residuals,
        "best_residual": best[0],
        "initial_residual": residuals[0],
    }
    return best[1], info


def coefficients_from_samples(x, s):
    """Coefficient estimates over [s]_c from a sample-domain iterate."""
    xh = dft(np.asarray(x))
    idx = centered_range(s)
    return idx, xh[index_of(idx, len(x))]
