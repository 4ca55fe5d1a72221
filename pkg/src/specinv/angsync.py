"""Greedy angular synchronization over a banded autocorrelation.

Magnitudes come from the diagonal (or from the top eigenvector of the banded
matrix); phases are telescoped along greedy paths that start at the largest
magnitude and advance in hops of size between gamma - beta and gamma - 1, so
every edge stays inside the band where the matrix carries information.
"""

import math
from dataclasses import dataclass

import numpy as np

from .centered import centered_range, index_of
from .errors import GeometryError, UndefinedArgumentError

#: Edge magnitudes below this are treated as zero-argument hazards.
EDGE_FLOOR = 1e-15


@dataclass
class SyncPath:
    """Hop sequence n_0, ..., n_b with n_b the target index."""

    target: int
    nodes: list

    @property
    def hops(self):
        return len(self.nodes) - 1


def _argmax_small_index(values, indices):
    """Index attaining the max value; ties go to the smallest |index|, then
    the smallest index."""
    order = np.lexsort((indices, np.abs(indices), -values))
    return int(indices[order[0]])


def magnitudes(A, window):
    """Diagonal magnitude estimates a_n = sqrt(|A[n, n]|) over ``window``."""
    data = A.data if hasattr(A, "data") else np.asarray(A)
    d = data.shape[0]
    window = np.asarray(window)
    pos = index_of(window, d)
    return np.sqrt(np.abs(data[pos, pos]))


def eigen_magnitudes(A, window, iters=50):
    """Magnitude estimates from the top eigenvector of the banded matrix.

    Power iteration on the Hermitian band; the eigenvector is rescaled so the
    estimated energy matches the band diagonal.  Falls back to the diagonal
    estimates if the iteration stagnates (zero or non-finite iterates).
    """
    data = A.data if hasattr(A, "data") else np.asarray(A)
    diag = magnitudes(A, window)
    d = data.shape[0]
    pos = index_of(np.asarray(window), d)
    sub = data[np.ix_(pos, pos)]
    v = diag.astype(complex)
    if not np.linalg.norm(v):
        v = np.ones(len(pos), dtype=complex)
    for _ in range(iters):
        w = sub @ v
        norm = np.linalg.norm(w)
        if norm < 1e-300 or not np.isfinite(norm):
            return diag
        v = w / norm
    trace = float(np.sum(np.abs(np.diagonal(sub))))
    return np.abs(v) * math.sqrt(trace) / max(np.linalg.norm(v), 1e-300)


def greedy_path(a, indices, n, gamma, beta):
    """Greedy entry selection toward target ``n``.

    ``a`` holds magnitudes over the consecutive ``indices``; the path starts
    at the global argmax and, while the target is at least gamma away,
    advances by the largest magnitude inside the hop window (ascending:
    [cur + gamma - beta, cur + gamma - 1]; descending: the mirror image).
    The target is appended as the final node once it is within gamma.
    """
    a = np.asarray(a, dtype=float)
    indices = np.asarray(indices)
    if a.size == 0:
        raise GeometryError("empty magnitude window")
    if not 1 <= beta <= gamma - 1 and gamma > 1:
        raise GeometryError(f"need 1 <= beta <= gamma-1, got beta={beta} gamma={gamma}")
    if n not in indices:
        raise GeometryError(f"target {n} outside the coefficient window")
    lo, hi = int(indices[0]), int(indices[-1])
    start = _argmax_small_index(a, indices)
    nodes = [start]
    cur = start
    for _ in range(4 * len(indices) + 4):
        if abs(n - cur) < gamma:
            break
        if n > cur:
            w_lo, w_hi = cur + gamma - beta, cur + gamma - 1
        else:
            w_lo, w_hi = cur - gamma + 1, cur - gamma + beta
        w_lo, w_hi = max(w_lo, lo), min(w_hi, hi)
        if w_lo > w_hi:
            raise GeometryError(f"empty hop window toward {n} from {cur}")
        sel = slice(w_lo - lo, w_hi - lo + 1)
        cur = _argmax_small_index(a[sel], indices[sel])
        nodes.append(cur)
    else:
        raise GeometryError(f"path toward {n} failed to terminate")
    if nodes[-1] != n:
        nodes.append(n)
    return SyncPath(int(n), nodes)


def _edge_arg(data, d, i, j):
    """arg(A[i, j]) with a hazard check, indices centered."""
    entry = data[index_of(i, d), index_of(j, d)]
    if abs(entry) < EDGE_FLOOR:
        raise UndefinedArgumentError((int(i), int(j)), float(abs(entry)))
    return math.atan2(entry.imag, entry.real)


def _wrap(angle):
    """Wrap to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return wrapped if wrapped > -math.pi or wrapped == math.pi else math.pi


def phases(A, paths):
    """Telescoped phase estimates: alpha_n = sum of arg(A[next, prev]) along
    each path, wrapped to (-pi, pi].  Returns {target: alpha}."""
    data = A.data if hasattr(A, "data") else np.asarray(A)
    d = data.shape[0]
    out = {}
    for path in paths:
        alpha = 0.0
        for prev, nxt in zip(path.nodes[:-1], path.nodes[1:]):
            alpha += _edge_arg(data, d, nxt, prev)
        out[path.target] = _wrap(alpha)
    return out


def _chain(a, indices, start, gamma, beta, direction):
    """Shared hop chain from ``start``; hop windows depend only on the current
    node, so one chain serves every target on that side."""
    lo, hi = int(indices[0]), int(indices[-1])
    nodes = [start]
    cur = start
    limit = hi if direction > 0 else lo
    while (limit - cur) * direction >= gamma:
        if direction > 0:
            w_lo, w_hi = cur + gamma - beta, min(cur + gamma - 1, hi)
        else:
            w_lo, w_hi = max(cur - gamma + 1, lo), cur - gamma + beta
        sel = slice(w_lo - lo, w_hi - lo + 1)
        cur = _argmax_small_index(a[sel], indices[sel])
        nodes.append(cur)
    return nodes


def synchronize(A, s, gamma, beta, use_eigen=False, eigen_iters=50):
    """Magnitude + phase estimation over the window [s]_c.

    Equivalent to running :func:`greedy_path` and :func:`phases` per target
    (targets on one side of the argmax share their hop prefix, so the chain
    and its cumulative edge phases are computed once).  Returns
    ``(indices, coefficients a_n * exp(i alpha_n), info)``.
    """
    data = A.data if hasattr(A, "data") else np.asarray(A)
    d = data.shape[0]
    indices = centered_range(s)
    a = magnitudes(A, indices)
    a_used = eigen_magnitudes(A, indices, eigen_iters) if use_eigen else a
    start = _argmax_small_index(a, indices)

    alphas = np.zeros(len(indices))
    stats = {"start": start, "max_hops": 0}
    for direction in (+1, -1):
        chain = _chain(a, indices, start, gamma, beta, direction)
        cum = np.zeros(len(chain))
        for k in range(1, len(chain)):
            cum[k] = cum[k - 1] + _edge_arg(data, d, chain[k], chain[k - 1])
        side = indices > start if direction > 0 else indices < start
        chain_arr = np.asarray(chain)
        for pos in np.flatnonzero(side):
            n = int(indices[pos])
            # first chain node within gamma of the target
            within = np.flatnonzero((n - chain_arr) * direction < gamma)
            k = int(within[0])
            alpha = cum[k]
            if chain_arr[k] != n:
                alpha += _edge_arg(data, d, n, chain_arr[k])
                stats["max_hops"] = max(stats["max_hops"], k + 1)
            else:
                stats["max_hops"] = max(stats["max_hops"], k)
            alphas[pos] = _wrap(alpha)
    coeffs = a_used * np.exp(1j * alphas)
    return indices, coeffs, stats
