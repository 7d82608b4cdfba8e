"""Separable multi-dimensional sampling patterns built as outer products.

A pattern in ``eta`` dimensions is ``p(k_1) x p(k_2) x ... x p(k_eta)``; its
weight function and bias window are the outer products of the 1D ones.
Mixing a Nyquist factor with a sparse factor gives a hybrid pattern.
"""
import csv
import io
import json
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy import signal as sps

from .closedform import DEFAULT_GRID, BiasWindow, frequency_grid
from .diffset import weight_function
from .geometry import ElementSet


@dataclass(frozen=True, eq=False)
class Pattern1D:
    indicator: np.ndarray
    label: str = ""

    def __post_init__(self):
        ind = np.asarray(self.indicator).astype(np.int64)
        if ind.ndim != 1 or ind.size == 0:
            raise ValueError("indicator must be a non-empty 1D sequence")
        if not np.all((ind == 0) | (ind == 1)):
            raise ValueError("indicator must be binary")
        if ind.sum() == 0:
            raise ValueError("pattern has no samples")
        ind.setflags(write=False)
        object.__setattr__(self, "indicator", ind)

    @property
    def period(self):
        return self.indicator.size

    @property
    def positions(self):
        return np.flatnonzero(self.indicator)

    def weight(self):
        return weight_function(ElementSet(self.positions))


@dataclass(frozen=True, eq=False)
class PatternND:
    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if len(factors) < 2:
            raise ValueError("a multi-dimensional pattern needs at least two factors")
        object.__setattr__(self, "factors", factors)

    @property
    def dims(self):
        return len(self.factors)

    @property
    def shape(self):
        return tuple(f.period for f in self.factors)

    @property
    def array(self):
        """Dense indicator ``p(k_1, ..., k_eta)``."""
        return reduce(np.multiply.outer, [f.indicator for f in self.factors])

    def extend(self, factor):
        """Add one more dimension: ``p^(eta) = p^(eta-1) x p^1D``."""
        return PatternND(self.factors + (factor,))


def outer(*factors):
    return PatternND(factors)


def nyquist_pattern(length):
    if length < 1:
        raise ValueError("length must be at least 1")
    return Pattern1D(np.ones(length, dtype=np.int64), "nyquist")


def pattern_from_union(union: ElementSet, period, label=""):
    pos = np.asarray(list(union), dtype=np.int64)
    if pos.size == 0:
        raise ValueError("empty union")
    if pos.min() < 0 or pos.max() >= period:
        raise ValueError(f"positions must lie in [0, {period})")
    ind = np.zeros(period, dtype=np.int64)
    ind[pos] = 1
    return Pattern1D(ind, label)


def weight_nd(p: PatternND):
    """Direct autocorrelation of the dense indicator (lag 0 at the centre)."""
    arr = p.array
    return sps.correlate(arr, arr, mode="full", method="direct").astype(np.int64)


def weight_outer(p: PatternND):
    """Outer product of the factors' 1D weight functions, padded to full lag range."""
    pieces = []
    for f in p.factors:
        z = f.weight()
        full = np.zeros(2 * f.period - 1, dtype=np.int64)
        centre = f.period - 1
        full[centre - z.lmax:centre + z.lmax + 1] = z.counts
        pieces.append(full)
    return reduce(np.multiply.outer, pieces)


def _lag_axes(shape):
    """Lag values along each axis of a full correlation array."""
    return [np.arange(n) - (n - 1) // 2 for n in shape]


def dtft_nd(weights, grid_size=DEFAULT_GRID):
    """``sum_l w(l) exp(-j pi f.l)`` on the product grid, lag 0 at array centre."""
    weights = np.asarray(weights)
    folded = np.zeros((grid_size,) * weights.ndim, dtype=complex)
    idx = np.ix_(*[lags % grid_size for lags in _lag_axes(weights.shape)])
    np.add.at(folded, idx, weights)
    return np.fft.fftn(folded)


def simulated_bias_nd(p: PatternND, grid_size=256):
    """Transform of the directly computed multi-D weights (real part)."""
    return dtft_nd(weight_nd(p), grid_size).real


def bias_nd(windows):
    """Outer product of 1D bias windows sharing one grid."""
    windows = list(windows)
    if len(windows) < 2:
        raise ValueError("need at least two windows")
    size = windows[0].grid_size
    if any(w.grid_size != size for w in windows):
        raise ValueError("windows are on different grids")
    return reduce(np.multiply.outer, [np.asarray(w.values) for w in windows])


def nyquist_bias(length, grid_size=DEFAULT_GRID):
    """Window of a full Nyquist factor: the Fejer kernel ``(sin(L pi f/2) / sin(pi f/2))**2``."""
    from .closedform import dirichlet_ratio
    f = frequency_grid(grid_size)
    return BiasWindow(f, dirichlet_ratio(f / 2, length) ** 2)


def peak_normalize(arr):
    arr = np.asarray(arr, dtype=float)
    return arr / arr.max()


# -- 2D signals and estimation ----------------------------------------------

@dataclass(frozen=True)
class SignalModel2D:
    """Sum of plane waves ``a exp(j pi (f1 t1 + f2 t2) + j phi)``, phases redrawn per snapshot."""

    peaks: tuple
    amplitudes: tuple = None
    noise_variance: float = 0.0
    seed: int = 0

    def __post_init__(self):
        peaks = tuple(tuple(float(v) for v in p) for p in self.peaks)
        if not peaks:
            raise ValueError("signal model needs at least one peak")
        for p in peaks:
            if len(p) < 2 or any(not 0.0 <= v < 1.0 for v in p) or not any(p):
                raise ValueError(f"bad peak {p}: components must be in [0, 1), not all zero")
        amps = tuple(1.0 for _ in peaks) if self.amplitudes is None else tuple(self.amplitudes)
        if len(amps) != len(peaks) or any(a <= 0 for a in amps):
            raise ValueError("one positive amplitude per peak required")
        object.__setattr__(self, "peaks", peaks)
        object.__setattr__(self, "amplitudes", amps)

    def with_seed(self, seed):
        return SignalModel2D(self.peaks, self.amplitudes, self.noise_variance, seed)


def generate_snapshots_nd(model: SignalModel2D, shape, K):
    """``K`` snapshots of the field on a dense ``shape`` grid (one period per axis)."""
    if K < 1:
        raise ValueError("K must be at least 1")
    shape = tuple(shape)
    if any(len(p) != len(shape) for p in model.peaks):
        raise ValueError("peak dimension does not match pattern dimension")
    rng = np.random.default_rng(model.seed)
    grids = np.meshgrid(*[np.arange(n) for n in shape], indexing="ij")
    phases = rng.uniform(0.0, 2 * np.pi, size=(K, len(model.peaks)))
    out = np.zeros((K,) + shape, dtype=complex)
    for i, (p, a) in enumerate(zip(model.peaks, model.amplitudes)):
        arg = np.pi * sum(f * g for f, g in zip(p, grids))
        out += a * np.exp(1j * (arg[None, ...] + phases[:, i].reshape((K,) + (1,) * len(shape))))
    if model.noise_variance > 0:
        scale = np.sqrt(model.noise_variance / 2)
        out += scale * (rng.standard_normal(out.shape) + 1j * rng.standard_normal(out.shape))
    return out


@dataclass(frozen=True, eq=False)
class SpectrumND:
    freqs: np.ndarray
    power: np.ndarray
    peaks: tuple = field(default=())

    def to_csv(self):
        """CSV triples ``i,j,value`` (2D only)."""
        if self.power.ndim != 2:
            raise ValueError("CSV triples are defined for 2D spectra")
        return array_to_csv(self.power)

    def to_json(self):
        return json.dumps({"freqs": self.freqs.tolist(), "power": self.power.tolist()})


def array_to_csv(arr):
    """Rows ``i,j,value`` for a 2D array."""
    arr = np.asarray(arr)
    if arr.ndim != 2:
        raise ValueError("expected a 2D array")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "j", "value"])
    for (i, j), v in np.ndenumerate(arr):
        writer.writerow([i, j, repr(float(v))])
    return buf.getvalue()


def periodogram_2d(samples, pattern: PatternND, grid_size=256):
    """Lag-averaged correlogram of multi-D snapshots sampled on ``pattern``.

    ``samples`` has shape ``(K,) + pattern.shape``; values off the pattern are
    ignored.  Each available lag is averaged over its ``K z(l)`` products and
    holes contribute nothing.
    """
    samples = np.asarray(samples)
    if samples.shape[1:] != pattern.shape:
        raise ValueError(f"samples shape {samples.shape[1:]} does not match pattern {pattern.shape}")
    mask = pattern.array
    z = weight_nd(pattern)
    K = samples.shape[0]
    full = tuple(2 * n - 1 for n in pattern.shape)
    acc = np.zeros(full, dtype=complex)
    for k in range(K):
        x = samples[k] * mask
        acc += sps.correlate(x, x, mode="full", method="fft")
    r = np.zeros(full, dtype=complex)
    avail = z > 0
    r[avail] = acc[avail] / (K * z[avail])
    power = dtft_nd(r, grid_size).real
    freqs = frequency_grid(grid_size)
    return SpectrumND(freqs, power)


def find_peaks_nd(spec: SpectrumND, count, box=None):
    """Largest ``count`` strict local maxima (full 8-neighbourhood in 2D, circular).

    Returns frequency tuples sorted ascending.  ``box`` is a per-axis list of
    ``(lo, hi)`` limits.
    """
    p = spec.power
    is_max = np.ones(p.shape, dtype=bool)
    for shift in np.ndindex(*(3,) * p.ndim):
        offset = tuple(s - 1 for s in shift)
        if not any(offset):
            continue
        neighbour = np.roll(p, offset, axis=tuple(range(p.ndim)))
        # strict against earlier neighbours, non-strict against later ones
        if offset > (0,) * p.ndim:
            is_max &= p >= neighbour
        else:
            is_max &= p > neighbour
    idx = np.argwhere(is_max)
    f = spec.freqs
    if box is not None:
        keep = np.ones(len(idx), dtype=bool)
        for axis, (lo, hi) in enumerate(box):
            keep &= (f[idx[:, axis]] >= lo) & (f[idx[:, axis]] <= hi)
        idx = idx[keep]
    if len(idx) < count:
        raise ValueError(f"asked for {count} peaks, found {len(idx)}")
    order = np.argsort(-p[tuple(idx.T)], kind="stable")[:count]
    return sorted(tuple(float(f[i]) for i in idx[j]) for j in order)


def signed_frequency(f):
    """Map ``[0, 2)`` to ``[-1, 1)``."""
    f = np.asarray(f, dtype=float)
    return np.where(f >= 1.0, f - 2.0, f)


