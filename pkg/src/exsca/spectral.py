"""Synthetic signals, pattern sampling and the lag-averaged correlogram.

The signal is a sum of exponentials ``a_k exp(j(pi f_k t + phi))`` whose
phases are redrawn for every snapshot (one period of the sampling pattern),
plus optional circular complex Gaussian noise.  With ``real=True`` the
exponentials become cosines, which puts each peak at ``+f`` and ``-f``.
"""
import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .closedform import DEFAULT_GRID, frequency_grid
from .diffset import WeightFunction, weight_function
from .geometry import ElementSet


@dataclass(frozen=True)
class SignalModel:
    """Line-spectrum signal model.

    Attributes
    ----------
    peaks : sequence of float
        Normalized frequencies in units of pi, strictly inside ``(0, 1)``.
    amplitudes : sequence of float, optional
        Per-peak amplitudes (default all ones).
    noise_variance : float
        Variance of additive circular complex Gaussian noise.
    seed : int
        Seed for phases and noise.
    real : bool
        Use ``a cos(pi f t + phi)`` instead of complex exponentials.
    """

    peaks: tuple
    amplitudes: Optional[tuple] = None
    noise_variance: float = 0.0
    seed: int = 0
    real: bool = False

    def __post_init__(self):
        peaks = tuple(float(p) for p in self.peaks)
        if not peaks:
            raise ValueError("signal model needs at least one peak")
        if any(not 0.0 < p < 1.0 for p in peaks):
            raise ValueError("peaks must lie strictly inside (0, 1)")
        amps = self.amplitudes
        amps = tuple(1.0 for _ in peaks) if amps is None else tuple(float(a) for a in amps)
        if len(amps) != len(peaks):
            raise ValueError("one amplitude per peak required")
        if any(a <= 0 for a in amps):
            raise ValueError("amplitudes must be positive")
        if self.noise_variance < 0:
            raise ValueError("noise variance must be non-negative")
        object.__setattr__(self, "peaks", peaks)
        object.__setattr__(self, "amplitudes", amps)

    def with_seed(self, seed):
        return SignalModel(self.peaks, self.amplitudes, self.noise_variance, seed, self.real)

    def autocorrelation(self, lags):
        """Theoretical ``E[x(t+l) conj(x(t))]`` of the noise-free model."""
        lags = np.asarray(lags, dtype=float)
        out = np.zeros(lags.shape, dtype=complex)
        for f, a in zip(self.peaks, self.amplitudes):
            if self.real:
                out += a ** 2 / 2 * np.cos(np.pi * f * lags)
            else:
                out += a ** 2 * np.exp(1j * np.pi * f * lags)
        return out


def generate_signal(model: SignalModel, total_length, period=None):
    """Nyquist-rate samples ``x(0..total_length-1)``.

    Phases are redrawn every ``period`` samples (once if ``period`` is None).
    The same model and seed always give the same array.
    """
    if total_length < 1:
        raise ValueError("total_length must be positive")
    period = total_length if period is None else int(period)
    rng = np.random.default_rng(model.seed)
    blocks = -(-total_length // period)
    t = np.arange(total_length)
    block = t // period
    x = np.zeros(total_length, dtype=complex)
    phases = rng.uniform(0.0, 2 * np.pi, size=(blocks, len(model.peaks)))
    for k, (f, a) in enumerate(zip(model.peaks, model.amplitudes)):
        arg = np.pi * f * t + phases[block, k]
        x += a * (np.cos(arg) if model.real else np.exp(1j * arg))
    if model.noise_variance > 0:
        scale = np.sqrt(model.noise_variance / 2)
        x += scale * (rng.standard_normal(total_length) + 1j * rng.standard_normal(total_length))
    return x


@dataclass(frozen=True, eq=False)
class SnapshotSet:
    """``samples[k, i]`` is the value at ``positions[i] + k * period``."""

    period: int
    positions: np.ndarray
    samples: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.int64)
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 2 or samples.shape[1] != pos.size:
            raise ValueError("samples must be K x len(positions)")
        if samples.shape[0] < 1:
            raise ValueError("need at least one snapshot")
        if pos.size and (pos.min() < 0 or pos.max() >= self.period):
            raise ValueError("positions must lie within one period")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "samples", samples)

    @property
    def K(self):
        return self.samples.shape[0]


def sample_pattern(signal, union: ElementSet, K, period=None):
    """Pick the pattern positions out of ``K`` consecutive periods of ``signal``."""
    pos = np.asarray(list(union), dtype=np.int64)
    period = int(pos.max()) + 1 if period is None else int(period)
    signal = np.asarray(signal)
    if K < 1:
        raise ValueError("K must be at least 1")
    if signal.size < K * period:
        raise ValueError(f"signal has {signal.size} samples, need {K * period}")
    idx = pos[None, :] + period * np.arange(K)[:, None]
    return SnapshotSet(period, pos, signal[idx])


@dataclass(frozen=True, eq=False)
class LagEstimate:
    """Autocorrelation estimates on the lags where ``weights`` is non-zero."""

    lags: np.ndarray
    values: np.ndarray
    weights: WeightFunction

    def as_dict(self):
        return {int(l): complex(v) for l, v in zip(self.lags, self.values)}

    def __call__(self, lag):
        i = np.searchsorted(self.lags, lag)
        if i < self.lags.size and self.lags[i] == lag:
            return complex(self.values[i])
        return 0j


def estimate_autocorrelation(snap: SnapshotSet, z: Optional[WeightFunction] = None):
    """``r(l) = 1/(K z(l)) * sum_k sum_{a-b=l} x_k(a) conj(x_k(b))``; holes are skipped."""
    pos = snap.positions
    if z is None:
        z = weight_function(ElementSet(pos))
    diffs = np.subtract.outer(pos, pos).ravel()
    lmax = z.lmax
    if np.abs(diffs).max(initial=0) > lmax:
        raise ValueError("weight function does not cover the pattern's lags")
    products = (snap.samples[:, :, None] * np.conj(snap.samples[:, None, :])).sum(axis=0).ravel()
    acc = np.zeros(2 * lmax + 1, dtype=complex)
    np.add.at(acc, diffs + lmax, products)
    # mirror the non-negative side so r(-l) = conj(r(l)) holds bit for bit
    acc[:lmax] = np.conj(acc[:lmax:-1])
    acc[lmax] = acc[lmax].real
    counts = z.counts
    if not np.array_equal(np.bincount(diffs + lmax, minlength=2 * lmax + 1), counts):
        raise ValueError("weight function was not derived from this pattern")
    keep = counts > 0
    values = acc[keep] / (snap.K * counts[keep])
    return LagEstimate(z.lags[keep], values, z)


@dataclass(frozen=True, eq=False)
class Spectrum:
    freqs: np.ndarray
    power: np.ndarray
    peaks: tuple = field(default=())

    def to_csv(self):
        """CSV text with columns ``f,power``."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["f", "power"])
        for f, p in zip(self.freqs, self.power):
            writer.writerow([repr(float(f)), repr(float(p))])
        return buf.getvalue()

    def restrict(self, lo, hi):
        keep = (self.freqs >= lo) & (self.freqs <= hi)
        return Spectrum(self.freqs[keep], self.power[keep])


def lag_transform(lags, values, grid_size=DEFAULT_GRID):
    """``sum_l v(l) exp(-j pi f l)`` on ``f = 2k/G`` via one length-``G`` FFT."""
    folded = np.zeros(grid_size, dtype=complex)
    np.add.at(folded, np.asarray(lags) % grid_size, values)
    return np.fft.fft(folded)


def correlogram(est: LagEstimate, grid_size=DEFAULT_GRID):
    """Power ``Re sum_l r(l) exp(-j pi f l)`` over the available lags."""
    freqs = frequency_grid(grid_size)
    power = lag_transform(est.lags, est.values, grid_size).real
    return Spectrum(freqs, power)


def local_maxima(power, circular=True):
    """Indices ``i`` with ``p[i] > p[i-1]`` and ``p[i] >= p[i+1]``."""
    p = np.asarray(power)
    if circular:
        prev, nxt = np.roll(p, 1), np.roll(p, -1)
        return np.flatnonzero((p > prev) & (p >= nxt))
    inner = np.flatnonzero((p[1:-1] > p[:-2]) & (p[1:-1] >= p[2:])) + 1
    return inner


def find_peaks(spec: Spectrum, count, band=None):
    """Locations of the ``count`` largest local maxima, ascending.

    ``band=(lo, hi)`` keeps only maxima with ``lo <= f <= hi``.  Maxima are
    taken on the full circular grid so a band edge never creates a fake peak.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    idx = local_maxima(spec.power, circular=_is_full_circle(spec.freqs))
    if band is not None:
        lo, hi = band
        f = spec.freqs[idx]
        idx = idx[(f >= lo) & (f <= hi)]
    if idx.size < count:
        found = sorted(float(x) for x in spec.freqs[idx])
        raise PeakCountError(count, found)
    order = np.argsort(-spec.power[idx], kind="stable")
    return sorted(float(spec.freqs[i]) for i in idx[order[:count]])


def count_peaks(spec: Spectrum, band=None):
    idx = local_maxima(spec.power, circular=_is_full_circle(spec.freqs))
    if band is not None:
        f = spec.freqs[idx]
        idx = idx[(f >= band[0]) & (f <= band[1])]
    return int(idx.size)


def _is_full_circle(freqs):
    if len(freqs) < 2:
        return False
    step = freqs[1] - freqs[0]
    return np.isclose(freqs[0], 0.0) and np.isclose(freqs[-1] + step, 2.0)


class PeakCountError(ValueError):
    def __init__(self, wanted, found):
        self.wanted = wanted
        self.found = found
        super().__init__(f"asked for {wanted} peaks, found {len(found)}: {found}")


def peak_band(peaks, margin=0.05):
    """Analysis band ``[0, max(peaks) + margin]`` clipped to ``[0, 1]``."""
    return (0.0, min(1.0, max(peaks) + margin))


def peak_error(found: Sequence[float], truth: Sequence[float]):
    """Mean absolute difference between sorted peak lists."""
    if len(found) != len(truth):
        raise ValueError(f"length mismatch: {len(found)} vs {len(truth)}")
    return float(np.mean(np.abs(np.sort(found) - np.sort(truth))))


def estimate_spectrum(union: ElementSet, period, model: SignalModel, K,
                      grid_size=DEFAULT_GRID, z=None):
    """Generate, sample, estimate and transform in one call."""
    x = generate_signal(model, K * period, period)
    snap = sample_pattern(x, union, K, period)
    est = estimate_autocorrelation(snap, z)
    return correlogram(est, grid_size)


def monte_carlo_peak_error(union: ElementSet, period, model: SignalModel, K=10,
                           trials=100, seed=0, grid_size=DEFAULT_GRID, band=(0.0, 1.0)):
    """Mean peak-location error over seeded independent trials.

    Trial ``t`` uses seed ``seed + t``.  Returns ``(mean_error, failures)``
    where ``failures`` counts trials with too few peaks in ``band`` (those
    are left out of the mean).
    """
    z = weight_function(union)
    truth = sorted(model.peaks)
    errors = []
    failures = 0
    for t in range(trials):
        spec = estimate_spectrum(union, period, model.with_seed(seed + t), K, grid_size, z)
        try:
            found = find_peaks(spec, len(truth), band)
        except PeakCountError:
            failures += 1
            continue
        errors.append(peak_error(found, truth))
    mean = float(np.mean(errors)) if errors else float("nan")
    return mean, failures
