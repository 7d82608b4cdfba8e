"""Analytic weight functions, bias windows and coarray counts.

Frequencies are normalized, ``f = omega / pi``, on a uniform grid of ``G``
points over ``[0, 2)``.  Bias windows carry an arbitrary positive scale
(``s_b``, default 1); compare them after peak normalization.
"""
import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .diffset import WeightFunction
from .geometry import (ApcaConfig, ExscaConfig, GeneralizedConfig, detect_overlap,
                       pivot_location, positions_generalized)

DEFAULT_GRID = 4096


class ClosedFormInapplicable(ValueError):
    """Raised when an overlap-free closed form is asked about an overlapping pattern."""

    def __init__(self, overlaps):
        self.overlaps = list(overlaps)
        where = ", ".join(str(p) for p, _ in self.overlaps)
        super().__init__(f"closed form requires disjoint subarrays; overlaps at {where}")


def frequency_grid(grid_size=DEFAULT_GRID):
    """``f_k = 2k/G`` for ``k = 0..G-1`` (units of pi rad/sample)."""
    if grid_size < 2 or grid_size % 2:
        raise ValueError("grid size must be a positive even integer")
    return 2.0 * np.arange(grid_size) / grid_size


@dataclass(frozen=True, eq=False)
class BiasWindow:
    freqs: np.ndarray
    values: np.ndarray
    normalization: str = "raw"

    def __post_init__(self):
        if self.normalization not in ("raw", "peak_unit"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if np.shape(self.freqs) != np.shape(self.values):
            raise ValueError("freqs and values differ in shape")

    @property
    def grid_size(self):
        return len(self.freqs)

    def normalized(self):
        peak = np.max(self.values)
        if peak <= 0:
            raise ValueError("window has no positive peak")
        return BiasWindow(self.freqs, self.values / peak, "peak_unit")

    def at(self, f):
        """Value at the grid point nearest to ``f`` (wrapping modulo 2)."""
        k = int(round((f % 2.0) * self.grid_size / 2)) % self.grid_size
        return float(self.values[k])

    def to_csv(self):
        """CSV text with columns ``f,value,normalized``."""
        norm = self.normalized().values
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["f", "value", "normalized"])
        for f, v, n in zip(self.freqs, self.values, norm):
            writer.writerow([repr(float(f)), repr(float(v)), repr(float(n))])
        return buf.getvalue()


def max_abs_deviation(a, b):
    """Largest pointwise gap between two windows after peak normalization."""
    if a.grid_size != b.grid_size:
        raise ValueError("windows are on different grids")
    return float(np.max(np.abs(a.normalized().values - b.normalized().values)))


# -- fold function ----------------------------------------------------------

def fold(x, X):
    """Distance of index ``x`` to the nearer end of ``[0, X-1]``."""
    if not 0 <= x <= X - 1:
        raise ValueError(f"index {x} outside [0, {X - 1}]")
    return x if x <= (X - 1) // 2 else X - 1 - x


def fold_table(X):
    return [fold(x, X) for x in range(X)]


# -- Dirichlet ratio --------------------------------------------------------

def dirichlet_ratio(t, L):
    """``sin(L pi t) / sin(pi t)`` with the removable poles filled in.

    The argument is reduced to ``t = k + delta`` with integer ``k``, so the
    ratio becomes ``(-1)**(k (L-1)) sin(L pi delta) / sin(pi delta)``, which
    is well conditioned near the poles and equals ``L (-1)**(k (L-1))`` on them.
    """
    t = np.asarray(t, dtype=float)
    k = np.rint(t)
    delta = np.pi * (t - k)
    sign = np.where((k.astype(np.int64) * (L - 1)) % 2 == 0, 1.0, -1.0)
    small = np.abs(delta) < 1e-12
    safe = np.where(small, 1.0, delta)
    ratio = np.where(small, float(L), np.sin(L * safe) / np.sin(safe))
    return sign * ratio


# -- weight functions -------------------------------------------------------

def _accumulate(items):
    out = {}
    for lag, count in items:
        out[lag] = out.get(lag, 0) + count
    return out


def _abs_delta(lag):
    """Lags hit by ``delta(|l| - |lag|)``."""
    lag = abs(int(lag))
    return [(0, 1)] if lag == 0 else [(lag, 1), (-lag, 1)]


def weight_closed_exsca(M, N, s, n_p=None, m_p=None, ex=2):
    """Weight function from the four-term (self, self, cross, pivot) expression.

    The pivot correction only applies when subarrays share an element; when
    ``n_p``/``m_p`` are not supplied they are located from the geometry.
    """
    if n_p is None or m_p is None:
        pivot = pivot_location(ExscaConfig(M, N, s, ex=ex, displaced=True))
        if pivot is not None:
            n_p, m_p = pivot
    items = []
    for n in range(-(N - 1), N):
        items.append((ex * M * n, N - abs(n)))
    for m in range(-(M - 1), M):
        items.append((ex * N * m, M - abs(m)))
    for n in range(N):
        for m in range(M):
            items.extend(_abs_delta(ex * M * n - (ex * N * m + s)))
    if n_p is not None and m_p is not None:
        for m in range(M):
            items.extend((l, -c) for l, c in _abs_delta(ex * M * n_p - (ex * N * m + s)))
        for n in range(N):
            items.extend((l, -c) for l, c in _abs_delta(ex * M * n - (ex * N * m_p + s)))
    return WeightFunction.from_mapping(_accumulate(items))


def mirror_pairs_characterized(M, N, s, ex=2):
    """Mirror-pair lags from the index condition ``M(n1+n2) = N(m1+m2) + s``.

    Stated for general ``ex`` as ``ex M (n1+n2) = ex N (m1+m2) + 2s``; the
    ``n1 = m1 = s = 0`` origin case is included explicitly.
    """
    out = set()
    for n1 in range(N):
        for m1 in range(M):
            l = ex * M * n1 - (ex * N * m1 + s)
            if n1 == 0 and m1 == 0 and s == 0:
                out.add(l)
                continue
            for n2 in range(N):
                if n1 + n2 == 0:
                    continue
                for m2 in range(M):
                    if ex * M * (n1 + n2) == ex * N * (m1 + m2) + 2 * s:
                        out.add(l)
    return out


class ExscaSets(NamedTuple):
    self_set: set
    cross: set
    mirror: set
    nonmirror: set


def exsca_sets(M, N, s, ex=2):
    """``L_S``, ``L_C``, ``L_p`` and ``L_np`` built from the index formulas."""
    n = np.arange(N)
    m = np.arange(M)
    self_plus = set((ex * M * n).tolist()) | set((ex * N * m).tolist())
    self_set = self_plus | {-x for x in self_plus}
    table = np.subtract.outer(ex * M * n, ex * N * m + s)
    plus = set(int(x) for x in table.ravel())
    cross = plus | {-x for x in plus}
    mirror = {l for l in plus if -l in plus}
    nonmirror = cross - mirror - self_set
    return ExscaSets(self_set, cross, mirror, nonmirror)


def weight_piecewise_exsca(M, N, s, ex=2):
    """Weight function assembled case by case from the lag classes.

    Self lags get triangular weights, ``l = 0`` gets ``M + N`` (or ``M + N - 1``
    when a pivot is shared), mirror pairs get 2 and the remaining cross lags 1.
    """
    sets = exsca_sets(M, N, s, ex)
    shared = pivot_location(ExscaConfig(M, N, s, ex=ex, displaced=True)) is not None
    z = {}
    for l in sets.mirror - sets.self_set:
        z[l] = 2
    for l in sets.cross - sets.mirror - sets.self_set:
        z[l] = 1
    for n in range(1, N):
        z[ex * M * n] = z[-ex * M * n] = N - n
    for m in range(1, M):
        z[ex * N * m] = z[-ex * N * m] = M - m
    z[0] = M + N - 1 if shared else M + N
    return WeightFunction.from_mapping(z)


def weight_closed_generalized(cfg: GeneralizedConfig, check_overlap=True):
    """Generalized weight: triangular self terms plus pairwise cross terms.

    Raises :class:`ClosedFormInapplicable` when subarrays overlap, unless
    ``check_overlap`` is False (the raw expression is then returned as is).
    """
    if check_overlap:
        subs, _ = positions_generalized(cfg)
        overlaps = detect_overlap(subs)
        if overlaps:
            raise ClosedFormInapplicable(overlaps)
    items = []
    for spec in cfg.subarrays:
        L = spec.size
        for n in range(-(L - 1), L):
            items.append((spec.step * n, L - abs(n)))
    for i, a in enumerate(cfg.subarrays):
        for b in cfg.subarrays[i + 1:]:
            diffs = np.subtract.outer(a.positions(), b.positions()).ravel()
            for d in diffs:
                items.extend(_abs_delta(d))
    return WeightFunction.from_mapping(_accumulate(items))


# -- ranges and counts ------------------------------------------------------

class CrossRanges(NamedTuple):
    plus: tuple
    minus: tuple
    cross_extent: int
    full_extent: int


def cross_ranges(M, N, s, ex=2):
    """Extremes of ``L+_C``, ``L-_C`` and the half-widths of ``L_C`` and ``L``.

    For ``ex = 2`` the ``L_C`` half-width is ``2N(M-1)+s`` when ``M+s > N`` and
    ``2M(N-1)-s`` when ``N > M+s``.
    """
    hi_plus = ex * M * (N - 1) - s
    lo_plus = -(ex * N * (M - 1) + s)
    if ex * (M - N) + 2 * s > 0:
        r_c = ex * N * (M - 1) + s
    else:
        r_c = ex * M * (N - 1) - s
    r_l = max(r_c, ex * M * (N - 1), ex * N * (M - 1))
    return CrossRanges((lo_plus, hi_plus), (-hi_plus, -lo_plus), r_c, r_l)


def apca_ranges(M, N, s):
    """APCA extremes: ``L_C`` at ``max(M(N-1)-s, N(M-1)+s)``, ``L`` also covering ``M(N-1)``."""
    r_c = max(M * (N - 1) - s, N * (M - 1) + s)
    return r_c, max(r_c, M * (N - 1))


def unique_count_exsca(M, N, s, lp_size, n_p=None, m_p=None):
    """Distinct lags of ``L = L_C | L_S`` for ``ex = 2``.

    Odd ``s``: ``2MN - #L_p + 2(M+N-1) - 1``.  Even ``s``:
    ``2MN - #L_p + 2(f(n_p) + f(m_p))`` with ``f`` the fold function.
    """
    if s % 2:
        return 2 * M * N - lp_size + 2 * (M + N - 1) - 1
    if n_p is None or m_p is None:
        n_p, m_p = pivot_location(ExscaConfig(M, N, s, ex=2, displaced=True))
    return 2 * M * N - lp_size + 2 * (fold(n_p, N) + fold(m_p, M))


def cross_unique_count(M, N, lp_size):
    """``#L_C = 2MN - #L_p``."""
    return 2 * M * N - lp_size


# -- bias windows -----------------------------------------------------------

def dtft_window(z: WeightFunction, grid_size=DEFAULT_GRID):
    """Transform of a weight function, ``sum_l z(l) exp(-j pi f l)``.

    On the grid ``f = 2k/G`` the kernel is periodic in ``l`` with period ``G``,
    so lags are folded modulo ``G`` and one FFT gives every sample exactly.
    """
    freqs = frequency_grid(grid_size)
    folded = np.zeros(grid_size)
    np.add.at(folded, z.lags % grid_size, z.counts)
    values = np.fft.fft(folded).real
    return BiasWindow(freqs, values)


def bias_closed_exsca(M, N, s, n_p=None, m_p=None, grid_size=DEFAULT_GRID, s_b=1.0):
    """Closed-form bias window of the ``ex = 2`` array.

    Self terms ``|sin(wMN)/sin(wM)|^2`` and ``|sin(wMN)/sin(wN)|^2``, the cross
    term ``2 cos(w(M-N+s)) sin^2(wMN) / (sin(wM) sin(wN))`` and, for even
    ``s``, the pivot correction.
    """
    f = frequency_grid(grid_size)
    dm = dirichlet_ratio(f * M, N)   # sin(wMN)/sin(wM)
    dn = dirichlet_ratio(f * N, M)   # sin(wMN)/sin(wN)
    w = dm ** 2 + dn ** 2 + 2 * np.cos(np.pi * f * (M - N + s)) * dm * dn
    if s % 2 == 0:
        if n_p is None or m_p is None:
            n_p, m_p = pivot_location(ExscaConfig(M, N, s, ex=2, displaced=True))
        pivot = (2 * dn * np.cos(np.pi * f * (2 * M * n_p - M * N + N - s))
                 + 2 * dm * np.cos(np.pi * f * (2 * N * m_p - M * N + M + s)) - 1)
        w = w - pivot
    return BiasWindow(f, w / s_b)


def bias_closed_apca(M, N, s, grid_size=DEFAULT_GRID, s_b=1.0):
    """APCA window via its ``ex = 2`` twin: ``W_A(f) = W_X(f / 2)`` with ``s_X = 2 s``."""
    n_p, m_p = pivot_location(ExscaConfig(M, N, 2 * s, ex=2, displaced=True))
    f = frequency_grid(grid_size)
    half = f / 2
    dm = dirichlet_ratio(half * M, N)
    dn = dirichlet_ratio(half * N, M)
    w = dm ** 2 + dn ** 2 + 2 * np.cos(np.pi * half * (M - N + 2 * s)) * dm * dn
    w = w - (2 * dn * np.cos(np.pi * half * (2 * M * n_p - M * N + N - 2 * s))
             + 2 * dm * np.cos(np.pi * half * (2 * N * m_p - M * N + M + 2 * s)) - 1)
    return BiasWindow(f, w / s_b)


def bias_closed_generalized(cfg: GeneralizedConfig, grid_size=DEFAULT_GRID, s_b=1.0,
                            check_overlap=True):
    """Closed-form window of a generalized configuration (disjoint subarrays only)."""
    if check_overlap:
        subs, _ = positions_generalized(cfg)
        overlaps = detect_overlap(subs)
        if overlaps:
            raise ClosedFormInapplicable(overlaps)
    f = frequency_grid(grid_size)
    kernels = [dirichlet_ratio(f * spec.step / 2, spec.size) for spec in cfg.subarrays]
    w = sum(k ** 2 for k in kernels)
    specs = cfg.subarrays
    for i in range(len(specs)):
        for k in range(i + 1, len(specs)):
            a, b = specs[i], specs[k]
            phase = (a.step * a.size - b.step * b.size - (a.step - b.step)) / 2 + (a.shift - b.shift)
            w = w + 2 * kernels[i] * kernels[k] * np.cos(np.pi * f * phase)
    return BiasWindow(f, w / s_b)


def bias_closed(cfg, grid_size=DEFAULT_GRID):
    """Pick the applicable closed form for a configuration."""
    if isinstance(cfg, ApcaConfig):
        if cfg.displaced:
            return bias_closed_generalized(GeneralizedConfig.from_exsca(cfg), grid_size)
        return bias_closed_apca(cfg.M, cfg.N, cfg.s, grid_size)
    if isinstance(cfg, ExscaConfig):
        if cfg.ex == 2 and not cfg.displaced:
            return bias_closed_exsca(cfg.M, cfg.N, cfg.s, grid_size=grid_size)
        return bias_closed_generalized(GeneralizedConfig.from_exsca(cfg), grid_size)
    return bias_closed_generalized(cfg, grid_size)


# -- relative amplitude -----------------------------------------------------

def main_lobe_bounds(values):
    """Indices of the first local minimum on each side of ``f = 0``."""
    G = len(values)
    right = 1
    while right < G and values[right] <= values[right - 1]:
        right += 1
    if right >= G:
        raise ValueError("window is flat or monotone; no side lobes")
    right -= 1
    left = G - 1
    while left > right and values[left] <= values[(left + 1) % G]:
        left -= 1
    left += 1
    return right, left


def relative_amplitude(w: BiasWindow):
    """``R = (P_m - P_s) / P_m`` from the main-lobe peak and largest side lobe."""
    values = np.asarray(w.values, dtype=float)
    G = len(values)
    right, left = main_lobe_bounds(values)
    idx = np.arange(right, left + 1)
    prev = values[(idx - 1) % G]
    nxt = values[(idx + 1) % G]
    is_peak = (values[idx] > prev) & (values[idx] >= nxt)
    if not np.any(is_peak):
        raise ValueError("no side lobe found")
    p_s = values[idx[is_peak]].max()
    p_m = values[0]
    return float((p_m - p_s) / p_m)


def comparison_record(cfg, grid_size=DEFAULT_GRID):
    """Theory-versus-enumeration summary for one configuration.

    Keys: ``config``, ``applicable``, ``max_abs_dev``, ``R``,
    ``continuous_range``, ``unique_count`` and ``overlaps``.
    """
    from .diffset import weight_function, continuous_range, lag_statistics
    from .geometry import geometry_record, positions
    subs, union = positions(cfg)
    z = weight_function(union)
    simulated = dtft_window(z, grid_size)
    record = {
        "config": geometry_record(cfg)["params"],
        "family": geometry_record(cfg)["family"],
        "unique_count": lag_statistics(z).unique_count,
        "continuous_range": continuous_range(z),
        "R": relative_amplitude(simulated),
        "overlaps": [int(p) for p, _ in detect_overlap(subs)],
    }
    try:
        theory = bias_closed(cfg, grid_size)
    except ClosedFormInapplicable:
        record.update(applicable=False, max_abs_dev=None)
    else:
        record.update(applicable=True, max_abs_dev=max_abs_deviation(theory, simulated))
    return record
