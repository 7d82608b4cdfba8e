"""Brute-force difference-set analytics.

Everything here is computed by direct enumeration of element pairs and serves
as ground truth for the closed-form expressions in :mod:`exsca.closedform`.
"""
import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import ElementSet


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Contributor count ``z(l)`` on the dense lag range ``[-lmax, lmax]``.

    ``counts[i]`` is the weight at lag ``lags[i] = i - lmax``.
    """

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size % 2 == 0:
            raise ValueError("counts must be a 1D array of odd length centred on lag 0")
        if np.any(counts < 0):
            raise ValueError("weights must be non-negative")
        counts = _trim(counts)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_mapping(cls, mapping):
        if not mapping:
            return cls(np.zeros(1, dtype=np.int64))
        lmax = max(abs(int(l)) for l in mapping)
        counts = np.zeros(2 * lmax + 1, dtype=np.int64)
        for l, c in mapping.items():
            counts[int(l) + lmax] += c
        return cls(counts)

    @property
    def lmax(self):
        return (self.counts.size - 1) // 2

    @property
    def lags(self):
        return np.arange(-self.lmax, self.lmax + 1)

    def __call__(self, lag):
        lag = np.asarray(lag)
        inside = np.abs(lag) <= self.lmax
        idx = np.where(inside, lag + self.lmax, 0)
        return np.where(inside, self.counts[idx], 0)

    def __eq__(self, other):
        if not isinstance(other, WeightFunction):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return f"WeightFunction(lmax={self.lmax}, z0={int(self.counts[self.lmax])})"

    @property
    def support(self):
        """Lags with non-zero weight."""
        return self.lags[self.counts > 0]

    def to_dict(self):
        return {int(l): int(c) for l, c in zip(self.lags, self.counts) if c}

    def downsample(self, factor):
        """``z(factor * l)`` as a new weight function."""
        lags = self.lags
        keep = lags % factor == 0
        return WeightFunction(self.counts[keep])

    def to_csv(self):
        """CSV text with columns ``lag,count`` over the full lag range."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lag", "count"])
        for l, c in zip(self.lags, self.counts):
            writer.writerow([int(l), int(c)])
        return buf.getvalue()


def _trim(counts):
    nz = np.flatnonzero(counts)
    if nz.size == 0:
        return np.zeros(1, dtype=np.int64)
    centre = (counts.size - 1) // 2
    reach = int(max(abs(nz[0] - centre), abs(nz[-1] - centre)))
    return counts[centre - reach:centre + reach + 1].copy()


def self_differences(sub):
    """All ordered differences ``a - b`` within one subarray (with multiplicity)."""
    pos = np.asarray(list(sub), dtype=np.int64)
    if pos.size == 0:
        raise ValueError("empty subarray")
    return np.sort(np.subtract.outer(pos, pos).ravel())


def positive_self_set(sub):
    """Distinct non-negative self differences, e.g. ``{0, 8, 16}``."""
    d = self_differences(sub)
    return set(int(x) for x in d[d >= 0])


def self_difference_set(*subs):
    """Distinct self differences ``L_S`` over one or more subarrays."""
    out = set()
    for sub in subs:
        out.update(int(x) for x in self_differences(sub))
    return out


@dataclass(frozen=True, eq=False)
class CrossDifferenceTable:
    """``values[n, m] = sub1[n] - sub2[m]``; rows index the fixed subarray."""

    values: np.ndarray

    @property
    def plus(self):
        """Distinct values of the positive cross set ``L+_C``."""
        return set(int(x) for x in self.values.ravel())

    @property
    def minus(self):
        return {-x for x in self.plus}

    @property
    def full(self):
        """``L_C = L+_C | L-_C``."""
        return self.plus | self.minus

    @property
    def is_unique(self):
        return len(self.plus) == self.values.size

    @property
    def extremes(self):
        return int(self.values.min()), int(self.values.max())

    def locate(self, value):
        """All ``(n, m)`` index pairs that produce ``value``."""
        return [tuple(int(i) for i in ix) for ix in np.argwhere(self.values == value)]


def cross_differences(sub1, sub2):
    p1 = np.asarray(list(sub1), dtype=np.int64)
    p2 = np.asarray(list(sub2), dtype=np.int64)
    return CrossDifferenceTable(np.subtract.outer(p1, p2))


def weight_function(union: ElementSet):
    """Weight function of a pattern: ordered pairs ``(a, b)`` with ``a - b = l``."""
    pos = np.asarray(list(union), dtype=np.int64)
    if pos.size == 0:
        raise ValueError("empty pattern")
    diffs = np.subtract.outer(pos, pos).ravel()
    lmax = int(np.abs(diffs).max())
    return WeightFunction(np.bincount(diffs + lmax, minlength=2 * lmax + 1))


class MirrorPairSet(frozenset):
    """Lags ``l`` with both ``l`` and ``-l`` in ``L+_C``."""


def mirror_pair_set(table: CrossDifferenceTable):
    plus = table.plus
    return MirrorPairSet(l for l in plus if -l in plus)


def nonmirror_set(table: CrossDifferenceTable, self_set=()):
    """``L_np``: cross differences without a mirror partner, minus self differences."""
    lp = mirror_pair_set(table)
    return set(table.full) - set(lp) - set(self_set)


def continuous_range(z: WeightFunction):
    """Largest ``c`` with ``z(l) > 0`` for all ``|l| <= c``."""
    if z(0) <= 0:
        raise ValueError("z(0) must be positive")
    c = 0
    while c + 1 <= z.lmax and z(c + 1) > 0 and z(-(c + 1)) > 0:
        c += 1
    return c


class LagStatistics(NamedTuple):
    unique_count: int
    holes: list
    extremes: tuple


def lag_statistics(z: WeightFunction):
    lags = z.lags
    present = z.counts > 0
    return LagStatistics(
        unique_count=int(present.sum()),
        holes=[int(l) for l in lags[~present]],
        extremes=(-z.lmax, z.lmax),
    )


def analysis_record(z: WeightFunction):
    """JSON-ready summary of a weight function."""
    stats = lag_statistics(z)
    return {
        "unique_count": stats.unique_count,
        "continuous_range": continuous_range(z),
        "extremes": list(stats.extremes),
        "holes": stats.holes,
        "z0": int(z(0)),
        "weights": {str(k): v for k, v in z.to_dict().items()},
    }
