"""Element positions for co-prime array and sampler families.

All positions are integers in units of the Nyquist distance ``d``.  Three
families are supported:

* APCA: the adjustable pivot co-prime array, ``{M n}`` and ``{N m + s}``.
* ExSCA: the extremely sparse co-prime array, ``{E M n}`` and ``{E N m + s}``.
* generalized: ``q`` subarrays ``{E_i (M_i / p_i) n + s_i}`` with ``r_i N_i``
  elements each.

The first subarray is always the fixed one; the shift only moves the others.
"""
from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

import numpy as np


def validate_coprime(M, N):
    """Return True if ``(M, N)`` is a usable co-prime pair (both >= 2, gcd 1)."""
    return M >= 2 and N >= 2 and gcd(M, N) == 1


@dataclass(frozen=True)
class CoPrimePair:
    M: int
    N: int

    def __post_init__(self):
        if not validate_coprime(self.M, self.N):
            raise ValueError(f"({self.M}, {self.N}) is not a co-prime pair with M, N >= 2")


@dataclass(frozen=True)
class ApcaConfig:
    """Adjustable pivot co-prime array.

    ``s`` must lie in ``[0, N-1]`` unless ``displaced`` is set, in which case
    any ``s >= 0`` is accepted and no pivot is guaranteed.
    """

    M: int
    N: int
    s: int = 0
    displaced: bool = False

    def __post_init__(self):
        CoPrimePair(self.M, self.N)
        if self.s < 0:
            raise ValueError(f"shift must be non-negative, got {self.s}")
        if not self.displaced and self.s > self.N - 1:
            raise ValueError(f"shift {self.s} outside [0, {self.N - 1}]; set displaced=True")

    @property
    def pair(self):
        return CoPrimePair(self.M, self.N)

    ex = 1

    @property
    def period(self):
        return self.M * self.N


@dataclass(frozen=True)
class ExscaConfig:
    """Extremely sparse co-prime array with sparsity factor ``ex``.

    Canonical shifts are ``0 <= s <= ex*N - 1``.  Larger shifts (ExSCADiS,
    displaced subarrays) require ``displaced=True``.
    """

    M: int
    N: int
    s: int = 1
    ex: int = 2
    displaced: bool = False

    def __post_init__(self):
        CoPrimePair(self.M, self.N)
        if self.ex < 1:
            raise ValueError(f"sparsity factor must be >= 1, got {self.ex}")
        if self.s < 0:
            raise ValueError(f"shift must be non-negative, got {self.s}")
        if not self.displaced and self.s > self.ex * self.N - 1:
            raise ValueError(
                f"shift {self.s} outside [0, {self.ex * self.N - 1}]; set displaced=True"
            )

    @property
    def pair(self):
        return CoPrimePair(self.M, self.N)

    @property
    def period(self):
        return self.ex * self.M * self.N


@dataclass(frozen=True)
class SubarraySpec:
    """One uniform subarray of a generalized configuration.

    Parameters
    ----------
    count : int
        Elements per period, ``N_i``.
    spacing_base : int
        Uncompressed spacing ``M_i``.
    compression : int
        Divisor ``p_i`` of ``M_i``; the compressed spacing is ``M_i / p_i``.
    sparsity : int
        Sparsity factor ``E_i``.
    periods : int
        Number of periods ``r_i``; the subarray holds ``r_i * N_i`` elements.
    shift : int
        Offset ``s_i`` of the first element.
    """

    count: int
    spacing_base: int
    compression: int = 1
    sparsity: int = 1
    periods: int = 1
    shift: int = 0

    def __post_init__(self):
        if self.count < 1 or self.periods < 1 or self.sparsity < 1:
            raise ValueError("count, periods and sparsity must all be >= 1")
        if self.spacing_base < 1 or self.compression < 1:
            raise ValueError("spacing_base and compression must be positive")
        if self.spacing_base % self.compression:
            raise ValueError(
                f"compression {self.compression} does not divide spacing {self.spacing_base}"
            )
        if self.shift < 0:
            raise ValueError(f"shift must be non-negative, got {self.shift}")

    @property
    def compressed_spacing(self):
        return self.spacing_base // self.compression

    @property
    def step(self):
        """Actual inter-element spacing ``E_i * M_i / p_i``."""
        return self.sparsity * self.compressed_spacing

    @property
    def size(self):
        return self.periods * self.count

    def positions(self):
        return self.step * np.arange(self.size, dtype=np.int64) + self.shift


@dataclass(frozen=True)
class GeneralizedConfig:
    subarrays: tuple

    def __post_init__(self):
        object.__setattr__(self, "subarrays", tuple(self.subarrays))
        if len(self.subarrays) < 1:
            raise ValueError("need at least one subarray")
        for sub in self.subarrays:
            if not isinstance(sub, SubarraySpec):
                raise TypeError(f"expected SubarraySpec, got {type(sub).__name__}")

    @property
    def q(self):
        return len(self.subarrays)

    @classmethod
    def from_lists(cls, counts, spacings, compression=None, sparsity=None,
                   periods=None, shifts=None):
        """Build from per-subarray parameter lists (``N``, ``M``, ``p``, ``E``, ``r``, ``s``)."""
        q = len(counts)

        def fill(values, default):
            values = [default] * q if values is None else list(values)
            if len(values) != q:
                raise ValueError(f"expected {q} values, got {len(values)}")
            return values

        compression = fill(compression, 1)
        sparsity = fill(sparsity, 1)
        periods = fill(periods, 1)
        shifts = fill(shifts, 0)
        spacings = fill(spacings, 1)
        return cls(tuple(
            SubarraySpec(counts[i], spacings[i], compression[i], sparsity[i],
                         periods[i], shifts[i])
            for i in range(q)
        ))

    @classmethod
    def from_exsca(cls, cfg):
        """Two-subarray form of an APCA or ExSCA configuration."""
        return cls((
            SubarraySpec(cfg.N, cfg.M, sparsity=cfg.ex, shift=0),
            SubarraySpec(cfg.M, cfg.N, sparsity=cfg.ex, shift=cfg.s),
        ))


@dataclass(frozen=True, eq=False)
class ElementSet:
    """Sorted distinct integer positions plus the subarrays each one came from.

    ``provenance[i]`` is a tuple of subarray indices (0-based) that place an
    element at ``positions[i]``; overlapping subarrays show up as tuples of
    length greater than one.
    """

    positions: np.ndarray
    provenance: tuple = field(default=())

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.int64)
        if pos.ndim != 1:
            raise ValueError("positions must be one-dimensional")
        if pos.size > 1 and np.any(np.diff(pos) <= 0):
            raise ValueError("positions must be strictly increasing")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        prov = tuple(tuple(p) for p in self.provenance)
        if not prov:
            prov = tuple((0,) for _ in range(pos.size))
        if len(prov) != pos.size:
            raise ValueError("provenance length does not match positions")
        object.__setattr__(self, "provenance", prov)

    def __len__(self):
        return int(self.positions.size)

    def __iter__(self):
        return iter(self.positions.tolist())

    def __eq__(self, other):
        if not isinstance(other, ElementSet):
            return NotImplemented
        return np.array_equal(self.positions, other.positions) and self.provenance == other.provenance

    def __repr__(self):
        return f"ElementSet({self.positions.tolist()})"

    @property
    def extent(self):
        return int(self.positions[-1]) + 1 if len(self) else 0

    def to_list(self):
        return self.positions.tolist()


def _subarray(positions, index):
    pos = np.asarray(positions, dtype=np.int64)
    return ElementSet(pos, tuple((index,) for _ in range(pos.size)))


def union_of(subarrays):
    """Merge subarrays into one ElementSet, collapsing shared positions."""
    owners = {}
    for i, sub in enumerate(subarrays):
        for p in sub:
            owners.setdefault(p, []).append(i)
    keys = sorted(owners)
    return ElementSet(np.array(keys, dtype=np.int64),
                      tuple(tuple(sorted(set(owners[k]))) for k in keys))


def positions_apca(cfg):
    """Return ``(sub1, sub2, union)`` for an APCA configuration."""
    sub1 = _subarray(cfg.M * np.arange(cfg.N), 0)
    sub2 = _subarray(cfg.N * np.arange(cfg.M) + cfg.s, 1)
    return sub1, sub2, union_of([sub1, sub2])


def positions_exsca(cfg):
    """Return ``(sub1, sub2, union)`` for an ExSCA configuration."""
    sub1 = _subarray(cfg.ex * cfg.M * np.arange(cfg.N), 0)
    sub2 = _subarray(cfg.ex * cfg.N * np.arange(cfg.M) + cfg.s, 1)
    return sub1, sub2, union_of([sub1, sub2])


def positions_generalized(cfg):
    """Return ``(subarrays, union)`` for a generalized configuration."""
    subs = [_subarray(spec.positions(), i) for i, spec in enumerate(cfg.subarrays)]
    return subs, union_of(subs)


def positions(cfg):
    """Dispatch on configuration type; always returns ``(subarrays, union)``."""
    if isinstance(cfg, ApcaConfig):
        sub1, sub2, union = positions_apca(cfg)
        return [sub1, sub2], union
    if isinstance(cfg, ExscaConfig):
        sub1, sub2, union = positions_exsca(cfg)
        return [sub1, sub2], union
    if isinstance(cfg, GeneralizedConfig):
        return positions_generalized(cfg)
    raise TypeError(f"unsupported configuration {type(cfg).__name__}")


def pivot_location(cfg) -> Optional[tuple]:
    """Index pair ``(n_p, m_p)`` of the shared element, or None.

    Solves ``E M n = E N m + s`` over ``0 <= n < N`` and ``0 <= m < M``.  The
    solution is unique when it exists (the two candidate ``m`` values would
    differ by less than ``M``).
    """
    ex = cfg.ex
    for m in range(cfg.M):
        num = ex * cfg.N * m + cfg.s
        if num % (ex * cfg.M) == 0:
            n = num // (ex * cfg.M)
            if 0 <= n < cfg.N:
                return (n, m)
    return None


def detect_overlap(sets: Sequence[ElementSet]):
    """Positions shared by two or more subarrays.

    Returns a list of ``(position, frozenset_of_subarray_indices)`` sorted by
    position.  An empty list means the overlap-free closed forms apply.
    """
    owners = {}
    for i, sub in enumerate(sets):
        for p in set(sub):
            owners.setdefault(p, set()).add(i)
    return [(p, frozenset(idx)) for p, idx in sorted(owners.items()) if len(idx) > 1]


def family_of(cfg):
    if isinstance(cfg, ApcaConfig):
        return "apca"
    if isinstance(cfg, ExscaConfig):
        return "exsca"
    if isinstance(cfg, GeneralizedConfig):
        return "generalized"
    raise TypeError(f"unsupported configuration {type(cfg).__name__}")


def params_of(cfg):
    if isinstance(cfg, ApcaConfig):
        return {"M": cfg.M, "N": cfg.N, "s": cfg.s, "displaced": cfg.displaced}
    if isinstance(cfg, ExscaConfig):
        return {"M": cfg.M, "N": cfg.N, "s": cfg.s, "ex": cfg.ex, "displaced": cfg.displaced}
    return {
        "N": [sub.count for sub in cfg.subarrays],
        "M": [sub.spacing_base for sub in cfg.subarrays],
        "p": [sub.compression for sub in cfg.subarrays],
        "E": [sub.sparsity for sub in cfg.subarrays],
        "r": [sub.periods for sub in cfg.subarrays],
        "s": [sub.shift for sub in cfg.subarrays],
    }


def geometry_record(cfg):
    """JSON-ready geometry export.

    Keys: ``family``, ``params``, ``subarrays``, ``union``, ``pivot`` (a
    two-element list or None) and ``overlaps`` (list of
    ``{"position", "subarrays"}``).
    """
    subs, union = positions(cfg)
    pivot = None
    if not isinstance(cfg, GeneralizedConfig):
        found = pivot_location(cfg)
        pivot = list(found) if found is not None else None
    return {
        "family": family_of(cfg),
        "params": params_of(cfg),
        "subarrays": [sub.to_list() for sub in subs],
        "union": union.to_list(),
        "pivot": pivot,
        "overlaps": [
            {"position": int(p), "subarrays": sorted(idx)}
            for p, idx in detect_overlap(subs)
        ],
    }
