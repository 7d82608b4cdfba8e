"""Independent reference computations used by the tests.

These deliberately avoid the library's vectorised paths: weights come from
explicit pair loops and transforms from a direct cosine sum.
"""
from collections import Counter
from math import gcd

import numpy as np


def brute_positions_apca(M, N, s):
    return sorted({M * n for n in range(N)} | {N * m + s for m in range(M)})


def brute_positions_exsca(M, N, s, ex=2):
    return sorted({ex * M * n for n in range(N)} | {ex * N * m + s for m in range(M)})


def brute_weights(positions):
    """Ordered-pair difference counts as a dict ``lag -> count``."""
    pos = list(positions)
    return dict(Counter(a - b for a in pos for b in pos))


def direct_dtft(weights, freqs):
    """``sum_l z(l) cos(pi f l)`` for a symmetric weight dict."""
    f = np.asarray(freqs, dtype=float)
    out = np.zeros_like(f)
    for lag, count in weights.items():
        out += count * np.cos(np.pi * f * lag)
    return out


def coprime_pairs(upper, lower=2):
    return [(M, N) for M in range(lower, upper + 1) for N in range(lower, upper + 1)
            if gcd(M, N) == 1]


def peak_norm(values):
    values = np.asarray(values, dtype=float)
    return values / values.max()
