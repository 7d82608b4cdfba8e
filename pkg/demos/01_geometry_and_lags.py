"""Where the sensors go and which lags they produce.

Walks through the prototype co-prime pair (M=4, N=3), moves its pivot with
the shift s, then stretches both subarrays by E=2 to get the extremely sparse
layout.  Everything printed is computed, nothing is tabulated by hand.
"""
from exsca.closedform import fold_table
from exsca.diffset import (continuous_range, cross_differences, lag_statistics,
                           mirror_pair_set, weight_function)
from exsca.geometry import ApcaConfig, ExscaConfig, geometry_record, positions

M, N = 4, 3

print("Shifted co-prime pairs: the pivot slides along the first subarray")
for s in range(N):
    rec = geometry_record(ApcaConfig(M, N, s))
    z = weight_function(positions(ApcaConfig(M, N, s))[1])
    stats = lag_statistics(z)
    print(f"  s={s}  union={rec['union']}  pivot(n,m)={rec['pivot']}  "
          f"unique lags={stats.unique_count}  continuous=±{continuous_range(z)}  "
          f"holes={stats.holes}")

# s=2 wins on both counts: the pivot sits in the middle, so fewer cross
# differences collide with self differences.
print()
print("Fold tables used by the even-shift counting rule")
print(f"  over N={N}: {fold_table(N)}   over M={M}: {fold_table(M)}")

print()
print("Stretching by E=2: odd shifts keep all M+N sensors distinct")
for s in range(2 * N):
    cfg = ExscaConfig(M, N, s)
    subs, union = positions(cfg)
    z = weight_function(union)
    lp = sorted(mirror_pair_set(cross_differences(*subs)))
    print(f"  s={s}  sensors={len(union)}  z(0)={z(0)}  extent=±{z.lmax}  "
          f"mirror pairs={lp}")

print()
print("Weight function of the E=2, s=1 array (lag: count)")
z = weight_function(positions(ExscaConfig(M, N, 1))[1])
print("  " + ", ".join(f"{l}:{c}" for l, c in z.to_dict().items() if l >= 0))
