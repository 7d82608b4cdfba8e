"""Power spectrum estimation from ten snapshots.

Each snapshot is one co-prime period of samples.  The tones get fresh random
phases per snapshot and white noise at 0 dB per tone.  First the shift s is
compared on peak-location error, then the E=2 layout is asked to separate
three close tones that the prototype pair blurs together.
"""
import numpy as np

from exsca.diffset import weight_function
from exsca.geometry import ApcaConfig, ExscaConfig, positions
from exsca.spectral import (PeakCountError, SignalModel, Spectrum, count_peaks,
                            estimate_spectrum, find_peaks, monte_carlo_peak_error)

K, TRIALS, G = 10, 300, 4096

print(f"Mean peak-location error, (4,3) shifted pairs, K={K}, {TRIALS} trials")
for peaks in ([0.1], [0.1, 0.3], [0.1, 0.3, 0.6]):
    row = []
    for s in range(3):
        _, union = positions(ApcaConfig(4, 3, s))
        err, _ = monte_carlo_peak_error(union, 12, SignalModel(peaks, noise_variance=1.0),
                                        K=K, trials=TRIALS, grid_size=G)
        row.append(f"s={s}: {err:.4f}")
    print(f"  {len(peaks)} peak(s)  " + "  ".join(row))

print()
truth = [0.05, 0.15, 0.3]
band = (0.0, 0.35)
print(f"Close tones {truth}, spectra averaged over 100 runs, band {band}")
model = SignalModel(truth, noise_variance=1.0)
for name, cfg in [("prototype", ApcaConfig(4, 3, 0)), ("E=2, s=1", ExscaConfig(4, 3, 1)),
                  ("E=2, s=5", ExscaConfig(4, 3, 5))]:
    _, union = positions(cfg)
    z = weight_function(union)
    power = np.mean([estimate_spectrum(union, cfg.period, model.with_seed(t), K, G, z).power
                     for t in range(100)], axis=0)
    spec = Spectrum(np.arange(G) * 2 / G, power)
    try:
        found = [round(f, 4) for f in find_peaks(spec, 3, band)]
    except PeakCountError as exc:
        found = f"only {len(exc.found)} maxima: {[round(f, 4) for f in exc.found]}"
    print(f"  {name:10s} maxima in band={count_peaks(spec, band)}  peaks={found}")
