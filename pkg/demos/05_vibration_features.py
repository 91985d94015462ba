"""
Preprocessing routes for one gear revolution: decimation, spectrum and the
62 time-series features.
"""
import numpy as np

from ardpca import synthdata
from ardpca.features import feature_names, feature_vector
from ardpca.signal import decimate, dft_magnitude

params = synthdata.GearGenParams()
rng = np.random.default_rng(0)
healthy = synthdata.gear_revolution(params, 0.0, rng)
faulty = synthdata.gear_revolution(params, 1.0, rng)

for name, sig in (("healthy", healthy), ("faulty", faulty)):
    mag = dft_magnitude(decimate(sig, 256))
    peak = sorted(int(b) for b in np.argsort(mag)[::-1][:3])
    print(f"{name:8s} strongest bins {peak} (mesh order and harmonics)")

# the faulty tooth modulates the mesh tone, which shows up as kurtosis
# and crest factor in the summary statistics
names = feature_names()
fh, ff = feature_vector(healthy), feature_vector(faulty)
for i in range(6):
    print(f"{names[i]:9s} healthy {fh[i]:8.3f}  faulty {ff[i]:8.3f}")
print("feature vector length:", ff.size)
print("leading AR coefficients:", np.round(ff[6:10], 3))

# 64 points per revolution cannot carry a 29th-order mesh tone and its
# harmonics, so the decimated record mostly loses them
print("rms after decimation to 256 / 64:",
      np.sqrt(np.mean(decimate(faulty, 256) ** 2)), np.sqrt(np.mean(decimate(faulty, 64) ** 2)))
