"""
The gear comparison across preprocessing routes. The 256-point time route
runs a 256-dimensional eigendecomposition per seed and takes about a minute;
pass --quick to skip it.
"""
import sys

import numpy as np

from ardpca import evaluation as ev
from ardpca import synthdata

routes = ["freq", "time64", "features62"]
if "--quick" not in sys.argv:
    routes.insert(0, "time256")

ds = synthdata.generate_gear(synthdata.GearGenParams(), seed=0)
for route in routes:
    reports = ev.run_pipeline(ev.PipelineConfig(dataset="gear", route=route), ds)
    print(f"\n{route}")
    for k, p, a in ev.table_rows(reports):
        print(f"  k={k:2d}  PCA {p:6.2f}  ARD {a:6.2f}")
    misgraded = sum(r.confusion.misgraded for r in reports)
    print(f"  faulty examples given the wrong severity: {misgraded}")

# without a fault signature every route sits near one-in-three chance
flat = synthdata.GearGenParams(severity_gain=0.0)
reports = ev.run_pipeline(ev.PipelineConfig(dataset="gear", route="freq", gear=flat))
print("\nno fault signature, freq route mean accuracy:",
      np.round([r.mean_accuracy for r in reports], 1))
