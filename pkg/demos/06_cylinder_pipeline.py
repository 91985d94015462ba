"""
PCA versus ARD input reduction on the cylinder data: SOF keeps 50 indices,
then each method reduces them to k inputs for a three-output classifier.
"""
import os
import tempfile

from ardpca import evaluation as ev

cfg = ev.PipelineConfig(dataset="cylinder", route="sof")
reports = ev.run_pipeline(cfg)

print("Number of inputs | PCA Classification | ARD Classification")
for k, p, a in ev.table_rows(reports):
    print(f"{k:16d} | {p:18.2f} | {a:18.2f}")

for r in reports:
    c = r.confusion
    print(f"{r.method} k={r.k:2d}: false positives {c.fp:3d}, false negatives {c.fn:3d}")

out = tempfile.mkdtemp()
ev.write_table_csv(reports, os.path.join(out, "cylinder.csv"))
ev.write_svg(reports, os.path.join(out, "cylinder.svg"), "cylinder / sof")
print("table and chart written to", out)
