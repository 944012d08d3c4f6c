"""One replication of the sparse two-coordinate scenario (d=100, 10 labels).

Tunes the semi-supervised fit on the tuning split, then compares test error
and selected coordinates with labeled-only and complete-data l1-LDA.
"""

import sys

import numpy as np

from s3lda import Grid, SimSpec, generate_example, grid_search
from s3lda.baselines import l1_lda_fit
from s3lda.metrics import misclassification_rate, selection_errors

rep = int(sys.argv[1]) if len(sys.argv) > 1 else 0
study = generate_example(SimSpec.default("ex2", seed=0), rep)

report = grid_search(study.train, study.tune, Grid())
best = report.best
print(f"selected C1={best.C1:g} C2={best.C2:g} (eta {best.eta:.3f}, score {best.score:.3f})")

fits = {
    "semi-supervised": report.model,
    "l1-LDA, labels only": l1_lda_fit(study.train.labeled_only(), None, study.tune.labeled_only()),
    "l1-LDA, all labels": l1_lda_fit(study.train_full, None, study.tune_full),
}
for name, m in fits.items():
    fp, fn = selection_errors(m.omega, study.true_support)
    top = np.argsort(-np.abs(m.omega))[:3] + 1
    print(f"{name:22s} error {misclassification_rate(m, study.test):.3f}  fp {fp:3d}  fn {fn}  "
          f"largest |omega_j| at j = {', '.join(map(str, top))}")
