"""Monte Carlo checks that the constrained risk minimizers point along Sigma^-1 mu."""

from s3lda.theory import run_suite

for row in run_suite(seed=0, mc_n=100_000):
    flag = "ok " if row.passed else "BAD"
    print(f"{flag} {row.name:32s} value {row.value:.5f}  target {row.target:.5f}  tol {row.tolerance:.3g}")
