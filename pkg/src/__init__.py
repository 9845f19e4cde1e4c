"""rbench: robust microbenchmark harness."""
