"""
Randomized verification suites
==============================

Each suite samples seeded inputs and reports every check with its margin.
"""

from channel_bounds.verify import SUITES, run_suite

for name in SUITES:
    rep = run_suite(name, samples=3, seed=11)
    status = "PASS" if rep.passed else "FAIL"
    print(f"{name:12s} {status}  {len(rep.checks):3d} checks  min margin {rep.min_margin():.3g}")
