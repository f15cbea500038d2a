#!/usr/bin/env python3
"""
Robustness of the certificate
=============================

The canonical observables are rotated by small random unitaries,
which keeps them projective. The shortfall eps = 4(d-1) - tau_d then
bounds how far certain operator combinations can drift from their ideal
values: two of them by sqrt(eps) (and by sqrt(eps/D)), the other two by
2 sqrt(eps)(2 + sqrt(eps)).
"""

import numpy as np

from tempcert.certification import robustness_trials


def main():
    s = robustness_trials(900, base_seed=1)
    print(f"{s.trials} trials, {s.failures} bound violations, {s.sharp_failures} sharp-bound violations")
    for d in (2, 3, 4):
        for delta in (1e-4, 1e-3, 1e-2):
            reps = [r for _, dd, de, _, r in s.rows if dd == d and de == delta]
            eps = np.mean([r.epsilon for r in reps])
            ratio = max(r.lhs_i / r.rhs_sharp for r in reps)
            print(f"d={d} delta={delta:.0e}: mean eps {eps:.2e}, worst (i)/sqrt(eps/D) {ratio:.3f}")


if __name__ == "__main__":
    main()
