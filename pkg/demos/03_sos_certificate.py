#!/usr/bin/env python3
"""
Sum-of-squares certificates
===========================

For any unitary quartet, 4(d-1) 1 - beta is a sum of P^dag P terms, so
tau_d can never exceed 4(d-1). At the optimum every term vanishes. A second
decomposition (the Q family) needs complex-conjugated coefficients to
hold beyond d = 2; the unconjugated residual is shown for contrast.
"""

import numpy as np

from tempcert import canonical_quartet, random_quartet, sos_residuals


def main():
    rng = np.random.default_rng(0)
    for d in range(2, 7):
        c = sos_residuals(canonical_quartet(d))
        r = sos_residuals(random_quartet(d, d, rng))
        print(f"d={d}: canonical P-residual {c.primary_residual:.1e}, Q-residual {c.alt_residual:.1e}, "
              f"largest term {max(c.per_term_norms):.1e}, unconjugated Q-residual {c.printed_alt_residual:.3f}")
        print(f"      random    P-residual {r.primary_residual:.1e}, largest term {max(r.per_term_norms):.3f}")


if __name__ == "__main__":
    main()
