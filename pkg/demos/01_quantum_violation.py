#!/usr/bin/env python3
"""
Quantum violation of the temporal inequality
============================================

Builds the optimal quartet (Z_d, T_d, A_3, A_4), simulates the eight
ordered sequential measurements on the maximally mixed state with the
Lueders update rule, and compares tau_d with the classical bound C_d.
The same value is recomputed from the operator beta as Tr[beta]/D.
"""

import numpy as np

from tempcert import (
    canonical_quartet,
    classical_bound_closed,
    maximally_mixed,
    quartet_tables,
    tau_from_stats,
    tau_operator,
)


def main():
    print(f"{'d':>3} {'tau (stats)':>14} {'Tr[beta]/D':>14} {'C_d':>10} {'4(d-1)':>7}")
    for d in range(2, 9):
        q = canonical_quartet(d)
        tables = quartet_tables(q, maximally_mixed(d))
        stats = tau_from_stats(tables, d).real
        op = np.trace(tau_operator(q)).real / d
        print(f"{d:>3} {stats:>14.10f} {op:>14.10f} {classical_bound_closed(d):>10.5f} {4 * (d - 1):>7}")


if __name__ == "__main__":
    main()
