#!/usr/bin/env python3
"""
Certified randomness grows with d
=================================

Once the quartet is certified, the outcome of A_2 measured right after
A_1 is unpredictable to anyone, with Shannon entropy fixed by the overlaps
of the Z_d and T_d eigenbases. The plot is written to entropy.svg.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tempcert import entropy_sweep


def main():
    table = entropy_sweep(2, 16)
    h = table.values()
    for d, v in h.items():
        print(f"d={d:2d}  H(A1,A2)={v:.6f} bits  log2(d)={np.log2(d):.6f}")
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(list(h), list(h.values()), "b:o", ms=4, label="H(A1, A2)")
    ax.plot(list(h), np.log2(list(h)), "k--", lw=0.8, label="log2 d")
    ax.set_xlabel("d")
    ax.set_ylabel("bits")
    ax.legend()
    fig.tight_layout()
    fig.savefig("entropy.svg", metadata={"Date": None})


if __name__ == "__main__":
    main()
