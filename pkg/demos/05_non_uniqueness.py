#!/usr/bin/env python3
"""
Without a trusted state there is no uniqueness
==============================================

Two qubit-like strategies embedded in a qutrit are compared. The first
reaches tau_2 = 4 for every state in its plane. The second is given to
three decimals; here it stays well below 4, and the largest eigenvalue of
its operator shows that no state can do better. The overlap witness
|<u_1|u_3>| != |<v_1|v_3>| rules out a connecting unitary either way.
"""

import numpy as np

from tempcert.certification import lemma2_demo


def main():
    for theta, phi in [(np.pi / 5, 1.1), (0.3, 2.0), (1.2, -0.4)]:
        r = lemma2_demo(theta, phi)
        print(f"strategy 1, theta={theta:.3f} phi={phi:.3f}: tau={r.strategy1_tau:.12f}")
    print(f"strategy 1 with the listed outcome labels: tau={r.strategy1_tau_printed:.3e}")
    print(f"strategy 2: tau={r.strategy2_tau:.4f} (listed labels {r.strategy2_tau_printed:.4f}), "
          f"largest operator eigenvalue {r.strategy2_beta_max:.4f}")
    print(f"input vector norms: {np.round(r.strategy2_input_norms, 4)}")
    print(f"|<u1|u3>|={r.overlap_u13:.4f}  |<v1|v3>|={r.overlap_v13:.4f}  gap={r.overlap_gap:.4f}")
    print(f"fingerprint distance between strategies: {r.fingerprint_distance:.4f}")


if __name__ == "__main__":
    main()
