#!/usr/bin/env python3
"""
Certifying a black-box quartet
==============================

A device is handed over as four unitaries. We check that each
measurement is repeatable on the maximally mixed state, that it reaches
4(d-1), and that its sorted overlap fingerprint matches the canonical
quartet. A hidden random change of basis does not matter; a suboptimal
device fails.
"""

from tempcert import canonical_quartet, certify, haar_unitary


def show(label, q):
    r = certify(q)
    res = ", ".join(f"{k}={v:.1e}" for k, v in r.condition_residuals.items())
    print(f"{label:>24}: {r.verdict:<14} tau={r.tau:.6f} eps={r.epsilon:.1e} "
          f"fingerprint={r.fingerprint_distance:.1e} [{res}]")


def main():
    d = 4
    q = canonical_quartet(d)
    show("canonical", q)
    show("hidden basis change", q.conjugated(haar_unitary(d, 2024)))
    show("fourth outcome swapped", q.replace(4, q.a4.relabeled([0, 3, 2, 1])))


if __name__ == "__main__":
    main()
