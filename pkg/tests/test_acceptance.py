"""End-to-end acceptance criteria, one test per criterion.

Each test records a one-line verdict that is printed in the terminal
summary, whether it passes or fails.
"""

import json
import time

import numpy as np
import pytest

from tempcert.certification import lemma2_demo, robustness_trials
from tempcert.cli import main
from tempcert.inequality import (
    classical_bound_bruteforce,
    classical_bound_closed,
    classical_bound_enumeration,
    tau_from_stats,
    tau_operator,
)
from tempcert.numerics import DEFAULT_TOL
from tempcert.observables import build_z, canonical_quartet, random_quartet
from tempcert.randomness import entropy_closed_form, pair_entropy
from tempcert.sequential import (
    maximally_mixed,
    povm_from_observable,
    projectivity_check,
    quartet_tables,
    random_povm,
    repeatability_residuals,
    smoothed_povm,
)
from tempcert.sos import sos_residuals

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def test_criterion_1_quantum_maximum():
    start = time.perf_counter()
    worst = 0.0
    for d in range(2, 9):
        q = canonical_quartet(d)
        stats = tau_from_stats(quartet_tables(q, maximally_mixed(d)), d).real
        op = np.trace(maximally_mixed(d).density @ tau_operator(q)).real
        worst = max(worst, abs(stats - 4 * (d - 1)), abs(op - 4 * (d - 1)))
    elapsed = time.perf_counter() - start
    record(1, worst < 1e-9 and elapsed < 5, f"max |tau - 4(d-1)| = {worst:.2e}, {elapsed:.2f}s")


def test_criterion_2_classical_bound():
    start = time.perf_counter()
    worst = 0.0
    for d in range(2, 13):
        closed = classical_bound_closed(d)
        worst = max(worst, abs(classical_bound_bruteforce(d).value - closed), abs(classical_bound_enumeration(d).value - closed))
    c2 = abs(classical_bound_closed(2) - 2 * np.sqrt(2))
    c3 = abs(classical_bound_closed(3) - (1 + 3 * np.sqrt(3)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and c2 < 1e-12 and c3 < 1e-12 and elapsed < 10
    record(2, ok, f"max brute-force deviation {worst:.2e}, C_2 err {c2:.1e}, C_3 err {c3:.1e}, {elapsed:.2f}s")


def test_criterion_3_gap():
    gaps = [4 * (d - 1) - classical_bound_closed(d) for d in range(2, 21)]
    record(3, min(gaps) > 0, f"min gap {min(gaps):.4f}")


def test_criterion_4_sos():
    canon = max(
        max(r.primary_residual, r.alt_residual) for r in (sos_residuals(canonical_quartet(d)) for d in range(2, 7))
    )
    rng = np.random.default_rng(4)
    rand = max(sos_residuals(random_quartet(d, d, rng)).primary_residual for d in (2, 3) for _ in range(100))
    record(4, canon < 1e-9 and rand < 1e-9, f"canonical {canon:.2e}, random {rand:.2e}")


def test_criterion_5_lemma1():
    canon = max(
        float(repeatability_residuals(povm_from_observable(o), maximally_mixed(d)).max())
        for d in range(2, 9)
        for o in canonical_quartet(d)
    )
    smooth = min(
        float(repeatability_residuals(smoothed_povm(build_z(d), 0.9), maximally_mixed(d)).max()) for d in (2, 3, 4)
    )
    rng = np.random.default_rng(5)
    disagree = 0
    for d in (2, 3, 4):
        for t in range(200):
            disagree += not projectivity_check(random_povm(d, d, rng, bool(t % 2))).criteria_agree
    ok = canon < 1e-12 and smooth > 0.01 and disagree == 0
    record(5, ok, f"canonical residual {canon:.1e}, smoothed min {smooth:.4f}, disagreements {disagree}/600")


def test_criterion_6_lemma2():
    rng = np.random.default_rng(6)
    s1 = max(abs(lemma2_demo(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)).strategy1_tau - 4) for _ in range(10))
    rep = lemma2_demo()
    s2 = abs(rep.strategy2_tau - 4)
    ok = s1 < 1e-9 and s2 <= DEFAULT_TOL.reference_tol and rep.overlap_gap > 0.2
    record(
        6,
        ok,
        f"strategy 1 err {s1:.1e}, strategy 2 tau {rep.strategy2_tau:.4f} "
        f"(operator max {rep.strategy2_beta_max:.4f}), overlap gap {rep.overlap_gap:.4f}",
    )


def test_criterion_7_robustness():
    start = time.perf_counter()
    s = robustness_trials(1000, ds=(2, 3, 4), deltas=(1e-4, 1e-3, 1e-2), base_seed=7)
    elapsed = time.perf_counter() - start
    ok = s.failures == 0 and s.sharp_failures == 0 and elapsed < 60
    record(7, ok, f"{s.trials} trials, {s.failures} failures, {s.sharp_failures} sharp failures, {elapsed:.1f}s")


def test_criterion_8_randomness():
    h2, h3 = entropy_closed_form(2), entropy_closed_form(3)
    dual = 0.0
    spread = 0.0
    vals = []
    for d in range(2, 9):
        q = canonical_quartet(d)
        direct = [pair_entropy(q[i], q[j]) for i, j in ((1, 2), (2, 1), (3, 4), (4, 3))]
        closed = entropy_closed_form(d)
        dual = max(dual, abs(direct[0] - closed))
        spread = max(spread, max(direct) - min(direct))
        vals.append(closed)
    inc = all(b > a for a, b in zip(vals, vals[1:]))
    ok = abs(h2 - 1) < 1e-9 and abs(h3 - (2 * np.log2(3) - 16 / 9)) < 1e-9 and dual < 1e-9 and spread < 1e-9 and inc
    record(8, ok, f"H_2 = {h2:.4f}, H_3 = {h3:.4f}, dual-path {dual:.1e}, pair spread {spread:.1e}, increasing {inc}")


def test_criterion_9_determinism(tmp_path, capsys):
    payloads = []
    for name in ("first", "second"):
        out = tmp_path / name
        main(["suite", "--dmax", "6", "--trials", "200", "--seed", "7", "--out", str(out)])
        env = json.loads(capsys.readouterr().out)
        env.pop("timestamp")
        env["config"].pop("out")
        payloads.append(
            (json.dumps(env, sort_keys=True), *((out / f).read_bytes() for f in ("entropy.csv", "robustness.csv", "payload.json")))
        )
    record(9, payloads[0] == payloads[1], "suite --dmax 6 --trials 200 --seed 7 twice, CSV/JSON compared byte for byte")
