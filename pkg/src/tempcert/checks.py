"""Composite checks run by ``tempcert suite``.

Each check returns a :class:`CheckResult` with a JSON-ready ``detail``
mapping. Ranges of d are clipped to ``d_max`` so small runs stay small.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .certification import lemma2_demo, robustness_trials
from .exceptions import ConsistencyError
from .inequality import (
    classical_bound_bruteforce,
    classical_bound_closed,
    classical_bound_enumeration,
    tau_from_stats,
    tau_operator,
)
from .numerics import DEFAULT_TOL, ToleranceConfig
from .observables import build_z, canonical_quartet, random_quartet
from .randomness import entropy_sweep, pair_entropy
from .sequential import (
    maximally_mixed,
    povm_from_observable,
    projectivity_check,
    quartet_tables,
    random_povm,
    repeatability_residuals,
    smoothed_povm,
)
from .sos import sos_residuals

__all__ = ["CheckResult", "run_checks", "CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0


def _drange(lo: int, hi: int, d_max: int) -> range:
    return range(lo, min(hi, d_max) + 1)


def check_quantum_maximum(d_max, trials, seed, tol):
    rows = []
    for d in _drange(2, 8, d_max):
        q = canonical_quartet(d, tol)
        stats = tau_from_stats(quartet_tables(q, maximally_mixed(d), tol=tol), d).real
        op = np.trace(tau_operator(q)).real / d
        rows.append({"d": d, "tau_stats": stats, "tau_operator": op})
    ok = all(abs(r["tau_stats"] - 4 * (r["d"] - 1)) <= 1e-9 and abs(r["tau_operator"] - 4 * (r["d"] - 1)) <= 1e-9 for r in rows)
    return ok, {"rows": rows}


def check_classical_bound(d_max, trials, seed, tol):
    rows = []
    ok = True
    for d in _drange(2, 12, d_max):
        try:
            q = classical_bound_bruteforce(d)
            e = classical_bound_enumeration(d)
        except ConsistencyError as exc:
            rows.append({"d": d, "error": str(exc)})
            ok = False
            continue
        rows.append(
            {"d": d, "closed": classical_bound_closed(d), "q_tuples": q.value, "enumeration": e.value,
             "q_argmax": list(q.argmax), "v_argmax": list(e.argmax)}
        )
    ok = ok and abs(classical_bound_closed(2) - 2 * np.sqrt(2)) <= 1e-12
    ok = ok and abs(classical_bound_closed(3) - (1 + 3 * np.sqrt(3))) <= 1e-12
    return ok, {"rows": rows}


def check_gap(d_max, trials, seed, tol):
    gaps = {d: 4 * (d - 1) - classical_bound_closed(d) for d in range(2, 21)}
    return all(g > 0 for g in gaps.values()), {"min_gap": min(gaps.values())}


def check_sos(d_max, trials, seed, tol):
    canon = {}
    for d in _drange(2, 6, d_max):
        r = sos_residuals(canonical_quartet(d, tol), tol)
        canon[d] = {"primary": r.primary_residual, "alt": r.alt_residual}
    rng = np.random.default_rng(seed)
    worst = {}
    for d in _drange(2, 3, d_max):
        worst[d] = max(sos_residuals(random_quartet(d, d, rng), tol).primary_residual for _ in range(100))
    ok = all(v["primary"] < 1e-9 and v["alt"] < 1e-9 for v in canon.values())
    ok = ok and all(v < 1e-9 for v in worst.values())
    return ok, {"canonical": canon, "random_worst_primary": worst}


def check_lemma1(d_max, trials, seed, tol):
    canon = 0.0
    for d in _drange(2, 8, d_max):
        for o in canonical_quartet(d, tol):
            canon = max(canon, float(repeatability_residuals(povm_from_observable(o), maximally_mixed(d), tol).max()))
    smooth = min(
        float(repeatability_residuals(smoothed_povm(build_z(d), 0.9), maximally_mixed(d), tol).max())
        for d in _drange(2, 4, d_max)
    )
    rng = np.random.default_rng(seed)
    disagreements = 0
    total = 0
    for d in _drange(2, 4, d_max):
        for t in range(trials):
            m = random_povm(d, d, rng, projective=bool(t % 2))
            disagreements += not projectivity_check(m, tol).criteria_agree
            total += 1
    ok = canon < 1e-12 and smooth > 0.01 and disagreements == 0
    return ok, {"canonical_max": canon, "smoothed_min": smooth, "random_povms": total, "disagreements": disagreements}


def check_lemma2(d_max, trials, seed, tol):
    rng = np.random.default_rng(seed)
    s1 = []
    for _ in range(10):
        theta, phi = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        s1.append(lemma2_demo(theta, phi).strategy1_tau)
    rep = lemma2_demo()
    ok1 = all(abs(t - 4) <= 1e-9 for t in s1)
    ok2 = abs(rep.strategy2_tau - 4) <= tol.reference_tol
    ok3 = rep.overlap_gap > 0.2
    return ok1 and ok2 and ok3, {
        "strategy1_max_error": max(abs(t - 4) for t in s1),
        "strategy2_tau": rep.strategy2_tau,
        "strategy2_tau_printed": rep.strategy2_tau_printed,
        "strategy2_beta_max": rep.strategy2_beta_max,
        "overlap_gap": rep.overlap_gap,
        "strategy1_ok": ok1,
        "strategy2_ok": ok2,
        "overlap_ok": ok3,
    }


def check_robustness(d_max, trials, seed, tol):
    ds = tuple(_drange(2, 4, d_max))
    s = robustness_trials(trials, ds=ds, base_seed=seed, tol=tol)
    ok = s.failures == 0 and s.sharp_failures == 0
    return ok, {"trials": s.trials, "failures": s.failures, "sharp_failures": s.sharp_failures}


def check_randomness(d_max, trials, seed, tol):
    hi = max(2, min(8, d_max))
    table = entropy_sweep(2, hi, tol)
    h = table.values()
    inc = all(h[d + 1] > h[d] for d in range(2, hi))
    ok = abs(h[2] - 1.0) <= 1e-9 and inc
    if hi >= 3:
        ok = ok and abs(h[3] - (2 * np.log2(3) - 16 / 9)) <= 1e-9
    spread = 0.0
    for d in range(2, hi + 1):
        q = canonical_quartet(d, tol)
        vals = [pair_entropy(q[i], q[j], tol) for i, j in ((1, 2), (2, 1), (3, 4), (4, 3))]
        spread = max(spread, max(vals) - min(vals))
    ok = ok and spread <= 1e-9
    return ok, {"entropy": {str(d): v for d, v in h.items()}, "increasing": inc, "pair_spread": spread}


CHECKS = (
    ("quantum_maximum", check_quantum_maximum),
    ("classical_bound", check_classical_bound),
    ("quantum_classical_gap", check_gap),
    ("sos_identities", check_sos),
    ("lemma1_projectivity", check_lemma1),
    ("lemma2_non_uniqueness", check_lemma2),
    ("robustness", check_robustness),
    ("randomness", check_randomness),
)


def run_checks(d_max: int, trials: int, seed: int, tol: ToleranceConfig = DEFAULT_TOL) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        start = time.perf_counter()
        ok, detail = fn(d_max, trials, seed, tol)
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - start))
    return out
