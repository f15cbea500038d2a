"""Command-line front end.

Every subcommand prints (or writes to ``--out``) a JSON envelope::

    {"version", "config", "timestamp", "payload", "verdict", "exit_code"}

Exit codes: 0 pass, 1 a checked claim is violated, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .certification import certify, lemma2_demo, robustness_trials
from .checks import run_checks
from .exceptions import ConsistencyError, TempcertError
from .inequality import (
    classical_bound_bruteforce,
    classical_bound_closed,
    classical_bound_enumeration,
    evaluate_inequality,
)
from .numerics import DEFAULT_TOL, ToleranceConfig, as_matrix
from .observables import Quartet, canonical_quartet, observable_from_unitary
from .randomness import entropy_sweep
from .sequential import PreparedState, maximally_mixed, pure_state, quartet_tables
from .sos import sos_residuals

__all__ = ["main", "build_parser", "load_quartet", "dump_quartet", "InputError"]

DEFAULT_SEED = 0xC0FFEE
D_MIN, D_MAX = 2, 16
CSV_HEADER = ("d", "pair", "entropy_bits", "method")


class InputError(TempcertError, ValueError):
    """Malformed command-line input; ``problems`` lists per-field diagnostics."""

    def __init__(self, problems):
        self.problems = list(problems) if not isinstance(problems, str) else [problems]
        super().__init__("; ".join(self.problems))


# --------------------------------------------------------------------------
# observable and state files


def _complex_pairs(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def dump_quartet(q: Quartet, path=None) -> str:
    """Serialise ``q`` as JSON; floats use the shortest exact round-trip form."""
    doc = {"d": q.d, "D": q.D, "observables": [_complex_pairs(u) for u in q.unitaries]}
    text = json.dumps(doc)
    if path is not None:
        Path(path).write_text(text)
    return text


def _parse_matrix(raw, D: int, where: str, problems: list):
    if not isinstance(raw, list) or len(raw) != D:
        problems.append(f"{where}: expected {D} rows")
        return None
    out = np.empty((D, D), np.complex128)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != D:
            problems.append(f"{where}[{i}]: expected {D} entries")
            return None
        for j, z in enumerate(row):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                problems.append(f"{where}[{i}][{j}]: expected [re, im]")
                return None
            out[i, j] = complex(z[0], z[1])
    return out


def load_quartet(path, tol: ToleranceConfig = DEFAULT_TOL) -> Quartet:
    """Read a quartet file.

    Raises
    ------
    InputError
        On unreadable or structurally malformed files, listing each bad field.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}")
    problems = []
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    d, D = doc.get("d"), doc.get("D")
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        problems.append("d: expected an integer >= 2")
    if not isinstance(D, int) or isinstance(D, bool) or D < 1:
        problems.append("D: expected a positive integer")
    obs = doc.get("observables")
    if not isinstance(obs, list) or len(obs) != 4:
        problems.append("observables: expected a list of 4 matrices")
    if problems:
        raise InputError(problems)
    mats = [_parse_matrix(m, D, f"observables[{i}]", problems) for i, m in enumerate(obs)]
    if problems:
        raise InputError(problems)
    return Quartet(*(observable_from_unitary(m, d, tol) for m in mats))


def load_state(spec: str, D: int, tol: ToleranceConfig = DEFAULT_TOL) -> PreparedState:
    """``"mixed"`` or a JSON file with ``"density"`` (matrix) or ``"vector"`` ([re, im] list)."""
    if spec == "mixed":
        return maximally_mixed(D)
    try:
        doc = json.loads(Path(spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{spec}: {exc}")
    problems = []
    if isinstance(doc, dict) and "density" in doc:
        m = _parse_matrix(doc["density"], D, "density", problems)
        if problems:
            raise InputError(problems)
        return PreparedState(as_matrix(m)).validate(tol)
    if isinstance(doc, dict) and isinstance(doc.get("vector"), list) and len(doc["vector"]) == D:
        try:
            v = np.array([complex(re, im) for re, im in doc["vector"]])
        except (TypeError, ValueError):
            raise InputError("vector: expected [re, im] pairs")
        if np.linalg.norm(v) == 0:
            raise InputError("vector: zero vector")
        return pure_state(v)
    raise InputError(f"{spec}: expected 'density' ({D}x{D}) or 'vector' (length {D})")


# --------------------------------------------------------------------------
# serialisation helpers


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


def _entropy_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for d, (i, j), h, method in rows:
        w.writerow([d, f"{i}-{j}", repr(float(h)), method])
    return buf.getvalue()


def _robustness_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "d", "delta", "seed", "epsilon", "lhs_i", "lhs_ii", "lhs_iii", "lhs_iv",
                "rhs_small", "rhs_large", "rhs_sharp", "all_bounds_hold", "sharp_bounds_hold"])
    for t, d, delta, seed, r in rows:
        w.writerow([t, d, repr(delta), seed, repr(r.epsilon), repr(r.lhs_i), repr(r.lhs_ii),
                    repr(r.lhs_iii), repr(r.lhs_iv), repr(r.rhs_small), repr(r.rhs_large),
                    repr(r.rhs_sharp), int(r.all_bounds_hold), int(r.sharp_bounds_hold)])
    return buf.getvalue()


def _svg_setup():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "tempcert"
    return plt


def _entropy_svg(rows, path: Path) -> None:
    plt = _svg_setup()
    pts = sorted((d, h) for d, p, h, m in rows if p == (1, 2) and m == "overlap")
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot([d for d, _ in pts], [h for _, h in pts], "b:o", ms=4)
    ax.set_xlabel("d")
    ax.set_ylabel("H(A1, A2) [bits]")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _robustness_svg(rows, path: Path) -> None:
    plt = _svg_setup()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    x = [r.rhs_small for *_, r in rows]
    for attr, label in (("lhs_i", "(i)"), ("lhs_ii", "(ii)")):
        ax.loglog(x, [getattr(r, attr) for *_, r in rows], ".", ms=3, label=label)
    lim = [min(x), max(x)]
    ax.loglog(lim, lim, "k-", lw=0.8, label="sqrt(eps)")
    ax.set_xlabel("sqrt(eps)")
    ax.set_ylabel("HS norm")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# --------------------------------------------------------------------------
# subcommands; each returns (payload, verdict_ok, csv_text_or_None)


def _tol(args) -> ToleranceConfig:
    if args.tol is None:
        return DEFAULT_TOL
    if not args.tol > 0:
        raise InputError("--tol must be positive")
    return ToleranceConfig(args.tol, args.tol, max(DEFAULT_TOL.reference_tol, args.tol))


def _check_d(d: int, name: str = "--d") -> int:
    if not D_MIN <= d <= D_MAX:
        raise InputError(f"{name} must lie in {D_MIN}..{D_MAX}, got {d}")
    return d


def _quartet(args, tol) -> Quartet:
    if args.observables:
        q = load_quartet(args.observables, tol)
        _check_d(q.d, "file d")
        return q
    return canonical_quartet(_check_d(args.d), tol)


def cmd_tau(args, tol):
    q = _quartet(args, tol)
    state = load_state(args.state, q.D, tol)
    rep = evaluate_inequality(quartet_tables(q, state, tol=tol), q.d, tol)
    payload = {
        "d": q.d, "D": q.D, "tau": rep.tau.real, "tau_imag": rep.tau.imag,
        "classical_bound": rep.classical_bound, "quantum_max": rep.quantum_max,
        "violated": rep.violated, "gap": rep.gap,
    }
    # the checked claim is the quantum bound, not the classical one
    return payload, rep.tau.real <= rep.quantum_max + tol.value_tol, None


def cmd_classical_bound(args, tol):
    lo, hi = (args.dmin, args.dmax) if args.dmin else (args.d, args.d)
    _check_d(lo, "--dmin")
    _check_d(hi, "--dmax")
    rows, ok = [], True
    for d in range(lo, hi + 1):
        try:
            q, e = classical_bound_bruteforce(d), classical_bound_enumeration(d)
            rows.append({"d": d, "closed": classical_bound_closed(d), "q_tuples": q.value,
                         "enumeration": e.value, "q_argmax": list(q.argmax), "v_argmax": list(e.argmax)})
        except ConsistencyError as exc:
            ok = False
            rows.append({"d": d, "error": str(exc)})
    text = "d,closed,q_tuples,enumeration\n" + "".join(
        f"{r['d']},{r.get('closed')!r},{r.get('q_tuples')!r},{r.get('enumeration')!r}\n" for r in rows
    )
    return {"rows": rows}, ok, text


def cmd_sos(args, tol):
    q = _quartet(args, tol)
    r = sos_residuals(q, tol)
    payload = {
        "d": r.d, "primary_residual": r.primary_residual, "alt_residual": r.alt_residual,
        "printed_alt_residual": r.printed_alt_residual, "per_term_norms": r.per_term_norms,
        "alt_per_term_norms": r.alt_per_term_norms,
    }
    return payload, r.primary_residual <= tol.structural_tol and r.alt_residual <= tol.structural_tol, None


def cmd_certify(args, tol):
    q = _quartet(args, tol)
    if args.state != "mixed":
        raise InputError("certification requires --state mixed")
    r = certify(q, None, tol)
    payload = {
        "d": r.d, "D": r.D, "lemma1_pass": r.lemma1_pass, "tau": r.tau, "epsilon": r.epsilon,
        "condition_residuals": r.condition_residuals, "fingerprint_distance": r.fingerprint_distance,
        "ranks": r.ranks, "verdict": r.verdict,
    }
    return payload, r.verdict == "certified", None


def cmd_robustness(args, tol):
    ds = (_check_d(args.d),) if args.d_given else (2, 3, 4)
    deltas = (args.delta,) if args.delta is not None else (1e-4, 1e-3, 1e-2)
    if any(not 0 < x <= 0.5 for x in deltas):
        raise InputError("--delta must lie in (0, 0.5]")
    if args.trials < 1:
        raise InputError("--trials must be positive")
    s = robustness_trials(args.trials, ds=ds, deltas=deltas, base_seed=args.seed, tol=tol)
    worst = {
        "i_over_sqrt_eps": max((r.lhs_i / r.rhs_small if r.rhs_small else 0.0) for *_, r in s.rows),
        "ii_over_sqrt_eps": max((r.lhs_ii / r.rhs_small if r.rhs_small else 0.0) for *_, r in s.rows),
        "iii_over_bound": max((r.lhs_iii / r.rhs_large if r.rhs_large else 0.0) for *_, r in s.rows),
        "iv_over_bound": max((r.lhs_iv / r.rhs_large if r.rhs_large else 0.0) for *_, r in s.rows),
    }
    payload = {"trials": s.trials, "failures": s.failures, "sharp_failures": s.sharp_failures,
               "ds": list(ds), "deltas": list(deltas), "worst_ratios": worst}
    if args.out:
        _robustness_svg(s.rows, Path(args.out) / "robustness.svg")
        (Path(args.out) / "robustness.csv").write_text(_robustness_csv(s.rows))
    return payload, s.failures == 0 and s.sharp_failures == 0, _robustness_csv(s.rows)


def cmd_randomness(args, tol):
    lo, hi = (args.dmin or 2), (args.dmax or 8)
    if not 2 <= lo <= hi <= 32:
        raise InputError(f"need 2 <= --dmin <= --dmax <= 32, got ({lo}, {hi})")
    t = entropy_sweep(lo, hi, tol)
    h = t.values()
    inc = all(h[d + 1] > h[d] for d in range(lo, hi))
    payload = {
        "rows": [{"d": d, "pair": list(p), "entropy_bits": v, "method": m} for d, p, v, m in t.rows],
        "unreferenced": [{"d": d, "pair": list(p), "entropy_bits": v, "method": m} for d, p, v, m in t.unreferenced],
        "increasing": inc,
    }
    if args.out:
        (Path(args.out) / "entropy.csv").write_text(_entropy_csv(t.rows))
        _entropy_svg(t.rows, Path(args.out) / "entropy.svg")
    return payload, inc, _entropy_csv(t.rows)


def cmd_lemma2(args, tol):
    r = lemma2_demo()
    payload = {k: v for k, v in vars(r).items() if k != "fingerprints"}
    payload["fingerprints"] = {k: v.tolist() for k, v in r.fingerprints.items()}
    ok = abs(r.strategy1_tau - 4) <= tol.value_tol and abs(r.strategy2_tau - 4) <= tol.reference_tol
    return payload, ok and r.overlap_gap > 0.2, None


def cmd_suite(args, tol):
    d_max = args.dmax or 6
    _check_d(d_max, "--dmax")
    if args.trials < 1:
        raise InputError("--trials must be positive")
    results = run_checks(d_max, args.trials, args.seed, tol)
    ds = tuple(d for d in (2, 3, 4) if d <= d_max)
    hi = max(2, min(d_max, 8))
    # determinism: seeded artifacts regenerated from scratch must match byte for byte
    texts = []
    for _ in range(2):
        rob = robustness_trials(args.trials, ds=ds, base_seed=args.seed, tol=tol)
        table = entropy_sweep(2, hi, tol)
        texts.append((_robustness_csv(rob.rows), _entropy_csv(table.rows)))
    same = texts[0] == texts[1]
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name} ({r.seconds:.2f}s)", file=sys.stderr)
    print(f"[{'PASS' if same else 'FAIL'}] determinism", file=sys.stderr)
    criteria = {r.name: {"passed": r.passed, "detail": r.detail} for r in results}
    criteria["determinism"] = {"passed": same, "detail": {"artifacts": ["robustness.csv", "entropy.csv"]}}
    failing = [name for name, c in criteria.items() if not c["passed"]]
    payload = {
        "d_max": d_max, "trials": args.trials, "seed": args.seed,
        "criteria": criteria,
        "first_failure": failing[0] if failing else None,
    }
    rob_text, text = texts[0]
    if args.out:
        out = Path(args.out)
        (out / "entropy.csv").write_text(text)
        (out / "robustness.csv").write_text(rob_text)
        _entropy_svg(table.rows, out / "entropy.svg")
        _robustness_svg(rob.rows, out / "robustness.svg")
        (out / "payload.json").write_text(_dumps(payload))
    return payload, not failing, text


COMMANDS = {
    "tau": cmd_tau,
    "classical-bound": cmd_classical_bound,
    "sos": cmd_sos,
    "certify": cmd_certify,
    "robustness": cmd_robustness,
    "randomness": cmd_randomness,
    "lemma2": cmd_lemma2,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=None, help="number of outcomes (2..16)")
    common.add_argument("--dmin", type=int, default=None)
    common.add_argument("--dmax", type=int, default=None)
    common.add_argument("--observables", default=None, help="quartet JSON file")
    common.add_argument("--state", default="mixed", help="'mixed' or a state JSON file")
    common.add_argument("--delta", type=float, default=None)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    p = argparse.ArgumentParser(prog="tempcert", description="Temporal-correlation certification of d-outcome measurements.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "d_given"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.d_given = args.d is not None
    if args.d is None:
        args.d = 3
    payload, verdict, code, text = None, "invalid", 2, None
    try:
        tol = _tol(args)
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
        payload, ok, text = COMMANDS[args.command](args, tol)
        verdict, code = ("pass", 0) if ok else ("violated", 1)
    except (InputError, TempcertError, ValueError) as exc:
        problems = exc.problems if isinstance(exc, InputError) else [str(exc)]
        payload = {"error": type(exc).__name__, "problems": problems}
    env = {
        "version": __version__,
        "config": _config(args),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "payload": payload,
        "verdict": verdict,
        "exit_code": code,
    }
    body = _dumps(env)
    if args.out:
        Path(args.out, "report.json").write_text(body)
    if args.format == "csv" and text is not None and code != 2:
        sys.stdout.write(text)
    else:
        sys.stdout.write(body + "\n")
    if code == 1 and args.command == "suite" and payload.get("first_failure"):
        print(f"first failing criterion: {payload['first_failure']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
