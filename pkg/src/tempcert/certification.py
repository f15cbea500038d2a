"""Certification pipeline, the non-uniqueness example and robustness bounds.

A quartet is certified when every member passes the repeatability test,
it reaches the quantum maximum on the maximally mixed state and its
sorted overlap multiset matches the canonical quartet. The overlap
multiset is invariant under simultaneous unitary conjugation, so a match
is the checkable form of "equal up to a unitary".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .exceptions import DomainError, NumericError, PreconditionError
from .inequality import tau_from_stats, tau_operator, tau_operator_matrices
from .numerics import DEFAULT_TOL, ToleranceConfig, dagger, hs_norm, omega, random_hermitian
from .observables import (
    Quartet,
    canonical_quartet,
    coeff_a,
    observable_from_projectors,
    observable_power,
    printed_forms,
)
from .sequential import (
    PreparedState,
    maximally_mixed,
    povm_from_observable,
    projectivity_check,
    pure_state,
    quartet_tables,
)
from .sos import build_b

__all__ = [
    "CertificationReport",
    "RobustnessReport",
    "RobustnessSummary",
    "Lemma2Report",
    "algebraic_residuals",
    "overlap_fingerprint",
    "fingerprint_distance",
    "certify",
    "lemma2_quartets",
    "lemma2_demo",
    "perturb_quartet",
    "robustness_check",
    "robustness_trials",
    "printed_form_comparison",
]


@lru_cache(maxsize=None)
def _canonical(d: int) -> Quartet:
    return canonical_quartet(d)


def _state(rho) -> PreparedState:
    if rho is None:
        return None
    return rho if isinstance(rho, PreparedState) else PreparedState(np.asarray(rho, complex))


def _require_mixed(state: PreparedState, tol: ToleranceConfig) -> None:
    if not state.is_maximally_mixed(tol):
        raise PreconditionError("this check is only valid on the maximally mixed state")


# --------------------------------------------------------------------------
# algebraic conditions and fingerprint


def algebraic_residuals(q: Quartet, rho=None, tol: ToleranceConfig = DEFAULT_TOL) -> dict:
    """Maximal HS residuals of the optimality conditions over x and k.

    ``p5n``: ``A_x^k B_x^(k) = 1``; ``p9``: ``B_x^(k)^dag B_x^(k) = 1``;
    ``p10``: ``A_3^k A_4^-k = w^-k A_4^k A_3^-k``;
    ``p11``: ``B_x^(k) = (B_x^(1))^k``.
    """
    state = _state(rho) or maximally_mixed(q.D)
    _require_mixed(state, tol)
    d, eye, w = q.d, np.eye(q.D), omega(q.d)
    res = {"p5n": 0.0, "p9": 0.0, "p10": 0.0, "p11": 0.0}
    b1 = {x: build_b(x, 1, q.a3, q.a4) for x in (1, 2)}
    for k in range(1, d):
        for x in (1, 2):
            b = build_b(x, k, q.a3, q.a4)
            res["p5n"] = max(res["p5n"], hs_norm(observable_power(q[x], k) @ b - eye))
            res["p9"] = max(res["p9"], hs_norm(dagger(b) @ b - eye))
            res["p11"] = max(res["p11"], hs_norm(b - np.linalg.matrix_power(b1[x], k)))
        lhs = observable_power(q.a3, k) @ observable_power(q.a4, -k)
        rhs = w ** (-k) * observable_power(q.a4, k) @ observable_power(q.a3, -k)
        res["p10"] = max(res["p10"], hs_norm(lhs - rhs))
    return res


def overlap_fingerprint(q: Quartet) -> np.ndarray:
    """Sorted overlaps ``Tr[P_i^a P_j^b]`` over i < j and all outcomes a, b."""
    vals = []
    members = list(q)
    for i in range(4):
        for j in range(i + 1, 4):
            for p in members[i].projectors:
                for r in members[j].projectors:
                    vals.append(np.sum(p.T * r).real)
    return np.sort(np.array(vals))


def fingerprint_distance(q: Quartet, reference: Quartet | None = None) -> float:
    """Max abs difference between sorted fingerprints (canonical reference by default)."""
    ref = reference if reference is not None else _canonical(q.d)
    return float(np.max(np.abs(overlap_fingerprint(q) - overlap_fingerprint(ref))))


@dataclass(frozen=True)
class CertificationReport:
    d: int
    D: int
    lemma1_pass: list
    tau: float
    epsilon: float
    condition_residuals: dict
    fingerprint_distance: float
    ranks: list
    verdict: str


def certify(q: Quartet, rho=None, tol: ToleranceConfig = DEFAULT_TOL) -> CertificationReport:
    """Run the certification pipeline on ``q`` with the trusted maximally mixed state.

    The verdict is ``not_certified`` when a member fails the repeatability
    test or ``epsilon > value_tol``. It is ``inconclusive`` when some spectral
    projector is not rank one (D > d), and ``certified`` otherwise if the
    fingerprint matches the canonical quartet.
    """
    state = _state(rho) or maximally_mixed(q.D)
    _require_mixed(state, tol)
    lemma1 = [projectivity_check(povm_from_observable(o), tol).projective for o in q]
    tau = tau_from_stats(quartet_tables(q, state, tol=tol), q.d).real
    eps = 4 * (q.d - 1) - tau
    residuals = algebraic_residuals(q, state, tol)
    dist = fingerprint_distance(q)
    ranks = [o.ranks for o in q]
    if not all(lemma1) or eps > tol.value_tol:
        verdict = "not_certified"
    elif any(r != 1 for rs in ranks for r in rs):
        verdict = "inconclusive"
    elif dist <= tol.value_tol:
        verdict = "certified"
    else:
        verdict = "not_certified"
    return CertificationReport(q.d, q.D, lemma1, float(tau), float(eps), residuals, dist, ranks, verdict)


# --------------------------------------------------------------------------
# non-uniqueness without a trusted state


_C8, _S8 = np.cos(np.pi / 8), np.sin(np.pi / 8)
_U = (
    np.array([1, 0, 0], complex),
    np.array([np.cos(np.pi / 4), np.sin(np.pi / 4), 0], complex),
    np.array([_C8, _S8, 0], complex),
    np.array([_C8, -_S8, 0], complex),
)
# three-decimal data of the second strategy
_V = (
    np.array([1, 0, 0], complex),
    np.array([0.582, -0.275 + 0.308j, -0.264 + 0.317j]),
    np.array([np.cos(np.pi / 4), 0.5 * np.exp(1j * np.pi / 4), 0.5 * np.exp(1j * np.pi / 4)]),
    np.array([0.910, -0.135 - 0.384j, -0.104 - 0.393j]),
)
_PSI2 = np.array([0.427, -0.512 - 0.548j, 0.067 + 0.747j])


def _binary(v: np.ndarray, flip: bool = False):
    """``A = 2|v><v| - 1`` with outcome 0 on ``|v>``, or on its complement if ``flip``."""
    v = v / np.linalg.norm(v)
    p = np.outer(v, v.conj())
    projs = [p, np.eye(len(v)) - p]
    return observable_from_projectors(projs[::-1] if flip else projs, 2)


def lemma2_quartets(relabel_fourth: bool = True) -> tuple[Quartet, Quartet]:
    """The two qubit-in-qutrit strategies.

    With ``relabel_fourth`` the outcomes of the fourth observable are
    swapped, which is the labelling under which the first strategy
    reaches 4.
    """
    s1 = Quartet(*(_binary(u, relabel_fourth and i == 3) for i, u in enumerate(_U)))
    s2 = Quartet(*(_binary(v, relabel_fourth and i == 3) for i, v in enumerate(_V)))
    return s1, s2


def _tau_pure(q: Quartet, psi) -> float:
    return tau_from_stats(quartet_tables(q, pure_state(psi)), q.d).real


def strategy1_state(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta), np.exp(1j * phi) * np.sin(theta), 0])


@dataclass(frozen=True)
class Lemma2Report:
    """Both strategies evaluated from sequential statistics.

    ``*_tau`` use the relabelled fourth observable, ``*_tau_printed`` the
    labelling as listed. ``strategy2_beta_max`` is the largest eigenvalue of
    the second strategy's operator, an upper bound on its tau over all
    states.
    """

    theta: float
    phi: float
    strategy1_tau: float
    strategy1_tau_printed: float
    strategy2_tau: float
    strategy2_tau_printed: float
    strategy2_beta_max: float
    strategy2_input_norms: list
    overlap_u13: float
    overlap_v13: float
    overlap_gap: float
    fingerprint_distance: float
    fingerprints: dict = field(repr=False)


def lemma2_demo(theta: float = np.pi / 5, phi: float = 1.1) -> Lemma2Report:
    s1, s2 = lemma2_quartets(True)
    p1, p2 = lemma2_quartets(False)
    psi1 = strategy1_state(theta, phi)
    u13 = abs(np.vdot(_U[0], _U[2]))
    v13 = abs(np.vdot(_V[0] / np.linalg.norm(_V[0]), _V[2] / np.linalg.norm(_V[2])))
    f1, f2 = overlap_fingerprint(s1), overlap_fingerprint(s2)
    return Lemma2Report(
        theta=float(theta),
        phi=float(phi),
        strategy1_tau=_tau_pure(s1, psi1),
        strategy1_tau_printed=_tau_pure(p1, psi1),
        strategy2_tau=_tau_pure(s2, _PSI2),
        strategy2_tau_printed=_tau_pure(p2, _PSI2),
        strategy2_beta_max=float(np.linalg.eigvalsh(tau_operator(s2))[-1]),
        strategy2_input_norms=[float(np.linalg.norm(v)) for v in (*_V, _PSI2)],
        overlap_u13=float(u13),
        overlap_v13=float(v13),
        overlap_gap=float(abs(u13 - v13)),
        fingerprint_distance=float(np.max(np.abs(f1 - f2))),
        fingerprints={"strategy1": f1, "strategy2": f2},
    )


# --------------------------------------------------------------------------
# robustness


def perturb_quartet(d: int, delta: float, seed: int) -> Quartet:
    """Canonical quartet with each member conjugated by ``exp(i delta H)``.

    Each ``H`` is an independent random Hermitian matrix of unit HS norm
    drawn from ``seed``. ``delta == 0`` returns the canonical quartet itself.
    """
    if not 0 <= delta <= 0.5:
        raise DomainError(f"delta must lie in [0, 0.5], got {delta}")
    q = _canonical(d)
    if delta == 0:
        return q
    rng = np.random.default_rng(seed)
    members = []
    for o in q:
        u = expm(1j * delta * random_hermitian(q.D, rng))
        members.append(o.conjugated(u))
    return Quartet(*members)


@dataclass(frozen=True)
class RobustnessReport:
    epsilon: float
    lhs_i: float
    lhs_ii: float
    lhs_iii: float
    lhs_iv: float
    rhs_small: float
    rhs_large: float
    rhs_sharp: float
    all_bounds_hold: bool
    sharp_bounds_hold: bool


def _bound_terms(q: Quartet, rho: np.ndarray):
    d = q.d
    a, w = coeff_a(1, d), omega(d)
    c = np.conj(a)
    a1, a2, a3, a4 = q.unitaries
    a3d, a4d = dagger(a3), dagger(a4)
    return (
        a1 @ (a * a3d + c * w * a4d) @ rho,
        a2 @ (c * a3d + a * a4d) @ rho,
        (a4 @ a3d - w * a3 @ a4d) @ rho,
        (w * a2 @ dagger(a1) - a1 @ dagger(a2)) @ rho,
    )


def robustness_check(
    ideal: Quartet | None, actual: Quartet, rho=None, tol: ToleranceConfig = DEFAULT_TOL
) -> RobustnessReport:
    """Compare the four bounded norms for ``actual`` against ``ideal``.

    Raises
    ------
    PreconditionError
        If ``rho`` is not maximally mixed or a member of ``actual`` fails the
        repeatability test.
    NumericError
        If ``actual`` exceeds the quantum maximum by more than ``value_tol``.
    """
    ideal = ideal if ideal is not None else _canonical(actual.d)
    state = _state(rho) or maximally_mixed(actual.D)
    _require_mixed(state, tol)
    for i, o in enumerate(actual, start=1):
        if not projectivity_check(povm_from_observable(o), tol).projective:
            raise PreconditionError(f"A_{i} fails the repeatability test")
    tau = tau_from_stats(quartet_tables(actual, state, tol=tol), actual.d).real
    eps = 4 * (actual.d - 1) - tau
    if eps < -tol.value_tol:
        raise NumericError(f"tau={tau!r} exceeds the quantum maximum {4 * (actual.d - 1)}")
    eps = max(eps, 0.0)
    lhs = [hs_norm(x - y) for x, y in zip(_bound_terms(ideal, state.density), _bound_terms(actual, state.density))]
    small = np.sqrt(eps)
    large = 2 * small * (2 + small)
    sharp = np.sqrt(eps / actual.D)
    v = tol.value_tol
    return RobustnessReport(
        epsilon=float(eps),
        lhs_i=lhs[0],
        lhs_ii=lhs[1],
        lhs_iii=lhs[2],
        lhs_iv=lhs[3],
        rhs_small=float(small),
        rhs_large=float(large),
        rhs_sharp=float(sharp),
        all_bounds_hold=bool(
            lhs[0] < small + v and lhs[1] < small + v and lhs[2] <= large + v and lhs[3] <= large + v
        ),
        sharp_bounds_hold=bool(lhs[0] <= sharp + v and lhs[1] <= sharp + v),
    )


@dataclass(frozen=True)
class RobustnessSummary:
    trials: int
    failures: int
    sharp_failures: int
    rows: list = field(repr=False)


def robustness_trials(
    trials: int = 1000,
    ds=(2, 3, 4),
    deltas=(1e-4, 1e-3, 1e-2),
    base_seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> RobustnessSummary:
    """Cycle trials over the (d, delta) grid; trial ``t`` uses seed ``base_seed + t``.

    Each row is ``(trial, d, delta, seed, report)``.
    """
    grid = [(d, delta) for d in ds for delta in deltas]
    rows = []
    for t in range(trials):
        d, delta = grid[t % len(grid)]
        seed = base_seed + t
        rep = robustness_check(None, perturb_quartet(d, delta, seed), tol=tol)
        rows.append((t, d, delta, seed, rep))
    fails = sum(not r[4].all_bounds_hold for r in rows)
    sharp = sum(not r[4].sharp_bounds_hold for r in rows)
    return RobustnessSummary(trials, fails, sharp, rows)


def printed_form_comparison(d: int, tol: ToleranceConfig = DEFAULT_TOL) -> dict:
    """tau of the canonical quartet versus the closed-form third and fourth members."""
    q = _canonical(d)
    m3, m4 = printed_forms(d, tol)
    us = [q.a1.unitary, q.a2.unitary, m3, m4]
    return {
        "d": d,
        "tau_canonical": complex(np.trace(tau_operator(q)) / d),
        "tau_printed": complex(np.trace(tau_operator_matrices(us, d)) / d),
        "a3_distance": hs_norm(m3 - q.a3.unitary),
        "a4_distance": hs_norm(m4 - q.a4.unitary),
        "a4_sign_flip_distance": hs_norm(m4 + q.a4.unitary),
    }
