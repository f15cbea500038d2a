"""The temporal expression tau_d, its quantum operator and classical bound."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

import numpy as np

from .exceptions import ConsistencyError, DomainError, RealnessError
from .numerics import DEFAULT_TOL, ToleranceConfig, omega
from .observables import Quartet, coeff_a
from .sequential import JointTable

__all__ = [
    "TAU_PAIRS",
    "REALNESS_TOL",
    "InequalityReport",
    "ClassicalDecomposition",
    "fourier_correlator",
    "tau_pair_contribution",
    "tau_from_stats",
    "tau_operator",
    "tau_operator_matrices",
    "evaluate_inequality",
    "classical_bound_closed",
    "classical_decomposition",
    "tau_tilde",
    "classical_bound_bruteforce",
    "classical_bound_enumeration",
    "deterministic_tables",
]

TAU_PAIRS = ((1, 3), (1, 4), (2, 3), (2, 4), (3, 1), (4, 1), (3, 2), (4, 2))
REALNESS_TOL = 1e-8


def _coeff(pair: tuple[int, int], k: int, d: int) -> complex:
    """Weight of the ``(A_{1|2}^k, A_{3|4}^{d-k})`` correlator for ``pair``."""
    lo, hi = sorted(pair)
    a = coeff_a(k, d)
    if (lo, hi) in ((1, 3), (2, 4)):
        return a
    if (lo, hi) == (2, 3):
        return np.conj(a)
    if (lo, hi) == (1, 4):
        return np.conj(a) * omega(d) ** k
    raise DomainError(f"pair {pair} does not appear in tau_d")


def fourier_correlator(t: JointTable, k: int, l: int, d: int) -> complex:
    """Two-dimensional Fourier transform ``sum_ab omega**(a k + b l) p(a, b)``."""
    if not (0 <= k < d and 0 <= l < d):
        raise DomainError(f"powers must lie in 0..{d - 1}, got ({k}, {l})")
    w = omega(d) ** np.arange(d)
    phase = np.outer(w ** k, w ** l)
    return complex(np.sum(phase * t.probs))


def tau_pair_contribution(t: JointTable, pair: tuple[int, int], d: int) -> complex:
    """Contribution of one ordered measurement pair to tau_d."""
    i, _ = pair
    total = 0j
    for k in range(1, d):
        powers = (k, d - k) if i in (1, 2) else (d - k, k)
        total += _coeff(pair, k, d) * fourier_correlator(t, *powers, d)
    return total


def tau_from_stats(tables: Mapping[tuple[int, int], JointTable], d: int) -> complex:
    """Evaluate tau_d from the eight ordered-pair joint tables.

    Raises
    ------
    RealnessError
        If the imaginary part reaches ``REALNESS_TOL``.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    missing = [p for p in TAU_PAIRS if p not in tables]
    if missing:
        raise KeyError(f"missing joint tables for pairs {missing}")
    tau = sum(tau_pair_contribution(tables[p], p, d) for p in TAU_PAIRS)
    if abs(tau.imag) >= REALNESS_TOL:
        raise RealnessError(f"tau_d has imaginary part {tau.imag:.3e}")
    return complex(tau)


def tau_operator(q: Quartet) -> np.ndarray:
    """The operator ``beta`` with ``tau_d(1/D) = Tr[beta] / D``."""
    return tau_operator_matrices(q.unitaries, q.d)


def tau_operator_matrices(us, d: int) -> np.ndarray:
    """:func:`tau_operator` for four raw unitaries, spectra unchecked."""
    w = omega(d)
    n = us[0].shape[0]
    beta = np.zeros((n, n), np.complex128)
    for k in range(1, d):
        a = coeff_a(k, d)
        c = np.conj(a)
        p1, p2 = (np.linalg.matrix_power(u, k) for u in us[:2])
        m3, m4 = (np.linalg.matrix_power(u, d - k) for u in us[2:])
        beta += a * p1 @ m3 + c * w**k * p1 @ m4 + c * p2 @ m3 + a * p2 @ m4
        beta += a * m3 @ p1 + c * w**k * m4 @ p1 + c * m3 @ p2 + a * m4 @ p2
    return beta


@dataclass(frozen=True)
class InequalityReport:
    d: int
    tau: complex
    classical_bound: float
    quantum_max: float
    violated: bool
    gap: float


def evaluate_inequality(
    tables: Mapping[tuple[int, int], JointTable], d: int, tol: ToleranceConfig = DEFAULT_TOL
) -> InequalityReport:
    tau = tau_from_stats(tables, d)
    cb = classical_bound_closed(d)
    return InequalityReport(
        d=d,
        tau=tau,
        classical_bound=cb,
        quantum_max=4.0 * (d - 1),
        violated=bool(tau.real > cb + tol.value_tol),
        gap=float(tau.real - cb),
    )


def classical_bound_closed(d: int) -> float:
    """``C_d = 3 cot(pi/4d) - cot(3 pi/4d) - 4``."""
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    return float(3 / np.tan(np.pi / (4 * d)) - 1 / np.tan(3 * np.pi / (4 * d)) - 4)


@dataclass(frozen=True)
class ClassicalDecomposition:
    """Real coefficients of the probability form of tau_d.

    ``alphas`` is the full sequence alpha_0 .. alpha_{d-1}; entries from
    ``floor(d/2)`` on are the shifted ``-beta_{d-k-1}``.
    """

    d: int
    alphas: np.ndarray
    betas: np.ndarray
    s_value: float


def _g(x: float, d: int) -> float:
    return 1.0 / np.tan(np.pi * (x + 0.25) / d)


def classical_decomposition(d: int) -> ClassicalDecomposition:
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    t = (-1) ** d * np.tan(np.pi / (4 * d))
    half = d // 2
    betas = np.array([(_g(k + 0.5, d) - t) / (2 * d) for k in range(half)])
    alphas = np.empty(d)
    for k in range(d):
        mirror = d - k - 1
        if k >= half and mirror < half:
            alphas[k] = -betas[mirror]
        else:
            # k < floor(d/2), or the vanishing middle term for odd d
            alphas[k] = (_g(k, d) + t) / (2 * d)
    s = 0.5 * (1 - 1.0 / np.tan(np.pi / d * (half + 0.25)))
    return ClassicalDecomposition(d, alphas, betas, float(s))


def _shift_prob(t: JointTable, k: int) -> float:
    """``p(first = second + k mod d)``."""
    d = t.d
    return float(sum(t.probs[(m + k) % d, m] for m in range(d)))


def tau_tilde(tables: Mapping[tuple[int, int], JointTable], d: int) -> float:
    """Real-coefficient form of tau_d, satisfying ``tau_d = d * tau_tilde - 8 S``.

    Terms for pairs measured in reverse order (A_3 or A_4 first) mirror the
    forward ones: ``p(A_i = A_j + k)`` from table ``(i, j)`` becomes
    ``p(A_j = A_i - k)`` from table ``(j, i)``.
    """
    dec = classical_decomposition(d)

    def fwd(i, j, k):
        return _shift_prob(tables[(i, j)], k) + _shift_prob(tables[(j, i)], -k)

    total = 0.0
    for k in range(d // 2):
        p = fwd(1, 3, k) + fwd(2, 3, -k) + fwd(2, 4, k) + fwd(1, 4, -k - 1)
        q = fwd(1, 3, -k - 1) + fwd(2, 3, k + 1) + fwd(2, 4, -k - 1) + fwd(1, 4, k)
        total += dec.alphas[k] * p - dec.betas[k] * q
    return total


@dataclass(frozen=True)
class BoundSearch:
    d: int
    value: float
    argmax: tuple


def classical_bound_bruteforce(d: int, check_tol: float = 1e-12) -> BoundSearch:
    """Maximise ``2 (alpha_q1 + alpha_q2 + alpha_q3 + alpha_{-1-q1-q2-q3})`` over q.

    Returns ``d * max - 8 S`` and the maximising ``(q1, q2, q3)``.

    Raises
    ------
    ConsistencyError
        If the result differs from :func:`classical_bound_closed` by more
        than ``check_tol``.
    """
    dec = classical_decomposition(d)
    al = dec.alphas
    best, arg = -np.inf, None
    for q in product(range(d), repeat=3):
        val = 2 * (al[q[0]] + al[q[1]] + al[q[2]] + al[(-1 - sum(q)) % d])
        if val > best + 1e-15:
            best, arg = val, q
    value = float(d * best - 8 * dec.s_value)
    closed = classical_bound_closed(d)
    if abs(value - closed) > check_tol:
        raise ConsistencyError(f"q-tuple bound {value!r} != closed form {closed!r} (d={d})")
    return BoundSearch(d, value, arg)


def deterministic_tables(v: tuple[int, int, int, int], d: int) -> dict[tuple[int, int], JointTable]:
    """Joint tables of a macrorealist device with pre-assigned outcomes ``v``."""
    out = {}
    for i, j in product(range(1, 5), repeat=2):
        p = np.zeros((d, d))
        p[v[i - 1], v[j - 1]] = 1.0
        out[(i, j)] = JointTable(p)
    return out


def classical_bound_enumeration(d: int, check_tol: float = 1e-12) -> BoundSearch:
    """Maximum of tau_d over all d**4 deterministic outcome assignments.

    tau_d is evaluated from the delta statistics through the Fourier path
    (:func:`tau_pair_contribution`); no derivation step is assumed.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    # each pair's contribution depends only on (v_i, v_j)
    grids = {}
    for pair in TAU_PAIRS:
        g = np.empty((d, d))
        for x, y in product(range(d), repeat=2):
            p = np.zeros((d, d))
            p[x, y] = 1.0
            g[x, y] = tau_pair_contribution(JointTable(p), pair, d).real
        grids[pair] = g
    total = np.zeros((d,) * 4)
    for (i, j), g in grids.items():
        shape = [1, 1, 1, 1]
        shape[i - 1] = d
        shape[j - 1] = d
        total = total + (g if i < j else g.T).reshape(shape)
    flat = int(np.argmax(total))
    value = float(total.flat[flat])
    closed = classical_bound_closed(d)
    if abs(value - closed) > check_tol:
        raise ConsistencyError(f"enumerated bound {value!r} != closed form {closed!r} (d={d})")
    return BoundSearch(d, value, tuple(int(x) for x in np.unravel_index(flat, total.shape)))
