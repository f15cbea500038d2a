"""Sum-of-squares certificates for the quantum maximum of tau_d.

Two operator families are built from a quartet. With

    P_x^(k) = 1 - A_x^k B_x^(k),        x = 1, 2
    Q_x^(k) = 1 - A_{x+2}^k C_x^(k),    x = 1, 2

both ``sum_{x,k} P^dag P`` and ``sum_{x,k} Q^dag Q`` equal
``4(d-1) 1 - beta`` for any unitary root-of-unity quartet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, PreconditionError
from .inequality import tau_operator
from .numerics import DEFAULT_TOL, ToleranceConfig, dagger, hs_norm, is_unitary, omega
from .observables import Quartet, RootOfUnityObservable, coeff_a, observable_power

__all__ = ["SosReport", "build_b", "build_c", "sos_residuals", "C_CONVENTIONS"]

C_CONVENTIONS = ("corrected", "printed")


@dataclass(frozen=True)
class SosReport:
    """Residuals of the two SOS identities.

    ``printed_alt_residual`` is the Q-family residual obtained with the
    unconjugated C coefficients; it is reported for comparison only.
    """

    d: int
    primary_residual: float
    alt_residual: float
    per_term_norms: list
    alt_per_term_norms: list
    printed_alt_residual: float


def _check_k(k: int, d: int) -> None:
    if not 1 <= k <= d - 1:
        raise DomainError(f"k must lie in 1..{d - 1}, got {k}")


def _check_x(x: int) -> None:
    if x not in (1, 2):
        raise DomainError(f"x must be 1 or 2, got {x}")


def _require_unitary(*obs: RootOfUnityObservable, tol: ToleranceConfig = DEFAULT_TOL) -> None:
    for o in obs:
        if not is_unitary(o.unitary, tol):
            raise PreconditionError("SOS operators require unitary observables")


def build_b(
    x: int, k: int, a3: RootOfUnityObservable, a4: RootOfUnityObservable
) -> np.ndarray:
    """``B_1 = a_k A_3^-k + a_k* w^k A_4^-k`` and ``B_2 = a_k* A_3^-k + a_k A_4^-k``."""
    _check_x(x)
    d = a3.d
    _check_k(k, d)
    _require_unitary(a3, a4)
    a = coeff_a(k, d)
    m3, m4 = observable_power(a3, -k), observable_power(a4, -k)
    if x == 1:
        return a * m3 + np.conj(a) * omega(d) ** k * m4
    return np.conj(a) * m3 + a * m4


def build_c(
    x: int,
    k: int,
    a1: RootOfUnityObservable,
    a2: RootOfUnityObservable,
    convention: str = "corrected",
) -> np.ndarray:
    """The C family paired with ``A_3`` (x = 1) and ``A_4`` (x = 2).

    ``"corrected"`` uses ``C_1 = a_k* A_1^-k + a_k A_2^-k`` and
    ``C_2 = a_k w^-k A_1^-k + a_k* A_2^-k``, for which the Q-family identity
    holds. ``"printed"`` uses the unconjugated coefficients
    ``C_1 = a_k A_1^-k + a_k* A_2^-k`` and ``C_2 = w^k a_k* A_1^-k + a_k A_2^-k``,
    for which it holds only at d = 2.
    """
    _check_x(x)
    if convention not in C_CONVENTIONS:
        raise ValueError(f"convention must be one of {C_CONVENTIONS}, got {convention!r}")
    d = a1.d
    _check_k(k, d)
    _require_unitary(a1, a2)
    a = coeff_a(k, d)
    c = np.conj(a)
    w = omega(d)
    m1, m2 = observable_power(a1, -k), observable_power(a2, -k)
    if convention == "printed":
        return a * m1 + c * m2 if x == 1 else w**k * c * m1 + a * m2
    return c * m1 + a * m2 if x == 1 else a * w ** (-k) * m1 + c * m2


def _family(q: Quartet, convention: str | None):
    """Yield ``(x, k, term)`` for the P family (convention None) or a Q family."""
    eye = np.eye(q.D)
    for k in range(1, q.d):
        for x in (1, 2):
            if convention is None:
                yield x, k, eye - observable_power(q[x], k) @ build_b(x, k, q.a3, q.a4)
            else:
                c = build_c(x, k, q.a1, q.a2, convention)
                yield x, k, eye - observable_power(q[x + 2], k) @ c


def _residual(q: Quartet, target: np.ndarray, convention: str | None):
    total = np.zeros_like(target)
    norms = []
    for _, _, p in _family(q, convention):
        total += dagger(p) @ p
        norms.append(hs_norm(p))
    return hs_norm(total - target), norms


def sos_residuals(q: Quartet, tol: ToleranceConfig = DEFAULT_TOL) -> SosReport:
    """HS norms of ``sum P^dag P - (4(d-1) 1 - beta)`` and the Q-family analogue.

    Terms are accumulated in fixed (k, x) order. ``per_term_norms`` lists
    ``||P_x^(k)||_HS`` in that order.
    """
    _require_unitary(*q, tol=tol)
    target = 4 * (q.d - 1) * np.eye(q.D) - tau_operator(q)
    primary, norms = _residual(q, target, None)
    alt, alt_norms = _residual(q, target, "corrected")
    printed, _ = _residual(q, target, "printed")
    return SosReport(q.d, primary, alt, norms, alt_norms, printed)
