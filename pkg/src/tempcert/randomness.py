"""Randomness certified by the optimal quartet.

For rank-one measurements performed in sequence on the maximally mixed
state, the second outcome given the first is distributed according to the
overlaps ``Tr[P_first^a P_second^b]``. Its Shannon entropy is the
randomness measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConsistencyError, DomainError, NonUniformOverlapError, PreconditionError
from .numerics import DEFAULT_TOL, ToleranceConfig
from .observables import RootOfUnityObservable, canonical_quartet

__all__ = [
    "EntropyTable",
    "overlap_matrix",
    "pair_entropy",
    "averaged_pair_entropy",
    "zt_overlap",
    "t_eigenvector",
    "entropy_closed_form",
    "entropy_sweep",
    "REFERENCED_PAIRS",
    "UNREFERENCED_PAIRS",
]

REFERENCED_PAIRS = ((1, 2), (2, 1), (3, 4), (4, 3))
UNREFERENCED_PAIRS = ((1, 3), (3, 1), (1, 4), (4, 1), (2, 3), (3, 2), (2, 4), (4, 2))


def _shannon(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def overlap_matrix(first: RootOfUnityObservable, second: RootOfUnityObservable) -> np.ndarray:
    """``O[a, b] = Tr[P_first^a P_second^b]``."""
    return np.array([[np.sum(p.T * q).real for q in second.projectors] for p in first.projectors])


def pair_entropy(
    first: RootOfUnityObservable, second: RootOfUnityObservable, tol: ToleranceConfig = DEFAULT_TOL
) -> float:
    """Entropy in bits of the second outcome given any first outcome.

    Raises
    ------
    PreconditionError
        If a spectral projector is not rank one.
    NonUniformOverlapError
        If the entropy depends on the first outcome beyond ``value_tol``.
    """
    if any(r != 1 for r in first.ranks + second.ranks):
        raise PreconditionError("pair entropy needs rank-one projectors (D = d)")
    rows = np.clip(overlap_matrix(first, second), 0.0, None)
    ent = np.array([_shannon(r) for r in rows])
    if np.ptp(ent) > tol.value_tol:
        raise NonUniformOverlapError(f"entropy varies with the first outcome by {np.ptp(ent):.3e}")
    return float(ent[0])


def averaged_pair_entropy(first: RootOfUnityObservable, second: RootOfUnityObservable) -> float:
    """Entropy averaged over first outcomes with weights ``Tr[P^a] / D``.

    Defined for any pair, including those whose overlaps depend on the
    first outcome.
    """
    rows = np.clip(overlap_matrix(first, second), 0.0, None)
    weights = np.array(first.ranks, float) / first.D
    out = 0.0
    for w, r, n in zip(weights, rows, first.ranks):
        if n:
            out += w * _shannon(r / n)
    return float(out)


def zt_overlap(a1: int, a2: int, d: int) -> float:
    """``|<Z^a1|T^a2>|^2 = (4/d^2) / |1 - w^(a1 - a2 + 1/2)|^2``.

    Uses ``w^(1/2) = exp(i pi / d)``.
    """
    if not (0 <= a1 < d and 0 <= a2 < d):
        raise DomainError(f"outcomes must lie in 0..{d - 1}, got ({a1}, {a2})")
    z = np.exp(2j * np.pi * (a1 - a2 + 0.5) / d)
    return float(4 / d**2 / abs(1 - z) ** 2)


def t_eigenvector(r: int, d: int) -> np.ndarray:
    """Unit eigenvector of ``T_d`` for eigenvalue ``w**r``.

    ``|r> = (2/d) sum_q (-1)**delta_q0 w**(-q/2) / (1 - w**(r - q - 1/2)) |q>``.
    """
    if not 0 <= r < d:
        raise DomainError(f"r must lie in 0..{d - 1}, got {r}")
    q = np.arange(d)
    sign = np.where(q == 0, -1.0, 1.0)
    return (2 / d) * sign * np.exp(-1j * np.pi * q / d) / (1 - np.exp(2j * np.pi * (r - q - 0.5) / d))


def entropy_closed_form(d: int, check: bool = False, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """``-sum_x p_x log2 p_x`` with ``p_x = (4/d^2) / |1 - w^(x - 1/2)|^2``.

    With ``check`` the value is compared against :func:`pair_entropy` on
    the canonical ``(A_1, A_2)``.

    Raises
    ------
    ConsistencyError
        If ``check`` is set and the two values differ by more than ``value_tol``.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    x = np.arange(d)
    p = 4 / d**2 / np.abs(1 - np.exp(2j * np.pi * (x - 0.5) / d)) ** 2
    h = _shannon(p)
    if check:
        q = canonical_quartet(d, tol)
        direct = pair_entropy(q.a1, q.a2, tol)
        if abs(direct - h) > tol.value_tol:
            raise ConsistencyError(f"closed form {h!r} != overlap entropy {direct!r} (d={d})")
    return h


@dataclass(frozen=True)
class EntropyTable:
    """Rows ``(d, pair, entropy_bits, method)``.

    ``unreferenced`` holds averaged entropies of the remaining pairs, which
    have no independent reference value.
    """

    rows: list
    unreferenced: list = field(default_factory=list)

    def values(self, pair=(1, 2), method: str = "overlap") -> dict:
        return {d: h for d, p, h, m in self.rows if p == pair and m == method}


def entropy_sweep(d_min: int, d_max: int, tol: ToleranceConfig = DEFAULT_TOL) -> EntropyTable:
    """Entropies of the canonical pairs for ``d_min <= d <= d_max``, by both methods.

    Raises
    ------
    ConsistencyError
        If the methods or the symmetric pairs disagree beyond ``value_tol``.
    """
    if not 2 <= d_min <= d_max <= 32:
        raise DomainError(f"need 2 <= d_min <= d_max <= 32, got ({d_min}, {d_max})")
    rows, extra = [], []
    for d in range(d_min, d_max + 1):
        q = canonical_quartet(d, tol)
        closed = entropy_closed_form(d)
        for i, j in REFERENCED_PAIRS:
            h = pair_entropy(q[i], q[j], tol)
            if abs(h - closed) > tol.value_tol:
                raise ConsistencyError(f"H(A_{i},A_{j})={h!r} != closed form {closed!r} (d={d})")
            rows.append((d, (i, j), h, "overlap"))
            rows.append((d, (i, j), closed, "closed_form"))
        for i, j in UNREFERENCED_PAIRS:
            extra.append((d, (i, j), averaged_pair_entropy(q[i], q[j]), "overlap_averaged"))
    return EntropyTable(rows, extra)
