"""Sequential measurement statistics under the Lueders update rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, NumericError, PreconditionError, ValidationError
from .numerics import DEFAULT_TOL, ToleranceConfig, as_matrix, dagger, haar_unitary, hs_norm
from .observables import Quartet, RootOfUnityObservable

__all__ = [
    "Povm",
    "PreparedState",
    "JointTable",
    "ProjectivityResult",
    "ALL_PAIRS",
    "maximally_mixed",
    "pure_state",
    "povm_from_observable",
    "smoothed_povm",
    "random_povm",
    "luders_joint",
    "first_marginal",
    "conditional_second",
    "repeatability_residuals",
    "projectivity_check",
    "quartet_tables",
]

ALL_PAIRS = tuple((i, j) for i, j in product(range(1, 5), repeat=2))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)


@dataclass(frozen=True, eq=False)
class Povm:
    """d-outcome POVM with Kraus operators ``U_a sqrt(M_a)``.

    ``kraus_unitaries`` defaults to identities, i.e. the Lueders instrument.
    """

    effects: tuple
    kraus_unitaries: tuple | None = None

    @property
    def d(self) -> int:
        return len(self.effects)

    @property
    def D(self) -> int:
        return self.effects[0].shape[0]

    def kraus(self) -> list[np.ndarray]:
        us = self.kraus_unitaries or (None,) * self.d
        out = []
        for m, u in zip(self.effects, us):
            k = _psd_sqrt(m)
            out.append(k if u is None else u @ k)
        return out

    def validate(self, tol: ToleranceConfig = DEFAULT_TOL) -> "Povm":
        res = {}
        eye = np.eye(self.D)
        res["completeness"] = hs_norm(sum(self.effects) - eye)
        for a, m in enumerate(self.effects):
            if m.shape != (self.D, self.D):
                raise DimensionError(f"effect {a} has shape {m.shape}")
            res[f"hermitian[{a}]"] = hs_norm(m - dagger(m))
            res[f"negativity[{a}]"] = max(0.0, -float(np.linalg.eigvalsh((m + dagger(m)) / 2)[0]))
        for a, u in enumerate(self.kraus_unitaries or ()):
            res[f"kraus_unitarity[{a}]"] = hs_norm(dagger(u) @ u - eye)
        bad = {k: v for k, v in res.items() if v > tol.structural_tol}
        if bad:
            raise ValidationError("invalid POVM: " + ", ".join(f"{k}={v:.3e}" for k, v in bad.items()), bad)
        return self


@dataclass(frozen=True, eq=False)
class PreparedState:
    density: np.ndarray

    @property
    def D(self) -> int:
        return self.density.shape[0]

    def validate(self, tol: ToleranceConfig = DEFAULT_TOL) -> "PreparedState":
        rho = self.density
        herm = hs_norm(rho - dagger(rho))
        tr = abs(np.trace(rho) - 1)
        neg = max(0.0, -float(np.linalg.eigvalsh((rho + dagger(rho)) / 2)[0]))
        if herm > tol.structural_tol or tr > tol.structural_tol or neg > tol.structural_tol:
            raise ValidationError(
                f"not a density matrix (hermiticity {herm:.2e}, trace error {tr:.2e}, negativity {neg:.2e})"
            )
        return self

    def is_maximally_mixed(self, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        return hs_norm(self.density - np.eye(self.D) / self.D) <= tol.structural_tol


@dataclass(frozen=True)
class JointTable:
    """``probs[a, b] = p(a, b | first, second)``."""

    probs: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def checked(cls, probs, tol: ToleranceConfig = DEFAULT_TOL) -> "JointTable":
        """Clamp round-off negatives to zero and verify normalisation."""
        p = np.array(probs, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DimensionError(f"joint table must be square, got shape {p.shape}")
        if p.min() < -tol.structural_tol or p.max() > 1 + tol.structural_tol:
            raise NumericError(f"probability out of [0, 1] beyond tolerance: [{p.min()}, {p.max()}]")
        p = np.clip(p, 0.0, 1.0)
        if abs(p.sum() - 1) > tol.value_tol:
            raise NumericError(f"joint table sums to {p.sum()!r}")
        return cls(p)


@dataclass(frozen=True)
class ProjectivityResult:
    projective: bool
    repeatability_residuals: list
    idempotency_residuals: list
    idempotent: bool

    @property
    def criteria_agree(self) -> bool:
        return self.projective == self.idempotent


def maximally_mixed(D: int) -> PreparedState:
    if D < 1:
        raise DimensionError(f"D must be >= 1, got {D}")
    return PreparedState(np.eye(D, dtype=np.complex128) / D)


def pure_state(psi) -> PreparedState:
    """Density matrix of the normalised vector ``psi``."""
    v = np.asarray(psi, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return PreparedState(np.outer(v, v.conj()))


def povm_from_observable(obs: RootOfUnityObservable, kraus_unitaries=None) -> Povm:
    return Povm(tuple(obs.projectors), kraus_unitaries)


def smoothed_povm(obs: RootOfUnityObservable, lam: float) -> Povm:
    """Effects ``lam * P_a + (1 - lam)/d * 1``; projective only for ``lam == 1``."""
    eye = np.eye(obs.D)
    return Povm(tuple(lam * p + (1 - lam) / obs.d * eye for p in obs.projectors))


def random_povm(d: int, D: int, rng: np.random.Generator, projective: bool) -> Povm:
    """Random d-outcome POVM on C^D.

    Projective POVMs rotate a random partition of the computational basis
    by a Haar unitary. Non-projective ones additionally mix in
    ``(1 - lam)/d * 1`` with ``lam`` drawn from [0.5, 0.99].
    """
    labels = rng.integers(0, d, size=D)
    u = haar_unitary(D, int(rng.integers(0, 2**63 - 1)))
    effects = []
    for a in range(d):
        cols = u[:, labels == a]
        effects.append(cols @ dagger(cols))
    if not projective:
        lam = rng.uniform(0.5, 0.99)
        eye = np.eye(D)
        effects = [lam * m + (1 - lam) / d * eye for m in effects]
    return Povm(tuple(effects))


def _rho(rho) -> np.ndarray:
    return rho.density if isinstance(rho, PreparedState) else as_matrix(rho)


def luders_joint(
    rho, first: Povm, second: Povm, tol: ToleranceConfig = DEFAULT_TOL
) -> JointTable:
    """Joint statistics of measuring ``first`` then ``second``.

    ``probs[a, b] = Tr[E_b K_a rho K_a^dagger]`` where ``K_a`` are the Kraus
    operators of ``first`` and ``E_b`` the effects of ``second``.
    """
    r = _rho(rho)
    if not (r.shape[0] == first.D == second.D):
        raise DimensionError(f"dimension mismatch: rho {r.shape[0]}, first {first.D}, second {second.D}")
    posts = [k @ r @ dagger(k) for k in first.kraus()]
    # Tr[E post] = sum(E^T * post) elementwise
    probs = np.array([[np.sum(e.T * post).real for e in second.effects] for post in posts])
    return JointTable.checked(probs, tol)


def first_marginal(t: JointTable) -> np.ndarray:
    return t.probs.sum(axis=1)


def conditional_second(t: JointTable) -> tuple[np.ndarray, np.ndarray]:
    """Conditional distributions ``p(b | a)`` as rows, plus a flag per row.

    Rows whose first-outcome marginal vanishes are set to the uniform
    distribution and flagged ``True``.
    """
    marg = first_marginal(t)
    zero = marg <= 0.0
    cond = np.empty_like(t.probs)
    cond[~zero] = t.probs[~zero] / marg[~zero, None]
    cond[zero] = 1.0 / t.d
    return cond, zero


def repeatability_residuals(
    m: Povm, rho, tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """``|p(a, a | A, A) - p(a | A)|`` for each outcome ``a``.

    Only meaningful on the maximally mixed state, which is enforced.
    """
    state = rho if isinstance(rho, PreparedState) else PreparedState(as_matrix(rho))
    if not state.is_maximally_mixed(tol):
        raise PreconditionError("repeatability criterion requires the maximally mixed state")
    t = luders_joint(state, m, m, tol)
    return np.abs(np.diag(t.probs) - first_marginal(t))


def projectivity_check(m: Povm, tol: ToleranceConfig = DEFAULT_TOL) -> ProjectivityResult:
    """Operational projectivity test (repeatability on 1/D) and direct idempotency.

    ``projective`` is the operational verdict; ``idempotent`` is the direct
    check ``||M_a^2 - M_a||_HS <= structural_tol`` for every effect.
    """
    rep = repeatability_residuals(m, maximally_mixed(m.D), tol)
    idem = [hs_norm(e @ e - e) for e in m.effects]
    return ProjectivityResult(
        projective=bool(rep.max() <= tol.value_tol),
        repeatability_residuals=[float(x) for x in rep],
        idempotency_residuals=idem,
        idempotent=bool(max(idem) <= tol.structural_tol),
    )


def quartet_tables(
    q: Quartet, rho, pairs: Sequence[tuple[int, int]] = ALL_PAIRS, tol: ToleranceConfig = DEFAULT_TOL
) -> dict[tuple[int, int], JointTable]:
    """Lueders joint tables for each ordered pair ``(i, j)`` of quartet members."""
    povms = {i: povm_from_observable(q[i]) for i in range(1, 5)}
    return {(i, j): luders_joint(rho, povms[i], povms[j], tol) for i, j in pairs}
