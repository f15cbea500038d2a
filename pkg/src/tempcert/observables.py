"""Root-of-unity observables and the canonical optimal quartet.

A d-outcome projective measurement ``{P_0, ..., P_{d-1}}`` is represented by
the unitary ``A = sum_a omega**a P_a`` with ``omega = exp(2 pi i / d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .exceptions import ConstructionError, DomainError, ValidationError
from .numerics import (
    DEFAULT_TOL,
    haar_unitary,
    ToleranceConfig,
    as_matrix,
    dagger,
    hs_norm,
    is_unitary,
    omega,
    spectral_project_roots,
    unitarity_residual,
)

__all__ = [
    "RootOfUnityObservable",
    "Quartet",
    "coeff_a",
    "build_z",
    "build_t",
    "observable_from_projectors",
    "observable_from_unitary",
    "observable_power",
    "canonical_quartet",
    "printed_forms",
    "random_observable",
    "random_quartet",
]


@dataclass(frozen=True, eq=False)
class RootOfUnityObservable:
    """Unitary observable with spectrum in the d-th roots of unity.

    ``projectors[a]`` is the spectral projector for eigenvalue ``omega**a``;
    it may be the zero matrix.
    """

    d: int
    unitary: np.ndarray
    projectors: tuple = field(repr=False)

    @property
    def D(self) -> int:
        return self.unitary.shape[0]

    @property
    def ranks(self) -> list[int]:
        return [int(round(np.trace(p).real)) for p in self.projectors]

    def power(self, k: int) -> np.ndarray:
        return observable_power(self, k)

    def conjugated(self, u: np.ndarray) -> "RootOfUnityObservable":
        """Return ``u A u^dagger`` with correspondingly rotated projectors."""
        ud = dagger(u)
        return RootOfUnityObservable(
            self.d, u @ self.unitary @ ud, tuple(u @ p @ ud for p in self.projectors)
        )

    def relabeled(self, perm: Sequence[int]) -> "RootOfUnityObservable":
        """Observable whose outcome ``a`` is this observable's outcome ``perm[a]``."""
        projs = [self.projectors[perm[a]] for a in range(self.d)]
        return observable_from_projectors(projs, self.d, check=False)


@dataclass(frozen=True, eq=False)
class Quartet:
    """The four observables ``A_1 .. A_4`` of the temporal scenario."""

    a1: RootOfUnityObservable
    a2: RootOfUnityObservable
    a3: RootOfUnityObservable
    a4: RootOfUnityObservable

    def __post_init__(self):
        ds = {o.d for o in self}
        dims = {o.D for o in self}
        if len(ds) != 1 or len(dims) != 1:
            raise ValidationError(
                f"quartet members disagree on d or D (d={sorted(ds)}, D={sorted(dims)})"
            )

    def __iter__(self) -> Iterator[RootOfUnityObservable]:
        return iter((self.a1, self.a2, self.a3, self.a4))

    def __getitem__(self, i: int) -> RootOfUnityObservable:
        """1-based access, matching the ``A_1 .. A_4`` labels."""
        if i not in (1, 2, 3, 4):
            raise IndexError(f"observable index must be 1..4, got {i}")
        return (self.a1, self.a2, self.a3, self.a4)[i - 1]

    @property
    def d(self) -> int:
        return self.a1.d

    @property
    def D(self) -> int:
        return self.a1.D

    @property
    def unitaries(self) -> list[np.ndarray]:
        return [o.unitary for o in self]

    def conjugated(self, u: np.ndarray) -> "Quartet":
        return Quartet(*(o.conjugated(u) for o in self))

    def replace(self, i: int, obs: RootOfUnityObservable) -> "Quartet":
        members = list(self)
        members[i - 1] = obs
        return Quartet(*members)


def coeff_a(k: int, d: int) -> complex:
    """Coefficient ``a_k = (1 - i)/2 * exp(i pi k / (2d))`` of the temporal expression."""
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if not 1 <= k <= d - 1:
        raise DomainError(f"k must lie in 1..{d - 1}, got {k}")
    return (1 - 1j) / 2 * np.exp(1j * np.pi * k / (2 * d))


def _check_d(d: int) -> None:
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")


def build_z(d: int) -> RootOfUnityObservable:
    """Generalised Pauli ``Z_d = diag(1, omega, ..., omega**(d-1))``."""
    _check_d(d)
    u = np.diag(omega(d) ** np.arange(d)).astype(np.complex128)
    projs = []
    for a in range(d):
        p = np.zeros((d, d), np.complex128)
        p[a, a] = 1.0
        projs.append(p)
    return RootOfUnityObservable(d, u, tuple(projs))


def build_t(d: int, tol: ToleranceConfig = DEFAULT_TOL) -> RootOfUnityObservable:
    """The d-dimensional unitary ``T_d`` with spectrum ``{omega**a}``.

    Entries are ``omega**(i + 1/2) delta_ij
    - (2/d) (-1)**(delta_i0 + delta_j0) omega**((i + j + 1)/2)`` with the
    principal branch ``omega**(1/2) = exp(i pi / d)``.
    """
    _check_d(d)
    half = np.exp(1j * np.pi / d)
    i = np.arange(d)
    sign = np.where(i == 0, -1.0, 1.0)
    u = np.diag(half ** (2 * i + 1)) - (2.0 / d) * np.outer(sign, sign) * half ** (
        i[:, None] + i[None, :] + 1
    )
    return observable_from_unitary(u, d, tol)


def observable_from_unitary(
    u, d: int, tol: ToleranceConfig = DEFAULT_TOL
) -> RootOfUnityObservable:
    u = as_matrix(u)
    projs = spectral_project_roots(u, d, tol)
    return RootOfUnityObservable(d, u, tuple(projs))


def _projector_residuals(projs: Sequence[np.ndarray]) -> dict[str, float]:
    n = projs[0].shape[0]
    eye = np.eye(n)
    res = {"completeness": hs_norm(sum(projs) - eye)}
    for a, p in enumerate(projs):
        res[f"hermitian[{a}]"] = hs_norm(p - dagger(p))
        res[f"idempotent[{a}]"] = hs_norm(p @ p - p)
        for b in range(a + 1, len(projs)):
            res[f"orthogonal[{a},{b}]"] = hs_norm(p @ projs[b])
    return res


def observable_from_projectors(
    projs: Sequence, d: int, tol: ToleranceConfig = DEFAULT_TOL, check: bool = True
) -> RootOfUnityObservable:
    """Fourier transform ``A = sum_a omega**a projs[a]`` of a projective measurement.

    Raises
    ------
    ValidationError
        If ``projs`` are not orthogonal idempotents summing to the identity;
        the offending residuals are attached to the exception.
    """
    if len(projs) != d:
        raise ValidationError(f"expected {d} projectors, got {len(projs)}")
    mats = [as_matrix(p) for p in projs]
    if check:
        res = _projector_residuals(mats)
        bad = {k: v for k, v in res.items() if v > tol.structural_tol}
        if bad:
            listing = ", ".join(f"{k}={v:.3e}" for k, v in bad.items())
            raise ValidationError(f"projectors are not a projective measurement: {listing}", bad)
    w = omega(d)
    u = sum(w**a * p for a, p in enumerate(mats))
    return RootOfUnityObservable(d, u, tuple(mats))


def observable_power(a: RootOfUnityObservable, k: int) -> np.ndarray:
    """``A**k`` with the exponent reduced mod d (so ``k = -1`` gives ``A^dagger``)."""
    return np.linalg.matrix_power(a.unitary, int(k) % a.d)


def _solve_optimal_pair(z: np.ndarray, t: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``a1 X + a1* w Y = Z^dag``, ``a1* X + a1 Y = T^dag`` for X, Y.

    X and Y are the inverses of the optimal third and fourth observables.
    """
    a1 = coeff_a(1, d)
    c1 = np.conj(a1)
    w = omega(d)
    det = a1 * a1 - c1 * c1 * w
    zd, td = dagger(z), dagger(t)
    x = (a1 * zd - c1 * w * td) / det
    y = (a1 * td - c1 * zd) / det
    return x, y


def _validate_canonical(obs: RootOfUnityObservable, name: str, tol: ToleranceConfig) -> None:
    if not is_unitary(obs.unitary, tol):
        raise ConstructionError(
            f"{name} is not unitary (residual {unitarity_residual(obs.unitary):.3e})"
        )
    if obs.ranks != [1] * obs.d:
        raise ConstructionError(f"{name} spectrum multiplicities {obs.ranks} != all ones")


def canonical_quartet(d: int, tol: ToleranceConfig = DEFAULT_TOL) -> Quartet:
    """Optimal quartet ``(Z_d, T_d, A_3, A_4)`` attaining ``tau_d = 4(d-1)``.

    ``A_3`` and ``A_4`` are obtained from the k = 1 optimality conditions
    ``A_1 B_1 = A_2 B_2 = 1`` by solving the 2x2 linear system for
    ``A_3^{-1}, A_4^{-1}`` and inverting.

    Raises
    ------
    ConstructionError
        If a constructed member fails unitarity or root-spectrum checks or
        the quartet misses the quantum maximum.
    """
    from .inequality import tau_operator

    _check_d(d)
    z = build_z(d)
    t = build_t(d, tol)
    x, y = _solve_optimal_pair(z.unitary, t.unitary, d)
    try:
        a3 = observable_from_unitary(np.linalg.inv(x), d, tol)
        a4 = observable_from_unitary(np.linalg.inv(y), d, tol)
    except ValueError as exc:
        raise ConstructionError(f"optimal A_3/A_4 are not root-of-unity observables: {exc}")
    for obs, name in ((z, "A_1"), (t, "A_2"), (a3, "A_3"), (a4, "A_4")):
        _validate_canonical(obs, name, tol)
    q = Quartet(z, t, a3, a4)
    tau = np.trace(tau_operator(q)).real / d
    if abs(tau - 4 * (d - 1)) > tol.value_tol:
        raise ConstructionError(f"canonical quartet gives tau={tau!r}, expected {4 * (d - 1)}")
    return q


def printed_forms(d: int, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """The closed forms ``a1* Z + 2 (a1*)**3 T`` and ``a1 Z - a1* T`` as raw matrices.

    Kept for comparison with :func:`canonical_quartet`. Both are unitary,
    but for d >= 3 their spectra are not d-th roots of unity and at d = 2
    the second one is minus the optimal fourth observable.
    """
    _check_d(d)
    z = build_z(d).unitary
    t = build_t(d, tol).unitary
    a1 = coeff_a(1, d)
    c1 = np.conj(a1)
    return c1 * z + 2 * c1**3 * t, a1 * z - c1 * t


def random_observable(d: int, D: int, rng: np.random.Generator) -> RootOfUnityObservable:
    """Haar-rotated diagonal observable with uniformly random root labels."""
    labels = rng.integers(0, d, size=D)
    u = haar_unitary(D, int(rng.integers(0, 2**63 - 1)))
    projs = []
    for a in range(d):
        cols = u[:, labels == a]
        projs.append(cols @ dagger(cols))
    return observable_from_projectors(projs, d, check=False)


def random_quartet(d: int, D: int, rng: np.random.Generator) -> Quartet:
    return Quartet(*(random_observable(d, D, rng) for _ in range(4)))
