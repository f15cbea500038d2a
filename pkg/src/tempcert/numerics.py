"""Dense complex linear algebra helpers with explicit tolerances.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, PreconditionError, SpectrumError

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "as_matrix",
    "omega",
    "hs_norm",
    "is_unitary",
    "unitarity_residual",
    "spectral_project_roots",
    "haar_unitary",
    "random_hermitian",
    "dagger",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances used throughout the package.

    Parameters
    ----------
    structural_tol : float
        Bound on Hilbert-Schmidt residuals of unitarity, idempotency and
        completeness checks.
    value_tol : float
        Bound for comparisons of scalar quantities (tau, epsilon, entropy).
    reference_tol : float
        Bound used when comparing against values only known to three decimals.
    """

    structural_tol: float = 1e-9
    value_tol: float = 1e-9
    reference_tol: float = 5e-3

    def __post_init__(self):
        for name in ("structural_tol", "value_tol", "reference_tol"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.reference_tol < self.structural_tol:
            raise ValueError("reference_tol must be >= structural_tol")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array (no copy when possible)."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("matrix has non-finite entries")
    return arr


def _square(m) -> np.ndarray:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def omega(d: int) -> complex:
    """Primitive d-th root of unity ``exp(2*pi*i/d)``."""
    return np.exp(2j * np.pi / d)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def hs_norm(m) -> float:
    """Hilbert-Schmidt (Frobenius) norm ``sqrt(Tr[m^dagger m])``."""
    arr = as_matrix(m)
    return float(np.linalg.norm(arr, "fro"))


def unitarity_residual(m) -> float:
    arr = _square(m)
    return hs_norm(dagger(arr) @ arr - np.eye(arr.shape[0]))


def is_unitary(m, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``||m^dagger m - 1||_HS <= tol.structural_tol``."""
    return unitarity_residual(m) <= tol.structural_tol


def spectral_project_roots(a, d: int, tol: ToleranceConfig = DEFAULT_TOL) -> list[np.ndarray]:
    """Spectral projectors of a unitary whose spectrum lies in the d-th roots of unity.

    Each eigenvalue is snapped to the nearest root ``omega**k`` by angular
    distance. Projector ``k`` collects all eigenvectors snapped to
    ``omega**k``; it is the zero matrix if that root is absent.

    Parameters
    ----------
    a : array_like
        Square unitary matrix.
    d : int
        Number of outcomes.
    tol : ToleranceConfig
        ``structural_tol`` bounds both the unitarity residual and the
        distance of each eigenvalue from its root.

    Returns
    -------
    list of ndarray
        ``d`` Hermitian projectors summing to the identity.

    Raises
    ------
    PreconditionError
        If ``a`` is not unitary.
    SpectrumError
        If an eigenvalue lies farther than ``structural_tol`` from every root.
    """
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    arr = _square(a)
    if not is_unitary(arr, tol):
        raise PreconditionError(
            f"matrix is not unitary (residual {unitarity_residual(arr):.3e})"
        )
    n = arr.shape[0]
    # Schur vectors stay orthonormal for degenerate eigenvalues; np.linalg.eig
    # vectors do not.
    evals, vecs = _unitary_eig(arr)
    angles = np.angle(evals)
    labels = np.rint(angles * d / (2 * np.pi)).astype(int) % d
    roots = omega(d) ** labels
    dist = np.abs(evals - roots)
    if np.any(dist > tol.structural_tol):
        worst = int(np.argmax(dist))
        raise SpectrumError(
            f"eigenvalue {evals[worst]:.6g} is {dist[worst]:.3e} away from the "
            f"nearest {d}-th root of unity"
        )
    projectors = []
    for k in range(d):
        cols = vecs[:, labels == k]
        projectors.append(cols @ dagger(cols) if cols.shape[1] else np.zeros((n, n), complex))
    return projectors


def _unitary_eig(u: np.ndarray):
    """Eigen-decomposition of a unitary with an orthonormal eigenbasis."""
    from scipy.linalg import schur

    t, z = schur(u, output="complex")
    return np.diag(t).copy(), z


def haar_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-distributed n x n unitary, deterministic in ``(n, seed)``.

    A complex Ginibre matrix is QR-factorised and the phases of ``R``'s
    diagonal are absorbed into ``Q`` so that the result is Haar distributed.
    """
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    phases = diag / np.abs(diag)
    return q * phases


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian matrix of unit Hilbert-Schmidt norm."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (g + dagger(g)) / 2
    return h / hs_norm(h)
