"""Dense complex linear algebra helpers for small unitary operators.

Operators are plain complex numpy arrays.  Everything here is sized for
the few-qubit regime (dimension <= 64 for eigenroutines); no sparsity,
no cleverness.  Eigenphases of a unitary are returned in [0, 2*pi),
sorted ascending, with multiplicity.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import NoConvergenceError, NonSquareError, NotUnitaryError

MAX_EIG_DIM = 64

TWO_PI = 2.0 * np.pi


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, first factor on the most significant side."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0 or b.size == 0:
        raise NonSquareError("kron operands must be non-empty")
    return np.kron(a, b)


def kron_power(m: np.ndarray, k: int) -> np.ndarray:
    """k-fold Kronecker power of m (k >= 1)."""
    if k < 1:
        raise ValueError(f"kron power must be >= 1, got {k}")
    out = np.asarray(m)
    for _ in range(k - 1):
        out = np.kron(out, m)
    return out


def is_unitary(m: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff m is square and satisfies ||M^dag M - I||_max <= tol."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    return bool(np.max(np.abs(dagger(m) @ m - np.eye(d))) <= tol)


def unitary_eigensystem(
    u: np.ndarray, tol: float = 1e-9
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenphases and an orthonormal eigenbasis of a unitary matrix.

    Uses the complex Schur form: for a normal matrix the Schur factor is
    diagonal and the Schur vectors are an orthonormal eigenbasis, which
    stays well behaved under degenerate eigenvalues.  Returns
    ``(phases, vectors)`` with phases in [0, 2*pi) sorted ascending and
    ``vectors[:, k]`` the eigenvector for ``phases[k]``.

    Raises NotUnitaryError if the input fails the unitarity check and
    NoConvergenceError if any eigenpair residual exceeds ``10 * tol``.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol=max(tol, 1e-9)):
        raise NotUnitaryError("eigenphases requested for a non-unitary matrix")
    if u.shape[0] > MAX_EIG_DIM:
        raise ValueError(f"dimension {u.shape[0]} exceeds supported {MAX_EIG_DIM}")
    t, z = scipy.linalg.schur(u, output="complex")
    lam = np.diag(t)
    # Snap eigenvalues onto the unit circle before extracting phases.
    lam = lam / np.abs(lam)
    residual = np.max(np.abs(u @ z - z * lam[np.newaxis, :]))
    if residual > 10.0 * tol:
        raise NoConvergenceError(
            f"eigenpair residual {residual:.3e} exceeds {10.0 * tol:.3e}"
        )
    phases = np.angle(lam) % TWO_PI
    order = np.argsort(phases, kind="stable")
    return phases[order], z[:, order]


def eigenphases_unitary(u: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Sorted eigenphases of a unitary in [0, 2*pi), with multiplicity."""
    phases, _ = unitary_eigensystem(u, tol=tol)
    return phases


def states_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff unit vectors a and b agree up to a global phase."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        return False
    return bool(abs(abs(np.vdot(a, b)) - 1.0) <= tol)
