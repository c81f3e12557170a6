"""Shared helpers for the test suite."""

import numpy as np


def haar_unitary(rng, dim=2):
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def unitary_with_phases(rng, phases):
    """Random-basis unitary whose eigenphase multiset is ``phases``."""
    basis = haar_unitary(rng, dim=len(phases))
    return basis @ np.diag(np.exp(1j * np.asarray(phases))) @ basis.conj().T


def pair_with_arc(rng, arc):
    """Random qubit pair (u, v) whose relative unitary has arc ``arc``."""
    offset = rng.uniform(0.0, 2.0 * np.pi)
    relative = unitary_with_phases(rng, [offset, offset + arc])
    v = haar_unitary(rng)
    return v @ relative, v


def matrices_equal_up_to_phase(a, b, tol=1e-10):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < tol:
        return np.max(np.abs(a)) <= tol
    phase = a[idx] / b[idx]
    if abs(abs(phase) - 1.0) > 1e-6:
        return False
    return np.max(np.abs(a - phase * b)) <= tol
