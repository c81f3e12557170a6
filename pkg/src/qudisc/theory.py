"""Closed-form quantities for discriminating two unitary channels.

The central object is the arc function theta(U): the length of the
smallest arc of the unit circle containing every eigenvalue of U.  For
a pair of unitaries (U, V) applied to an unknown system, everything one
can say about single-use distinguishability reduces to M = V^dag U:

* nu        = min |w| over the numerical range of M
            = cos(theta/2) for theta < pi, else 0
* ||.||_diamond distance between the channels = 2 * sqrt(1 - nu^2)
* optimal one-use success = 1/2 + diamond/4
* perfect discrimination is possible iff theta >= pi, and requires at
  least ceil(pi / theta) uses when theta > 0 (valid while the combined
  arc N*theta stays below 2*pi, after which the arc no longer adds up).

Arc lengths add under tensor powers while they fit on the circle:
theta(M^(x) n) = n * theta(M) whenever n * theta(M) < 2*pi, which is
what makes multi-use discrimination strictly more powerful than
repeating single-use measurements.

A state psi with <psi|M|psi> = 0 (a "discriminator") exists exactly
when theta >= pi; U psi and V psi are then orthogonal and one
projective measurement tells them apart with certainty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonSquareError,
    NotUnitaryError,
    NoZeroInHullError,
)
from .gates import SQRT_X, rz_matrix
from .linalg import TWO_PI, dagger, eigenphases_unitary, is_unitary, unitary_eigensystem


def arc_function(u: np.ndarray, tol: float = 1e-9) -> float:
    """Length of the smallest unit-circle arc containing all eigenvalues of u.

    Computed as 2*pi minus the largest circular gap between consecutive
    sorted eigenphases.  A unitary with a single distinct eigenphase has
    arc 0.  Result lies in [0, 2*pi).
    """
    phases = eigenphases_unitary(u, tol=tol)
    gaps = np.diff(phases)
    wrap = phases[0] + TWO_PI - phases[-1]
    largest = max(float(np.max(gaps, initial=0.0)), float(wrap))
    return max(TWO_PI - largest, 0.0)


@dataclass(frozen=True)
class UnitaryPair:
    """A pair of single-qubit unitaries to be told apart."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        for name, m in (("u", self.u), ("v", self.v)):
            m = np.asarray(m, dtype=complex)
            if m.shape != (2, 2):
                raise DimensionMismatchError(
                    f"{name} must be 2x2, got shape {m.shape}"
                )
            if not is_unitary(m, tol=1e-10):
                raise NotUnitaryError(f"{name} is not unitary within 1e-10")
            object.__setattr__(self, name, m)

    def relative(self) -> np.ndarray:
        """V^dag U — the only operator discrimination depends on."""
        return dagger(self.v) @ self.u


def example_pair(example: str, n_copies: int) -> UnitaryPair:
    """The two worked unitary pairs, tuned so that N uses discriminate perfectly.

    ``example1``: identity vs RZ(pi/N) — a bare phase gate.
    ``example2``: sqrt(X) RZ(-pi/2N) sqrt(X) vs sqrt(X) RZ(+pi/2N) sqrt(X) —
    the same arc pi/N hidden inside a native-gate sandwich.

    Both satisfy theta(V^dag U) = pi / n_copies.
    """
    if n_copies < 1:
        raise ValueError(f"n_copies must be >= 1, got {n_copies}")
    if example == "example1":
        return UnitaryPair(u=np.eye(2, dtype=complex), v=rz_matrix(np.pi / n_copies))
    if example == "example2":
        half = np.pi / (2 * n_copies)
        return UnitaryPair(
            u=SQRT_X @ rz_matrix(-half) @ SQRT_X,
            v=SQRT_X @ rz_matrix(+half) @ SQRT_X,
        )
    raise ValueError(f"unknown example {example!r}")


def nu_min_modulus(pair: UnitaryPair, tol: float = 1e-9) -> float:
    """min |w| over the numerical range of V^dag U.

    For a unitary (normal) matrix the numerical range is the convex hull
    of the eigenvalues, so the minimum is cos(theta/2) when the arc stays
    below pi and 0 once the hull swallows the origin.
    """
    theta = arc_function(pair.relative(), tol=tol)
    if theta >= np.pi:
        return 0.0
    return float(np.cos(theta / 2.0))


def numerical_range_min_bruteforce(
    m: np.ndarray, samples: int = 100_000, seed: int = 0
) -> float:
    """Estimate min |<x|M|x>| by brute force; oracle for nu_min_modulus.

    Draws Haar-random unit vectors and, when M is normal, also evaluates
    the closest point to the origin on every chord between two
    eigenvalues (those chords are attained by two-eigenvector mixtures,
    which is where the true minimum lives for normal M).
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {m.shape}")
    dim = m.shape[0]
    if dim > 16:
        raise ValueError(f"brute force supports dim <= 16, got {dim}")

    rng = np.random.default_rng(seed)
    best = np.inf
    remaining = samples
    while remaining > 0:
        chunk = min(remaining, 20_000)
        x = rng.standard_normal((chunk, dim)) + 1j * rng.standard_normal((chunk, dim))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        vals = np.einsum("bi,ij,bj->b", x.conj(), m, x, optimize=True)
        best = min(best, float(np.min(np.abs(vals))))
        remaining -= chunk

    if np.max(np.abs(m @ dagger(m) - dagger(m) @ m)) <= 1e-9:
        lam = np.linalg.eigvals(m)
        for a, b in combinations(lam, 2):
            best = min(best, _segment_min_modulus(a, b))
    return best


def _segment_min_modulus(a: complex, b: complex) -> float:
    """Distance from the origin to the segment [a, b] in the complex plane."""
    d = b - a
    dd = (d * d.conjugate()).real
    if dd < 1e-30:
        return abs(a)
    t = min(max(-((d.conjugate() * a).real) / dd, 0.0), 1.0)
    return abs(a + t * d)


@dataclass(frozen=True)
class DiscriminationReport:
    """Single-use discrimination quantities plus the perfect-use count."""

    theta: float
    nu: float
    diamond_norm: float
    p_success_bound: float
    min_copies: int | None  # None when theta == 0 (channels identical)

    @property
    def perfect_single_use(self) -> bool:
        return self.nu == 0.0


def discrimination_report(pair: UnitaryPair, tol: float = 1e-9) -> DiscriminationReport:
    """Arc, nu, diamond distance, optimal one-use success and copy count."""
    theta = arc_function(pair.relative(), tol=tol)
    nu = 0.0 if theta >= np.pi else float(np.cos(theta / 2.0))
    diamond = 2.0 * math.sqrt(max(1.0 - nu * nu, 0.0))
    p_bound = 0.5 + diamond / 4.0
    if theta <= tol:
        copies = None
    else:
        ratio = np.pi / theta
        # Guard the ceiling against float noise: theta = pi/N must give N.
        nearest = round(ratio)
        copies = int(nearest) if abs(ratio - nearest) < 1e-9 else math.ceil(ratio)
        copies = max(copies, 1)
    return DiscriminationReport(
        theta=theta,
        nu=nu,
        diamond_norm=diamond,
        p_success_bound=p_bound,
        min_copies=copies,
    )


def discriminator_state(
    m: np.ndarray, tol: float = 1e-9, unit_scalar: complex = 1.0
) -> np.ndarray:
    """A unit vector psi with <psi|M|psi> = 0, for unitary M with arc >= pi.

    The zero is assembled from at most three eigenvectors.  If two
    eigenvalues are antipodal the state is their equal-weight
    superposition (psi = (v_j + lambda * v_k)/sqrt(2), with the free unit
    scalar ``unit_scalar`` on the second branch); otherwise eigenvalue
    triples are scanned in sorted-phase order for the first triangle
    containing the origin, and the barycentric weights of the origin give
    the amplitudes.

    Raises NoZeroInHullError when theta(M) < pi - tol.
    """
    m = np.asarray(m, dtype=complex)
    phases, vectors = unitary_eigensystem(m, tol=tol)
    theta = arc_function(m, tol=tol)
    if theta < np.pi - tol:
        raise NoZeroInHullError(
            f"arc {theta:.6f} < pi; the numerical range misses the origin"
        )
    lam = np.exp(1j * phases)

    psi = None
    for j, k in combinations(range(len(phases)), 2):
        if abs((phases[k] - phases[j]) - np.pi) <= max(tol, 1e-9):
            psi = (vectors[:, j] + unit_scalar * vectors[:, k]) / math.sqrt(2.0)
            break
    if psi is None:
        for idx in combinations(range(len(phases)), 3):
            weights = _origin_barycentric(lam[list(idx)])
            if weights is None:
                continue
            psi = sum(
                math.sqrt(wt) * vectors[:, i] for wt, i in zip(weights, idx)
            )
            break
    if psi is None:
        raise NoZeroInHullError("no antipodal pair or origin-covering triple found")

    psi = psi / np.linalg.norm(psi)
    residual = abs(np.vdot(psi, m @ psi))
    if residual > 10.0 * max(tol, 1e-12):
        raise RuntimeError(f"discriminator residual {residual:.3e} out of tolerance")
    return psi


def _origin_barycentric(tri: np.ndarray) -> tuple[float, float, float] | None:
    """Barycentric weights of the origin in a complex triangle, or None."""
    a = np.array(
        [[z.real for z in tri], [z.imag for z in tri], [1.0, 1.0, 1.0]]
    )
    if abs(np.linalg.det(a)) < 1e-12:
        return None
    w = np.linalg.solve(a, np.array([0.0, 0.0, 1.0]))
    if np.min(w) < -1e-12:
        return None
    w = np.clip(w, 0.0, None)
    w = w / np.sum(w)
    return (float(w[0]), float(w[1]), float(w[2]))


def helstrom_pair_success(psi0: np.ndarray, psi1: np.ndarray) -> float:
    """Optimal success probability for telling two equiprobable pure states apart.

    1/2 + sqrt(1 - |<psi0|psi1>|^2) / 2 — attained by the projective
    measurement along the bisectors of the two states.
    """
    psi0 = np.asarray(psi0, dtype=complex).ravel()
    psi1 = np.asarray(psi1, dtype=complex).ravel()
    if psi0.shape != psi1.shape:
        raise DimensionMismatchError(
            f"state dimensions differ: {psi0.shape} vs {psi1.shape}"
        )
    overlap = min(abs(np.vdot(psi0, psi1)), 1.0)
    return 0.5 + 0.5 * math.sqrt(1.0 - overlap * overlap)
