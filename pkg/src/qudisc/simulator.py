"""Dense statevector simulation with stochastic Pauli and readout noise.

Conventions
-----------
Qubit 0 is the least significant bit of every basis index.  Bitstrings
are rendered qubit-0-first by default; pass ``msb_first=True`` to get
the reversed (qubit ``n-1`` first) layout.  Idle qubits accrue no noise.

Noise model
-----------
``NoiseModel(p1, p2, p_read)``: after each one-qubit gate a uniformly
random non-identity Pauli (X, Y or Z) is inserted on its qubit with
probability ``p1``; after each two-qubit gate one of the 15 non-identity
two-qubit Paulis is inserted with probability ``p2``; each measured
qubit's classical bit flips independently with probability ``p_read``.
``DEFAULT_NOISE`` is the shipped fixture (3e-4, 8e-3, 1.5e-2).

Determinism
-----------
Shot ``i`` of a run with master seed ``s`` uses its own generator
``numpy.random.default_rng((s, i))`` and consumes draws in this order:

1. one block of ``len(gates)`` uniforms — gate ``g`` triggers an error
   when its uniform is below its rate (skipped when ``p1 == p2 == 0``);
2. per triggered gate, in circuit order, one integer draw choosing the
   Pauli (``integers(3)`` for 1q: 0=X 1=Y 2=Z; ``integers(15)`` for 2q,
   code ``c`` meaning the pair ``divmod(c + 1, 4)`` with 0=I 1=X 2=Y 3=Z
   on the first/second listed qubit);
3. one uniform selecting the outcome by inverse CDF over measured-bit
   probabilities in ascending basis order;
4. one block of uniforms, one per measured qubit in ascending qubit
   order, for readout flips (skipped when ``p_read == 0``).

Shots are therefore independent of each other and of evaluation order;
results merge into counts deterministically.  Identical error patterns
are simulated once and shared across the shots that drew them.

Performance note: circuits whose tail (everything after the last
two-qubit gate) is purely local and whose state at that point has at
most two computational branches — true for every scheme built here,
where that state is a GHZ ladder — re-simulate error trajectories by
propagating per-qubit 2x2 chains instead of full statevectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .circuits import MAX_QUBITS, Circuit
from .errors import (
    DimensionMismatchError,
    InvalidConfigError,
    TooManyQubitsError,
)
from .gates import Gate, IDENT2, PAULIS_1Q, gate_matrix


@dataclass(frozen=True)
class NoiseModel:
    """Stochastic Pauli insertion rates plus independent readout flips."""

    p1: float = 0.0
    p2: float = 0.0
    p_read: float = 0.0

    def __post_init__(self) -> None:
        for name, p in (("p1", self.p1), ("p2", self.p2), ("p_read", self.p_read)):
            if not 0.0 <= p <= 1.0:
                raise InvalidConfigError(f"{name} must lie in [0, 1], got {p}")

    @property
    def gate_noise(self) -> bool:
        return self.p1 > 0.0 or self.p2 > 0.0


NOISELESS = NoiseModel()
DEFAULT_NOISE = NoiseModel(p1=3e-4, p2=8e-3, p_read=1.5e-2)


@dataclass(frozen=True)
class OutcomeCounts:
    """Sampled measurement results: bitstring -> occurrences."""

    counts: Mapping[str, int]
    shots: int
    seed: int


def format_bits(index: int, n_bits: int, msb_first: bool = False) -> str:
    """Render a basis index as a bitstring (qubit-0-first unless msb_first)."""
    s = "".join(str((index >> j) & 1) for j in range(n_bits))
    return s[::-1] if msb_first else s


def zero_state(n_qubits: int) -> np.ndarray:
    state = np.zeros(2**n_qubits, dtype=complex)
    state[0] = 1.0
    return state


def _apply_1q(state: np.ndarray, m: np.ndarray, q: int, n: int) -> np.ndarray:
    psi = state.reshape(2 ** (n - 1 - q), 2, 2**q)
    psi = np.swapaxes(psi, 0, 1).reshape(2, -1)
    out = m @ psi
    return np.swapaxes(out.reshape(2, 2 ** (n - 1 - q), 2**q), 0, 1).reshape(-1)


def _apply_2q(state: np.ndarray, m: np.ndarray, qa: int, qb: int, n: int) -> np.ndarray:
    psi = state.reshape([2] * n)
    axes = (n - 1 - qa, n - 1 - qb)
    psi = np.moveaxis(psi, axes, (0, 1)).reshape(4, -1)
    out = (m @ psi).reshape(2, 2, *([2] * (n - 2)))
    return np.moveaxis(out, (0, 1), axes).reshape(-1)


def _apply_gate_matrix(state: np.ndarray, m: np.ndarray, qubits, n: int) -> np.ndarray:
    if len(qubits) == 1:
        return _apply_1q(state, m, qubits[0], n)
    return _apply_2q(state, m, qubits[0], qubits[1], n)


def run_statevector(c: Circuit, state: np.ndarray | None = None) -> np.ndarray:
    """Apply every gate of ``c`` to ``state`` (default |0...0>) exactly."""
    n = c.n_qubits
    if n > MAX_QUBITS:
        raise TooManyQubitsError(f"{n} qubits exceeds the supported {MAX_QUBITS}")
    if state is None:
        state = zero_state(n)
    else:
        state = np.asarray(state, dtype=complex).ravel().copy()
        if state.size != 2**n:
            raise DimensionMismatchError(
                f"state has {state.size} amplitudes, circuit needs {2**n}"
            )
    for g in c.gates:
        state = _apply_gate_matrix(state, gate_matrix(g), g.qubits, n)
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > 1e-9:
        raise RuntimeError(f"statevector norm drifted to {norm}")
    return state


def _measured_probs(state: np.ndarray, n: int, measured: tuple[int, ...]) -> np.ndarray:
    """Probability vector over the measured qubits (ascending-qubit bit order)."""
    p = np.abs(state) ** 2
    if len(measured) == n:
        return p
    keep = set(measured)
    drop = tuple(n - 1 - q for q in range(n) if q not in keep)
    return p.reshape([2] * n).sum(axis=drop).reshape(-1)


def exact_distribution(
    c: Circuit, cutoff: float = 1e-12, msb_first: bool = False
) -> dict[str, float]:
    """Noiseless outcome distribution over the measured qubits."""
    probs = _measured_probs(run_statevector(c), c.n_qubits, c.measured)
    k = len(c.measured)
    return {
        format_bits(i, k, msb_first): float(probs[i])
        for i in np.nonzero(probs > cutoff)[0]
    }


class _TrajectoryEngine:
    """Re-simulates a circuit with Pauli insertions, sharing structure.

    ``split`` is the index just past the last two-qubit gate.  When the
    noiseless state at the split has at most two computational branches,
    trajectories whose insertions all land after the split are evaluated
    by per-qubit 2x2 chain products and two Kronecker ladders; everything
    else falls back to gate-by-gate statevector simulation (running the
    dense part only up to the split, then applying the per-qubit tails).
    """

    def __init__(self, c: Circuit):
        self.circuit = c
        self.n = c.n_qubits
        self.mats = [gate_matrix(g) for g in c.gates]
        two_q = [i for i, g in enumerate(c.gates) if g.arity == 2]
        self.split = (two_q[-1] + 1) if two_q else 0

        prefix = Circuit(c.n_qubits, c.gates[: self.split], c.measured)
        self.prefix_state = run_statevector(prefix)
        branches = np.nonzero(np.abs(self.prefix_state) > 1e-12)[0]
        self.two_branch = len(branches) <= 2
        self.branches = branches

        # Per-qubit (global_gate_index, matrix) chains for the local tail.
        self.local_chains: list[list[tuple[int, np.ndarray]]] = [
            [] for _ in range(self.n)
        ]
        for i in range(self.split, len(c.gates)):
            g = c.gates[i]
            self.local_chains[g.qubits[0]].append((i, self.mats[i]))
        self.full_tail = [
            self._chain_product(q, {}) for q in range(self.n)
        ]

    def _chain_product(self, q: int, inserted: dict[int, np.ndarray]) -> np.ndarray:
        t = IDENT2
        for gi, m in self.local_chains[q]:
            t = m @ t
            if gi in inserted:
                t = inserted[gi] @ t
        return t

    def final_probs(self, key) -> np.ndarray:
        """Measured-bit probabilities for one error pattern.

        ``key`` is a tuple of (gate_index, pauli_code) pairs in circuit
        order; codes are read per the module draw-order contract.
        """
        c = self.circuit
        prefix_ins: list[tuple[int, int]] = []
        local_ins: dict[int, np.ndarray] = {}
        for gi, code in key:
            if gi < self.split:
                prefix_ins.append((gi, code))
            else:
                local_ins[gi] = PAULIS_1Q[code]

        if not prefix_ins and self.two_branch:
            tails = list(self.full_tail)
            for gi in local_ins:
                q = c.gates[gi].qubits[0]
                tails[q] = self._chain_product(q, local_ins)
            state = np.zeros(2**self.n, dtype=complex)
            for b in self.branches:
                vec = np.ones(1, dtype=complex)
                for q in range(self.n - 1, -1, -1):
                    vec = np.kron(vec, tails[q][:, (int(b) >> q) & 1])
                state += self.prefix_state[b] * vec
        else:
            state = zero_state(self.n)
            ins_map = dict(prefix_ins)
            for i in range(self.split):
                g = c.gates[i]
                state = _apply_gate_matrix(state, self.mats[i], g.qubits, self.n)
                if i in ins_map:
                    state = self._insert_pauli(state, g, ins_map[i])
            for q in range(self.n):
                tail = (
                    self._chain_product(q, local_ins) if local_ins else self.full_tail[q]
                )
                state = _apply_1q(state, tail, q, self.n)
        return _measured_probs(state, self.n, c.measured)

    def _insert_pauli(self, state: np.ndarray, g: Gate, code: int) -> np.ndarray:
        if g.arity == 1:
            return _apply_1q(state, PAULIS_1Q[code], g.qubits[0], self.n)
        a, b = divmod(code + 1, 4)
        if a:
            state = _apply_1q(state, PAULIS_1Q[a - 1], g.qubits[0], self.n)
        if b:
            state = _apply_1q(state, PAULIS_1Q[b - 1], g.qubits[1], self.n)
        return state


def sample_bitstrings(
    c: Circuit,
    shots: int,
    noise: NoiseModel = NOISELESS,
    seed: int = 0,
    msb_first: bool = False,
) -> list[str]:
    """Sample ``shots`` measurement outcomes, in shot order.

    Follows the per-shot draw-order contract in the module docstring, so
    a (circuit, shots, noise, seed) quadruple always yields an identical
    sequence.  Shots sharing an error pattern share one trajectory
    simulation.
    """
    if shots < 1:
        raise InvalidConfigError(f"shots must be >= 1, got {shots}")
    n_gates = len(c.gates)
    k = len(c.measured)
    rates = np.array(
        [noise.p1 if g.arity == 1 else noise.p2 for g in c.gates], dtype=float
    )
    arity1 = np.array([g.arity == 1 for g in c.gates])

    groups: dict[tuple, list[tuple[int, float, int]]] = {}
    for i in range(shots):
        rng = np.random.default_rng((seed, i))
        key: tuple = ()
        if noise.gate_noise and n_gates:
            u = rng.random(n_gates)
            hits = np.nonzero(u < rates)[0]
            if hits.size:
                key = tuple(
                    (int(gi), int(rng.integers(3 if arity1[gi] else 15)))
                    for gi in hits
                )
        u_out = float(rng.random())
        mask = 0
        if noise.p_read > 0.0 and k:
            r = rng.random(k)
            for b in range(k):
                if r[b] < noise.p_read:
                    mask |= 1 << b
        groups.setdefault(key, []).append((i, u_out, mask))

    engine = _TrajectoryEngine(c) if any(key != () for key in groups) else None
    words: list[str | None] = [None] * shots
    for key in sorted(groups):
        if key == () and engine is None:
            probs = _measured_probs(run_statevector(c), c.n_qubits, c.measured)
        else:
            probs = engine.final_probs(key)
        cum = np.cumsum(probs)
        top = len(cum) - 1
        for shot, u_out, mask in groups[key]:
            idx = min(int(np.searchsorted(cum, u_out, side="right")), top)
            words[shot] = format_bits(idx ^ mask, k, msb_first)
    return words


def sample_counts(
    c: Circuit,
    shots: int,
    noise: NoiseModel = NOISELESS,
    seed: int = 0,
    msb_first: bool = False,
) -> OutcomeCounts:
    """Aggregate ``sample_bitstrings`` into a counts table (keys sorted)."""
    counts: dict[str, int] = {}
    for word in sample_bitstrings(c, shots, noise=noise, seed=seed, msb_first=msb_first):
        counts[word] = counts.get(word, 0) + 1
    return OutcomeCounts(dict(sorted(counts.items())), shots, seed)
