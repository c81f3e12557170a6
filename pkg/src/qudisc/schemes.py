"""Builders for rectangular channel-discrimination schemes.

A scheme arranges ``n_copies = width x depth`` uses of an unknown
single-qubit channel on ``width`` qubits for ``depth`` sequential
layers, sandwiched between an entangling preparation, fixed processing
layers, and a final measurement basis change.  Two worked examples are
built from named gates only:

* ``example1`` — identity vs RZ(pi/N).  GHZ-type preparation, no
  processing between layers (identity slots), and either the ``short``
  measurement (uncompute the preparation; the two hypotheses land on two
  deterministic bitstrings) or the ``xor`` measurement (short plus a
  fan-out that expands the answer to all-zeros vs all-ones, decoded by
  majority of bits).
* ``example2`` — sqrt(X) RZ(-pi/2N) sqrt(X) vs sqrt(X) RZ(+pi/2N)
  sqrt(X).  X-conjugation between layers re-aligns the arcs so the whole
  block collapses to RZ(-/+ pi/2) on each qubit; a ``parity``
  measurement (RZ(pi/2) on qubit 0, Hadamard everywhere) then separates
  the hypotheses by the XOR of all bits (even = first hypothesis).

``custom`` schemes accept an arbitrary qubit pair whose arc satisfies
n_copies * theta = pi; preparation rotates a GHZ ladder into the
relative operator's eigenbasis, processing applies V^dag between
layers, and the measurement uncomputes the first hypothesis' evolution.
Their basis-change gates carry raw matrices, so they simulate but do not
export to the textual circuit format.

The entangler is a Hadamard-plus-CNOT cascade, or, for ``ecr``
hardware, an SX layer followed by an ECR cascade and a derived layer of
X corrections that restores the ladder to GHZ form (two computational
branches; the relative branch phase is recorded in circuit metadata).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .circuits import Circuit, circuit, concat, inverse_circuit
from .classify import MajorityBits, OutcomeSets, Parity, Rule
from .errors import CorrectionNotFoundError, InvalidSpecError
from .gates import Gate, PAULI_X, SQRT_X, rz_matrix
from .linalg import dagger, kron_power
from .simulator import exact_distribution, run_statevector
from .theory import UnitaryPair, arc_function, example_pair, unitary_eigensystem

PRIMITIVES = ("cnot", "ecr")
MEASUREMENTS = ("short", "xor", "parity")
EXAMPLES = ("example1", "example2", "custom")

MAX_WIDTH = 20
MAX_COLLAPSE_WIDTH = 10

_DEFAULT_MEASUREMENT = {"example1": "short", "example2": "parity", "custom": "short"}
_ALLOWED_MEASUREMENTS = {
    "example1": ("short", "xor"),
    "example2": ("parity",),
    "custom": ("short",),
}


@dataclass(frozen=True)
class SchemeSpec:
    """A validated rectangular scheme: which pair, how arranged, how read out."""

    example: str
    n_copies: int
    width: int
    depth: int
    primitive: str = "cnot"
    measurement: str | None = None
    lam: complex = 1.0 + 0.0j
    pair: UnitaryPair | None = None

    def __post_init__(self) -> None:
        if self.example not in EXAMPLES:
            raise InvalidSpecError(f"unknown example {self.example!r}")
        if self.primitive not in PRIMITIVES:
            raise InvalidSpecError(f"unknown primitive {self.primitive!r}")
        if self.width < 1 or self.depth < 1:
            raise InvalidSpecError("width and depth must be >= 1")
        if self.width > MAX_WIDTH:
            raise InvalidSpecError(f"width {self.width} exceeds {MAX_WIDTH}")
        if self.width * self.depth != self.n_copies:
            raise InvalidSpecError(
                f"width*depth = {self.width * self.depth} != n_copies = {self.n_copies}"
            )
        measurement = self.measurement or _DEFAULT_MEASUREMENT[self.example]
        if measurement not in _ALLOWED_MEASUREMENTS[self.example]:
            raise InvalidSpecError(
                f"measurement {measurement!r} cannot discriminate {self.example}; "
                f"allowed: {_ALLOWED_MEASUREMENTS[self.example]}"
            )
        object.__setattr__(self, "measurement", measurement)
        lam = complex(self.lam)
        if abs(abs(lam) - 1.0) > 1e-9:
            raise InvalidSpecError(f"lam must be a unit scalar, got |lam| = {abs(lam)}")
        if lam != 1.0 + 0.0j and self.example != "example1":
            raise InvalidSpecError("lam is only adjustable for example1")
        object.__setattr__(self, "lam", lam)
        if self.example == "custom":
            if self.pair is None:
                raise InvalidSpecError("custom schemes require an explicit pair")
            theta = arc_function(self.pair.relative())
            if abs(self.n_copies * theta - math.pi) > 1e-6:
                raise InvalidSpecError(
                    "custom schemes need n_copies * theta = pi "
                    f"(got {self.n_copies * theta:.8f})"
                )
        elif self.pair is not None:
            raise InvalidSpecError(f"{self.example} does not accept an explicit pair")

    def resolved_pair(self) -> UnitaryPair:
        if self.example == "custom":
            return self.pair
        return example_pair(self.example, self.n_copies)


_ecr_correction_cache: dict[int, tuple[tuple[int, ...], complex]] = {}


def build_entangler(width: int, primitive: str = "cnot") -> Circuit:
    """Prepare the two-branch ladder (|0...0> + lam |1...1>)/sqrt(2).

    ``cnot``: Hadamard on qubit 0 then a CNOT cascade — an exact GHZ
    state (branch phase 1).  ``ecr``: SX on every qubit, an ECR cascade,
    then the derived X-correction layer; the resulting branch phase is
    stored under ``meta["branch_phase"]`` along with the correction
    qubits and the branch indices.
    """
    if not 1 <= width <= MAX_WIDTH:
        raise InvalidSpecError(f"width must be in [1, {MAX_WIDTH}], got {width}")
    if primitive not in PRIMITIVES:
        raise InvalidSpecError(f"unknown primitive {primitive!r}")
    top = 2**width - 1
    if primitive == "cnot":
        gates = [Gate("h", (0,))]
        gates += [Gate("cx", (q, q + 1)) for q in range(width - 1)]
        meta = {"branches": (0, top), "branch_phase": 1.0 + 0.0j, "corrections": ()}
        return circuit(width, gates, meta=meta)

    gates = [Gate("sx", (q,)) for q in range(width)]
    gates += [Gate("ecr", (q, q + 1)) for q in range(width - 1)]
    if width not in _ecr_correction_cache:
        raw = run_statevector(circuit(width, gates))
        _ecr_correction_cache[width] = _ghz_form_correction(raw, width)
    subset, phase = _ecr_correction_cache[width]
    gates += [Gate("x", (q,)) for q in subset]
    meta = {"branches": (0, top), "branch_phase": phase, "corrections": subset}
    return circuit(width, gates, meta=meta)


def _ghz_form_correction(
    state: np.ndarray, width: int
) -> tuple[tuple[int, ...], complex]:
    """Smallest X-gate subset mapping ``state`` onto a two-branch ladder."""
    top = 2**width - 1
    inv_amp = math.sqrt(2.0)
    for size in range(width + 1):
        for subset in combinations(range(width), size):
            mask = sum(1 << q for q in subset)
            a0 = state[mask]          # amplitude landing on |0...0>
            a1 = state[top ^ mask]    # amplitude landing on |1...1>
            if (
                abs(abs(a0) * inv_amp - 1.0) <= 1e-9
                and abs(abs(a1) * inv_amp - 1.0) <= 1e-9
            ):
                return subset, complex(a1 / a0)
    raise CorrectionNotFoundError(
        f"no X layer maps the {width}-qubit preparation onto a two-branch ladder"
    )


def derive_pauli_corrections(c: Circuit, target: np.ndarray) -> tuple[int, ...]:
    """Smallest X-gate subset S with |<target| X_S (c |0...0>)| >= 1 - 1e-9.

    Subsets are scanned by size then lexicographically, so the result is
    canonical.  Above 12 qubits the exhaustive scan is replaced by
    matching the two dominant branches of the prepared state against the
    two dominant branches of the target.
    """
    target = np.asarray(target, dtype=complex).ravel()
    n = c.n_qubits
    if target.size != 2**n:
        raise InvalidSpecError(
            f"target has {target.size} amplitudes, circuit needs {2**n}"
        )
    out = run_statevector(c)
    idx = np.arange(2**n)

    def overlap(mask: int) -> float:
        return abs(np.vdot(target, out[idx ^ mask]))

    if n <= 12:
        for size in range(n + 1):
            for subset in combinations(range(n), size):
                mask = sum(1 << q for q in subset)
                if overlap(mask) >= 1.0 - 1e-9:
                    return subset
        raise CorrectionNotFoundError("no X subset reaches the target state")

    out_top = np.argsort(np.abs(out))[-2:]
    tgt_top = np.argsort(np.abs(target))[-2:]
    masks = sorted(
        {int(a) ^ int(b) for a in out_top for b in tgt_top},
        key=lambda m: (bin(m).count("1"), m),
    )
    for mask in masks:
        if overlap(mask) >= 1.0 - 1e-9:
            return tuple(q for q in range(n) if (mask >> q) & 1)
    raise CorrectionNotFoundError("no X subset reaches the target state")


def build_measurement(width: int, kind: str, primitive: str = "cnot") -> Circuit:
    """The measurement block for a scheme of the given width.

    ``short`` uncomputes the entangler, collapsing each hypothesis onto
    one deterministic bitstring.  ``xor`` appends a CNOT fan-out from the
    distinguishing qubit onto every qubit reading 0 in the second
    hypothesis' reference word, stretching the two answers to all-zeros
    vs all-ones.  ``parity`` applies RZ(pi/2) on qubit 0 and Hadamards
    everywhere, mapping GHZ branch phases -/+ i onto even/odd bit parity.
    At width 1 ``short`` and ``xor`` coincide.
    """
    if kind not in MEASUREMENTS:
        raise InvalidSpecError(f"unknown measurement {kind!r}")
    if kind == "parity":
        # the ECR ladder prepares its branches with an extra phase at odd
        # widths; fold its inverse into the qubit-0 rotation
        lam = complex(build_entangler(width, primitive).meta["branch_phase"])
        gates = [Gate("rz", (0,), phi=math.pi / 2.0 - cmath.phase(lam))]
        gates += [Gate("h", (q,)) for q in range(width)]
        return circuit(width, gates)

    ent = build_entangler(width, primitive)
    short = inverse_circuit(ent)
    if kind == "short":
        return circuit(width, short.gates, meta={"reference": None})

    ref = _flipped_branch_reference(ent, short)
    pivot = (ref & -ref).bit_length() - 1  # lowest set bit
    fanout = [
        Gate("cx", (pivot, q)) for q in range(width) if not (ref >> q) & 1
    ]
    return circuit(width, short.gates + tuple(fanout), meta={"reference": ref})


def _flipped_branch_reference(ent: Circuit, short: Circuit) -> int:
    """Basis index the uncompute maps the branch-flipped ladder onto.

    Flipping the relative sign between the two preparation branches is
    exactly what a perfectly discriminating black box does; uncomputing
    a Clifford preparation then lands on a single basis state.
    """
    psi = run_statevector(circuit(ent.n_qubits, ent.gates))
    b0, b1 = ent.meta["branches"]
    chi = psi.copy()
    chi[b1] = -chi[b1]
    out = run_statevector(circuit(short.n_qubits, short.gates), state=chi)
    ref = int(np.argmax(np.abs(out)))
    if abs(out[ref]) < 1.0 - 1e-9:
        raise CorrectionNotFoundError("uncompute did not land on a basis state")
    return ref


def _black_box_gates(example: str, q: int, phi: float, hypothesis: int) -> list[Gate]:
    """Native-gate realization of one channel use on qubit q.

    Both hypotheses occupy identical gate slots (example1's identity is
    an RZ(0)) so the stochastic noise model charges them symmetrically.
    """
    if example == "example1":
        return [Gate("rz", (q,), phi=phi if hypothesis else 0.0)]
    signed = -phi if hypothesis == 0 else phi
    return [Gate("sx", (q,)), Gate("rz", (q,), phi=signed), Gate("sx", (q,))]


def _example1_gates(spec: SchemeSpec, hypothesis: int) -> tuple[Circuit, Circuit, Circuit]:
    w, d = spec.width, spec.depth
    phi = math.pi / spec.n_copies
    prep = build_entangler(w, spec.primitive)
    arg = float(np.angle(spec.lam))
    if arg:
        prep = concat(prep, circuit(w, [Gate("rz", (0,), phi=arg)]))
    body = []
    for _ in range(d):
        for q in range(w):
            body += _black_box_gates("example1", q, phi, hypothesis)
    meas = build_measurement(w, spec.measurement, spec.primitive)
    if arg:
        meas = concat(circuit(w, [Gate("rz", (0,), phi=-arg)]), meas)
    return prep, circuit(w, body), meas


def _example2_body(width: int, depth: int, phi: float, hypothesis: int) -> list[Gate]:
    """X_0, the interleaved layers, and X_d for the conjugated-phase pair."""
    gates: list[Gate] = []
    for q in range(width):
        gates += [Gate("sx", (q,)), Gate("x", (q,))]
    for layer in range(depth):
        for q in range(width):
            gates += _black_box_gates("example2", q, phi, hypothesis)
        if layer < depth - 1:
            gates += [Gate("x", (q,)) for q in range(width)]
    for q in range(width):
        gates += [Gate("x", (q,)), Gate("sx", (q,))]
    return gates


def _custom_gates(spec: SchemeSpec, hypothesis: int) -> tuple[Circuit, Circuit, Circuit]:
    w, d = spec.width, spec.depth
    pair = spec.pair
    _, vecs = unitary_eigensystem(pair.relative())
    basis = np.ascontiguousarray(vecs)  # columns: extremal eigenvectors
    prep = concat(
        build_entangler(w, spec.primitive),
        circuit(w, [Gate("u1q", (q,), matrix=basis) for q in range(w)]),
    )
    use = pair.u if hypothesis == 0 else pair.v
    vdag = dagger(pair.v)
    body: list[Gate] = []
    for layer in range(d):
        body += [Gate("u1q", (q,), matrix=use) for q in range(w)]
        if layer < d - 1:
            body += [Gate("u1q", (q,), matrix=vdag) for q in range(w)]

    h0_body = [Gate("u1q", (q,), matrix=pair.u) for q in range(w)]
    ref_body: list[Gate] = []
    for layer in range(d):
        ref_body += h0_body
        if layer < d - 1:
            ref_body += [Gate("u1q", (q,), matrix=vdag) for q in range(w)]
    meas = inverse_circuit(concat(prep, circuit(w, ref_body)))
    return prep, circuit(w, body), meas


def assemble_scheme(spec: SchemeSpec, hypothesis: int) -> Circuit:
    """The full measured circuit a given hypothesis would produce."""
    if hypothesis not in (0, 1):
        raise InvalidSpecError(f"hypothesis must be 0 or 1, got {hypothesis}")
    if spec.example == "example1":
        prep, body, meas = _example1_gates(spec, hypothesis)
    elif spec.example == "example2":
        phi = math.pi / (2.0 * spec.n_copies)
        prep = build_entangler(spec.width, spec.primitive)
        body = circuit(spec.width, _example2_body(spec.width, spec.depth, phi, hypothesis))
        meas = build_measurement(spec.width, "parity", spec.primitive)
    else:
        prep, body, meas = _custom_gates(spec, hypothesis)
    full = concat(concat(prep, body), meas)
    meta = {
        "example": spec.example,
        "width": spec.width,
        "depth": spec.depth,
        "hypothesis": hypothesis,
        **full.meta,
    }
    return circuit(full.n_qubits, full.gates, full.measured, meta)


def build_suboptimal_column(
    n_copies: int, depth: int, hypothesis: int, primitive: str = "cnot"
) -> Circuit:
    """One single-qubit sequential column of the independent-columns protocol.

    ``depth`` channel uses with the example2 angle pi/(2 n_copies); the
    collapsed phase is depth/n_copies of a quarter turn, so a lone column
    discriminates only partially.
    """
    if depth < 1 or n_copies < depth:
        raise InvalidSpecError("need 1 <= depth <= n_copies")
    if hypothesis not in (0, 1):
        raise InvalidSpecError(f"hypothesis must be 0 or 1, got {hypothesis}")
    phi = math.pi / (2.0 * n_copies)
    prep = build_entangler(1, primitive)
    body = circuit(1, _example2_body(1, depth, phi, hypothesis))
    meas = build_measurement(1, "parity", primitive)
    return concat(concat(prep, body), meas)


@dataclass(frozen=True)
class SchemePlan:
    """Everything needed to run and score one scheme."""

    spec: SchemeSpec
    circuit_h0: Circuit
    circuit_h1: Circuit
    rule: Rule
    theoretical_bound: float
    reference_outcomes: tuple[str, str] | None


def assemble_plan(spec: SchemeSpec) -> SchemePlan:
    """Assemble both hypothesis circuits plus the decoding rule and bound.

    ``short`` rules carry the two noiseless reference words as answer
    sets; ``xor`` decodes by majority of bits; ``parity`` needs no
    references.  The bound is the optimal n_copies-use success for the
    scheme's pair.
    """
    c0 = assemble_scheme(spec, 0)
    c1 = assemble_scheme(spec, 1)

    refs: tuple[str, str] | None = None
    if spec.measurement in ("short", "xor"):
        refs = (_single_outcome(c0), _single_outcome(c1))
    if spec.measurement == "short":
        rule: Rule = OutcomeSets(frozenset({refs[0]}), frozenset({refs[1]}))
    elif spec.measurement == "xor":
        rule = MajorityBits()
    else:
        rule = Parity()

    theta = arc_function(spec.resolved_pair().relative())
    total = spec.n_copies * theta
    bound = 1.0 if total >= math.pi - 1e-12 else 0.5 + 0.5 * math.sin(total / 2.0)
    return SchemePlan(
        spec=spec,
        circuit_h0=c0,
        circuit_h1=c1,
        rule=rule,
        theoretical_bound=bound,
        reference_outcomes=refs,
    )


def _single_outcome(c: Circuit) -> str:
    dist = exact_distribution(c)
    [(word, prob)] = dist.items()
    if prob < 1.0 - 1e-9:
        raise RuntimeError(f"expected a deterministic outcome, got p = {prob}")
    return word


def collapse_processed_unitary(spec: SchemeSpec, hypothesis: int) -> np.ndarray:
    """Explicit matrix product of the scheme's processed block.

    Multiplies the width-qubit layer operators (channel uses and
    processing, preparation and measurement excluded) in time order.
    For the worked examples this collapses, exactly, to a tensor power
    of a single RZ: (RZ(pi/N)^depth)^(x width) for example1's second
    hypothesis and (RZ(-/+ pi/(2N))^depth)^(x width) for example2.
    """
    if hypothesis not in (0, 1):
        raise InvalidSpecError(f"hypothesis must be 0 or 1, got {hypothesis}")
    if spec.width > MAX_COLLAPSE_WIDTH:
        raise InvalidSpecError(
            f"collapse supports width <= {MAX_COLLAPSE_WIDTH}, got {spec.width}"
        )
    w, d, n = spec.width, spec.depth, spec.n_copies
    layers: list[np.ndarray] = []
    if spec.example == "example1":
        use = rz_matrix(math.pi / n if hypothesis else 0.0)
        layers = [use] * d
    elif spec.example == "example2":
        phi = math.pi / (2.0 * n)
        use = SQRT_X @ rz_matrix(-phi if hypothesis == 0 else phi) @ SQRT_X
        layers = [PAULI_X @ SQRT_X]
        for layer in range(d):
            layers.append(use)
            if layer < d - 1:
                layers.append(PAULI_X)
        layers.append(SQRT_X @ PAULI_X)
    else:
        use = spec.pair.u if hypothesis == 0 else spec.pair.v
        vdag = dagger(spec.pair.v)
        for layer in range(d):
            layers.append(use)
            if layer < d - 1:
                layers.append(vdag)

    total = np.eye(2**w, dtype=complex)
    for op in layers:
        total = kron_power(op, w) @ total
    return total
