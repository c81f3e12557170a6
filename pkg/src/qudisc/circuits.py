"""Circuit container and the textual OpenQASM-3 subset it round-trips through.

A Circuit is a flat, time-ordered gate list over ``n_qubits`` qubits
plus the set of measured qubits; treat instances as immutable.  Qubit 0
is the least significant bit of every basis-state index (bitstrings are
printed qubit-0-first unless a renderer is told otherwise).

The emitter writes the named-gate subset only (x, sx, rz, h, cx, ecr);
raw-matrix gates have no textual form and raise UnsupportedGateError.
``parse_qasm`` reads back exactly what ``emit_qasm`` writes, which keeps
exports honest: angles are emitted with ``repr`` so the parsed float is
bit-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .errors import InvalidSpecError, UnsupportedGateError
from .gates import Gate, inverse_gates

MAX_QUBITS = 20


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    measured: tuple[int, ...]
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise InvalidSpecError(
                f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}"
            )
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "measured", tuple(sorted(set(self.measured))))
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise InvalidSpecError(
                        f"gate {g.kind} touches qubit {q} outside [0, {self.n_qubits})"
                    )
        for q in self.measured:
            if not 0 <= q < self.n_qubits:
                raise InvalidSpecError(f"measured qubit {q} out of range")


def circuit(
    n_qubits: int,
    gates: Iterable[Gate],
    measured: Iterable[int] | None = None,
    meta: Mapping[str, Any] | None = None,
) -> Circuit:
    """Build a Circuit; ``measured`` defaults to every qubit."""
    if measured is None:
        measured = range(n_qubits)
    return Circuit(n_qubits, tuple(gates), tuple(measured), dict(meta or {}))


def concat(a: Circuit, b: Circuit) -> Circuit:
    """a followed by b on the same register; measured sets are merged."""
    if a.n_qubits != b.n_qubits:
        raise InvalidSpecError(
            f"cannot concatenate circuits on {a.n_qubits} and {b.n_qubits} qubits"
        )
    return Circuit(
        a.n_qubits,
        a.gates + b.gates,
        a.measured + b.measured,
        {**a.meta, **b.meta},
    )


def inverse_circuit(c: Circuit) -> Circuit:
    """The circuit applying the inverse unitary (gates reversed and inverted)."""
    inv: list[Gate] = []
    for g in reversed(c.gates):
        inv.extend(inverse_gates(g))
    return Circuit(c.n_qubits, tuple(inv), c.measured, dict(c.meta))


def emit_qasm(c: Circuit) -> str:
    """Render the circuit in the OpenQASM-3 named-gate subset."""
    lines = [
        "OPENQASM 3.0;",
        'include "stdgates.inc";',
        f"qubit[{c.n_qubits}] q;",
        f"bit[{len(c.measured)}] c;",
    ]
    for g in c.gates:
        if g.kind in ("u1q", "u2q"):
            raise UnsupportedGateError(
                f"{g.kind} carries a raw matrix and has no textual form"
            )
        if g.kind == "rz":
            lines.append(f"rz({g.phi!r}) q[{g.qubits[0]}];")
        elif g.kind in ("cx", "ecr"):
            lines.append(f"{g.kind} q[{g.qubits[0]}],q[{g.qubits[1]}];")
        else:
            lines.append(f"{g.kind} q[{g.qubits[0]}];")
    for slot, q in enumerate(c.measured):
        lines.append(f"c[{slot}] = measure q[{q}];")
    return "\n".join(lines) + "\n"


_QASM_PATTERNS = (
    ("reg", re.compile(r"^qubit\[(\d+)\] q$")),
    ("bits", re.compile(r"^bit\[(\d+)\] c$")),
    ("g1", re.compile(r"^(x|sx|h) q\[(\d+)\]$")),
    ("rz", re.compile(r"^rz\(([^)]+)\) q\[(\d+)\]$")),
    ("g2", re.compile(r"^(cx|ecr) q\[(\d+)\],q\[(\d+)\]$")),
    ("meas", re.compile(r"^c\[(\d+)\] = measure q\[(\d+)\]$")),
)


def parse_qasm(text: str) -> Circuit:
    """Parse the subset written by emit_qasm back into a Circuit."""
    n_qubits = 0
    gates: list[Gate] = []
    measured: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        line = line.rstrip(";")
        for tag, pat in _QASM_PATTERNS:
            m = pat.match(line)
            if not m:
                continue
            if tag == "reg":
                n_qubits = int(m.group(1))
            elif tag == "g1":
                gates.append(Gate(m.group(1), (int(m.group(2)),)))
            elif tag == "rz":
                gates.append(Gate("rz", (int(m.group(2)),), phi=float(m.group(1))))
            elif tag == "g2":
                gates.append(Gate(m.group(1), (int(m.group(2)), int(m.group(3)))))
            elif tag == "meas":
                measured.append(int(m.group(2)))
            break
        else:
            raise UnsupportedGateError(f"cannot parse line: {raw!r}")
    if n_qubits == 0:
        raise UnsupportedGateError("no qubit register declaration found")
    return Circuit(n_qubits, tuple(gates), tuple(measured))
