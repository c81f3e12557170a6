"""Discrimination-scheme construction: preps, measurements, assembly.

The ECR correction sets and branch phases below were frozen from an
exhaustive search over X-correction subsets before the builder existed;
the builder must keep reproducing them.
"""

import numpy as np
import pytest

from helpers import matrices_equal_up_to_phase, pair_with_arc
from qudisc.circuits import concat
from qudisc.errors import InvalidSpecError
from qudisc.gates import rz_matrix
from qudisc.linalg import kron_power
from qudisc.schemes import (
    SchemeSpec,
    assemble_plan,
    assemble_scheme,
    build_entangler,
    build_measurement,
    build_suboptimal_column,
    collapse_processed_unitary,
    derive_pauli_corrections,
)
from qudisc.simulator import exact_distribution, run_statevector
from qudisc.theory import UnitaryPair
from qudisc.classify import MajorityBits, OutcomeSets, Parity, exact_success

# frozen: X-correction qubits and branch phase for the ECR GHZ cascade
ECR_CORRECTIONS = {
    2: ((), 1),
    3: ((0,), -1j),
    4: ((1,), 1),
    5: ((0, 2), -1j),
    6: ((1, 3), 1),
    7: ((0, 2, 4), -1j),
    8: ((1, 3, 5), 1),
}


def _ghz_overlap(state, width, phase):
    target = np.zeros(2**width, dtype=complex)
    target[0] = 1.0 / np.sqrt(2.0)
    target[-1] = phase / np.sqrt(2.0)
    return abs(np.vdot(target, state))


# ---------------------------------------------------------------- entanglers


@pytest.mark.parametrize("width", [2, 3, 4, 5, 6])
def test_cnot_entangler_builds_ghz(width):
    prep = build_entangler(width, "cnot")
    state = run_statevector(prep)
    assert _ghz_overlap(state, width, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert prep.meta["branch_phase"] == 1
    assert prep.meta["corrections"] == ()


@pytest.mark.parametrize("width", sorted(ECR_CORRECTIONS))
def test_ecr_entangler_frozen_corrections(width):
    expected_corr, expected_phase = ECR_CORRECTIONS[width]
    prep = build_entangler(width, "ecr")
    assert prep.meta["corrections"] == expected_corr
    assert prep.meta["branch_phase"] == pytest.approx(expected_phase)
    state = run_statevector(prep)
    assert _ghz_overlap(state, width, expected_phase) == pytest.approx(1.0, abs=1e-9)


def test_entangler_width_one_is_plus_state():
    prep = build_entangler(1, "cnot")
    state = run_statevector(prep)
    assert np.allclose(np.abs(state) ** 2, [0.5, 0.5])


def test_derive_pauli_corrections_recovers_subset():
    raw = build_entangler(5, "ecr")
    # strip the corrections the builder added, then re-derive them
    x_gates = [g for g in raw.gates if g.kind == "x"]
    stripped = [g for g in raw.gates if g.kind != "x"]
    from qudisc.circuits import circuit

    bare = circuit(5, stripped)
    target_phase = raw.meta["branch_phase"]
    target = np.zeros(2**5, dtype=complex)
    target[0] = 1 / np.sqrt(2)
    target[-1] = target_phase / np.sqrt(2)
    corr = derive_pauli_corrections(bare, target)
    assert corr == raw.meta["corrections"]
    assert {g.qubits[0] for g in x_gates} == set(corr)


# ---------------------------------------------------------------- spec checks


def test_scheme_spec_validation():
    with pytest.raises(InvalidSpecError):
        SchemeSpec(example="example1", n_copies=6, width=4, depth=2)  # 4*2 != 6
    with pytest.raises(InvalidSpecError):
        SchemeSpec(example="example1", n_copies=4, width=2, depth=2, measurement="parity")
    with pytest.raises(InvalidSpecError):
        SchemeSpec(example="example2", n_copies=4, width=2, depth=2, measurement="xor")
    with pytest.raises(InvalidSpecError):
        SchemeSpec(example="example1", n_copies=4, width=2, depth=2, lam=2.0)
    with pytest.raises(InvalidSpecError):
        SchemeSpec(example="example2", n_copies=4, width=2, depth=2, lam=1j)
    with pytest.raises(InvalidSpecError):
        SchemeSpec(example="nope", n_copies=4, width=2, depth=2)


def test_default_measurements():
    assert SchemeSpec(example="example1", n_copies=4, width=2, depth=2).measurement == "short"
    assert SchemeSpec(example="example2", n_copies=4, width=2, depth=2).measurement == "parity"


def test_custom_pair_needs_arc_condition():
    rng = np.random.default_rng(3)
    u, v = pair_with_arc(rng, np.pi / 4)
    pair = UnitaryPair(u=u, v=v)
    SchemeSpec(example="custom", n_copies=4, width=2, depth=2, pair=pair)  # ok: 4 * pi/4 = pi
    with pytest.raises(InvalidSpecError):
        SchemeSpec(example="custom", n_copies=6, width=2, depth=3, pair=pair)
    with pytest.raises(InvalidSpecError):
        SchemeSpec(example="custom", n_copies=4, width=2, depth=2)  # pair missing


# ---------------------------------------------------------------- assembly


def test_example1_gate_inventory():
    spec = SchemeSpec(example="example1", n_copies=6, width=3, depth=2)
    c0 = assemble_scheme(spec, 0)
    c1 = assemble_scheme(spec, 1)
    kinds0 = [g.kind for g in c0.gates]
    # prep h + 2 cx, six rz slots, uncompute 2 cx + h
    assert kinds0.count("h") == 2
    assert kinds0.count("cx") == 4
    assert kinds0.count("rz") == 6
    assert all(g.phi == 0.0 for g in c0.gates if g.kind == "rz")
    slots1 = [g.phi for g in c1.gates if g.kind == "rz"]
    assert slots1 == [pytest.approx(np.pi / 6)] * 6
    assert c0.measured == (0, 1, 2)


def test_example1_short_outcomes_deterministic():
    spec = SchemeSpec(example="example1", n_copies=6, width=6, depth=1)
    d0 = exact_distribution(assemble_scheme(spec, 0))
    d1 = exact_distribution(assemble_scheme(spec, 1))
    assert d0 == {"000000": pytest.approx(1.0)}
    assert d1 == {"100000": pytest.approx(1.0)}


def test_example1_xor_outcomes():
    spec = SchemeSpec(example="example1", n_copies=6, width=6, depth=1, measurement="xor")
    d0 = exact_distribution(assemble_scheme(spec, 0))
    d1 = exact_distribution(assemble_scheme(spec, 1))
    assert d0 == {"000000": pytest.approx(1.0)}
    assert d1 == {"111111": pytest.approx(1.0)}


@pytest.mark.parametrize("primitive", ["cnot", "ecr"])
@pytest.mark.parametrize("width,depth", [(1, 4), (2, 2), (4, 1)])
def test_example1_perfect_noiseless(primitive, width, depth):
    spec = SchemeSpec(
        example="example1", n_copies=4, width=width, depth=depth, primitive=primitive
    )
    plan = assemble_plan(spec)
    p = exact_success(
        exact_distribution(plan.circuit_h0),
        exact_distribution(plan.circuit_h1),
        plan.rule,
    )
    assert p == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("primitive", ["cnot", "ecr"])
@pytest.mark.parametrize("width,depth", [(1, 8), (2, 4), (4, 2), (8, 1)])
def test_example2_perfect_noiseless(primitive, width, depth):
    spec = SchemeSpec(
        example="example2", n_copies=8, width=width, depth=depth, primitive=primitive
    )
    plan = assemble_plan(spec)
    assert isinstance(plan.rule, Parity)
    p = exact_success(
        exact_distribution(plan.circuit_h0),
        exact_distribution(plan.circuit_h1),
        plan.rule,
    )
    assert p == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n,width,depth", [(6, 3, 2), (10, 5, 2), (6, 1, 6)])
def test_example2_odd_ecr_widths_compensate_branch_phase(n, width, depth):
    # regression: the ECR ladder's -i branch phase at odd widths must be
    # folded into the parity rotation
    spec = SchemeSpec(
        example="example2", n_copies=n, width=width, depth=depth, primitive="ecr"
    )
    plan = assemble_plan(spec)
    p = exact_success(
        exact_distribution(plan.circuit_h0),
        exact_distribution(plan.circuit_h1),
        plan.rule,
    )
    assert p == pytest.approx(1.0, abs=1e-9)


def test_example2_parity_split():
    spec = SchemeSpec(example="example2", n_copies=4, width=2, depth=2)
    d0 = exact_distribution(assemble_scheme(spec, 0))
    d1 = exact_distribution(assemble_scheme(spec, 1))
    for key in d0:
        assert key.count("1") % 2 == 0, key
    for key in d1:
        assert key.count("1") % 2 == 1, key


def test_free_unit_scalar_preserves_outcomes():
    for lam in (1.0, -1.0, np.exp(0.4j)):
        spec = SchemeSpec(example="example1", n_copies=4, width=2, depth=2, lam=lam)
        d0 = exact_distribution(assemble_scheme(spec, 0))
        d1 = exact_distribution(assemble_scheme(spec, 1))
        assert d0 == {"00": pytest.approx(1.0)}
        assert d1 == {"10": pytest.approx(1.0)}


def test_custom_scheme_perfect_noiseless():
    rng = np.random.default_rng(10)
    for width, depth in [(1, 5), (5, 1)]:
        u, v = pair_with_arc(rng, np.pi / 5)
        spec = SchemeSpec(
            example="custom",
            n_copies=5,
            width=width,
            depth=depth,
            pair=UnitaryPair(u=u, v=v),
        )
        plan = assemble_plan(spec)
        p = exact_success(
            exact_distribution(plan.circuit_h0),
            exact_distribution(plan.circuit_h1),
            plan.rule,
        )
        assert p == pytest.approx(1.0, abs=1e-9)


def test_plan_reference_outcomes_and_bound():
    spec = SchemeSpec(example="example1", n_copies=6, width=3, depth=2)
    plan = assemble_plan(spec)
    assert isinstance(plan.rule, OutcomeSets)
    assert plan.theoretical_bound == pytest.approx(1.0)
    assert plan.reference_outcomes is not None
    spec_x = SchemeSpec(
        example="example1", n_copies=6, width=3, depth=2, measurement="xor"
    )
    assert isinstance(assemble_plan(spec_x).rule, MajorityBits)


def test_measurement_is_inverse_of_short_body():
    """Short measurement uncomputes the prep exactly."""
    prep = build_entangler(4, "cnot")
    meas = build_measurement(4, "short", "cnot")
    state = run_statevector(concat(prep, meas))
    assert abs(state[0]) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- collapse


@pytest.mark.parametrize("n,width,depth", [(4, 2, 2), (4, 4, 1), (16, 4, 4), (16, 8, 2)])
def test_collapse_to_rotation_power(n, width, depth):
    for hypothesis, sign in ((0, -1.0), (1, 1.0)):
        spec = SchemeSpec(example="example2", n_copies=n, width=width, depth=depth)
        collapsed = collapse_processed_unitary(spec, hypothesis)
        column = np.linalg.matrix_power(rz_matrix(sign * np.pi / (2 * n)), depth)
        expected = kron_power(column, width)
        assert matrices_equal_up_to_phase(collapsed, expected, tol=1e-10)


def test_collapse_width_cap():
    spec = SchemeSpec(example="example2", n_copies=16, width=16, depth=1)
    with pytest.raises(InvalidSpecError):
        collapse_processed_unitary(spec, 0)


# ---------------------------------------------------------------- suboptimal


@pytest.mark.parametrize("n,depth", [(4, 2), (8, 4), (16, 16)])
def test_suboptimal_column_success_formula(n, depth):
    d1 = exact_distribution(build_suboptimal_column(n, depth, 1))
    d0 = exact_distribution(build_suboptimal_column(n, depth, 0))
    expected = 0.5 + 0.5 * np.sin(depth * np.pi / (2 * n))
    assert d1.get("1", 0.0) == pytest.approx(expected, abs=1e-9)
    assert d0.get("0", 0.0) == pytest.approx(expected, abs=1e-9)


def test_suboptimal_column_depth_bounds():
    with pytest.raises(InvalidSpecError):
        build_suboptimal_column(4, 5, 0)
    with pytest.raises(InvalidSpecError):
        build_suboptimal_column(4, 0, 0)
