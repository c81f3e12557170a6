import dataclasses
import json

import numpy as np
import pytest

from qudisc.errors import InvalidConfigError
from qudisc.experiments import (
    CSV_COLUMNS,
    ExperimentConfig,
    all_factorizations,
    derive_seed,
    noiseless_success,
    rows_to_csv,
    rows_to_json,
    run_experiment,
    run_suboptimal,
)
from qudisc.schemes import SchemeSpec
from qudisc.simulator import DEFAULT_NOISE, NoiseModel


def _strip_time(row):
    return {k: v for k, v in dataclasses.asdict(row).items() if k != "wall_time_s"}


# ---------------------------------------------------------------- plumbing


def test_all_factorizations():
    assert all_factorizations(16) == ((1, 16), (2, 8), (4, 4), (8, 2), (16, 1))
    assert all_factorizations(7) == ((1, 7), (7, 1))
    # widths presented ascending, capped at the simulator width limit
    assert all_factorizations(96) == (
        (1, 96),
        (2, 48),
        (3, 32),
        (4, 24),
        (6, 16),
        (8, 12),
        (12, 8),
        (16, 6),
    )


def test_derive_seed_stable_and_distinct():
    assert derive_seed(7, 2, 3, 0) == derive_seed(7, 2, 3, 0)
    seeds = {derive_seed(7, w, d, h) for w in (1, 2) for d in (1, 2) for h in (0, 1)}
    assert len(seeds) == 8


def test_config_validation():
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(example="example3", n_copies=4)
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(example="example1", n_copies=4, shots=0)
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(example="example1", n_copies=4, factorizations=((3, 2),))
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(example="example1", n_copies=4, seed=-1)


# ---------------------------------------------------------------- sweeps


def test_noiseless_sweep_rows_are_perfect():
    config = ExperimentConfig(example="example1", n_copies=6, shots=200, seed=1)
    rows = run_experiment(config)
    assert [(r.w, r.d) for r in rows] == [(1, 6), (2, 3), (3, 2), (6, 1)]
    for row in rows:
        assert row.p_succ_raw == pytest.approx(1.0)
        assert row.p_succ_swapped == pytest.approx(1.0)
        assert row.ties == 0
        assert row.theoretical_bound == pytest.approx(1.0)
        assert row.measurement == "short"


def test_noiseless_sweep_example2():
    config = ExperimentConfig(example="example2", n_copies=16, shots=50, seed=2)
    rows = run_experiment(config)
    assert [(r.w, r.d) for r in rows] == [(1, 16), (2, 8), (4, 4), (8, 2), (16, 1)]
    for row in rows:
        assert row.p_succ_raw == pytest.approx(1.0)
        assert row.measurement == "parity"


def test_sweep_reproducible_and_seed_sensitive():
    config = ExperimentConfig(
        example="example1", n_copies=4, shots=300, seed=5, noise=DEFAULT_NOISE
    )
    a = run_experiment(config)
    b = run_experiment(config)
    assert [_strip_time(r) for r in a] == [_strip_time(r) for r in b]
    other = ExperimentConfig(
        example="example1", n_copies=4, shots=300, seed=6, noise=DEFAULT_NOISE
    )
    c = run_experiment(other)
    assert [_strip_time(r) for r in a] != [_strip_time(r) for r in c]


def test_rows_independent_of_sweep_composition():
    """Child seeds hang off (master, w, d), so a row's numbers do not move
    when the surrounding sweep shrinks."""
    full = ExperimentConfig(
        example="example1", n_copies=6, shots=300, seed=11, noise=DEFAULT_NOISE
    )
    only = ExperimentConfig(
        example="example1",
        n_copies=6,
        shots=300,
        seed=11,
        noise=DEFAULT_NOISE,
        factorizations=((3, 2),),
    )
    full_row = [r for r in run_experiment(full) if (r.w, r.d) == (3, 2)]
    only_row = run_experiment(only)
    assert len(full_row) == 1 and len(only_row) == 1
    assert _strip_time(full_row[0]) == _strip_time(only_row[0])


def test_noisy_rows_stay_in_range():
    config = ExperimentConfig(
        example="example2",
        n_copies=8,
        shots=400,
        seed=3,
        noise=NoiseModel(p1=0.01, p2=0.05, p_read=0.05),
    )
    for row in run_experiment(config):
        assert 0.0 <= row.p_succ_raw <= 1.0
        assert row.p_succ_swapped >= 0.5 - 0.1  # swap correction floors it
        assert row.shots == 400


def test_noiseless_success_helper():
    spec = SchemeSpec(example="example2", n_copies=4, width=2, depth=2)
    assert noiseless_success(spec) == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------- suboptimal


def test_suboptimal_requires_exact_factorization():
    with pytest.raises(InvalidConfigError):
        run_suboptimal(n_copies=6, width=4, depth=2, shots=10)


def test_suboptimal_closed_form_agreement():
    res = run_suboptimal(n_copies=16, width=2, depth=8, shots=20_000, seed=4)
    expected = 0.5 + 0.5 * np.sin(np.pi / 4)
    assert res.p_single_noiseless == pytest.approx(expected, abs=1e-12)
    assert res.majority_closed_form == pytest.approx(expected, abs=1e-12)
    sigma = np.sqrt(expected * (1 - expected) / 20_000)
    assert res.p_succ == pytest.approx(expected, abs=4 * sigma)


def test_suboptimal_width_one_is_sequential():
    res = run_suboptimal(n_copies=8, width=1, depth=8, shots=5_000, seed=9)
    # depth = N: the single column accumulates the whole arc, so the
    # noiseless protocol is perfect
    assert res.p_single_noiseless == pytest.approx(1.0, abs=1e-9)
    assert res.majority_closed_form == pytest.approx(1.0, abs=1e-9)
    assert res.p_succ == pytest.approx(1.0)


def test_suboptimal_reproducible():
    kw = dict(n_copies=8, width=2, depth=4, shots=2_000, seed=13, noise=DEFAULT_NOISE)
    a = run_suboptimal(**kw)
    b = run_suboptimal(**kw)
    assert _strip_time(a) == _strip_time(b)


# ---------------------------------------------------------------- output


def test_csv_layout():
    config = ExperimentConfig(example="example1", n_copies=4, shots=50, seed=0)
    rows = run_experiment(config)
    text = rows_to_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + len(rows)
    first = lines[1].split(",")
    assert first[0] == "1" and first[1] == "4"


def test_json_round_trip():
    config = ExperimentConfig(example="example1", n_copies=4, shots=50, seed=0)
    rows = run_experiment(config)
    data = json.loads(rows_to_json(rows))
    assert len(data) == len(rows)
    assert data[0]["w"] == 1
    assert set(data[0]) == set(CSV_COLUMNS)
