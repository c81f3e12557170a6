"""Experiment orchestration: scheme runs, width sweeps, and baselines.

A run takes an :class:`ExperimentConfig`, assembles one scheme per
requested (width, depth) factorization, samples both hypotheses at
``shots`` each, classifies, and emits one :class:`ResultRow` per
factorization (sorted by width).  Child seeds for every row, hypothesis
and tie stream are derived from the master seed through
``numpy.random.SeedSequence`` so rows are independent of execution
order and may run concurrently; repeated runs with one config are
reproducible column-for-column except wall time.

``run_suboptimal`` is the comparison baseline: the same copy budget
split into ``width`` independent single-qubit sequential columns of
depth ``depth``, each classified alone, combined by per-shot majority
vote (tie draws consumed in shot order, first hypothesis first).
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .classify import (
    Parity,
    answer_swap_correction,
    estimate_success,
    exact_success,
    majority_success_closed_form,
)
from .errors import InvalidConfigError
from .simulator import (
    NOISELESS,
    NoiseModel,
    exact_distribution,
    sample_bitstrings,
    sample_counts,
)
from .schemes import (
    MAX_WIDTH,
    PRIMITIVES,
    SchemeSpec,
    assemble_plan,
    build_suboptimal_column,
)


def derive_seed(*parts: int) -> int:
    """Deterministic child seed from integer parts (SeedSequence hashing)."""
    return int(np.random.SeedSequence(parts).generate_state(1, np.uint64)[0])


def all_factorizations(n_copies: int, max_width: int = MAX_WIDTH) -> tuple[tuple[int, int], ...]:
    """Every (width, depth) with width * depth = n_copies and width <= max_width."""
    if n_copies < 1:
        raise InvalidConfigError(f"n_copies must be >= 1, got {n_copies}")
    return tuple(
        (w, n_copies // w)
        for w in range(1, min(n_copies, max_width) + 1)
        if n_copies % w == 0
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """One discrimination experiment: which scheme family, how sampled."""

    example: str
    n_copies: int
    shots: int = 10_000
    seed: int = 0
    noise: NoiseModel = NOISELESS
    primitive: str = "cnot"
    measurement: str | None = None
    factorizations: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.example not in ("example1", "example2"):
            raise InvalidConfigError(
                f"example must be 'example1' or 'example2', got {self.example!r}"
            )
        if self.n_copies < 1:
            raise InvalidConfigError(f"n_copies must be >= 1, got {self.n_copies}")
        if self.shots < 1:
            raise InvalidConfigError(f"shots must be >= 1, got {self.shots}")
        if self.seed < 0:
            raise InvalidConfigError(f"seed must be >= 0, got {self.seed}")
        if self.primitive not in PRIMITIVES:
            raise InvalidConfigError(f"unknown primitive {self.primitive!r}")
        if self.factorizations is not None:
            pairs = tuple((int(w), int(d)) for w, d in self.factorizations)
            if not pairs:
                raise InvalidConfigError("factorizations must not be empty")
            for w, d in pairs:
                if w < 1 or d < 1 or w * d != self.n_copies:
                    raise InvalidConfigError(
                        f"factorization ({w}, {d}) does not multiply to {self.n_copies}"
                    )
                if w > MAX_WIDTH:
                    raise InvalidConfigError(f"width {w} exceeds {MAX_WIDTH}")
            object.__setattr__(self, "factorizations", pairs)


CSV_COLUMNS = (
    "w",
    "d",
    "measurement",
    "p_succ_raw",
    "p_succ_swapped",
    "ties",
    "theoretical_bound",
    "shots",
    "seed",
    "wall_time_s",
)


@dataclass(frozen=True)
class ResultRow:
    """One factorization's outcome, in CSV column order."""

    w: int
    d: int
    measurement: str
    p_succ_raw: float
    p_succ_swapped: float
    ties: int
    theoretical_bound: float
    shots: int
    seed: int
    wall_time_s: float


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """Sample and score every requested factorization (rows sorted by width)."""
    pairs = config.factorizations or all_factorizations(config.n_copies)
    rows: list[ResultRow] = []
    for w, d in sorted(pairs):
        spec = SchemeSpec(
            example=config.example,
            n_copies=config.n_copies,
            width=w,
            depth=d,
            primitive=config.primitive,
            measurement=config.measurement,
        )
        plan = assemble_plan(spec)
        started = time.perf_counter()
        counts0 = sample_counts(
            plan.circuit_h0, config.shots, config.noise, derive_seed(config.seed, w, d, 0)
        )
        counts1 = sample_counts(
            plan.circuit_h1, config.shots, config.noise, derive_seed(config.seed, w, d, 1)
        )
        tie_rng = np.random.default_rng(derive_seed(config.seed, w, d, 2))
        estimate = estimate_success(counts0, counts1, plan.rule, tie_rng)
        corrected = answer_swap_correction(estimate)
        rows.append(
            ResultRow(
                w=w,
                d=d,
                measurement=spec.measurement,
                p_succ_raw=estimate.p_succ,
                p_succ_swapped=corrected.p_succ,
                ties=estimate.ties,
                theoretical_bound=plan.theoretical_bound,
                shots=config.shots,
                seed=config.seed,
                wall_time_s=time.perf_counter() - started,
            )
        )
    return rows


def noiseless_success(spec: SchemeSpec) -> float:
    """Exact (infinite-shot, zero-noise) success of one scheme; ties credit 1/2."""
    plan = assemble_plan(spec)
    return exact_success(
        exact_distribution(plan.circuit_h0),
        exact_distribution(plan.circuit_h1),
        plan.rule,
    )


@dataclass(frozen=True)
class SuboptimalResult:
    """Majority vote over independent single-qubit sequential columns."""

    n_copies: int
    width: int
    depth: int
    p_succ: float
    ties: int
    p_single_noiseless: float
    majority_closed_form: float
    shots: int
    seed: int
    wall_time_s: float


def run_suboptimal(
    n_copies: int,
    width: int,
    depth: int,
    shots: int = 10_000,
    noise: NoiseModel = NOISELESS,
    seed: int = 0,
    primitive: str = "cnot",
) -> SuboptimalResult:
    """Run width independent depth-long columns and majority-vote per shot.

    Also reports the noiseless single-column accuracy and the matching
    closed-form majority success, the analytic curve the sampled
    estimate should track in the zero-noise limit.
    """
    # no upper width limit: the columns never share a statevector, so the
    # joint-scheme qubit cap does not apply here
    if width < 1:
        raise InvalidConfigError(f"width must be >= 1, got {width}")
    if width * depth != n_copies:
        raise InvalidConfigError(
            f"width*depth = {width * depth} != n_copies = {n_copies}"
        )
    started = time.perf_counter()
    columns = {
        h: build_suboptimal_column(n_copies, depth, h, primitive) for h in (0, 1)
    }
    correct = 0
    ties = 0
    tie_rng = np.random.default_rng(derive_seed(seed, 2))
    for h in (0, 1):
        votes = np.zeros(shots, dtype=np.int64)
        for j in range(width):
            words = sample_bitstrings(
                columns[h], shots, noise, derive_seed(seed, h, j)
            )
            votes += np.fromiter((w.count("1") & 1 for w in words), np.int64, shots)
        guesses = np.where(votes * 2 > width, 1, 0)
        tied = np.nonzero(votes * 2 == width)[0]
        if tied.size:
            draws = tie_rng.random(tied.size)
            guesses[tied] = np.where(draws < 0.5, 0, 1)
            ties += int(tied.size)
        correct += int(np.count_nonzero(guesses == h))

    exact0 = exact_distribution(columns[0])
    exact1 = exact_distribution(columns[1])
    # the exact probabilities can overshoot 1 by a rounding ulp
    p_single = min(max(exact_success(exact0, exact1, Parity()), 0.0), 1.0)
    return SuboptimalResult(
        n_copies=n_copies,
        width=width,
        depth=depth,
        p_succ=correct / (2.0 * shots),
        ties=ties,
        p_single_noiseless=p_single,
        majority_closed_form=majority_success_closed_form(width, p_single),
        shots=shots,
        seed=seed,
        wall_time_s=time.perf_counter() - started,
    )


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    """Render rows in the fixed column order; floats use repr for stability."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([getattr(r, col) for col in CSV_COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: Sequence[ResultRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2) + "\n"
