"""Turning measured bitstrings into hypothesis labels and success rates.

Hypotheses are the integers ``H0 = 0`` and ``H1 = 1``.  Three rules:

* ``OutcomeSets(set0, set1)`` — membership in two disjoint answer sets;
  a bitstring in neither set is a tie.
* ``Parity()`` — XOR of all bits; even parity means H0.
* ``MajorityBits()`` — more ones than zeros means H1; equal is a tie.

Every tie consumes exactly one uniform draw from the supplied
generator — label H0 when the draw is below 1/2.  ``estimate_success``
walks each hypothesis' counts table in sorted-bitstring order and spends
one draw per tied repetition, so the tie stream is deterministic for a
given seed even though aggregated counts no longer carry shot order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import comb
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    EmptyInputError,
    InvalidSpecError,
    LengthMismatchError,
    ShotMismatchError,
)
from .simulator import OutcomeCounts

H0 = 0
H1 = 1

_TIE = -1


@dataclass(frozen=True)
class OutcomeSets:
    set0: frozenset[str]
    set1: frozenset[str]
    n_bits: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "set0", frozenset(self.set0))
        object.__setattr__(self, "set1", frozenset(self.set1))
        if not self.set0 or not self.set1:
            raise InvalidSpecError("both answer sets must be non-empty")
        if self.set0 & self.set1:
            raise InvalidSpecError("answer sets must be disjoint")
        lengths = {len(s) for s in self.set0 | self.set1}
        if len(lengths) != 1:
            raise InvalidSpecError("answer-set bitstrings must share one length")
        object.__setattr__(self, "n_bits", next(iter(lengths)))

    def swapped(self) -> "OutcomeSets":
        return OutcomeSets(self.set1, self.set0)


@dataclass(frozen=True)
class Parity:
    pass


@dataclass(frozen=True)
class MajorityBits:
    pass


Rule = OutcomeSets | Parity | MajorityBits


def _decide(bits: str, rule: Rule) -> int:
    """Deterministic part of classification; _TIE when the rule abstains."""
    if not bits or any(ch not in "01" for ch in bits):
        raise ValueError(f"not a bitstring: {bits!r}")
    if isinstance(rule, OutcomeSets):
        if len(bits) != rule.n_bits:
            raise LengthMismatchError(
                f"bitstring length {len(bits)} != answer-set length {rule.n_bits}"
            )
        if bits in rule.set0:
            return H0
        if bits in rule.set1:
            return H1
        return _TIE
    if isinstance(rule, Parity):
        return bits.count("1") % 2
    ones = bits.count("1")
    zeros = len(bits) - ones
    if ones == zeros:
        return _TIE
    return H1 if ones > zeros else H0


def classify(bits: str, rule: Rule, rng: np.random.Generator | None = None) -> int:
    """Label one bitstring; ties draw once from ``rng`` (H0 below 1/2)."""
    label = _decide(bits, rule)
    if label != _TIE:
        return label
    if rng is None:
        raise ValueError("tie encountered but no rng supplied")
    return H0 if rng.random() < 0.5 else H1


def majority_vote(
    labels: Sequence[int], rng: np.random.Generator | None = None
) -> int:
    """Majority label of a sequence of H0/H1 labels; ties draw once."""
    if len(labels) == 0:
        raise EmptyInputError("majority vote over no labels")
    ones = sum(1 for x in labels if x == H1)
    zeros = len(labels) - ones
    if ones == zeros:
        if rng is None:
            raise ValueError("tie encountered but no rng supplied")
        return H0 if rng.random() < 0.5 else H1
    return H1 if ones > zeros else H0


def majority_success_closed_form(w: int, p: float) -> float:
    """Success of a w-member majority vote over i.i.d. experts of accuracy p.

    Sum of binomial tails with the even-w tie term credited at 1/2
    (a fair coin breaks ties).
    """
    if w < 1:
        raise EmptyInputError(f"committee size must be >= 1, got {w}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"accuracy must lie in [0, 1], got {p}")
    total = sum(
        comb(w, k) * p**k * (1.0 - p) ** (w - k) for k in range(w // 2 + 1, w + 1)
    )
    if w % 2 == 0:
        h = w // 2
        total += 0.5 * comb(w, h) * p**h * (1.0 - p) ** h
    return float(total)


@dataclass(frozen=True)
class SuccessEstimate:
    """Estimated discrimination success over both hypotheses."""

    p_succ: float
    shots_per_hypothesis: int
    ties: int
    swapped: bool = False


def estimate_success(
    counts_h0: OutcomeCounts,
    counts_h1: OutcomeCounts,
    rule: Rule,
    rng: np.random.Generator,
) -> SuccessEstimate:
    """Fraction of shots labelled correctly, hypotheses weighted equally.

    Both tables must hold the same number of shots.  Tie repetitions each
    consume one draw, walked per hypothesis in sorted-bitstring order.
    """
    if counts_h0.shots != counts_h1.shots:
        raise ShotMismatchError(
            f"shot totals differ: {counts_h0.shots} vs {counts_h1.shots}"
        )
    shots = counts_h0.shots
    correct = 0
    ties = 0
    for truth, table in ((H0, counts_h0.counts), (H1, counts_h1.counts)):
        for bits in sorted(table):
            reps = table[bits]
            label = _decide(bits, rule)
            if label == _TIE:
                ties += reps
                draws = rng.random(reps)
                wins = int(np.count_nonzero(draws < 0.5))
                correct += wins if truth == H0 else reps - wins
            elif label == truth:
                correct += reps
    return SuccessEstimate(
        p_succ=correct / (2.0 * shots), shots_per_hypothesis=shots, ties=ties
    )


def exact_success(
    dist_h0: Mapping[str, float], dist_h1: Mapping[str, float], rule: Rule
) -> float:
    """Expected success under exact outcome distributions; ties credit 1/2."""
    total = 0.0
    for truth, dist in ((H0, dist_h0), (H1, dist_h1)):
        for bits, prob in dist.items():
            label = _decide(bits, rule)
            if label == _TIE:
                total += 0.5 * prob
            elif label == truth:
                total += prob
    return total / 2.0


def answer_swap_correction(estimate: SuccessEstimate) -> SuccessEstimate:
    """Flip the answer-set convention when success lands below chance.

    A below-1/2 estimate means the two answer labels are systematically
    exchanged (the measured sets drifted to their complements); relabel
    and flag it.  Idempotent: estimates at or above 1/2 pass through.
    """
    if estimate.p_succ < 0.5:
        return replace(estimate, p_succ=1.0 - estimate.p_succ, swapped=True)
    return estimate
