"""Seeded projective measurement of final states into shot histograms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from grover_kit.statevector import StateVector, index_to_bitstring

MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class Histogram:
    """Measurement outcome counts for a fixed (state, shots, seed) triple.

    Keys are msb-first bitstrings over the data qubits; counts sum to
    shots. Entries are ordered by descending count, ties lexicographic.
    """

    shots: int
    seed: int
    counts: dict[str, int]


def measure_all(
    state: StateVector, shots: int, seed: int, *, n_data: int | None = None
) -> Histogram:
    """Draw `shots` outcomes from |amps[i]|^2 with a fixed-seed generator.

    Identical (state, shots, seed) triples give identical histograms within
    one build of this package; cross-version bit-compatibility is not
    promised, so tests should assert statistical intervals, not counts.

    With n_data set, only the first n_data qubits appear in the keys; the
    trailing qubits (the ancilla, in this package) are measured but
    marginalized out. Sampling is inverse-CDF: one uniform draw per shot,
    binary-searched against the cumulative distribution.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit non-negative integer, got {seed}")
    if n_data is None:
        n_data = state.n_qubits
    if not 1 <= n_data <= state.n_qubits:
        raise ValueError(f"n_data must be in 1..{state.n_qubits}, got {n_data}")
    cdf = np.cumsum(state.probabilities())
    cdf[-1] = 1.0
    rng = np.random.default_rng(seed)
    draws = rng.random(shots)
    outcomes = np.searchsorted(cdf, draws, side="right")
    data_outcomes = outcomes >> (state.n_qubits - n_data)
    tallies = np.bincount(data_outcomes, minlength=1 << n_data)
    pairs = [
        (index_to_bitstring(i, n_data), int(c)) for i, c in enumerate(tallies) if c > 0
    ]
    pairs.sort(key=lambda kv: (-kv[1], kv[0]))
    return Histogram(shots=shots, seed=seed, counts=dict(pairs))


def binomial_interval(p: float, shots: int, z: float = 3.0) -> tuple[int, int]:
    """[floor(mean - z*sigma), ceil(mean + z*sigma)] clamped to [0, shots]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if not z > 0.0:
        raise ValueError(f"z must be > 0, got {z}")
    mean = shots * p
    sigma = math.sqrt(shots * p * (1.0 - p))
    lo = math.floor(mean - z * sigma)
    hi = math.ceil(mean + z * sigma)
    return max(0, lo), min(shots, hi)
