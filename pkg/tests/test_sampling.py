import numpy as np
import pytest

from grover_kit.circuit import GroverSpec, OracleStyle, build_grover_circuit, run
from grover_kit.geometry import predicted_success
from grover_kit.sampling import binomial_interval, measure_all
from grover_kit.statevector import StateVector, ket


def final_state(n, marked, k, style=OracleStyle.MCZ_DIRECT):
    return run(build_grover_circuit(GroverSpec(n, marked, k, style)))


def test_deterministic_for_fixed_seed():
    state = final_state(5, ("10100",), 1)
    a = measure_all(state, 1024, 7)
    b = measure_all(state, 1024, 7)
    assert a == b
    c = measure_all(state, 1024, 8)
    assert a.counts != c.counts


def test_counts_sum_and_key_width():
    state = final_state(3, ("001",), 1)
    hist = measure_all(state, 500, 1)
    assert sum(hist.counts.values()) == 500
    assert all(len(k) == 3 for k in hist.counts)
    assert hist.shots == 500 and hist.seed == 1


def test_entries_sorted_by_count_then_key():
    state = final_state(5, ("10100",), 1)
    hist = measure_all(state, 2048, 3)
    entries = list(hist.counts.items())
    for (ka, ca), (kb, cb) in zip(entries, entries[1:]):
        assert (ca > cb) or (ca == cb and ka < kb)


def test_deterministic_state_puts_all_shots_on_it():
    hist = measure_all(ket("01"), 64, 123)
    assert hist.counts == {"01": 64}


def test_ancilla_marginalized_from_keys():
    data = ket("01")
    full = StateVector(3, np.kron(data.amps, ket("m").amps))
    hist = measure_all(full, 256, 5, n_data=2)
    assert hist.counts == {"01": 256}


def test_marginalization_keeps_distribution():
    state = final_state(3, ("001",), 1, OracleStyle.MCX_ANCILLA)
    hist = measure_all(state, 4096, 11, n_data=3)
    assert all(len(k) == 3 for k in hist.counts)
    lo, hi = binomial_interval(predicted_success(3, 1, 1), 4096, 4.0)
    assert lo <= hist.counts["001"] <= hi


def test_measure_all_validation():
    state = ket("00")
    with pytest.raises(ValueError):
        measure_all(state, 0, 1)
    with pytest.raises(ValueError):
        measure_all(state, 10, -1)
    with pytest.raises(ValueError):
        measure_all(state, 10, 1 << 64)
    with pytest.raises(ValueError):
        measure_all(state, 10, 1, n_data=0)
    with pytest.raises(ValueError):
        measure_all(state, 10, 1, n_data=3)


def test_convergence_to_closed_form():
    # z=4 keeps the false-failure rate of this test near 6e-5 per run
    state = final_state(5, ("10100",), 1)
    hist = measure_all(state, 100_000, 42)
    lo, hi = binomial_interval(529 / 2048, 100_000, 4.0)
    assert lo <= hist.counts["10100"] <= hi


def test_single_qubit_marginal():
    state = ket("ppp")
    hist = measure_all(state, 4096, 9)
    ones_on_qubit0 = sum(c for bits, c in hist.counts.items() if bits[0] == "1")
    lo, hi = binomial_interval(0.5, 4096, 4.0)
    assert lo <= ones_on_qubit0 <= hi


def test_binomial_interval_examples():
    assert binomial_interval(0.2583, 1024, 3.0) == (222, 307)
    assert binomial_interval(529 / 2048, 1024, 3.0) == (222, 307)
    assert binomial_interval(1.0, 500, 3.0) == (500, 500)
    assert binomial_interval(0.0, 500, 3.0) == (0, 0)


def test_binomial_interval_clamps():
    lo, hi = binomial_interval(0.01, 10, 3.0)
    assert lo == 0
    lo2, hi2 = binomial_interval(0.99, 10, 3.0)
    assert hi2 == 10


def test_binomial_interval_validation():
    with pytest.raises(ValueError):
        binomial_interval(1.5, 100, 3.0)
    with pytest.raises(ValueError):
        binomial_interval(0.5, 0, 3.0)
    with pytest.raises(ValueError):
        binomial_interval(0.5, 100, 0.0)
