"""Two-dimensional plane analysis of Grover iteration.

Every state reachable from the uniform superposition by oracle and diffuser
stays inside the plane spanned by |beta> (uniform over marked strings) and
|alpha> (uniform over unmarked strings). This module decomposes simulated
states into that plane, computes the rotation angles, predicts success
probabilities in closed form, and builds per-iteration sweep reports that
put simulation and formula side by side.

Closed form: with theta_sin = arcsin(sqrt(m/2^n)), the probability of
landing in the marked set after k iterations is sin^2((2k+1)*theta_sin).
The complementary convention theta_cos = arccos(sqrt(m/2^n)) is carried
alongside because sweep tables are often written in terms of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from grover_kit.circuit import GroverSpec, OracleStyle, build_grover_circuit, grover_iteration, run
from grover_kit.statevector import StateVector, bitstring_to_index

ANCILLA_FACTOR_TOL = 1e-9
MAX_REPORT_ITERATIONS = 64


class AncillaFactorizationError(RuntimeError):
    """The ancilla did not factor out as (|0>-|1>)/sqrt(2).

    Raised by strip_ancilla; reaching it indicates a compiler or simulator
    bug, not bad user input, hence a RuntimeError.
    """


@dataclass(frozen=True)
class GroverAngles:
    """Both angle conventions for an (n, m) search instance.

    theta_sin satisfies sin(theta_sin) = sqrt(m/2^n); theta_cos is the
    complement with cos(theta_cos) = sqrt(m/2^n). They sum to pi/2.
    """

    theta_sin: float
    theta_cos: float
    m: int
    n: int


@dataclass(frozen=True)
class PlaneCoords:
    """Components of a state in the orthonormal marked/unmarked plane basis."""

    a_marked: complex
    a_unmarked: complex
    residual_norm: float


@dataclass(frozen=True)
class IterationRow:
    """One sweep row: simulated and closed-form values after k iterations."""

    k: int
    angle: float
    p_marked_sim: float
    p_marked_formula: float
    p_each_unmarked: float


def _check_m(n_qubits: int, m: int) -> None:
    if not 1 <= m < (1 << n_qubits):
        raise ValueError(f"marked count must be in 1..2^{n_qubits} - 1, got {m}")


def grover_angles(n_qubits: int, m: int) -> GroverAngles:
    """Rotation angles for m marked strings out of 2^n_qubits."""
    _check_m(n_qubits, m)
    ratio = math.sqrt(m / (1 << n_qubits))
    return GroverAngles(
        theta_sin=math.asin(ratio), theta_cos=math.acos(ratio), m=m, n=n_qubits
    )


def predicted_success(n_qubits: int, m: int, iterations: int) -> float:
    """Closed-form probability of the marked set after `iterations` steps."""
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0, got {iterations}")
    theta = grover_angles(n_qubits, m).theta_sin
    return math.sin((2 * iterations + 1) * theta) ** 2


def p_each_unmarked(n_qubits: int, m: int, iterations: int) -> float:
    """Closed-form probability of each individual unmarked string."""
    return (1.0 - predicted_success(n_qubits, m, iterations)) / ((1 << n_qubits) - m)


def optimal_iterations(n_qubits: int, m: int) -> int:
    """Iteration count maximizing predicted_success.

    Evaluates round(pi/(4*theta) - 1/2) and both neighbors rather than
    trusting the rounding alone, which misses by one for very small n.
    Smallest k wins ties.
    """
    theta = grover_angles(n_qubits, m).theta_sin
    center = round(math.pi / (4.0 * theta) - 0.5)
    candidates = sorted({max(0, center - 1), max(0, center), max(0, center + 1)})
    return max(candidates, key=lambda k: (predicted_success(n_qubits, m, k), -k))


def _marked_indices(n_qubits: int, marked: Sequence[str]) -> list[int]:
    seen = []
    for bits in marked:
        if len(bits) != n_qubits or any(ch not in "01" for ch in bits):
            raise ValueError(f"marked string {bits!r} is not a bitstring of length {n_qubits}")
        seen.append(bitstring_to_index(bits))
    if len(set(seen)) != len(seen):
        raise ValueError(f"duplicate marked strings in {tuple(marked)}")
    if not 1 <= len(seen) < (1 << n_qubits):
        raise ValueError(
            f"need between 1 and 2^n - 1 marked strings, got {len(seen)} for n={n_qubits}"
        )
    return sorted(seen)


def marked_plane_basis(n_qubits: int, marked: Sequence[str]) -> tuple[StateVector, StateVector]:
    """Orthonormal pair (|beta>, |alpha>): uniform over marked / unmarked."""
    indices = _marked_indices(n_qubits, marked)
    dim = 1 << n_qubits
    beta = np.zeros(dim, dtype=np.complex128)
    beta[indices] = 1.0 / math.sqrt(len(indices))
    alpha = np.full(dim, 1.0 / math.sqrt(dim - len(indices)), dtype=np.complex128)
    alpha[indices] = 0.0
    return (
        StateVector(n_qubits, beta, copy=False),
        StateVector(n_qubits, alpha, copy=False),
    )


def plane_decompose(state: StateVector, marked: Sequence[str]) -> PlaneCoords:
    """Project a data-qubit state onto the marked/unmarked plane.

    For ancilla-style circuits run strip_ancilla first; this operates on
    data qubits only.
    """
    beta, alpha = marked_plane_basis(state.n_qubits, marked)
    a_marked = complex(np.vdot(beta.amps, state.amps))
    a_unmarked = complex(np.vdot(alpha.amps, state.amps))
    remainder = state.amps - a_marked * beta.amps - a_unmarked * alpha.amps
    return PlaneCoords(
        a_marked=a_marked,
        a_unmarked=a_unmarked,
        residual_norm=float(np.linalg.norm(remainder)),
    )


def plane_angle(coords: PlaneCoords) -> float:
    """Ray angle of the plane component, measured from the unmarked axis.

    Global phase (sign included) is quotiented out, so the result lives in
    [0, pi). Each Grover iteration advances it by exactly 2*theta_sin
    modulo pi.
    """
    a_m, a_u = coords.a_marked, coords.a_unmarked
    anchor = a_u if abs(a_u) >= abs(a_m) else a_m
    if abs(anchor) == 0.0:
        return 0.0
    phase = anchor / abs(anchor)
    r_m = (a_m / phase).real
    r_u = (a_u / phase).real
    return math.atan2(r_m, r_u) % math.pi


def oblique_coords(state: StateVector, marked: Sequence[str]) -> tuple[complex, complex]:
    """Coefficients (c_p, c_r) with state = c_p*|uniform> + c_r*|beta>.

    The pair (|uniform>, |beta>) is not orthogonal; the coefficients come
    from the 2x2 Gram system. Useful for reading states written against the
    uniform superposition instead of the orthonormal plane basis. Only
    meaningful when the state actually lies in the plane (residual ~ 0).
    """
    beta, _ = marked_plane_basis(state.n_qubits, marked)
    dim = 1 << state.n_qubits
    uniform = np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)
    overlap = complex(np.vdot(uniform, beta.amps))
    gram = np.array([[1.0, overlap], [np.conj(overlap), 1.0]], dtype=np.complex128)
    rhs = np.array(
        [np.vdot(uniform, state.amps), np.vdot(beta.amps, state.amps)], dtype=np.complex128
    )
    c_p, c_r = np.linalg.solve(gram, rhs)
    return complex(c_p), complex(c_r)


def strip_ancilla(state: StateVector) -> StateVector:
    """Remove a trailing ancilla that sits in (|0>-|1>)/sqrt(2).

    The ancilla is the highest-index qubit, i.e. the least significant bit
    of the amplitude index. Verifies the factorization before discarding:
    odd-index amplitudes must be the negatives of the even-index ones.
    """
    if state.n_qubits < 2:
        raise ValueError("nothing to strip: state has a single qubit")
    even = state.amps[0::2]
    odd = state.amps[1::2]
    defect = float(np.linalg.norm(odd + even))
    if defect > ANCILLA_FACTOR_TOL:
        raise AncillaFactorizationError(
            f"ancilla does not factor as (|0>-|1>)/sqrt(2): defect norm {defect:.3e}"
        )
    data = even * math.sqrt(2.0)
    return StateVector(state.n_qubits - 1, data, copy=False)


def _data_state(state: StateVector, spec: GroverSpec) -> StateVector:
    if spec.style is OracleStyle.MCX_ANCILLA:
        return strip_ancilla(state)
    return state


def iteration_report(spec: GroverSpec, k_max: int) -> list[IterationRow]:
    """Rows k = 0..k_max with simulated and closed-form marked probability.

    Simulated values come from running the compiled circuit: the k=0
    preparation once, then one oracle-plus-diffuser block per further row,
    reusing the evolving state instead of recompiling from scratch.
    """
    if not 0 <= k_max <= MAX_REPORT_ITERATIONS:
        raise ValueError(f"k_max must be in 0..{MAX_REPORT_ITERATIONS}, got {k_max}")
    angles = grover_angles(spec.n_qubits, spec.n_marked)
    prologue = GroverSpec(spec.n_qubits, spec.marked, 0, spec.style)
    state = run(build_grover_circuit(prologue))
    block = grover_iteration(spec) if k_max >= 1 else None
    rows: list[IterationRow] = []
    for k in range(k_max + 1):
        if k > 0:
            state = run(block, initial=state)
        data = _data_state(state, spec)
        p_sim = sum(data.probability(bits) for bits in spec.marked)
        rows.append(
            IterationRow(
                k=k,
                angle=(2 * k + 1) * angles.theta_sin,
                p_marked_sim=float(p_sim),
                p_marked_formula=predicted_success(spec.n_qubits, spec.n_marked, k),
                p_each_unmarked=p_each_unmarked(spec.n_qubits, spec.n_marked, k),
            )
        )
    return rows
