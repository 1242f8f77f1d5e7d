"""Gate circuits for Grover search: compilation, execution, serialization.

A circuit is a fixed qubit count plus an ordered tuple of gate ops drawn
from {H, X, Z, MCX, MCZ}. Compilers produce phase oracles for a set of
marked bitstrings in two interchangeable styles:

* ``mcz``: width n, the oracle is an X-sandwich around a multi-controlled Z
  acting on the data qubits themselves.
* ``mcx_ancilla``: width n+1, one extra qubit (always the highest index) is
  prepared in (|0>-|1>)/sqrt(2) and a multi-controlled X targets it, so the
  phase appears on the data register by kickback.

The diffuser circuit on n qubits realizes exactly -(2|u><u| - Id) where u is
the uniform superposition; the leading minus sign is a global phase per
iteration and is kept, not hidden.

Text format (one op per line, ``#`` starts a comment)::

    # qubits: 3
    H 0
    X 2
    MCX c=0,1 t=2
    MCZ c=0 t=1

The ``# qubits: N`` header records the width so that trailing idle qubits
survive a round trip; without it the width is inferred as max index + 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from grover_kit.statevector import (
    MAX_QUBITS,
    StateVector,
    _apply_multicontrolled_inplace,
    _apply_single_inplace,
    zero_state,
)

MAX_DENSE_QUBITS = 10


@dataclass(frozen=True)
class Single:
    """One H, X or Z gate on a single qubit."""

    kind: str
    target: int

    def __post_init__(self):
        if self.kind not in ("H", "X", "Z"):
            raise ValueError(f"unknown single-qubit gate {self.kind!r}, expected H, X or Z")
        if not isinstance(self.target, (int, np.integer)) or self.target < 0:
            raise IndexError(f"target must be a non-negative qubit index, got {self.target!r}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class MultiControlled:
    """X or Z on `target`, applied only when every control qubit is 1."""

    base: str
    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        if self.base not in ("X", "Z"):
            raise ValueError(f"unknown controlled base gate {self.base!r}, expected X or Z")
        object.__setattr__(self, "controls", tuple(self.controls))
        if not self.controls:
            raise ValueError("controls must be non-empty")
        if len(set(self.controls)) != len(self.controls):
            raise ValueError(f"duplicate control qubits in {self.controls}")
        for q in (*self.controls, self.target):
            if not isinstance(q, (int, np.integer)) or q < 0:
                raise IndexError(f"qubit index must be a non-negative integer, got {q!r}")
        if self.target in self.controls:
            raise ValueError(f"target {self.target} also listed as a control")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, self.target)


GateOp = Single | MultiControlled


@dataclass(frozen=True)
class Circuit:
    """Ordered gate ops on a fixed number of qubits."""

    n_qubits: int
    ops: tuple[GateOp, ...]

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        object.__setattr__(self, "ops", tuple(self.ops))
        for i, op in enumerate(self.ops):
            for q in op.qubits:
                if q >= self.n_qubits:
                    raise IndexError(
                        f"op {i} ({op!r}) touches qubit {q} but the circuit has {self.n_qubits} qubits"
                    )

    def __len__(self) -> int:
        return len(self.ops)


class OracleStyle(enum.Enum):
    MCZ_DIRECT = "mcz"
    MCX_ANCILLA = "mcx_ancilla"


@dataclass(frozen=True)
class GroverSpec:
    """Problem statement: search width, marked bitstrings, iteration count, style.

    `marked` is normalized to a tuple sorted by index. With `mcx_ancilla` the
    compiled circuits have n_qubits + 1 wires and the ancilla is the last one.
    """

    n_qubits: int
    marked: tuple[str, ...]
    iterations: int
    style: OracleStyle = OracleStyle.MCZ_DIRECT

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        marked = tuple(self.marked) if not isinstance(self.marked, str) else (self.marked,)
        for bits in marked:
            if len(bits) != self.n_qubits or any(ch not in "01" for ch in bits):
                raise ValueError(
                    f"marked string {bits!r} is not a bitstring of length {self.n_qubits}"
                )
        if len(set(marked)) != len(marked):
            raise ValueError(f"duplicate marked strings in {marked}")
        if not 1 <= len(marked) < (1 << self.n_qubits):
            raise ValueError(
                f"need between 1 and 2^n - 1 marked strings, got {len(marked)} for n={self.n_qubits}"
            )
        object.__setattr__(self, "marked", tuple(sorted(marked, key=lambda b: int(b, 2))))
        if not isinstance(self.style, OracleStyle):
            raise ValueError(f"style must be an OracleStyle, got {self.style!r}")
        if self.iterations < 0:
            raise ValueError(f"iterations must be >= 0, got {self.iterations}")

    @property
    def n_marked(self) -> int:
        return len(self.marked)

    @property
    def circuit_qubits(self) -> int:
        """Wire count of compiled circuits: n_qubits, plus 1 for the ancilla style."""
        extra = 1 if self.style is OracleStyle.MCX_ANCILLA else 0
        return self.n_qubits + extra


def _zero_positions(bits: str) -> list[int]:
    return [q for q, ch in enumerate(bits) if ch == "0"]


def compile_phase_oracle(
    n_qubits: int, marked: tuple[str, ...] | list[str], style: OracleStyle = OracleStyle.MCZ_DIRECT
) -> Circuit:
    """Circuit flipping the sign of every marked basis state.

    One X-sandwiched multi-controlled gate per marked string. For
    ``mcx_ancilla`` the returned circuit does not include the ancilla
    preparation; see build_grover_circuit for that.
    """
    spec = GroverSpec(n_qubits, tuple(marked), iterations=0, style=style)
    if style is OracleStyle.MCZ_DIRECT and n_qubits < 2:
        raise ValueError("mcz style needs at least 2 qubits (one control plus the target)")
    ops: list[GateOp] = []
    for bits in spec.marked:
        flips = _zero_positions(bits)
        ops.extend(Single("X", q) for q in flips)
        if style is OracleStyle.MCZ_DIRECT:
            ops.append(MultiControlled("Z", tuple(range(n_qubits - 1)), n_qubits - 1))
        else:
            ops.append(MultiControlled("X", tuple(range(n_qubits)), n_qubits))
        ops.extend(Single("X", q) for q in flips)
    return Circuit(spec.circuit_qubits, tuple(ops))


def compile_diffuser(n_qubits: int) -> Circuit:
    """Reflection through the uniform state, with a global minus sign.

    The gate sequence H-layer, X-layer, MCZ, X-layer, H-layer equals
    -(2|u><u| - Id) exactly, u the uniform superposition on n_qubits.
    """
    if n_qubits < 2:
        raise ValueError(f"diffuser needs at least 2 qubits, got {n_qubits}")
    ops: list[GateOp] = []
    ops.extend(Single("H", q) for q in range(n_qubits))
    ops.extend(Single("X", q) for q in range(n_qubits))
    ops.append(MultiControlled("Z", tuple(range(n_qubits - 1)), n_qubits - 1))
    ops.extend(Single("X", q) for q in range(n_qubits))
    ops.extend(Single("H", q) for q in range(n_qubits))
    return Circuit(n_qubits, tuple(ops))


def grover_iteration(spec: GroverSpec) -> Circuit:
    """One oracle-plus-diffuser block spanning ``spec.circuit_qubits`` wires."""
    oracle = compile_phase_oracle(spec.n_qubits, spec.marked, spec.style)
    diffuser = compile_diffuser(spec.n_qubits)
    return Circuit(spec.circuit_qubits, oracle.ops + diffuser.ops)


def _build_with_labels(spec: GroverSpec) -> tuple[Circuit, tuple[str, ...]]:
    """Full Grover circuit plus one step label per op.

    Label scheme (toolkit step numbering): step 1 is register preparation
    ("1.0" the ancilla bit flip when present, "1.1" the H layer over every
    wire), step 2 the oracle, step 3 the diffuser. Oracle and diffuser
    labels carry the 1-based iteration, e.g. "k2 3.4". Within step 2 the
    per-marked-string sandwich is "2.1[bits]" (X flips), "2.2[bits]"
    (controlled gate), "2.3[bits]" (X flips undone). Runs of ops sharing a
    label are the natural snapshot boundaries for traces.
    """
    if spec.iterations >= 1 and spec.n_qubits < 2:
        raise ValueError("amplification needs at least 2 data qubits")
    ops: list[GateOp] = []
    labels: list[str] = []
    ancilla = spec.style is OracleStyle.MCX_ANCILLA
    width = spec.circuit_qubits
    if ancilla:
        ops.append(Single("X", spec.n_qubits))
        labels.append("1.0")
    for q in range(width):
        ops.append(Single("H", q))
        labels.append("1.1")
    for it in range(1, spec.iterations + 1):
        for bits in spec.marked:
            flips = _zero_positions(bits)
            for q in flips:
                ops.append(Single("X", q))
                labels.append(f"k{it} 2.1[{bits}]")
            if ancilla:
                ops.append(MultiControlled("X", tuple(range(spec.n_qubits)), spec.n_qubits))
            else:
                ops.append(MultiControlled("Z", tuple(range(spec.n_qubits - 1)), spec.n_qubits - 1))
            labels.append(f"k{it} 2.2[{bits}]")
            for q in flips:
                ops.append(Single("X", q))
                labels.append(f"k{it} 2.3[{bits}]")
        for q in range(spec.n_qubits):
            ops.append(Single("H", q))
            labels.append(f"k{it} 3.1")
        for q in range(spec.n_qubits):
            ops.append(Single("X", q))
            labels.append(f"k{it} 3.2")
        ops.append(MultiControlled("Z", tuple(range(spec.n_qubits - 1)), spec.n_qubits - 1))
        labels.append(f"k{it} 3.3")
        for q in range(spec.n_qubits):
            ops.append(Single("X", q))
            labels.append(f"k{it} 3.4")
        for q in range(spec.n_qubits):
            ops.append(Single("H", q))
            labels.append(f"k{it} 3.5")
    return Circuit(width, tuple(ops)), tuple(labels)


def build_grover_circuit(spec: GroverSpec) -> Circuit:
    """Preparation, then `spec.iterations` oracle-plus-diffuser blocks."""
    circuit, _ = _build_with_labels(spec)
    return circuit


def grover_step_labels(spec: GroverSpec) -> tuple[str, ...]:
    """Step label for each op of build_grover_circuit(spec), same order."""
    _, labels = _build_with_labels(spec)
    return labels


def run(
    circuit: Circuit,
    initial: StateVector | None = None,
    trace: bool = False,
) -> StateVector | tuple[StateVector, list[StateVector]]:
    """Apply every op in order. Exact, no renormalization.

    With trace=True returns (final, snapshots) where snapshots[i] is the
    state after ops[i]; each snapshot is validated on construction, so a
    norm drift anywhere raises instead of propagating.
    """
    if initial is None:
        initial = zero_state(circuit.n_qubits)
    if initial.n_qubits != circuit.n_qubits:
        raise ValueError(
            f"initial state has {initial.n_qubits} qubits, circuit has {circuit.n_qubits}"
        )
    amps = initial.amps.copy()
    snapshots: list[StateVector] = []
    for op in circuit.ops:
        if isinstance(op, Single):
            _apply_single_inplace(amps, circuit.n_qubits, op.kind, op.target)
        else:
            _apply_multicontrolled_inplace(amps, circuit.n_qubits, op.base, op.controls, op.target)
        if trace:
            snapshots.append(StateVector(circuit.n_qubits, amps, copy=True))
    final = StateVector(circuit.n_qubits, amps, copy=False)
    if trace:
        return final, snapshots
    return final


def dense_unitary(circuit: Circuit) -> np.ndarray:
    """Full 2^n x 2^n matrix of the circuit, columns = images of basis states."""
    if circuit.n_qubits > MAX_DENSE_QUBITS:
        raise ValueError(
            f"dense matrix limited to {MAX_DENSE_QUBITS} qubits, circuit has {circuit.n_qubits}"
        )
    dim = 1 << circuit.n_qubits
    out = np.empty((dim, dim), dtype=np.complex128)
    for col in range(dim):
        amps = np.zeros(dim, dtype=np.complex128)
        amps[col] = 1.0
        for op in circuit.ops:
            if isinstance(op, Single):
                _apply_single_inplace(amps, circuit.n_qubits, op.kind, op.target)
            else:
                _apply_multicontrolled_inplace(
                    amps, circuit.n_qubits, op.base, op.controls, op.target
                )
        out[:, col] = amps
    return out


def op_to_text(op: GateOp) -> str:
    """One-line text form of a single op, as used by the circuit format."""
    if isinstance(op, Single):
        return f"{op.kind} {op.target}"
    ctrl = ",".join(str(c) for c in op.controls)
    return f"MC{op.base} c={ctrl} t={op.target}"


def circuit_to_text(circuit: Circuit) -> str:
    """Serialize to the line format described in the module docstring."""
    lines = [
        f"# qubits: {circuit.n_qubits}",
        "# qubit 0 is the leftmost bitstring character (most significant index bit)",
    ]
    lines.extend(op_to_text(op) for op in circuit.ops)
    return "\n".join(lines) + "\n"


def _parse_qubit(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ValueError(f"line {lineno}: expected a qubit index, got {token!r}") from None
    if value < 0:
        raise ValueError(f"line {lineno}: qubit index must be >= 0, got {value}")
    return value


def circuit_from_text(text: str) -> Circuit:
    """Parse the line format back into a Circuit.

    Errors name the line number and the offending token. Width comes from a
    ``# qubits: N`` comment when present, otherwise max index + 1.
    """
    ops: list[GateOp] = []
    declared_width: int | None = None
    max_index = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        comment = raw.split("#", 1)[1].strip() if "#" in raw else ""
        if comment.startswith("qubits:"):
            try:
                declared_width = int(comment.removeprefix("qubits:").strip())
            except ValueError:
                raise ValueError(f"line {lineno}: bad qubit count in {comment!r}") from None
        if not line:
            continue
        tokens = line.split()
        mnemonic = tokens[0]
        if mnemonic in ("H", "X", "Z"):
            if len(tokens) != 2:
                raise ValueError(f"line {lineno}: {mnemonic} takes exactly one qubit index")
            op: GateOp = Single(mnemonic, _parse_qubit(tokens[1], lineno))
        elif mnemonic in ("MCX", "MCZ"):
            if len(tokens) != 3 or not tokens[1].startswith("c=") or not tokens[2].startswith("t="):
                raise ValueError(
                    f"line {lineno}: expected '{mnemonic} c=<q,q,...> t=<q>', got {line!r}"
                )
            controls = tuple(
                _parse_qubit(part, lineno) for part in tokens[1][2:].split(",") if part != ""
            )
            if not controls:
                raise ValueError(f"line {lineno}: {mnemonic} needs at least one control")
            target = _parse_qubit(tokens[2][2:], lineno)
            try:
                op = MultiControlled(mnemonic[2:], controls, target)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        else:
            raise ValueError(
                f"line {lineno}: unknown gate {mnemonic!r}, expected H, X, Z, MCX or MCZ"
            )
        max_index = max(max_index, *op.qubits)
        ops.append(op)
    if declared_width is None:
        if max_index < 0:
            raise ValueError("no ops and no '# qubits: N' header, width unknown")
        width = max_index + 1
    else:
        width = declared_width
    return Circuit(width, tuple(ops))
