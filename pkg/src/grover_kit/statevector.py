"""Dense complex statevector with exact gate application.

Qubit order convention: qubit 0 is the leftmost character of a ket string
and the most significant bit of the amplitude index. ``|10100>`` therefore
lives at index ``0b10100 = 20``. This is the reverse of Qiskit's ordering;
translate qubit indices (q -> n-1-q) when comparing against it.

Amplitudes are numpy complex128 throughout. No operation renormalizes: the
norm is checked on construction and a violation raises rather than being
silently corrected.
"""

from __future__ import annotations

import numpy as np

MAX_QUBITS = 26
NORM_TOL = 1e-9

_SQRT2_INV = 1.0 / np.sqrt(2.0)

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) * _SQRT2_INV
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)

SINGLE_QUBIT_MATRICES = {"H": _H, "X": _X, "Z": _Z}


def bitstring_to_index(bits: str) -> int:
    """Map an msb-first bitstring to its amplitude index."""
    if not bits or any(ch not in "01" for ch in bits):
        raise ValueError(f"not a bitstring: {bits!r}")
    return int(bits, 2)


def index_to_bitstring(index: int, n_qubits: int) -> str:
    """Map an amplitude index back to an msb-first bitstring of width n_qubits."""
    if not 0 <= index < (1 << n_qubits):
        raise ValueError(f"index {index} out of range for {n_qubits} qubits")
    return format(index, f"0{n_qubits}b")


class StateVector:
    """Immutable n-qubit state: 2**n_qubits complex amplitudes, unit norm."""

    __slots__ = ("n_qubits", "_amps")

    def __init__(self, n_qubits: int, amps: np.ndarray, *, copy: bool = True):
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
        arr = np.asarray(amps, dtype=np.complex128)
        if arr.shape != (1 << n_qubits,):
            raise ValueError(
                f"expected {1 << n_qubits} amplitudes for {n_qubits} qubits, got shape {arr.shape}"
            )
        if copy and arr is amps:
            arr = arr.copy()
        if not np.all(np.isfinite(arr)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 by more than {NORM_TOL}")
        arr.flags.writeable = False
        self.n_qubits = n_qubits
        self._amps = arr

    @property
    def amps(self) -> np.ndarray:
        """Read-only amplitude array, index msb-first."""
        return self._amps

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amps) ** 2

    def probability(self, bits: str) -> float:
        """Probability of measuring the given msb-first bitstring."""
        if len(bits) != self.n_qubits:
            raise ValueError(f"bitstring {bits!r} has length {len(bits)}, expected {self.n_qubits}")
        return float(abs(self._amps[bitstring_to_index(bits)]) ** 2)

    def amplitude(self, bits: str) -> complex:
        if len(bits) != self.n_qubits:
            raise ValueError(f"bitstring {bits!r} has length {len(bits)}, expected {self.n_qubits}")
        return complex(self._amps[bitstring_to_index(bits)])

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


def zero_state(n_qubits: int) -> StateVector:
    """|0...0> on n_qubits qubits."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps, copy=False)


_KET_FACTORS = {
    "0": np.array([1.0, 0.0], dtype=np.complex128),
    "1": np.array([0.0, 1.0], dtype=np.complex128),
    "p": np.array([_SQRT2_INV, _SQRT2_INV], dtype=np.complex128),
    "m": np.array([_SQRT2_INV, -_SQRT2_INV], dtype=np.complex128),
}


def ket(pattern: str) -> StateVector:
    """Product state from a character pattern, leftmost char = qubit 0.

    '0' and '1' are computational basis states, 'p' is (|0>+|1>)/sqrt(2),
    'm' is (|0>-|1>)/sqrt(2). ket("ppp") is the uniform 3-qubit state.
    """
    if not 1 <= len(pattern) <= MAX_QUBITS:
        raise ValueError(f"pattern length must be in 1..{MAX_QUBITS}, got {len(pattern)}")
    for ch in pattern:
        if ch not in _KET_FACTORS:
            raise ValueError(f"bad ket character {ch!r} in {pattern!r}, expected one of 01pm")
    amps = np.array([1.0], dtype=np.complex128)
    for ch in pattern:
        amps = np.kron(amps, _KET_FACTORS[ch])
    return StateVector(len(pattern), amps, copy=False)


def _apply_single_inplace(amps: np.ndarray, n_qubits: int, kind: str, target: int) -> None:
    """Apply H, X or Z to `target` directly on a writable amplitude array."""
    view = np.moveaxis(amps.reshape((2,) * n_qubits), target, 0)
    if kind == "X":
        tmp = view[0].copy()
        view[0] = view[1]
        view[1] = tmp
    elif kind == "Z":
        view[1] *= -1.0
    elif kind == "H":
        a = view[0].copy()
        b = view[1]
        view[0] = (a + b) * _SQRT2_INV
        view[1] = (a - b) * _SQRT2_INV
    else:
        raise ValueError(f"unknown single-qubit gate {kind!r}")


def _apply_multicontrolled_inplace(
    amps: np.ndarray, n_qubits: int, base: str, controls: tuple[int, ...], target: int
) -> None:
    """Apply a multi-controlled X or Z on a writable amplitude array.

    The base gate acts on `target` only when every control qubit is 1.
    Implemented with integer index masks; for Z only sign flips happen, for
    X the selected amplitude pairs swap.
    """
    tbit = 1 << (n_qubits - 1 - target)
    cmask = 0
    for c in controls:
        cmask |= 1 << (n_qubits - 1 - c)
    indices = np.arange(amps.size)
    if base == "Z":
        full = cmask | tbit
        amps[(indices & full) == full] *= -1.0
    elif base == "X":
        lower = indices[((indices & cmask) == cmask) & ((indices & tbit) == 0)]
        upper = lower | tbit
        tmp = amps[lower].copy()
        amps[lower] = amps[upper]
        amps[upper] = tmp
    else:
        raise ValueError(f"unknown controlled base gate {base!r}")


def _check_qubit(q: int, n_qubits: int, what: str) -> None:
    if not isinstance(q, (int, np.integer)):
        raise IndexError(f"{what} must be an integer qubit index, got {q!r}")
    if not 0 <= q < n_qubits:
        raise IndexError(f"{what} {q} out of range for {n_qubits} qubits")


def apply_single(state: StateVector, kind: str, target: int) -> StateVector:
    """New state with H, X or Z applied to `target`. The input is untouched."""
    if kind not in SINGLE_QUBIT_MATRICES:
        raise ValueError(f"unknown single-qubit gate {kind!r}, expected H, X or Z")
    _check_qubit(target, state.n_qubits, "target")
    out = state.amps.copy()
    _apply_single_inplace(out, state.n_qubits, kind, target)
    return StateVector(state.n_qubits, out, copy=False)


def apply_multicontrolled(
    state: StateVector, base: str, controls: tuple[int, ...] | list[int], target: int
) -> StateVector:
    """New state with a multi-controlled X or Z applied. The input is untouched."""
    if base not in ("X", "Z"):
        raise ValueError(f"unknown controlled base gate {base!r}, expected X or Z")
    ctrl = tuple(controls)
    if not ctrl:
        raise ValueError("controls must be non-empty")
    if len(set(ctrl)) != len(ctrl):
        raise ValueError(f"duplicate control qubits in {ctrl}")
    for c in ctrl:
        _check_qubit(c, state.n_qubits, "control")
    _check_qubit(target, state.n_qubits, "target")
    if target in ctrl:
        raise ValueError(f"target {target} also listed as a control")
    out = state.amps.copy()
    _apply_multicontrolled_inplace(out, state.n_qubits, base, ctrl, target)
    return StateVector(state.n_qubits, out, copy=False)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> with the conjugate on the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amps, b.amps))


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = 1e-10) -> bool:
    """True when a == c*b for some unit scalar c, within tol in 2-norm."""
    if a.n_qubits != b.n_qubits:
        return False
    ip = np.vdot(b.amps, a.amps)
    mag = abs(ip)
    phase = ip / mag if mag > 0.0 else 1.0
    return bool(np.linalg.norm(a.amps - phase * b.amps) <= tol)
