"""Statevector simulation and analysis of Grover amplitude amplification."""

from grover_kit.circuit import (
    Circuit,
    GroverSpec,
    MultiControlled,
    OracleStyle,
    Single,
    build_grover_circuit,
    circuit_from_text,
    circuit_to_text,
    compile_diffuser,
    compile_phase_oracle,
    dense_unitary,
    grover_iteration,
    grover_step_labels,
    run,
)
from grover_kit.geometry import (
    AncillaFactorizationError,
    GroverAngles,
    IterationRow,
    PlaneCoords,
    grover_angles,
    iteration_report,
    marked_plane_basis,
    oblique_coords,
    optimal_iterations,
    p_each_unmarked,
    plane_angle,
    plane_decompose,
    predicted_success,
    strip_ancilla,
)
from grover_kit.sampling import Histogram, binomial_interval, measure_all
from grover_kit.statevector import (
    StateVector,
    apply_multicontrolled,
    apply_single,
    bitstring_to_index,
    equal_up_to_global_phase,
    index_to_bitstring,
    inner_product,
    ket,
    zero_state,
)

__version__ = "0.1.0"

__all__ = [
    "AncillaFactorizationError",
    "Circuit",
    "GroverAngles",
    "GroverSpec",
    "Histogram",
    "IterationRow",
    "MultiControlled",
    "OracleStyle",
    "PlaneCoords",
    "Single",
    "StateVector",
    "apply_multicontrolled",
    "apply_single",
    "binomial_interval",
    "bitstring_to_index",
    "build_grover_circuit",
    "circuit_from_text",
    "circuit_to_text",
    "compile_diffuser",
    "compile_phase_oracle",
    "dense_unitary",
    "equal_up_to_global_phase",
    "grover_angles",
    "grover_iteration",
    "grover_step_labels",
    "index_to_bitstring",
    "inner_product",
    "iteration_report",
    "ket",
    "marked_plane_basis",
    "measure_all",
    "oblique_coords",
    "optimal_iterations",
    "p_each_unmarked",
    "plane_angle",
    "plane_decompose",
    "predicted_success",
    "run",
    "strip_ancilla",
    "zero_state",
]
