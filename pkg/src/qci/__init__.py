"""Exact coherent-information calculator for noisy stabilizer codes."""

from .analysis import (
    CROSSING_PRESETS,
    MEMORY_PRESETS,
    NOISE_KINDS,
    CiCurve,
    CrossingError,
    CrossingPreset,
    CrossingResult,
    code_capacity_ci,
    find_crossing,
    hashing_bound,
    hashing_zero,
    p_grid,
    pseudo_threshold,
    render_svg,
    single_qubit_ci,
    sweep_code_capacity,
    sweep_memory,
    sweep_single_qubit,
    write_csv,
)
from .circuit import (
    CompiledNoise,
    NoiseRates,
    NoisyCircuit,
    ancilla_qubit,
    build_repetition_memory,
    circuit_level_rates,
    compile,
    memory_ci,
    phenomenological_rates,
    run_compiled,
)
from .codes import (
    BUILTIN_FAMILIES,
    color_code_488,
    parse_code_file,
    repetition_code,
    rotated_surface_code,
    single_qubit_code,
)
from .frame import (
    CodeValidationError,
    RegisterMap,
    StabilizerCode,
    StabilizerFrame,
    StateLayout,
    complete_frame,
    css_bitflip_layout,
    full_layout,
    transform_channel,
    transform_pauli,
)
from .oracle import (
    OracleSizeError,
    dense_circuit_ci,
    dense_code_capacity_ci,
    dense_encoded_bell,
)
from .paulis import (
    CliffordGate,
    PauliChannel,
    PauliString,
    bit_flip_channel,
    conjugate_through,
    depolarizing_channel,
    two_qubit_bit_flip_channel,
)
from .state import (
    BlockedState,
    CiResult,
    EngineOptions,
    MemoryCeilingError,
    apply_channel,
    coherent_information,
    entropy_bits,
    initial_bell_state,
    trace_out_reference,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_FAMILIES",
    "BlockedState",
    "CROSSING_PRESETS",
    "CiCurve",
    "CiResult",
    "CliffordGate",
    "CodeValidationError",
    "CompiledNoise",
    "CrossingError",
    "CrossingPreset",
    "CrossingResult",
    "EngineOptions",
    "MEMORY_PRESETS",
    "MemoryCeilingError",
    "NOISE_KINDS",
    "NoiseRates",
    "NoisyCircuit",
    "OracleSizeError",
    "PauliChannel",
    "PauliString",
    "RegisterMap",
    "StabilizerCode",
    "StabilizerFrame",
    "StateLayout",
    "ancilla_qubit",
    "apply_channel",
    "bit_flip_channel",
    "build_repetition_memory",
    "circuit_level_rates",
    "code_capacity_ci",
    "coherent_information",
    "color_code_488",
    "compile",
    "complete_frame",
    "conjugate_through",
    "css_bitflip_layout",
    "dense_circuit_ci",
    "dense_code_capacity_ci",
    "dense_encoded_bell",
    "depolarizing_channel",
    "entropy_bits",
    "find_crossing",
    "full_layout",
    "hashing_bound",
    "hashing_zero",
    "initial_bell_state",
    "memory_ci",
    "p_grid",
    "parse_code_file",
    "phenomenological_rates",
    "pseudo_threshold",
    "render_svg",
    "repetition_code",
    "rotated_surface_code",
    "run_compiled",
    "single_qubit_ci",
    "single_qubit_code",
    "sweep_code_capacity",
    "sweep_memory",
    "sweep_single_qubit",
    "trace_out_reference",
    "transform_channel",
    "transform_pauli",
    "two_qubit_bit_flip_channel",
    "write_csv",
]
