"""Noisy syndrome-readout memory circuits for the repetition code.

The memory experiment keeps one half of an encoded Bell pair alive while
ancillas read the adjacent-pair parities for d-1 rounds through noisy
CNOTs.  Five bit-flip error-location classes are modeled: ancilla
preparation (p_sp), the plain data-noise layer before the first round
(p_data), data idling after each round (p_id), a two-qubit flip after
every CNOT (p_2), and readout per ancilla (p_m).  Every segment between
rounds carries exactly one data-noise layer; doubling any of them shifts
the distance-3 versus distance-5 crossing well away from its known
location, which is how this schedule was pinned down.  Phase-type noise
is deliberately absent: a single Z error on the repetition code already
kills all coherence, so only the X sector carries structure worth
simulating.

A circuit is compiled for the block engine by conjugating every error
location through all gates that come after it.  Once the Kraus operators
are rewritten that way the unitaries slide to the front of the composition,
where they act trivially on the noiseless start state, and what remains is
the encoded Bell state followed by a time-ordered list of working-basis
channels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import repetition_code
from .frame import (
    RegisterMap,
    StabilizerCode,
    StabilizerFrame,
    StateLayout,
    WorkingChannel,
    complete_frame,
    css_bitflip_layout,
    full_layout,
    transform_channel,
)
from .paulis import (
    CliffordGate,
    PauliChannel,
    bit_flip_channel,
    cnot,
    conjugate_through,
    two_qubit_bit_flip_channel,
)
from .state import (
    BlockedState,
    CiResult,
    EngineOptions,
    apply_channel,
    coherent_information,
    initial_bell_state,
)

__all__ = [
    "NoiseRates",
    "NoisyCircuit",
    "CompiledNoise",
    "phenomenological_rates",
    "circuit_level_rates",
    "ancilla_qubit",
    "build_repetition_memory",
    "compile",
    "run_compiled",
    "memory_ci",
]


@dataclass(frozen=True, slots=True)
class NoiseRates:
    """Bit-flip probabilities for the five error-location classes."""

    p_sp: float
    p_id: float
    p_m: float
    p_2: float
    p_data: float

    def __post_init__(self) -> None:
        for name in ("p_sp", "p_id", "p_m", "p_2", "p_data"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} outside [0, 1]")


def phenomenological_rates(p: float) -> NoiseRates:
    """Noisy readout and idling only: p_sp = p_2 = 0, p_m = p_id = p.

    The initial data layer uses the same p; it is not an independent knob
    under this preset.
    """
    return NoiseRates(p_sp=0.0, p_id=p, p_m=p, p_2=0.0, p_data=p)


def circuit_level_rates(lam: float) -> NoiseRates:
    """Every location class at the same rate lam, p_data included."""
    return NoiseRates(p_sp=lam, p_id=lam, p_m=lam, p_2=lam, p_data=lam)


@dataclass(frozen=True, slots=True)
class NoisyCircuit:
    """Time-ordered gates and error locations over a data+ancilla register.

    Register qubits 0..n_data-1 are data, the rest are ancillas.  The
    reference system lives outside the register, so no element can touch
    it; that isolation is structural, not checked at runtime.
    """

    n_data: int
    n_ancilla: int
    rounds: int
    rates: NoiseRates
    elements: tuple[CliffordGate | PauliChannel, ...]

    def __post_init__(self) -> None:
        if self.n_data < 1:
            raise ValueError(f"need at least one data qubit, got {self.n_data}")
        if self.n_ancilla < 0 or self.rounds < 0:
            raise ValueError("ancilla and round counts must be non-negative")
        n = self.n_register
        for elem in self.elements:
            if isinstance(elem, CliffordGate):
                if max(elem.qubits) >= n:
                    raise ValueError(f"gate {elem} acts outside the {n}-qubit register")
            elif isinstance(elem, PauliChannel):
                if elem.n != n:
                    raise ValueError(
                        f"channel over {elem.n} qubits in a {n}-qubit register"
                    )
            else:
                raise TypeError(f"circuit element {elem!r} is neither gate nor channel")

    @property
    def n_register(self) -> int:
        return self.n_data + self.n_ancilla

    def gates(self) -> tuple[CliffordGate, ...]:
        return tuple(e for e in self.elements if isinstance(e, CliffordGate))

    def channel_locations(self) -> tuple[PauliChannel, ...]:
        return tuple(e for e in self.elements if isinstance(e, PauliChannel))


def ancilla_qubit(d: int, rnd: int, stab: int) -> int:
    """Register index of the ancilla reading parity (stab, stab+1) in round rnd.

    Ancillas are fresh each round: round r owns the block of d-1 indices
    starting at d + r*(d-1).
    """
    if not 0 <= rnd < d - 1:
        raise ValueError(f"round {rnd} out of range for d={d}")
    if not 0 <= stab < d - 1:
        raise ValueError(f"stabilizer {stab} out of range for d={d}")
    return d + rnd * (d - 1) + stab


def build_repetition_memory(d: int, rates: NoiseRates) -> NoisyCircuit:
    """Memory circuit on d data qubits with d-1 readout rounds.

    Timeline: preparation flips on every ancilla, the plain data-noise
    layer at p_data, then per round the 2(d-1) parity CNOTs each followed
    by a two-qubit flip, readout flips on that round's ancillas, and one
    idle layer at p_id on the data.  That puts exactly one data-noise
    layer in each of the d segments around the rounds.  Encoding itself
    is noiseless and carries no elements; the stabilizer frame absorbs it
    during compilation.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"memory circuit needs odd d >= 3, got {d}")
    if not isinstance(rates, NoiseRates):
        raise TypeError(f"rates must be NoiseRates, got {type(rates).__name__}")
    rounds = d - 1
    n = d + rounds * (d - 1)
    elems: list[CliffordGate | PauliChannel] = []

    # X on a CNOT target commutes through the gate unchanged, so flipping
    # every fresh ancilla up front equals flipping it right before its round
    for a in range(d, n):
        elems.append(bit_flip_channel(n, a, rates.p_sp))

    for q in range(d):
        elems.append(bit_flip_channel(n, q, rates.p_data))

    for rnd in range(rounds):
        for s in range(d - 1):
            a = ancilla_qubit(d, rnd, s)
            for q in (s, s + 1):
                elems.append(cnot(q, a))
                elems.append(two_qubit_bit_flip_channel(n, q, a, rates.p_2))
        for s in range(d - 1):
            elems.append(bit_flip_channel(n, ancilla_qubit(d, rnd, s), rates.p_m))
        for q in range(d):
            elems.append(bit_flip_channel(n, q, rates.p_id))

    return NoisyCircuit(
        n_data=d,
        n_ancilla=rounds * (d - 1),
        rounds=rounds,
        rates=rates,
        elements=tuple(elems),
    )


@dataclass(frozen=True, slots=True)
class CompiledNoise:
    """Ideal encoded start state plus back-propagated working channels.

    channels holds one working-basis channel per error location of the
    source circuit, in the original temporal order.
    """

    layout: StateLayout
    register_map: RegisterMap
    ideal_state: BlockedState
    channels: tuple[WorkingChannel, ...]


def compile(
    circuit: NoisyCircuit,
    frame: StabilizerFrame,
    options: EngineOptions | None = None,
) -> CompiledNoise:
    """Rewrite a noisy circuit as channels acting after an ideal run.

    For the composition N_T U_T ... N_1 U_1, replacing each channel's Kraus
    operators K by (U_T...U_{t+1}) K (U_T...U_{t+1})^dagger gives the exact
    identity N_T U_T ... N_1 U_1 = N~_T ... N~_1 (U_T...U_1): all unitaries
    collect at the start, the channels keep their order.  The parity-readout
    CNOTs act trivially on the noiseless encoded state with ancillas at 0,
    so the ideal run is just the encoded Bell state padded with zero bits.

    Requires every gate to be a data-controlled, ancilla-targeted CNOT and
    every ancilla's combined controls to read a product of Z stabilizers;
    otherwise the ideal state would not be trivial and compilation refuses.
    """
    code = frame.code
    if code.n != circuit.n_data:
        raise ValueError(
            f"frame is for {code.n} data qubits, circuit has {circuit.n_data}"
        )
    _check_gate_structure(circuit, code)

    # conjugate each location through every strictly later gate
    later: list[CliffordGate] = []
    compiled_rev: list[PauliChannel] = []
    for elem in reversed(circuit.elements):
        if isinstance(elem, CliffordGate):
            later.insert(0, elem)
        else:
            terms = tuple(
                (prob, conjugate_through(op, later)) for prob, op in elem.terms
            )
            compiled_rev.append(PauliChannel(circuit.n_register, terms))
    locations = tuple(reversed(compiled_rev))

    all_x = all(
        op.is_x_type() for ch in locations for _, op in ch.terms
    )
    if code.is_css() and all_x:
        layout = css_bitflip_layout(frame, n_ancilla_bits=circuit.n_ancilla)
    else:
        layout = full_layout(frame, n_ancilla_bits=circuit.n_ancilla)

    register_map = RegisterMap(
        circuit.n_register,
        data=tuple(range(circuit.n_data)),
        ancilla=tuple(range(circuit.n_data, circuit.n_register)),
    )
    channels = tuple(
        transform_channel(frame, ch, register_map, layout) for ch in locations
    )
    ideal_state = initial_bell_state(layout, options)
    return CompiledNoise(
        layout=layout,
        register_map=register_map,
        ideal_state=ideal_state,
        channels=channels,
    )


def _check_gate_structure(circuit: NoisyCircuit, code: StabilizerCode) -> None:
    """Reject gate lists whose noiseless action on the start state is not trivial."""
    controls: dict[int, int] = {}
    for gate in circuit.gates():
        if gate.kind != "CNOT":
            raise ValueError(f"only CNOT gates can be compiled, got {gate}")
        c, t = gate.qubits
        if c >= circuit.n_data or t < circuit.n_data:
            raise ValueError(f"gate {gate} must point from data into the ancillas")
        controls[t] = controls.get(t, 0) ^ (1 << c)
    # each ancilla's accumulated controls must read a Z-stabilizer product,
    # else the CNOTs would entangle it with the code state
    basis: dict[int, int] = {}
    for s in code.stabilizers:
        if s.x == 0:
            _gf2_insert(basis, s.z)
    for t, mask in controls.items():
        if _gf2_reduce(basis, mask) != 0:
            raise ValueError(
                f"ancilla {t} reads a parity outside the Z-stabilizer group"
            )


def _gf2_insert(basis: dict[int, int], vec: int) -> None:
    vec = _gf2_reduce(basis, vec)
    if vec:
        basis[vec.bit_length() - 1] = vec


def _gf2_reduce(basis: dict[int, int], vec: int) -> int:
    while vec:
        lead = vec.bit_length() - 1
        if lead not in basis:
            return vec
        vec ^= basis[lead]
    return 0


def run_compiled(
    compiled: CompiledNoise, options: EngineOptions | None = None
) -> BlockedState:
    """Apply the compiled channels to the ideal state in temporal order."""
    state = compiled.ideal_state
    for channel in compiled.channels:
        state = apply_channel(state, channel, options)
    return state


def memory_ci(
    d: int, rates: NoiseRates, options: EngineOptions | None = None
) -> CiResult:
    """Exact coherent information of the d-qubit repetition memory run."""
    circuit = build_repetition_memory(d, rates)
    frame = complete_frame(repetition_code(d))
    compiled = compile(circuit, frame, options)
    return coherent_information(run_compiled(compiled, options))
