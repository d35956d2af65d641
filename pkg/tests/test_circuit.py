"""Noisy memory circuits: schedule shape, compilation, and oracle agreement."""

from __future__ import annotations

import pytest

from qci import (
    CliffordGate,
    NoiseRates,
    NoisyCircuit,
    PauliChannel,
    PauliString,
    ancilla_qubit,
    build_repetition_memory,
    circuit_level_rates,
    complete_frame,
    compile,
    conjugate_through,
    dense_circuit_ci,
    memory_ci,
    MemoryCeilingError,
    phenomenological_rates,
    repetition_code,
    run_compiled,
    coherent_information,
)


class TestNoiseRates:
    def test_fields_validated(self):
        with pytest.raises(ValueError):
            NoiseRates(-0.1, 0, 0, 0, 0)
        with pytest.raises(ValueError):
            NoiseRates(0, 0, 1.2, 0, 0)

    def test_phenomenological_mapping(self):
        r = phenomenological_rates(0.07)
        assert (r.p_sp, r.p_id, r.p_m, r.p_2, r.p_data) == (0, 0.07, 0.07, 0, 0.07)

    def test_circuit_level_mapping(self):
        r = circuit_level_rates(0.03)
        assert (r.p_sp, r.p_id, r.p_m, r.p_2, r.p_data) == (
            0.03, 0.03, 0.03, 0.03, 0.03,
        )


class TestSchedule:
    def test_element_counts_d3(self):
        circ = build_repetition_memory(3, circuit_level_rates(0.01))
        assert (circ.n_data, circ.n_ancilla, circ.rounds) == (3, 4, 2)
        assert len(circ.gates()) == 8
        assert len(circ.channel_locations()) == 25

    def test_element_counts_d5(self):
        circ = build_repetition_memory(5, circuit_level_rates(0.01))
        assert (circ.n_data, circ.n_ancilla, circ.rounds) == (5, 16, 4)
        assert len(circ.gates()) == 32
        assert len(circ.channel_locations()) == 89

    def test_each_round_measures_every_parity(self):
        circ = build_repetition_memory(3, circuit_level_rates(0.01))
        targets = [g.qubits[1] for g in circ.gates()]
        assert sorted(targets) == [3, 3, 4, 4, 5, 5, 6, 6]
        # parity of (s, s+1) flows into the round-r ancilla for check s
        for g in circ.gates():
            ctrl, tgt = g.qubits
            assert ctrl < 3 <= tgt

    def test_ancilla_numbering(self):
        assert ancilla_qubit(3, 0, 0) == 3
        assert ancilla_qubit(3, 0, 1) == 4
        assert ancilla_qubit(3, 1, 0) == 5
        assert ancilla_qubit(5, 2, 3) == 16


class TestPropagation:
    def test_early_data_flip_reaches_both_rounds(self):
        # X on data 0 before any gate marks check-0 ancillas of both rounds
        circ = build_repetition_memory(3, circuit_level_rates(0.01))
        out = conjugate_through(PauliString.single(7, 0, "X"), circ.gates())
        assert out.support() == (0, ancilla_qubit(3, 0, 0), ancilla_qubit(3, 1, 0))

    def test_flip_after_first_round_reaches_one_ancilla(self):
        circ = build_repetition_memory(3, circuit_level_rates(0.01))
        later = circ.gates()[4:]
        out = conjugate_through(PauliString.single(7, 0, "X"), later)
        assert out.support() == (0, ancilla_qubit(3, 1, 0))

    def test_ancilla_flip_stays_put(self):
        circ = build_repetition_memory(3, circuit_level_rates(0.01))
        out = conjugate_through(PauliString.single(7, 3, "X"), circ.gates())
        assert out.support() == (3,)


class TestCompile:
    def test_zero_noise_keeps_full_coherent_information(self):
        res = memory_ci(3, NoiseRates(0, 0, 0, 0, 0))
        assert res.ci_normalized == pytest.approx(1.0, abs=1e-14)

    def test_compiled_path_matches_dense_reference(self):
        rates = NoiseRates(0.02, 0.05, 0.05, 0.03, 0.05)
        circ = build_repetition_memory(3, rates)
        compiled = compile(circ, complete_frame(repetition_code(3)))
        dense = dense_circuit_ci(
            repetition_code(3), compiled.register_map, circ.elements
        )
        got = coherent_information(run_compiled(compiled)).ci_normalized
        assert got == pytest.approx(dense, abs=1e-10)

    def test_location_order_of_disjoint_channels_is_irrelevant(self):
        rates = phenomenological_rates(0.09)
        circ = build_repetition_memory(3, rates)
        elements = list(circ.elements)
        # find two adjacent single-qubit channels on different qubits
        swapped = None
        for i in range(len(elements) - 1):
            a, b = elements[i], elements[i + 1]
            if (
                isinstance(a, PauliChannel)
                and isinstance(b, PauliChannel)
                and len(a.support()) == 1
                and len(b.support()) == 1
                and a.support() != b.support()
            ):
                swapped = elements[:i] + [b, a] + elements[i + 2 :]
                break
        assert swapped is not None
        other = NoisyCircuit(
            circ.n_data, circ.n_ancilla, circ.rounds, rates, tuple(swapped)
        )
        frame = complete_frame(repetition_code(3))
        ci_a = coherent_information(run_compiled(compile(circ, frame))).ci_bits
        ci_b = coherent_information(run_compiled(compile(other, frame))).ci_bits
        assert ci_a == pytest.approx(ci_b, abs=1e-12)

    def test_rejects_gate_out_of_the_data_block(self):
        rates = phenomenological_rates(0.1)
        frame = complete_frame(repetition_code(3))
        bad = NoisyCircuit(3, 4, 2, rates, (CliffordGate("CNOT", (3, 0)),))
        with pytest.raises(ValueError, match="from data into the ancillas"):
            compile(bad, frame)

    def test_rejects_parity_outside_stabilizer_group(self):
        rates = phenomenological_rates(0.1)
        frame = complete_frame(repetition_code(3))
        bad = NoisyCircuit(3, 4, 2, rates, (CliffordGate("CNOT", (0, 3)),))
        with pytest.raises(ValueError, match="outside the Z-stabilizer group"):
            compile(bad, frame)

    def test_memory_guard_trips_on_large_distance(self):
        with pytest.raises(MemoryCeilingError):
            memory_ci(7, phenomenological_rates(0.1))


@pytest.mark.parametrize("preset,value", [("phenomenological", 0.11), ("circuit", 0.037)])
def test_memory_ci_monotone_under_extra_rounds_noise(preset, value):
    # more physical noise can only hurt: d=3 value drops as the rate rises
    make = phenomenological_rates if preset == "phenomenological" else circuit_level_rates
    lo = memory_ci(3, make(value * 0.5)).ci_normalized
    hi = memory_ci(3, make(value)).ci_normalized
    assert lo > hi
