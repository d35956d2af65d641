"""Blocked density-matrix engine: bell state, channel application, entropies."""

from __future__ import annotations

import math

import pytest

from qci import (
    EngineOptions,
    MemoryCeilingError,
    RegisterMap,
    apply_channel,
    bit_flip_channel,
    code_capacity_ci,
    coherent_information,
    complete_frame,
    css_bitflip_layout,
    entropy_bits,
    full_layout,
    initial_bell_state,
    repetition_code,
    single_qubit_code,
    trace_out_reference,
    transform_channel,
)


def rep3_working_channel(frame, p, qubit=0):
    layout = css_bitflip_layout(frame)
    regs = RegisterMap(n_register=3, data=(0, 1, 2), ancilla=())
    return layout, transform_channel(frame, bit_flip_channel(3, qubit, p), regs, layout)


class TestBellState:
    def test_noiseless_state_is_pure_with_full_ci(self, rep3_frame):
        state = initial_bell_state(full_layout(rep3_frame))
        assert state.total_trace() == pytest.approx(1.0, abs=1e-15)
        res = coherent_information(state)
        assert res.ci_bits == pytest.approx(1.0, abs=1e-15)
        assert res.s_rq_bits == pytest.approx(0.0, abs=1e-15)
        assert res.s_q_bits == pytest.approx(1.0, abs=1e-15)

    def test_reference_traced_state_is_maximally_mixed(self, rep3_frame):
        state = initial_bell_state(full_layout(rep3_frame))
        q_only = trace_out_reference(state)
        assert not q_only.has_reference
        assert entropy_bits(q_only) == pytest.approx(1.0, abs=1e-12)

    def test_two_logical_qubits_give_two_bits(self, toy_422):
        state = initial_bell_state(full_layout(complete_frame(toy_422)))
        res = coherent_information(state)
        assert res.ci_bits == pytest.approx(2.0, abs=1e-12)
        assert res.ci_normalized == pytest.approx(1.0, abs=1e-12)


class TestApplyChannel:
    def test_preserves_trace(self, rep3_frame):
        layout, wc = rep3_working_channel(rep3_frame, 0.3)
        state = apply_channel(initial_bell_state(layout), wc)
        assert state.total_trace() == pytest.approx(1.0, abs=1e-12)

    def test_is_functional(self, rep3_frame):
        layout, wc = rep3_working_channel(rep3_frame, 0.3)
        before = initial_bell_state(layout)
        trace0 = before.total_trace()
        ci0 = coherent_information(before).ci_bits
        apply_channel(before, wc)
        assert before.total_trace() == trace0
        assert coherent_information(before).ci_bits == ci0

    def test_flip_probability_one_relabels_without_entropy(self, rep3_frame):
        layout, wc = rep3_working_channel(rep3_frame, 1.0)
        state = apply_channel(initial_bell_state(layout), wc)
        res = coherent_information(state)
        assert res.ci_bits == pytest.approx(1.0, abs=1e-12)

    def test_composition_matches_folded_flip_rate(self):
        # flipping at p1 then p2 equals one flip at p1 + p2 - 2 p1 p2
        code = single_qubit_code()
        frame = complete_frame(code)
        layout = full_layout(frame)
        regs = RegisterMap(n_register=1, data=(0,), ancilla=())
        p1, p2 = 0.1, 0.23
        folded = p1 + p2 - 2 * p1 * p2
        two_step = initial_bell_state(layout)
        for p in (p1, p2):
            wc = transform_channel(frame, bit_flip_channel(1, 0, p), regs, layout)
            two_step = apply_channel(two_step, wc)
        one_step = apply_channel(
            initial_bell_state(layout),
            transform_channel(frame, bit_flip_channel(1, 0, folded), regs, layout),
        )
        a = coherent_information(two_step).ci_bits
        b = coherent_information(one_step).ci_bits
        assert a == pytest.approx(b, abs=1e-13)


class TestEngineOptions:
    def test_memory_ceiling_enforced(self, rep3_frame):
        frame = complete_frame(repetition_code(7))
        with pytest.raises(MemoryCeilingError):
            initial_bell_state(full_layout(frame), EngineOptions(max_blocks=32))

    def test_prune_drops_negligible_branches(self, rep3_frame):
        layout, wc = rep3_working_channel(rep3_frame, 1e-20)
        opts = EngineOptions(prune=1e-12)
        state = apply_channel(initial_bell_state(layout, opts), wc, opts)
        assert coherent_information(state).ci_bits == pytest.approx(1.0, abs=1e-12)

    def test_dense_and_sparse_paths_agree(self, surface3):
        always_dense = EngineOptions(dense_promotion=0.0)
        never_dense = EngineOptions(dense_promotion=1.1)
        a = code_capacity_ci(surface3, "bitflip", 0.11, options=always_dense)
        b = code_capacity_ci(surface3, "bitflip", 0.11, options=never_dense)
        assert a.ci_bits == pytest.approx(b.ci_bits, abs=1e-12)


class TestEntropy:
    def test_classical_mixture_entropy(self):
        # 50/50 flip on the bare qubit destroys all coherent information
        code = single_qubit_code()
        frame = complete_frame(code)
        layout = full_layout(frame)
        regs = RegisterMap(n_register=1, data=(0,), ancilla=())
        wc = transform_channel(frame, bit_flip_channel(1, 0, 0.5), regs, layout)
        state = apply_channel(initial_bell_state(layout), wc)
        res = coherent_information(state)
        assert res.s_rq_bits == pytest.approx(1.0, abs=1e-12)
        assert res.s_q_bits == pytest.approx(1.0, abs=1e-12)
        assert res.ci_bits == pytest.approx(0.0, abs=1e-12)

    def test_depolarizing_closed_form(self):
        p = 0.13
        res = code_capacity_ci(single_qubit_code(), "depolarizing", p)
        probs = (1 - p, p / 3, p / 3, p / 3)
        s_rq = -sum(q * math.log2(q) for q in probs)
        assert res.s_rq_bits == pytest.approx(s_rq, abs=1e-13)
        assert res.s_q_bits == pytest.approx(1.0, abs=1e-13)
