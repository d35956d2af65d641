"""Destabilizer frames, working-basis layouts, and label-space transforms."""

from __future__ import annotations

import pytest

from qci import (
    CodeValidationError,
    PauliChannel,
    PauliString,
    RegisterMap,
    StabilizerCode,
    StabilizerFrame,
    bit_flip_channel,
    color_code_488,
    complete_frame,
    css_bitflip_layout,
    full_layout,
    repetition_code,
    rotated_surface_code,
    transform_channel,
    transform_pauli,
)
from conftest import load_code


def assert_frame_pairing(frame: StabilizerFrame) -> None:
    """Destabilizer i must anticommute with stabilizer i and nothing else."""
    code = frame.code
    for i, d in enumerate(frame.destabilizers):
        for j, s in enumerate(code.stabilizers):
            assert d.commutes(s) == (i != j), (i, j)
        for other in frame.destabilizers:
            assert d.commutes(other)
        for l in (*code.logical_x, *code.logical_z):
            assert d.commutes(l)


CODES = [
    repetition_code(3),
    repetition_code(7),
    rotated_surface_code(3),
    rotated_surface_code(5),
    rotated_surface_code(7),
    color_code_488(3),
    color_code_488(5),
    color_code_488(9),
]


@pytest.mark.parametrize("code", CODES, ids=lambda c: c.name)
def test_complete_frame_satisfies_pairing(code):
    assert_frame_pairing(complete_frame(code))


def test_complete_frame_on_file_codes():
    for name in ("steane.txt", "code_422.txt"):
        assert_frame_pairing(complete_frame(load_code(name)))


def test_gauge_shifted_frame_still_verifies(rep3, rep3_frame):
    # multiplying destabilizer i by stabilizer i preserves every pairing
    shifted = tuple(
        d.multiply(s) for d, s in zip(rep3_frame.destabilizers, rep3.stabilizers)
    )
    frame = StabilizerFrame(rep3, shifted)
    frame.verify()
    assert_frame_pairing(frame)


def test_frame_verify_rejects_broken_pairing(rep3, rep3_frame):
    broken = (rep3_frame.destabilizers[1], rep3_frame.destabilizers[0])
    with pytest.raises(CodeValidationError):
        StabilizerFrame(rep3, broken).verify()


class TestCodeValidation:
    def test_anticommuting_stabilizers_rejected(self):
        with pytest.raises(CodeValidationError):
            StabilizerCode(
                name="bad",
                n=3,
                k=1,
                stabilizers=(PauliString.from_text("XII"), PauliString.from_text("ZII")),
                logical_x=(PauliString.from_text("IIX"),),
                logical_z=(PauliString.from_text("IIZ"),),
                distance=1,
            )

    def test_logical_pair_must_anticommute(self):
        with pytest.raises(CodeValidationError):
            StabilizerCode(
                name="bad",
                n=2,
                k=1,
                stabilizers=(PauliString.from_text("ZZ"),),
                logical_x=(PauliString.from_text("XX"),),
                logical_z=(PauliString.from_text("ZZ"),),
                distance=1,
            )

    def test_stabilizer_count_must_match_k(self):
        with pytest.raises(CodeValidationError):
            StabilizerCode(
                name="bad",
                n=3,
                k=1,
                stabilizers=(PauliString.from_text("ZZI"),),
                logical_x=(PauliString.from_text("XXX"),),
                logical_z=(PauliString.from_text("ZII"),),
                distance=1,
            )

    def test_k_must_be_positive(self):
        with pytest.raises(CodeValidationError):
            StabilizerCode(
                name="bad",
                n=1,
                k=0,
                stabilizers=(PauliString.from_text("Z"),),
                logical_x=(),
                logical_z=(),
                distance=1,
            )


class TestLayouts:
    def test_full_layout_counts(self, rep3_frame):
        layout = full_layout(rep3_frame)
        assert layout.n_syndrome_bits == 2
        assert layout.k == 1
        assert layout.n_ancilla_bits == 0
        assert not layout.x_only
        assert layout.syndrome_slots == (0, 1)

    def test_css_layout_keeps_only_z_checks(self, surface3):
        frame = complete_frame(surface3)
        full = full_layout(frame)
        css = css_bitflip_layout(frame)
        assert full.n_syndrome_bits == 8
        assert css.n_syndrome_bits == 4
        assert css.x_only
        for slot in css.syndrome_slots:
            assert surface3.stabilizers[slot].is_z_type()

    def test_ancilla_bits_extend_the_label(self, rep3_frame):
        layout = css_bitflip_layout(rep3_frame, n_ancilla_bits=4)
        assert layout.n_ancilla_bits == 4


class TestTransformPauli:
    def test_stabilizer_maps_to_pure_phase(self, rep3, rep3_frame):
        for i, s in enumerate(rep3.stabilizers):
            tp = transform_pauli(rep3_frame, s)
            assert tp.flips == 0
            assert tp.syndrome_phase == 1 << i
            assert tp.logical_phase == 0

    def test_destabilizer_flips_its_own_bit(self, rep3, rep3_frame):
        for i, d in enumerate(rep3_frame.destabilizers):
            tp = transform_pauli(rep3_frame, d)
            assert tp.syndrome_flips == 1 << i
            assert tp.logical_flips == 0
            assert tp.phase_mask == 0

    def test_logical_operators_act_on_logical_slots(self, rep3, rep3_frame):
        lx = transform_pauli(rep3_frame, rep3.logical_x[0])
        lz = transform_pauli(rep3_frame, rep3.logical_z[0])
        assert lx.syndrome_flips == 0 and lx.syndrome_phase == 0
        assert lx.logical_flips == 1 and lx.logical_phase == 0
        assert lz.logical_flips == 0 and lz.logical_phase == 1

    def test_x_only_layout_rejects_z_content(self, rep3_frame):
        layout = css_bitflip_layout(rep3_frame)
        with pytest.raises(ValueError):
            transform_pauli(rep3_frame, PauliString.from_text("ZII"), layout)

    def test_wrong_length_rejected(self, rep3_frame):
        with pytest.raises(ValueError):
            transform_pauli(rep3_frame, PauliString.from_text("XXXX"))


class TestTransformChannel:
    def test_ancilla_flip_lands_above_syndrome_bits(self, rep3_frame):
        layout = css_bitflip_layout(rep3_frame, n_ancilla_bits=1)
        regs = RegisterMap(n_register=4, data=(0, 1, 2), ancilla=(3,))
        wc = transform_channel(rep3_frame, bit_flip_channel(4, 3, 0.3), regs, layout)
        actions = {t.classical_flip: t.probability for t in wc.terms}
        assert actions[0] == pytest.approx(0.7)
        assert actions[1 << layout.n_syndrome_bits] == pytest.approx(0.3)

    def test_terms_with_identical_action_merge(self, rep3_frame):
        layout = css_bitflip_layout(rep3_frame)
        regs = RegisterMap(n_register=3, data=(0, 1, 2), ancilla=())
        x0 = PauliString.from_text("XII")
        ch = PauliChannel(3, ((0.5, PauliString.identity(3)), (0.2, x0), (0.3, x0)))
        wc = transform_channel(rep3_frame, ch, regs, layout)
        assert len(wc.terms) == 2
        probs = sorted(t.probability for t in wc.terms)
        assert probs == [pytest.approx(0.5), pytest.approx(0.5)]

    def test_register_size_must_match(self, rep3_frame):
        layout = css_bitflip_layout(rep3_frame)
        regs = RegisterMap(n_register=3, data=(0, 1, 2), ancilla=())
        with pytest.raises(ValueError):
            transform_channel(rep3_frame, bit_flip_channel(4, 0, 0.1), regs, layout)
