"""Stabilizer codes, destabilizer frames, and error back-propagation.

The frame of a code is the symplectic basis (stabilizers, destabilizers,
logical X, logical Z).  Expressed in that basis, conjugating by the encoding
unitary maps stabilizer i to Z on syndrome slot i, destabilizer i to X on
syndrome slot i, and the logical pair j to Z/X on logical slot j.  A physical
Pauli error therefore acts on working-basis labels |s, l> purely through
anticommutation bits:

    flip of syndrome bit i   <-  e anticommutes with stabilizer i
    flip of logical bit j    <-  e anticommutes with logical Z_j
    phase at syndrome bit i  <-  e anticommutes with destabilizer i
    phase at logical bit j   <-  e anticommutes with logical X_j

with the transformed operator acting as |b> -> (-1)^(phase_mask . b) |b ^ flips>.
No encoding circuit is ever synthesised; the anticommutation bits carry the
entire action.
"""

from __future__ import annotations

from dataclasses import dataclass

from .paulis import PauliChannel, PauliString

__all__ = [
    "CodeValidationError",
    "StabilizerCode",
    "StabilizerFrame",
    "complete_frame",
    "TransformedPauli",
    "StateLayout",
    "full_layout",
    "css_bitflip_layout",
    "RegisterMap",
    "WorkingTerm",
    "WorkingChannel",
    "transform_pauli",
    "transform_channel",
]


class CodeValidationError(ValueError):
    """A stabilizer code input violates its defining invariants."""


def _anti(a: PauliString, b: PauliString) -> int:
    """Symplectic inner product: 1 when a and b anticommute."""
    return 0 if a.commutes(b) else 1


def _gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of bitset rows, by elimination on the lowest set bit."""
    rank = 0
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
            rank += 1
    return rank


@dataclass(frozen=True, slots=True)
class StabilizerCode:
    """An [[n, k]] stabilizer code with a chosen logical basis.

    distance is metadata supplied by the constructor; it is not recomputed.
    Validation of the group-theoretic invariants happens at construction and
    reports the first failing pair when commutation requirements break.
    """

    name: str
    n: int
    k: int
    stabilizers: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]
    distance: int | None = None

    def __post_init__(self) -> None:
        n, k = self.n, self.k
        if k < 1:
            raise CodeValidationError(f"{self.name}: need k >= 1, got k={k}")
        if len(self.stabilizers) != n - k:
            raise CodeValidationError(
                f"{self.name}: expected {n - k} stabilizers for [[{n},{k}]], "
                f"got {len(self.stabilizers)}"
            )
        if len(self.logical_x) != k or len(self.logical_z) != k:
            raise CodeValidationError(
                f"{self.name}: expected {k} logical X and Z operators, got "
                f"{len(self.logical_x)} and {len(self.logical_z)}"
            )
        for label, ops in (
            ("stabilizer", self.stabilizers),
            ("logical X", self.logical_x),
            ("logical Z", self.logical_z),
        ):
            for i, op in enumerate(ops):
                if op.n != n:
                    raise CodeValidationError(
                        f"{self.name}: {label} {i} acts on {op.n} qubits, not {n}"
                    )
                if op.is_identity() and label != "stabilizer":
                    raise CodeValidationError(f"{self.name}: {label} {i} is identity")

        stabs = self.stabilizers
        for i in range(len(stabs)):
            for j in range(i + 1, len(stabs)):
                if not stabs[i].commutes(stabs[j]):
                    raise CodeValidationError(
                        f"{self.name}: stabilizers {i} and {j} anticommute "
                        f"({stabs[i]} vs {stabs[j]})"
                    )
        for label, ops in (("logical X", self.logical_x), ("logical Z", self.logical_z)):
            for j, op in enumerate(ops):
                for i, s in enumerate(stabs):
                    if not op.commutes(s):
                        raise CodeValidationError(
                            f"{self.name}: {label} {j} anticommutes with stabilizer {i}"
                        )
        for i, lx in enumerate(self.logical_x):
            for j, lz in enumerate(self.logical_z):
                want_anti = i == j
                if lx.commutes(lz) == want_anti:
                    relation = "anticommute with" if not want_anti else "commute with"
                    raise CodeValidationError(
                        f"{self.name}: logical X {i} must not {relation} logical Z {j}"
                    )
        for label, ops in (("logical X", self.logical_x), ("logical Z", self.logical_z)):
            for i in range(len(ops)):
                for j in range(i + 1, len(ops)):
                    if not ops[i].commutes(ops[j]):
                        raise CodeValidationError(
                            f"{self.name}: {label} {i} and {j} anticommute"
                        )

        rows = [s.x | (s.z << n) for s in stabs]
        if _gf2_rank(rows) != len(stabs):
            raise CodeValidationError(f"{self.name}: stabilizers are GF(2) dependent")

    def is_css(self) -> bool:
        return all(s.is_x_type() or s.is_z_type() for s in self.stabilizers)

    def z_stabilizer_indices(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.stabilizers) if s.is_z_type())

    def x_stabilizer_indices(self) -> tuple[int, ...]:
        return tuple(
            i for i, s in enumerate(self.stabilizers)
            if s.is_x_type() and not s.is_identity()
        )


@dataclass(frozen=True, slots=True)
class StabilizerFrame:
    """A code together with destabilizers completing the symplectic basis.

    destabilizers[i] anticommutes with stabilizers[i] and commutes with every
    other stabilizer, every other destabilizer, and all logical operators.
    """

    code: StabilizerCode
    destabilizers: tuple[PauliString, ...]

    def verify(self) -> None:
        """Check the full set of frame pairings; raises on any violation."""
        code = self.code
        if len(self.destabilizers) != len(code.stabilizers):
            raise CodeValidationError("destabilizer count mismatch")
        for i, d in enumerate(self.destabilizers):
            for j, s in enumerate(code.stabilizers):
                if _anti(d, s) != (1 if i == j else 0):
                    raise CodeValidationError(
                        f"destabilizer {i} pairs wrongly with stabilizer {j}"
                    )
            for j in range(i + 1, len(self.destabilizers)):
                if not d.commutes(self.destabilizers[j]):
                    raise CodeValidationError(f"destabilizers {i} and {j} anticommute")
            for ops in (code.logical_x, code.logical_z):
                for j, op in enumerate(ops):
                    if not d.commutes(op):
                        raise CodeValidationError(
                            f"destabilizer {i} anticommutes with a logical operator"
                        )


def complete_frame(code: StabilizerCode) -> StabilizerFrame:
    """Find destabilizers by solving the symplectic pairing equations.

    Destabilizer i must pair to 1 with stabilizer i and to 0 with every
    other stabilizer and with all logical operators.  Those are linear
    conditions over GF(2), so one Gaussian elimination with a separate
    right-hand side per destabilizer produces all of them at once; free
    variables are fixed to zero, which makes the result deterministic.
    The particular solutions need not commute among themselves, but
    multiplying destabilizer j by stabilizer i flips its pairing with
    destabilizer i and nothing else that is already settled, so one
    triangular cleanup pass finishes the frame.
    """
    n = code.n
    m = len(code.stabilizers)
    generators = list(code.stabilizers) + list(code.logical_x) + list(code.logical_z)

    # unknown d is (x | z << n); pairing with G is G.z . x + G.x . z
    rows = [(g.z | (g.x << n), (1 << i) if i < m else 0)
            for i, g in enumerate(generators)]
    pivots: list[int] = []
    top = 0
    for col in range(2 * n):
        hit = next(
            (r for r in range(top, len(rows)) if (rows[r][0] >> col) & 1), None
        )
        if hit is None:
            continue
        rows[top], rows[hit] = rows[hit], rows[top]
        lead = rows[top]
        for r in range(len(rows)):
            if r != top and (rows[r][0] >> col) & 1:
                rows[r] = (rows[r][0] ^ lead[0], rows[r][1] ^ lead[1])
        pivots.append(col)
        top += 1
    for coeff, rhs in rows[top:]:
        if rhs:
            raise CodeValidationError(
                f"{code.name}: pairing equations are inconsistent; "
                "the stabilizers are not independent"
            )

    raw: list[PauliString] = []
    for i in range(m):
        vec = 0
        for row, col in enumerate(pivots):
            if (rows[row][1] >> i) & 1:
                vec |= 1 << col
        mask = (1 << n) - 1
        raw.append(PauliString(n, vec & mask, vec >> n))

    for j in range(m):
        d = raw[j]
        for i in range(j):
            if _anti(raw[i], d):
                d = d.multiply(code.stabilizers[i])
        raw[j] = d

    frame = StabilizerFrame(code, tuple(raw))
    frame.verify()
    return frame


@dataclass(frozen=True, slots=True)
class TransformedPauli:
    """Action of a back-propagated Pauli on working-basis labels.

    Bit layout of flips and phase_mask: syndrome slots occupy bits
    [0, n_syndrome), logical slots occupy bits [n_syndrome, n_syndrome + k).
    The operator maps |b> to (-1)^(phase_mask . b) |b ^ flips>.
    """

    n_syndrome: int
    k: int
    flips: int
    phase_mask: int

    @property
    def syndrome_flips(self) -> int:
        return self.flips & ((1 << self.n_syndrome) - 1)

    @property
    def logical_flips(self) -> int:
        return self.flips >> self.n_syndrome

    @property
    def syndrome_phase(self) -> int:
        return self.phase_mask & ((1 << self.n_syndrome) - 1)

    @property
    def logical_phase(self) -> int:
        return self.phase_mask >> self.n_syndrome


@dataclass(frozen=True, slots=True)
class StateLayout:
    """Shape of the working-basis label space.

    Classical labels pack the syndrome bits first and ancilla bits above
    them.  syndrome_slots names, per syndrome bit, the index of the backing
    stabilizer in the frame; under the CSS bit-flip reduction only the Z-type
    stabilizers appear and x_only is set, restricting legal channel content
    to X-type operators on data.
    """

    n_syndrome_bits: int
    n_ancilla_bits: int
    k: int
    syndrome_slots: tuple[int, ...]
    x_only: bool = False

    def __post_init__(self) -> None:
        if len(self.syndrome_slots) != self.n_syndrome_bits:
            raise ValueError("syndrome slot list does not match bit count")
        if self.k < 1:
            raise ValueError("layout needs k >= 1")
        if self.n_ancilla_bits < 0:
            raise ValueError("negative ancilla count")

    @property
    def classical_bits(self) -> int:
        return self.n_syndrome_bits + self.n_ancilla_bits


def full_layout(frame: StabilizerFrame, n_ancilla_bits: int = 0) -> StateLayout:
    """Label space with one syndrome bit per stabilizer."""
    code = frame.code
    return StateLayout(
        n_syndrome_bits=len(code.stabilizers),
        n_ancilla_bits=n_ancilla_bits,
        k=code.k,
        syndrome_slots=tuple(range(len(code.stabilizers))),
        x_only=False,
    )


def css_bitflip_layout(frame: StabilizerFrame, n_ancilla_bits: int = 0) -> StateLayout:
    """Label space restricted to Z-type syndrome bits, valid for X-only noise.

    X-type physical operators commute with every X-type stabilizer, so those
    syndrome bits stay frozen at zero and carry no entropy; dropping them
    shrinks the label space without approximation.  Requires a CSS code.
    """
    code = frame.code
    for i, s in enumerate(code.stabilizers):
        if not (s.is_x_type() or s.is_z_type()):
            raise CodeValidationError(
                f"{code.name}: stabilizer {i} ({s}) is mixed, CSS reduction invalid"
            )
    slots = code.z_stabilizer_indices()
    return StateLayout(
        n_syndrome_bits=len(slots),
        n_ancilla_bits=n_ancilla_bits,
        k=code.k,
        syndrome_slots=slots,
        x_only=True,
    )


@dataclass(frozen=True, slots=True)
class RegisterMap:
    """Assignment of circuit register qubits to data or ancilla slots.

    data[i] is the register index carrying code qubit i; ancilla[j] is the
    register index recorded as ancilla bit j.  Together they must partition
    the register, so noise can never touch anything else; in particular the
    reference system is not part of the register at all.
    """

    n_register: int
    data: tuple[int, ...]
    ancilla: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        seen = sorted(self.data + self.ancilla)
        if seen != list(range(self.n_register)):
            raise ValueError(
                "data and ancilla assignments must partition the register "
                f"0..{self.n_register - 1}, got {seen}"
            )

    @classmethod
    def all_data(cls, n: int) -> "RegisterMap":
        return cls(n, tuple(range(n)))


def _gather_bits(value: int, positions: tuple[int, ...]) -> int:
    out = 0
    for i, pos in enumerate(positions):
        out |= ((value >> pos) & 1) << i
    return out


def transform_pauli(
    frame: StabilizerFrame, e: PauliString, layout: StateLayout | None = None
) -> TransformedPauli:
    """Back-propagate a physical data-qubit Pauli into label-space action.

    The anticommutation pattern of e against the frame determines everything;
    see the module docstring for the slot rules.
    """
    code = frame.code
    if e.n != code.n:
        raise ValueError(f"operator acts on {e.n} qubits, code has {code.n}")
    if layout is None:
        layout = full_layout(frame)
    if layout.x_only and not e.is_x_type():
        raise ValueError(
            f"operator {e} has Y/Z content, not representable in an X-only layout"
        )
    flips = 0
    phase = 0
    for t, slot in enumerate(layout.syndrome_slots):
        flips |= _anti(e, code.stabilizers[slot]) << t
        phase |= _anti(e, frame.destabilizers[slot]) << t
    ns = layout.n_syndrome_bits
    for j in range(code.k):
        flips |= _anti(e, code.logical_z[j]) << (ns + j)
        phase |= _anti(e, code.logical_x[j]) << (ns + j)
    return TransformedPauli(n_syndrome=ns, k=code.k, flips=flips, phase_mask=phase)


@dataclass(frozen=True, slots=True)
class WorkingTerm:
    """One Kraus branch of a channel, expressed on the label space.

    classical_flip / classical_phase cover syndrome bits plus ancilla bits
    (ancillas above the syndrome bits); coherent_flip / coherent_phase cover
    the k logical slots.  In density-matrix updates the classical phase
    cancels between ket and bra, which share the classical label, but it is
    kept here so the term describes the full operator action.
    """

    probability: float
    classical_flip: int
    classical_phase: int
    coherent_flip: int
    coherent_phase: int


@dataclass(frozen=True, slots=True)
class WorkingChannel:
    layout: StateLayout
    terms: tuple[WorkingTerm, ...]


def transform_channel(
    frame: StabilizerFrame,
    channel: PauliChannel,
    register_map: RegisterMap,
    layout: StateLayout,
) -> WorkingChannel:
    """Express a register-level Pauli channel on the working label space.

    Each term's operator splits into its data support, which back-propagates
    through the frame, and its ancilla support, where an X component flips the
    recorded bit and a Z component only contributes a cancelling phase.  Terms
    with identical label action are merged.
    """
    if channel.n != register_map.n_register:
        raise ValueError(
            f"channel register size {channel.n} != map size {register_map.n_register}"
        )
    if len(register_map.ancilla) > layout.n_ancilla_bits:
        raise ValueError("register map has more ancillas than the layout")
    ns = layout.n_syndrome_bits
    merged: dict[tuple[int, int, int, int], float] = {}
    order: list[tuple[int, int, int, int]] = []
    for prob, op in channel.active_terms():
        data_x = _gather_bits(op.x, register_map.data)
        data_z = _gather_bits(op.z, register_map.data)
        anc_x = _gather_bits(op.x, register_map.ancilla)
        anc_z = _gather_bits(op.z, register_map.ancilla)
        data_op = PauliString(frame.code.n, data_x, data_z)
        tp = transform_pauli(frame, data_op, layout)
        key = (
            tp.syndrome_flips | (anc_x << ns),
            tp.syndrome_phase | (anc_z << ns),
            tp.logical_flips,
            tp.logical_phase,
        )
        if key not in merged:
            merged[key] = 0.0
            order.append(key)
        merged[key] += prob
    terms = tuple(
        WorkingTerm(
            probability=merged[key],
            classical_flip=key[0],
            classical_phase=key[1],
            coherent_flip=key[2],
            coherent_phase=key[3],
        )
        for key in order
    )
    return WorkingChannel(layout=layout, terms=terms)
