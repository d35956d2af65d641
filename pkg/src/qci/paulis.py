"""Phase-free n-qubit Pauli operators, Clifford conjugation, and Pauli channels.

A Pauli operator is stored as a pair of bitsets (x, z) held in plain Python
integers, with qubit 0 at the lowest-order bit.  The overall phase is
deliberately dropped: every consumer in this package applies Paulis in
K rho K^dagger pairs, where a global sign cancels.  Commutation, which is
the only phase-sensitive quantity that survives, is tracked exactly through
the symplectic form popcount(x1 & z2) + popcount(z1 & x2) mod 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "PauliString",
    "CliffordGate",
    "PauliChannel",
    "cnot",
    "hadamard",
    "phase_gate",
    "pauli_x_gate",
    "conjugate_through",
    "bit_flip_channel",
    "depolarizing_channel",
    "two_qubit_bit_flip_channel",
]

_CHAR_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_CHAR = {v: c for c, v in _CHAR_TO_XZ.items()}

# Probabilities of a channel must sum to one within this slack.
_PROB_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class PauliString:
    """Immutable phase-free Pauli operator on ``n`` qubits.

    Attributes:
        n: number of qubits.
        x: bitset of X components (bit q set means X or Y on qubit q).
        z: bitset of Z components (bit q set means Z or Y on qubit q).
    """

    n: int
    x: int
    z: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        mask = (1 << self.n) - 1
        if not 0 <= self.x <= mask:
            raise ValueError(f"x bitset {self.x:#x} out of range for n={self.n}")
        if not 0 <= self.z <= mask:
            raise ValueError(f"z bitset {self.z:#x} out of range for n={self.n}")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliString":
        """One non-identity letter on one qubit, identity elsewhere."""
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        try:
            xbit, zbit = _CHAR_TO_XZ[kind]
        except KeyError:
            raise ValueError(f"unknown Pauli letter {kind!r}") from None
        if xbit == 0 and zbit == 0:
            raise ValueError("single() expects X, Y or Z, not I")
        return cls(n, xbit << qubit, zbit << qubit)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        """Parse a string over IXYZ; leftmost character is qubit 0."""
        if not text:
            raise ValueError("empty Pauli text")
        x = z = 0
        for q, ch in enumerate(text):
            try:
                xbit, zbit = _CHAR_TO_XZ[ch]
            except KeyError:
                raise ValueError(f"bad Pauli character {ch!r} at position {q}") from None
            x |= xbit << q
            z |= zbit << q
        return cls(len(text), x, z)

    def to_text(self) -> str:
        return "".join(
            _XZ_TO_CHAR[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n)
        )

    def multiply(self, other: "PauliString") -> "PauliString":
        """Product up to phase: component-wise XOR of the bitsets."""
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z)

    def commutes(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def support(self) -> tuple[int, ...]:
        sup = self.x | self.z
        return tuple(q for q in range(self.n) if (sup >> q) & 1)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def is_x_type(self) -> bool:
        """True when the operator contains no Z or Y component."""
        return self.z == 0

    def is_z_type(self) -> bool:
        return self.x == 0

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True, slots=True)
class CliffordGate:
    """A gate from the generating set CNOT, H, S, X.

    Conjugation acts on phase-free Paulis by the usual symplectic update
    rules; the X gate is kept in the set for circuit readability even though
    it acts trivially once phases are dropped.
    """

    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("CNOT", "H", "S", "X"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        want = 2 if self.kind == "CNOT" else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} takes {want} qubit(s), got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        if self.kind == "CNOT" and self.qubits[0] == self.qubits[1]:
            raise ValueError("CNOT control and target must differ")

    def conjugate(self, p: PauliString) -> PauliString:
        """Return g p g^dagger up to phase."""
        if max(self.qubits) >= p.n:
            raise ValueError(f"gate {self} acts outside {p.n} qubits")
        x, z = p.x, p.z
        if self.kind == "CNOT":
            c, t = self.qubits
            # X propagates control -> target, Z propagates target -> control.
            if (x >> c) & 1:
                x ^= 1 << t
            if (z >> t) & 1:
                z ^= 1 << c
        elif self.kind == "H":
            (q,) = self.qubits
            xb, zb = (x >> q) & 1, (z >> q) & 1
            x ^= (xb ^ zb) << q
            z ^= (xb ^ zb) << q
        elif self.kind == "S":
            (q,) = self.qubits
            if (x >> q) & 1:
                z ^= 1 << q
        # X gate: identity on (x, z).
        return PauliString(p.n, x, z)

    def __str__(self) -> str:
        return f"{self.kind}{self.qubits}"


def cnot(control: int, target: int) -> CliffordGate:
    return CliffordGate("CNOT", (control, target))


def hadamard(qubit: int) -> CliffordGate:
    return CliffordGate("H", (qubit,))


def phase_gate(qubit: int) -> CliffordGate:
    return CliffordGate("S", (qubit,))


def pauli_x_gate(qubit: int) -> CliffordGate:
    return CliffordGate("X", (qubit,))


def conjugate_through(p: PauliString, gates: Iterable[CliffordGate]) -> PauliString:
    """Conjugate ``p`` by a gate sequence applied in order.

    The result is (g_m ... g_1) p (g_1^dagger ... g_m^dagger), i.e. the first
    gate of the iterable is the innermost conjugation.
    """
    for gate in gates:
        p = gate.conjugate(p)
    return p


@dataclass(frozen=True, slots=True)
class PauliChannel:
    """Probabilistic mixture of Pauli operators acting on a fixed register.

    terms is a tuple of (probability, PauliString) pairs.  Probabilities must
    be non-negative and sum to one within 1e-12.  Zero-probability terms are
    legal and are skipped by consumers.
    """

    n: int
    terms: tuple[tuple[float, PauliString], ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("channel needs at least one term")
        total = 0.0
        for prob, op in self.terms:
            if op.n != self.n:
                raise ValueError(f"term {op} has {op.n} qubits, channel has {self.n}")
            if prob < 0.0:
                raise ValueError(f"negative probability {prob}")
            total += prob
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    def active_terms(self) -> Iterator[tuple[float, PauliString]]:
        """Terms with nonzero probability."""
        for prob, op in self.terms:
            if prob > 0.0:
                yield prob, op

    def support(self) -> tuple[int, ...]:
        sup = 0
        for _, op in self.terms:
            sup |= op.x | op.z
        return tuple(q for q in range(self.n) if (sup >> q) & 1)


def bit_flip_channel(n: int, qubit: int, p: float) -> PauliChannel:
    """X with probability p on one qubit, identity otherwise."""
    _check_prob(p)
    return PauliChannel(
        n,
        (
            (1.0 - p, PauliString.identity(n)),
            (p, PauliString.single(n, qubit, "X")),
        ),
    )


def depolarizing_channel(n: int, qubit: int, p: float) -> PauliChannel:
    """X, Y, Z each with probability p/3 on one qubit."""
    _check_prob(p)
    return PauliChannel(
        n,
        (
            (1.0 - p, PauliString.identity(n)),
            (p / 3.0, PauliString.single(n, qubit, "X")),
            (p / 3.0, PauliString.single(n, qubit, "Y")),
            (p / 3.0, PauliString.single(n, qubit, "Z")),
        ),
    )


def two_qubit_bit_flip_channel(n: int, qubit_a: int, qubit_b: int, p2: float) -> PauliChannel:
    """X_a, X_b and X_a X_b each with probability p2/3."""
    _check_prob(p2)
    if qubit_a == qubit_b:
        raise ValueError("two-qubit channel needs distinct qubits")
    xa = PauliString.single(n, qubit_a, "X")
    xb = PauliString.single(n, qubit_b, "X")
    return PauliChannel(
        n,
        (
            (1.0 - p2, PauliString.identity(n)),
            (p2 / 3.0, xa),
            (p2 / 3.0, xb),
            (p2 / 3.0, xa.multiply(xb)),
        ),
    )


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
