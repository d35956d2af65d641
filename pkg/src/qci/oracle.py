"""Brute-force dense reference implementation, kept deliberately naive.

Everything here works on explicit complex density matrices over reference,
data, and ancilla qubits, with phase-honest Pauli application (Y really is
iXZ) and textbook projector encoding.  It exists to certify the block
engine on small instances and is capped at 11 total qubits.

Qubit convention: reference bits occupy the lowest k index bits, register
qubit q sits at bit k + q, and qubit order inside an index matches the
bitset order of PauliString.
"""

from __future__ import annotations

import numpy as np

from .frame import RegisterMap, StabilizerCode
from .paulis import CliffordGate, PauliChannel

__all__ = [
    "OracleSizeError",
    "dense_encoded_bell",
    "dense_apply_gate",
    "dense_apply_channel",
    "dense_ci_bits",
    "dense_code_capacity_ci",
    "dense_circuit_ci",
]

_MAX_QUBITS = 11


class OracleSizeError(ValueError):
    """Instance too large for the dense reference path."""


def _check_size(m: int) -> None:
    if m > _MAX_QUBITS:
        raise OracleSizeError(f"{m} qubits exceed the dense-oracle cap of {_MAX_QUBITS}")


def _scatter_bits(value: int, positions: tuple[int, ...]) -> int:
    out = 0
    for i, pos in enumerate(positions):
        out |= ((value >> i) & 1) << pos
    return out


def _phase_vector(m: int, x: int, z: int) -> np.ndarray:
    """phi(b) such that P|b> = phi(b)|b ^ x> for the literal operator P."""
    b = np.arange(1 << m, dtype=np.int64)
    parity = (np.bitwise_count(b & z) & 1).astype(np.float64)
    phi = np.where(parity > 0, -1.0, 1.0).astype(np.complex128)
    phi *= 1j ** (x & z).bit_count()
    return phi


def _apply_pauli_vec(vec: np.ndarray, m: int, x: int, z: int) -> np.ndarray:
    phi = _phase_vector(m, x, z)
    out = np.empty_like(vec)
    out[np.arange(1 << m) ^ x] = phi * vec
    return out


def _apply_pauli_rho(rho: np.ndarray, m: int, x: int, z: int) -> np.ndarray:
    idx = np.arange(1 << m) ^ x
    phi = _phase_vector(m, x, z)[idx]
    return (phi[:, None] * np.conj(phi)[None, :]) * rho[np.ix_(idx, idx)]


def dense_encoded_bell(
    code: StabilizerCode, register_map: RegisterMap | None = None
) -> np.ndarray:
    """Density matrix of the encoded Bell state, ancillas in |0>.

    Codewords are built the slow way: apply the logical X pattern to |0...0>,
    then hit it with every projector (1 + S)/2 and normalize.  A zero-norm
    result means the stabilizer set is inconsistent as literal operators.
    """
    n, k = code.n, code.k
    if register_map is None:
        register_map = RegisterMap.all_data(n)
    m = k + register_map.n_register
    _check_size(m)
    data_pos = tuple(k + q for q in register_map.data)
    dim = 1 << m
    psi = np.zeros(dim, dtype=np.complex128)
    for i in range(1 << k):
        vec = np.zeros(dim, dtype=np.complex128)
        vec[0] = 1.0
        for j in range(k):
            if (i >> j) & 1:
                lx = code.logical_x[j]
                vec = _apply_pauli_vec(
                    vec, m, _scatter_bits(lx.x, data_pos), _scatter_bits(lx.z, data_pos)
                )
        for s in code.stabilizers:
            sv = _apply_pauli_vec(
                vec, m, _scatter_bits(s.x, data_pos), _scatter_bits(s.z, data_pos)
            )
            vec = 0.5 * (vec + sv)
        norm = float(np.linalg.norm(vec))
        if norm < 1e-9:
            raise ValueError(f"{code.name}: projector chain annihilated codeword {i}")
        vec /= norm
        # reference bits sit lowest, so shift the codeword index up by k
        psi[_ref_embed_indices(m, k, i)] += vec[_nonref_indices(m, k)] / np.sqrt(1 << k)
    rho = np.outer(psi, np.conj(psi))
    return rho


def _nonref_indices(m: int, k: int) -> np.ndarray:
    """Indices whose reference bits are all zero, in order of the rest."""
    rest = np.arange(1 << (m - k), dtype=np.int64)
    return rest << k


def _ref_embed_indices(m: int, k: int, ref_value: int) -> np.ndarray:
    rest = np.arange(1 << (m - k), dtype=np.int64)
    return (rest << k) | ref_value


def dense_apply_gate(rho: np.ndarray, gate: CliffordGate, k: int) -> np.ndarray:
    """Apply one Clifford gate, register-indexed, to a dense state."""
    m = rho.shape[0].bit_length() - 1
    if gate.kind == "CNOT":
        c, t = (k + q for q in gate.qubits)
        idx = np.arange(1 << m)
        sigma = idx ^ (((idx >> c) & 1) << t)
        return rho[np.ix_(sigma, sigma)]
    (q,) = (k + q for q in gate.qubits)
    if gate.kind == "H":
        u = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    elif gate.kind == "S":
        u = np.array([[1, 0], [0, 1j]], dtype=np.complex128)
    else:  # X
        u = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    return _apply_1q_unitary(rho, u, q, m)


def _apply_1q_unitary(rho: np.ndarray, u: np.ndarray, q: int, m: int) -> np.ndarray:
    dim = 1 << m
    hi, lo = 1 << (m - q - 1), 1 << q
    work = rho.reshape(hi, 2, lo, dim)
    work = np.einsum("ij,ajbc->aibc", u, work).reshape(dim, dim)
    work = work.conj().T.reshape(hi, 2, lo, dim)
    work = np.einsum("ij,ajbc->aibc", u, work).reshape(dim, dim)
    return work.conj().T


def dense_apply_channel(rho: np.ndarray, channel: PauliChannel, k: int) -> np.ndarray:
    """Kraus-sum a register-level Pauli channel into the dense state."""
    m = rho.shape[0].bit_length() - 1
    reg_pos = tuple(k + q for q in range(channel.n))
    out = np.zeros_like(rho)
    for prob, op in channel.active_terms():
        x = _scatter_bits(op.x, reg_pos)
        z = _scatter_bits(op.z, reg_pos)
        if x == 0 and z == 0:
            out += prob * rho
        else:
            out += prob * _apply_pauli_rho(rho, m, x, z)
    return out


def _entropy_bits(rho: np.ndarray) -> float:
    eigs = np.linalg.eigvalsh(rho)
    if float(eigs.min()) < -1e-9:
        raise RuntimeError(f"dense state has eigenvalue {eigs.min():.3e}")
    eigs = np.clip(eigs, 0.0, None)
    positive = eigs > 0.0
    lam = np.where(positive, eigs, 1.0)
    return float(-(np.where(positive, lam * np.log2(lam), 0.0)).sum())


def dense_ci_bits(rho: np.ndarray, k: int) -> float:
    """S(rho_Q) - S(rho_RQ) with the reference on the lowest k bits."""
    m = rho.shape[0].bit_length() - 1
    s_rq = _entropy_bits(rho)
    rest = 1 << (m - k)
    ref = 1 << k
    rho_q = np.einsum("arbr->ab", rho.reshape(rest, ref, rest, ref))
    s_q = _entropy_bits(rho_q)
    return s_q - s_rq


def dense_circuit_ci(
    code: StabilizerCode,
    register_map: RegisterMap,
    elements: "tuple[CliffordGate | PauliChannel, ...]",
) -> float:
    """CI of an interleaved gate/channel sequence run on the encoded Bell state.

    Elements are applied in the order given; no back-propagation happens
    here, which is exactly why this is a useful cross-check for the
    compiled path.
    """
    rho = dense_encoded_bell(code, register_map)
    for elem in elements:
        if isinstance(elem, CliffordGate):
            rho = dense_apply_gate(rho, elem, code.k)
        elif isinstance(elem, PauliChannel):
            rho = dense_apply_channel(rho, elem, code.k)
        else:
            raise TypeError(f"element {elem!r} is neither gate nor channel")
    return dense_ci_bits(rho, code.k)


def dense_code_capacity_ci(code: StabilizerCode, noise: str, p: float) -> float:
    """Reference CI in bits for i.i.d. single-qubit noise on every data qubit."""
    from .paulis import bit_flip_channel, depolarizing_channel

    rho = dense_encoded_bell(code)
    for q in range(code.n):
        if noise == "bitflip":
            ch = bit_flip_channel(code.n, q, p)
        elif noise == "depolarizing":
            ch = depolarizing_channel(code.n, q, p)
        else:
            raise ValueError(f"unknown noise kind {noise!r}")
        rho = dense_apply_channel(rho, ch, code.k)
    return dense_ci_bits(rho, code.k)
