"""Exact density-matrix engine over the working stabilizer basis.

Pauli noise never creates coherences between different classical labels
(syndrome bits and ancilla bits): every Kraus branch flips the same label
bits on ket and bra.  The joint reference-plus-code state is therefore a
direct sum over classical labels of small coherent blocks indexed by the
logical and reference bits (l, r).

Two further exact structure theorems shrink the work:

* The classical part of a branch's phase mask cancels between ket and bra,
  so only the logical-slot phase survives in density-matrix updates.
* Starting from the encoded Bell state, every reachable coherent entry has
  l ^ r equal on ket and bra.  Each 4^k x 4^k block is a direct sum of 2^k
  sectors of shape 2^k x 2^k, and a logical flip g sends sector a to a ^ g.

Storage is float64 throughout: entries start real and stay real because all
updates multiply by +-1 and permute.  Blocks are held as an array of shape
(num_labels, 2^k, 2^k, 2^k) = (label, sector, l, l'); `assemble_block`
reconstitutes the conventional 4^k x 4^k matrix of any label on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frame import StateLayout, WorkingChannel

__all__ = [
    "EngineOptions",
    "MemoryCeilingError",
    "BlockedState",
    "CiResult",
    "initial_bell_state",
    "apply_channel",
    "trace_out_reference",
    "entropy_bits",
    "coherent_information",
    "dump_blocks",
]

# Eigenvalues may round slightly negative; anything below this threshold
# signals genuine corruption upstream rather than floating-point dust.
_EIG_FLOOR = -1e-9


@dataclass(frozen=True, slots=True)
class EngineOptions:
    """Knobs for the block engine.

    prune drops blocks whose largest entry is at or below the threshold after
    each channel application; it is an explicitly inexact accelerator and
    defaults to off.  max_blocks refuses label spaces whose worst case
    exceeds the limit.  dense_promotion is the fill fraction at which the
    sparse label map switches to a dense array over the full label space
    (0 promotes immediately, anything above 1 never promotes).
    """

    prune: float = 0.0
    max_blocks: int = 2**26
    dense_promotion: float = 0.25


_DEFAULT_OPTIONS = EngineOptions()


class MemoryCeilingError(RuntimeError):
    """The requested label space exceeds the configured block limit."""


@dataclass(frozen=True, slots=True)
class CiResult:
    ci_bits: float
    ci_normalized: float
    s_rq_bits: float
    s_q_bits: float


class BlockedState:
    """Block-diagonal working-basis density matrix.

    labels is a sorted int64 array of occupied classical labels, or None when
    the state is dense over the full label space (label == array index).
    sectors has shape (num_labels, A, L, L) with L = 2^k and A = 2^k while
    the reference is attached, A = 1 after it has been traced out.
    """

    __slots__ = ("layout", "labels", "sectors", "has_reference")

    def __init__(
        self,
        layout: StateLayout,
        labels: np.ndarray | None,
        sectors: np.ndarray,
        has_reference: bool,
    ) -> None:
        self.layout = layout
        self.labels = labels
        self.sectors = sectors
        self.has_reference = has_reference

    @property
    def n_blocks(self) -> int:
        return self.sectors.shape[0]

    @property
    def is_dense(self) -> bool:
        return self.labels is None

    def occupied_labels(self) -> np.ndarray:
        if self.labels is not None:
            return self.labels
        return np.arange(self.sectors.shape[0], dtype=np.int64)

    def total_trace(self) -> float:
        # Diagonal entries of every sector block are block-diagonal entries.
        return float(np.einsum("nall->", self.sectors))

    def _row_of(self, label: int) -> int:
        if self.labels is None:
            if not 0 <= label < self.sectors.shape[0]:
                raise KeyError(f"label {label} out of range")
            return label
        pos = int(np.searchsorted(self.labels, label))
        if pos == len(self.labels) or self.labels[pos] != label:
            raise KeyError(f"label {label} not occupied")
        return pos

    def assemble_block(self, label: int) -> np.ndarray:
        """Full coherent block of one classical label.

        Shape (4^k, 4^k) indexed by (l, r) pairs as l*2^k + r while the
        reference is attached, (2^k, 2^k) over l afterwards.
        """
        row = self._row_of(label)
        k = self.layout.k
        L = 1 << k
        if not self.has_reference:
            return self.sectors[row, 0].copy()
        out = np.zeros((L * L, L * L))
        for a in range(L):
            for l in range(L):
                for lp in range(L):
                    out[(l << k) | (l ^ a), (lp << k) | (lp ^ a)] = self.sectors[
                        row, a, l, lp
                    ]
        return out

    def assert_valid(self, tol: float = 1e-9) -> None:
        """Audit representation invariants: realness, symmetry, unit trace,
        spectrum above the floor, sorted unique labels."""
        if self.sectors.dtype != np.float64:
            raise AssertionError(f"blocks must be float64, got {self.sectors.dtype}")
        if not np.isfinite(self.sectors).all():
            raise AssertionError("non-finite block entries")
        sym_err = float(np.abs(self.sectors - self.sectors.transpose(0, 1, 3, 2)).max())
        if sym_err > tol:
            raise AssertionError(f"blocks asymmetric by {sym_err:.3e}")
        tr = self.total_trace()
        if abs(tr - 1.0) > tol:
            raise AssertionError(f"trace {tr!r} deviates from 1")
        eigs = _block_eigenvalues(self.sectors)
        low = float(eigs.min(initial=0.0))
        if low < -tol:
            raise AssertionError(f"negative eigenvalue {low:.3e}")
        if self.labels is not None:
            if self.labels.ndim != 1 or len(self.labels) != self.sectors.shape[0]:
                raise AssertionError("label array shape mismatch")
            if len(self.labels) > 1 and not (np.diff(self.labels) > 0).all():
                raise AssertionError("labels not sorted unique")


def initial_bell_state(
    layout: StateLayout, options: EngineOptions | None = None
) -> BlockedState:
    """Encoded maximally entangled state: one block at the all-zero label.

    The coherent block is the k-qubit Bell projector, whose only occupied
    sector is a = 0 with constant entries 1/2^k.
    """
    options = options or _DEFAULT_OPTIONS
    _guard_layout(layout, options)
    L = 1 << layout.k
    sectors = np.zeros((1, L, L, L))
    sectors[0, 0] = 1.0 / L
    labels = np.zeros(1, dtype=np.int64)
    state = BlockedState(layout, labels, sectors, has_reference=True)
    return _maybe_promote(state, options)


def _guard_layout(layout: StateLayout, options: EngineOptions) -> None:
    worst = 1 << layout.classical_bits
    if worst > options.max_blocks:
        raise MemoryCeilingError(
            f"label space of 2^{layout.classical_bits} blocks exceeds the "
            f"configured limit of {options.max_blocks}; raise max_blocks to force"
        )


def _sign_matrix(phase_mask: int, L: int) -> np.ndarray | None:
    if phase_mask == 0:
        return None
    out = np.empty((L, L))
    for l in range(L):
        for lp in range(L):
            out[l, lp] = -1.0 if bin(phase_mask & (l ^ lp)).count("1") % 2 else 1.0
    return out


def _transformed_stack(
    sectors: np.ndarray, has_reference: bool, term_flip: int, term_phase: int, w: float
) -> np.ndarray:
    """One Kraus branch's coherent action: permute sectors and logical axes
    by XOR with the flip, apply the surviving sign pattern, scale by the
    branch probability."""
    L = sectors.shape[-1]
    g = term_flip
    if g:
        idx = np.arange(L) ^ g
        if has_reference:
            out = sectors[:, idx[:, None, None], idx[None, :, None], idx[None, None, :]]
        else:
            out = sectors[:, :, idx[:, None], idx[None, :]]
    else:
        out = sectors.copy()
    out *= w
    sign = _sign_matrix(term_phase, L)
    if sign is not None:
        out *= sign
    return out


def _flipped_label_view(arr: np.ndarray, m_bits: int, mask: int) -> np.ndarray:
    """View of a dense-label array with the label axis XORed by mask."""
    if mask == 0:
        return arr
    view = arr.reshape((2,) * m_bits + arr.shape[1:])
    axes = tuple(m_bits - 1 - b for b in range(m_bits) if (mask >> b) & 1)
    return np.flip(view, axis=axes)


def apply_channel(
    state: BlockedState,
    channel: WorkingChannel,
    options: EngineOptions | None = None,
) -> BlockedState:
    """Exact application of a working-basis Pauli channel.

    The classical phase of each term cancels between ket and bra and is
    ignored here; the coherent phase survives as a fixed +-1 pattern over
    (l, l') that is independent of the classical label, which is what makes
    the whole update a handful of vectorized gathers.
    """
    options = options or _DEFAULT_OPTIONS
    if channel.layout != state.layout:
        raise ValueError("channel layout does not match state layout")
    terms = [t for t in channel.terms if t.probability > 0.0]
    if not terms:
        raise ValueError("channel has no active terms")
    m = state.layout.classical_bits
    sectors = state.sectors

    if state.is_dense:
        out = np.zeros_like(sectors)
        for t in terms:
            stack = _transformed_stack(
                sectors, state.has_reference, t.coherent_flip, t.coherent_phase,
                t.probability,
            )
            target = _flipped_label_view(out, m, t.classical_flip)
            target += stack.reshape(target.shape)
        return BlockedState(state.layout, None, out, state.has_reference)

    labels = state.labels
    assert labels is not None
    shifted = [labels ^ t.classical_flip for t in terms]
    if len(terms) == 1:
        order = np.argsort(shifted[0])
        uniq = shifted[0][order]
        out = _transformed_stack(
            sectors, state.has_reference, terms[0].coherent_flip,
            terms[0].coherent_phase, terms[0].probability,
        )[order]
    else:
        uniq = np.unique(np.concatenate(shifted))
        out = np.zeros((len(uniq),) + sectors.shape[1:])
        for t, lab in zip(terms, shifted):
            stack = _transformed_stack(
                sectors, state.has_reference, t.coherent_flip, t.coherent_phase,
                t.probability,
            )
            # labels within one term stay distinct, so fancy += is a scatter
            out[np.searchsorted(uniq, lab)] += stack
    new_state = BlockedState(state.layout, uniq, out, state.has_reference)
    if options.prune > 0.0:
        new_state = _pruned(new_state, options.prune)
    return _maybe_promote(new_state, options)


def _pruned(state: BlockedState, threshold: float) -> BlockedState:
    """Drop blocks with no entry above the threshold.  Inexact: the kept
    trace falls short of one by the discarded weight."""
    if state.labels is None:
        return state
    keep = np.abs(state.sectors).max(axis=(1, 2, 3)) > threshold
    if keep.all():
        return state
    if not keep.any():
        raise RuntimeError("prune threshold removed every block")
    return BlockedState(
        state.layout, state.labels[keep], state.sectors[keep], state.has_reference
    )


def _maybe_promote(state: BlockedState, options: EngineOptions) -> BlockedState:
    if state.labels is None:
        return state
    m = state.layout.classical_bits
    full = 1 << m
    if full > options.max_blocks:
        return state
    if state.n_blocks < options.dense_promotion * full:
        return state
    dense = np.zeros((full,) + state.sectors.shape[1:])
    dense[state.labels] = state.sectors
    return BlockedState(state.layout, None, dense, state.has_reference)


def trace_out_reference(state: BlockedState) -> BlockedState:
    """Partial trace over the reference system.

    The stored entry (a, l, l') pairs ket reference l ^ a with bra reference
    l' ^ a.  Equal references within one sector force l = l', and pairs with
    equal references across two different sectors lie outside the graded
    support, hence vanish.  The reduced matrix is therefore diagonal, with
    rho_Q[l, l] given by the sector sum of the stored diagonals.
    """
    if not state.has_reference:
        raise ValueError("state has no reference system attached")
    diag = np.einsum("najj->nj", state.sectors)
    L = state.sectors.shape[-1]
    reduced = np.zeros((state.n_blocks, 1, L, L))
    idx = np.arange(L)
    reduced[:, 0, idx, idx] = diag
    labels = None if state.labels is None else state.labels.copy()
    return BlockedState(state.layout, labels, reduced, has_reference=False)


def _block_eigenvalues(sectors: np.ndarray) -> np.ndarray:
    """Eigenvalues of every sector block, vectorized.

    2 x 2 sectors get the closed form; larger logical spaces fall back to
    batched symmetric diagonalization.
    """
    L = sectors.shape[-1]
    flat = sectors.reshape(-1, L, L)
    if L == 1:
        return flat[:, 0, 0]
    if L == 2:
        a = flat[:, 0, 0]
        d = flat[:, 1, 1]
        b = flat[:, 0, 1]
        mid = 0.5 * (a + d)
        rad = np.hypot(0.5 * (a - d), b)
        return np.stack([mid - rad, mid + rad], axis=-1).ravel()
    return np.linalg.eigvalsh(flat).ravel()


def entropy_bits(state: BlockedState) -> float:
    """Von Neumann entropy in bits of the full block-diagonal matrix."""
    eigs = _block_eigenvalues(state.sectors)
    low = float(eigs.min(initial=0.0))
    if low < _EIG_FLOOR:
        raise RuntimeError(
            f"eigenvalue {low:.3e} below {_EIG_FLOOR}; state is corrupted"
        )
    positive = eigs > 0.0
    lam = np.where(positive, eigs, 1.0)
    return float(-(np.where(positive, lam * np.log2(lam), 0.0)).sum())


def coherent_information(state: BlockedState) -> CiResult:
    """I = S(rho_Q) - S(rho_RQ), in bits and normalized by k."""
    if not state.has_reference:
        raise ValueError("coherent information needs the reference attached")
    s_rq = entropy_bits(state)
    s_q = entropy_bits(trace_out_reference(state))
    ci = s_q - s_rq
    k = state.layout.k
    normalized = ci / k
    if normalized > 1.0 + 1e-9:
        raise RuntimeError(
            f"coherent information {ci} exceeds {k} bits; state is corrupted"
        )
    return CiResult(ci_bits=ci, ci_normalized=normalized, s_rq_bits=s_rq, s_q_bits=s_q)


def dump_blocks(state: BlockedState, limit_bits: int = 10) -> str:
    """Readable listing of every block, for small instances only."""
    if state.layout.classical_bits > limit_bits:
        raise ValueError(
            f"refusing to dump {state.layout.classical_bits} classical bits of blocks"
        )
    width = max(state.layout.classical_bits, 1)
    lines = []
    for label in state.occupied_labels():
        block = state.assemble_block(int(label))
        if not np.any(block):
            continue
        lines.append(f"label {int(label):0{width}b}:")
        for row in block:
            lines.append("  " + " ".join(f"{v: .6f}" for v in row))
    return "\n".join(lines)
