"""Exact per-edge expectation values on regular-tree edge neighborhoods.

For a d-regular graph whose girth is at least ``2p + 2``, every edge sees the
same tree neighborhood at depth ``p``, so the expectation of an edge-local
observable in the alternating-operator state can be computed once on that
tree.  The contraction walks the tree leaf-to-root: the message carried from
a subtree to its parent is a complex tensor indexed by the parent's ``2p``
trajectory bits (the parent qubit's basis value at each of the ``p`` cost
layers, on ket and bra side).  Because all sibling subtrees are identical,
combining them is an entrywise power of a single message, which keeps time
and space at ``O(4^p)`` regardless of the degree.

Index layout: a message is a flat array of ``4^p`` complex entries viewed as
``2p`` binary axes in row-major order; axis ``t - 1`` is the ket-side bit of
layer ``t`` and axis ``p + t - 1`` the bra-side bit.

Tensor conventions (one vertex, one layer): the initial amplitude is
``1/sqrt(2)`` per side; each edge applies the diagonal two-qubit phase
``exp(+i * gamma)`` when the endpoint bits agree and ``exp(-i * gamma)``
otherwise; the mixer is ``exp(-i * beta * X)`` (``cos`` on the diagonal,
``-i sin`` off it); the optional single-qubit phase ``exp(+i * gamma' * Z)``
acts alongside its layer's cost phases.  Bra-side tensors are conjugated.
Note the per-edge phase convention fixes the sign of ``gamma`` relative to a
cost-unitary convention ``exp(-i * gamma * C)``; the two differ only by a
reparameterization (``gamma -> -gamma / 2``) and a global phase, so optimized
objective values are unaffected.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InvalidParameterError, NumericError, ResourceLimitError
from .params import ParamSet

#: Working-set budget for one expectation evaluation (three live messages).
DEFAULT_MEMORY_BUDGET = 1 << 30

_BYTES_PER_ENTRY = 16  # complex128
_LIVE_MESSAGES = 3  # held message + power buffer + sweep scratch

_IDENTITY_WEIGHTS = (1.0, 1.0)
_Z_WEIGHTS = (1.0, -1.0)


@dataclass(frozen=True)
class BranchMessage:
    """Subtree-to-parent message: ``4^p`` complex entries over 2p trajectory bits."""

    p: int
    entries: np.ndarray

    def __post_init__(self):
        if self.p < 1:
            raise InvalidParameterError(f"depth p must be >= 1, got {self.p}")
        arr = np.asarray(self.entries, dtype=np.complex128)
        if arr.shape != (1 << (2 * self.p),):
            raise InvalidParameterError(
                f"message at depth {self.p} needs exactly {1 << (2 * self.p)} entries, "
                f"got shape {arr.shape}"
            )
        if not np.isfinite(arr.view(np.float64)).all():
            raise NumericError("message contains non-finite entries")
        object.__setattr__(self, "entries", arr)

    def view_axes(self) -> np.ndarray:
        """The entries reshaped to one binary axis per trajectory bit."""
        return self.entries.reshape((2,) * (2 * self.p))


@dataclass(frozen=True)
class EdgeExpectation:
    """Central-edge expectations: ``zz``, single-vertex ``z``, and the norm check."""

    zz: float
    z_single: float
    norm: float

    @property
    def c_edge(self) -> float:
        """Expected cut contribution of one edge, ``(1 - zz) / 2``."""
        return (1.0 - self.zz) / 2.0


def required_bytes(p: int) -> int:
    """Peak working-set bytes for one evaluation at depth ``p``."""
    return _LIVE_MESSAGES * _BYTES_PER_ENTRY * (1 << (2 * p))


def _check_budget(p: int, memory_budget: int | None) -> None:
    budget = DEFAULT_MEMORY_BUDGET if memory_budget is None else int(memory_budget)
    need = required_bytes(p)
    if need > budget:
        raise ResourceLimitError(
            f"depth {p} needs 4^{p} = {1 << (2 * p)} complex entries per message "
            f"({_BYTES_PER_ENTRY * (1 << (2 * p))} bytes each, {need} bytes working set); "
            f"configured budget is {budget} bytes"
        )


# ---------------------------------------------------------------------------
# Elementary tensors.
# ---------------------------------------------------------------------------


def _mixer(beta: float) -> np.ndarray:
    c, s = np.cos(beta), np.sin(beta)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def _cost_phase(gamma: float) -> np.ndarray:
    eq, ne = np.exp(1j * gamma), np.exp(-1j * gamma)
    return np.array([[eq, ne], [ne, eq]], dtype=np.complex128)


def _tie_off(beta: float, weights: tuple[float, float]) -> np.ndarray:
    # Last mixer on both sides around the end-of-line observable insertion;
    # the vertex's two initial 1/sqrt(2) amplitudes contribute the 0.5.
    m = _mixer(beta)
    return 0.5 * (m @ np.diag(weights) @ m.conj().T)


_ONES2 = np.ones((2, 2), dtype=np.complex128)


# ---------------------------------------------------------------------------
# Strided sweeps over the 2p binary axes.
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True, fastmath=True)
def _pair_kernel(src, dst, pre, mid, post, gate):  # pragma: no cover - jitted
    # One fused pass: dst over axis bits (A, B) = gate[2A+B, 2a+b] applied to
    # src over axis bits (a, b), all other axes untouched.  The flat layout is
    # (pre, 2, mid, 2, post) in row-major order.
    for i in range(pre):
        for m in range(mid):
            row = i * (4 * mid * post) + m * (2 * post)
            hi = 2 * mid * post
            for q in range(row, row + post):
                x0 = src[q]
                x1 = src[q + post]
                x2 = src[q + hi]
                x3 = src[q + hi + post]
                dst[q] = gate[0, 0] * x0 + gate[0, 1] * x1 + gate[0, 2] * x2 + gate[0, 3] * x3
                dst[q + post] = gate[1, 0] * x0 + gate[1, 1] * x1 + gate[1, 2] * x2 + gate[1, 3] * x3
                dst[q + hi] = gate[2, 0] * x0 + gate[2, 1] * x1 + gate[2, 2] * x2 + gate[2, 3] * x3
                dst[q + hi + post] = gate[3, 0] * x0 + gate[3, 1] * x1 + gate[3, 2] * x2 + gate[3, 3] * x3


@njit(cache=True, nogil=True, fastmath=True)
def _double_chain_kernel(src, dst, pre, mid, post, kket, kbra):  # pragma: no cover
    # Both sides of one layer in a single memory pass.  The ket pair sits at
    # strides (sa, sc), the bra pair at (sb, sd); kket[A, a, c] and
    # kbra[B, b, d] are the per-side contraction matrices (the second axis is
    # contracted, the third rides along unchanged).
    sd = post
    sb = 2 * post
    sc = mid * 4 * post
    sa = 2 * sc
    for i in range(pre):
        for m in range(mid):
            row = i * (4 * sc) + m * (4 * post)
            for q in range(row, row + post):
                for c in range(2):
                    for d in range(2):
                        base = q + c * sc + d * sd
                        x00 = src[base]
                        x01 = src[base + sb]
                        x10 = src[base + sa]
                        x11 = src[base + sa + sb]
                        y00 = kket[0, 0, c] * x00 + kket[0, 1, c] * x10
                        y10 = kket[1, 0, c] * x00 + kket[1, 1, c] * x10
                        y01 = kket[0, 0, c] * x01 + kket[0, 1, c] * x11
                        y11 = kket[1, 0, c] * x01 + kket[1, 1, c] * x11
                        dst[base] = kbra[0, 0, d] * y00 + kbra[0, 1, d] * y01
                        dst[base + sb] = kbra[1, 0, d] * y00 + kbra[1, 1, d] * y01
                        dst[base + sa] = kbra[0, 0, d] * y10 + kbra[0, 1, d] * y11
                        dst[base + sa + sb] = kbra[1, 0, d] * y10 + kbra[1, 1, d] * y11


def _sweep_pair(src, dst, n_axes, axis_i, axis_j, gate4):
    # dst[.., A, .., B, ..] = sum_{a,b} gate4[A, B, a, b] * src[.., a, .., b, ..]
    # on the axis pair (axis_i < axis_j).
    pre = 1 << axis_i
    mid = 1 << (axis_j - axis_i - 1)
    post = 1 << (n_axes - axis_j - 1)
    _pair_kernel(src, dst, pre, mid, post, np.ascontiguousarray(gate4.reshape(4, 4)))


def _chain_matrix(left, right):
    # k[A, a, c] = left[A, a] * right[a, c]: contract the a-axis while the
    # c-axis (the next trajectory slot) rides along.
    return np.ascontiguousarray(np.einsum("Aa,ac->Aac", left, right))


def _sweep_chain_both(src, dst, p, t, kket, kbra):
    # Ket chain on axes (t, t + 1) and bra chain on axes (p + t, p + t + 1),
    # 0-based loop index t for layer t + 1.
    pre = 1 << t
    mid = 1 << (p - 2)  # axes between the ket pair and the bra pair
    post = 1 << (p - t - 2)
    _double_chain_kernel(src, dst, pre, mid, post, kket, kbra)


def _apply_slot_phase(arr, n_axes, axis, phase):
    # Diagonal single-qubit phase on one trajectory bit: bit 0 gets `phase`,
    # bit 1 its conjugate (Z eigenvalues +1 / -1).
    pre = 1 << axis
    post = 1 << (n_axes - axis - 1)
    view = arr.reshape(pre, 2, post)
    view[:, 0, :] *= phase
    view[:, 1, :] *= np.conj(phase)


def _pow_into(src, k, dst):
    # Entrywise k-th power by repeated multiplication (k >= 1).
    if k == 1:
        np.copyto(dst, src)
        return
    np.multiply(src, src, out=dst)
    for _ in range(k - 2):
        np.multiply(dst, src, out=dst)


def _vertex_sweeps(work, scratch, params: ParamSet, weights, exchange: bool):
    """Absorb one vertex's tensors into ``work`` and hand off to its neighbor.

    ``work`` must already hold the combined child messages (entrywise power).
    With ``exchange`` the open indices are traded for the neighbor's
    trajectory bits through the cost-phase matrices; without it the neighbor
    side is summed out and every entry of the result equals the contraction
    scalar.  Returns whichever buffer holds the result.
    """
    p = params.p
    n_axes = 2 * p
    if params.gamma_prime is not None:
        for t in range(p):
            phase = np.exp(1j * params.gamma_prime[t])
            _apply_slot_phase(work, n_axes, t, phase)  # ket slot t+1
            _apply_slot_phase(work, n_axes, p + t, np.conj(phase))  # bra slot t+1
    src, dst = work, scratch
    for t in range(p - 1):
        left = _cost_phase(params.gamma[t]) if exchange else _ONES2
        mix = _mixer(params.beta[t])
        _sweep_chain_both(src, dst, p, t, _chain_matrix(left, mix),
                          _chain_matrix(np.conj(left), np.conj(mix)))
        src, dst = dst, src
    left = _cost_phase(params.gamma[p - 1]) if exchange else _ONES2
    tie = _tie_off(params.beta[p - 1], weights)
    gate4 = np.einsum("Aa,Bb,ab->ABab", left, np.conj(left), tie)
    _sweep_pair(src, dst, n_axes, p - 1, 2 * p - 1, gate4)
    return dst


def _branch_message_array(params: ParamSet) -> np.ndarray:
    """Leaf-to-root chain: the message entering a root vertex from one branch."""
    n = 1 << (2 * params.p)
    cur = np.ones(n, dtype=np.complex128)
    for _ in range(params.p):
        work = np.empty(n, dtype=np.complex128)
        _pow_into(cur, params.d - 1, work)
        cur = _vertex_sweeps(work, cur, params, _IDENTITY_WEIGHTS, exchange=True)
    return cur


def _pair_value(msg, params: ParamSet, weights_i, weights_j) -> complex:
    """Contract the two root vertices joined by the central edge.

    ``weights_i`` / ``weights_j`` are the end-of-line observable weights
    (identity or Z) inserted on each root qubit.
    """
    n = msg.shape[0]
    work = np.empty(n, dtype=np.complex128)
    scratch = np.empty(n, dtype=np.complex128)
    _pow_into(msg, params.d - 1, work)
    handed = _vertex_sweeps(work, scratch, params, weights_i, exchange=True)
    other = work if handed is scratch else scratch
    for _ in range(params.d - 1):
        np.multiply(handed, msg, out=handed)
    reduced = _vertex_sweeps(handed, other, params, weights_j, exchange=False)
    return complex(reduced[0])


def _real_part(value: complex, label: str) -> float:
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise NumericError(f"non-finite {label} contraction: {value!r}")
    if abs(value.imag) >= 1e-10:
        raise NumericError(f"{label} has imaginary part {value.imag:.3e} >= 1e-10")
    return float(value.real)


# ---------------------------------------------------------------------------
# Public operations.
# ---------------------------------------------------------------------------


def unit_message(p: int) -> BranchMessage:
    """All-ones message: the multiplicative identity seeding the leaf level."""
    if int(p) != p or p < 1:
        raise InvalidParameterError(f"depth p must be a positive integer, got {p!r}")
    return BranchMessage(int(p), np.ones(1 << (2 * int(p)), dtype=np.complex128))


def entrywise_power(msg: BranchMessage, k: int) -> BranchMessage:
    """Raise every entry to the ``k``-th power (complex multiplication)."""
    if int(k) != k or k < 1:
        raise InvalidParameterError(f"exponent k must be a positive integer, got {k!r}")
    out = np.empty_like(msg.entries)
    _pow_into(msg.entries, int(k), out)
    return BranchMessage(msg.p, out)


def level_step(child_msg: BranchMessage, params: ParamSet) -> BranchMessage:
    """Carry a message one level toward the root.

    Combines the ``d - 1`` identical child subtrees (entrywise power), absorbs
    the vertex's own tensors (initial amplitudes, mixer chain, optional
    single-qubit phases, end-of-line tie-off), and exchanges each trajectory
    bit for the parent's through the layer's cost phase.  Output shape equals
    input shape; cost is ``O(p * 4^p)`` time and ``O(4^p)`` memory,
    independent of ``d``.
    """
    if child_msg.p != params.p:
        raise InvalidParameterError(
            f"message depth {child_msg.p} does not match parameter depth {params.p}"
        )
    n = child_msg.entries.shape[0]
    work = np.empty(n, dtype=np.complex128)
    scratch = np.empty(n, dtype=np.complex128)
    _pow_into(child_msg.entries, params.d - 1, work)
    result = _vertex_sweeps(work, scratch, params, _IDENTITY_WEIGHTS, exchange=True)
    return BranchMessage(params.p, result)


def zz_expectation(params: ParamSet, memory_budget: int | None = None) -> float:
    """Central-edge ``<Z Z>`` only: the optimizer's hot path."""
    _check_budget(params.p, memory_budget)
    msg = _branch_message_array(params)
    return _real_part(_pair_value(msg, params, _Z_WEIGHTS, _Z_WEIGHTS), "<ZZ>")


def edge_expectation(params: ParamSet, memory_budget: int | None = None) -> EdgeExpectation:
    """All central-edge observables: ``<ZZ>``, ``<Z>``, and the norm check.

    The two root vertices are interchangeable, so a single ``<Z>`` value
    covers both.  Raises :class:`NumericError` if the identity contraction
    strays from 1 beyond 1e-10 or any imaginary part survives.
    """
    _check_budget(params.p, memory_budget)
    msg = _branch_message_array(params)
    norm = _real_part(_pair_value(msg, params, _IDENTITY_WEIGHTS, _IDENTITY_WEIGHTS), "norm")
    if abs(norm - 1.0) > 1e-10:
        raise NumericError(f"identity contraction {norm!r} deviates from 1 beyond 1e-10")
    zz = _real_part(_pair_value(msg, params, _Z_WEIGHTS, _Z_WEIGHTS), "<ZZ>")
    if abs(zz) > 1.0 + 1e-8:
        raise NumericError(f"<ZZ> = {zz!r} outside [-1, 1]")
    z_single = _real_part(_pair_value(msg, params, _Z_WEIGHTS, _IDENTITY_WEIGHTS), "<Z>")
    return EdgeExpectation(zz=zz, z_single=z_single, norm=norm)


def mis_edge_objective(params: ParamSet, memory_budget: int | None = None) -> float:
    """Per-vertex independent-set objective on the 3-regular tree.

    Evaluates ``(d/2) * < (1/2)(1/2 - ZZ/2) - 1/6 + (Z_i + Z_j)/12 >`` with
    the two-parameter cost driver; with all ``gamma_prime`` zero this reduces
    exactly to ``(3/4) * c_edge - 1/4``.
    """
    if params.d != 3:
        raise InvalidParameterError(
            f"independent-set objective is defined for d = 3, got d = {params.d}"
        )
    if params.gamma_prime is None:
        raise InvalidParameterError(
            "independent-set objective needs gamma_prime (may be all zeros)"
        )
    _check_budget(params.p, memory_budget)
    msg = _branch_message_array(params)
    zz = _real_part(_pair_value(msg, params, _Z_WEIGHTS, _Z_WEIGHTS), "<ZZ>")
    z_single = _real_part(_pair_value(msg, params, _Z_WEIGHTS, _IDENTITY_WEIGHTS), "<Z>")
    edge_term = 0.25 * (1.0 - zz) - 1.0 / 6.0 + (2.0 * z_single) / 12.0
    return (params.d / 2.0) * edge_term


# ---------------------------------------------------------------------------
# Debug dump format: little-endian header (p, d, count) as int64, then the
# entries as interleaved real/imag float64 pairs.
# ---------------------------------------------------------------------------

_HEADER = struct.Struct("<3q")


def dump_message(msg: BranchMessage, path, d: int = 0) -> None:
    """Write a message to ``path`` in the documented binary layout."""
    arr = np.ascontiguousarray(msg.entries, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(msg.p, d, arr.shape[0]))
        fh.write(arr.tobytes())


def load_message(path) -> tuple[BranchMessage, int]:
    """Read a message written by :func:`dump_message`; returns ``(msg, d)``."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise InvalidParameterError(f"{path}: truncated message header")
        p, d, count = _HEADER.unpack(header)
        if p < 1 or count != 1 << (2 * p):
            raise InvalidParameterError(
                f"{path}: header (p={p}, count={count}) is inconsistent"
            )
        payload = fh.read(count * _BYTES_PER_ENTRY)
    if len(payload) != count * _BYTES_PER_ENTRY:
        raise InvalidParameterError(f"{path}: truncated message payload")
    entries = np.frombuffer(payload, dtype="<c16").astype(np.complex128)
    return BranchMessage(int(p), entries), int(d)
