"""Dense statevector simulation of the circuit on explicit small graphs.

This is the independent check on the tree contraction: it builds the full
``2^n`` amplitude vector, applies every gate, and measures observables
directly.  Vertex ``v`` occupies bit ``n - 1 - v`` of the basis index, so the
bitstring of basis state ``k`` is ``format(k, f"0{n}b")`` with character ``v``
labeling vertex ``v`` (matching the graph-side bitstring convention).

Gate conventions match :mod:`qaoabound.engine`: per layer, the diagonal
two-qubit phase ``exp(+i * gamma * Z Z)`` on every edge, the optional
diagonal ``exp(+i * gamma' * Z)`` on every vertex, then the mixer
``exp(-i * beta * X)`` on every vertex.  Diagonal phases are fused into one
vector multiply per layer.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .engine import edge_expectation
from .errors import InvalidParameterError, InvalidInputError, ResourceLimitError
from .graphs import Graph, girth
from .params import ParamSet

DEFAULT_QUBIT_CAP = 26


@dataclass(frozen=True)
class Statevector:
    """Normalized amplitude vector over ``2^n`` computational basis states."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amplitudes, dtype=np.complex128)
        if arr.shape != (1 << self.n,):
            raise InvalidParameterError(
                f"statevector on {self.n} qubits needs {1 << self.n} amplitudes, "
                f"got shape {arr.shape}"
            )
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > 1e-12:
            raise InvalidParameterError(f"statevector norm {norm!r} is not 1 within 1e-12")
        object.__setattr__(self, "amplitudes", arr)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def tree_graph(d: int, p: int, qubit_cap: int = DEFAULT_QUBIT_CAP) -> Graph:
    """Depth-``p`` edge neighborhood: two adjacent roots, each growing a
    ``(d - 1)``-ary tree of depth ``p``."""
    if d < 2:
        raise InvalidParameterError(f"degree d must be >= 2, got {d}")
    if p < 1:
        raise InvalidParameterError(f"depth p must be >= 1, got {p}")
    if d == 2:
        count = 2 * (p + 1)
    else:
        count = 2 * ((d - 1) ** (p + 1) - 1) // (d - 2)
    if count > qubit_cap:
        raise ResourceLimitError(
            f"edge neighborhood at d={d}, p={p} has {count} vertices; cap is {qubit_cap}"
        )
    edges = [(0, 1)]
    frontier = [(0, 0), (1, 0)]
    next_id = 2
    while frontier:
        vertex, depth = frontier.pop(0)
        if depth == p:
            continue
        for _ in range(d - 1):
            edges.append((vertex, next_id))
            frontier.append((next_id, depth + 1))
            next_id += 1
    assert next_id == count
    return Graph(count, edges)


def _sign_vector(n: int, v: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return (1 - 2 * ((idx >> (n - 1 - v)) & 1)).astype(np.int16)


def qaoa_state(
    graph: Graph, params: ParamSet, qubit_cap: int = DEFAULT_QUBIT_CAP
) -> Statevector:
    """Run the full alternating circuit on ``graph`` from the uniform state."""
    n = graph.n
    if n > qubit_cap:
        raise ResourceLimitError(
            f"{n} qubits exceeds the statevector cap of {qubit_cap}"
        )
    amps = np.full(1 << n, 2.0 ** (-n / 2.0), dtype=np.complex128)
    parity = np.zeros(1 << n, dtype=np.int16)
    for u, v in graph.edges:
        parity += _sign_vector(n, u) * _sign_vector(n, v)
    zsum = None
    if params.gamma_prime is not None:
        zsum = np.zeros(1 << n, dtype=np.int16)
        for v in range(n):
            zsum += _sign_vector(n, v)
    for t in range(params.p):
        amps *= np.exp(1j * params.gamma[t] * parity)
        if zsum is not None:
            amps *= np.exp(1j * params.gamma_prime[t] * zsum)
        c, s = np.cos(params.beta[t]), np.sin(params.beta[t])
        for v in range(n):
            view = amps.reshape(1 << v, 2, 1 << (n - 1 - v))
            a0 = view[:, 0, :].copy()
            a1 = view[:, 1, :].copy()
            view[:, 0, :] = c * a0 - 1j * s * a1
            view[:, 1, :] = -1j * s * a0 + c * a1
    return Statevector(n, amps)


# ---------------------------------------------------------------------------
# Observables.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZZ:
    i: int
    j: int


@dataclass(frozen=True)
class SingleZ:
    i: int


@dataclass(frozen=True)
class CutOperator:
    graph: Graph


@dataclass(frozen=True)
class MISOperator:
    """Edge-sum form of the independent-set objective (3-regular rewrite)."""

    graph: Graph


def _check_index(state: Statevector, v: int) -> None:
    if not (0 <= v < state.n):
        raise InvalidInputError(f"vertex index {v} out of range for {state.n} qubits")


def expectation(state: Statevector, observable) -> float:
    """Real expectation value of a diagonal observable."""
    probs = state.probabilities()
    n = state.n

    def mean_z(v: int) -> float:
        _check_index(state, v)
        return float(np.dot(probs, _sign_vector(n, v)))

    def mean_zz(i: int, j: int) -> float:
        _check_index(state, i)
        _check_index(state, j)
        return float(np.dot(probs, _sign_vector(n, i) * _sign_vector(n, j)))

    if isinstance(observable, ZZ):
        return mean_zz(observable.i, observable.j)
    if isinstance(observable, SingleZ):
        return mean_z(observable.i)
    if isinstance(observable, CutOperator):
        return sum(
            (1.0 - mean_zz(u, v)) / 2.0 for u, v in observable.graph.edges
        )
    if isinstance(observable, MISOperator):
        total = 0.0
        for u, v in observable.graph.edges:
            total += (
                0.25 * (1.0 - mean_zz(u, v))
                - 1.0 / 6.0
                + (mean_z(u) + mean_z(v)) / 12.0
            )
        return total
    raise InvalidParameterError(f"unsupported observable {observable!r}")


# ---------------------------------------------------------------------------
# Measurement sampling.
# ---------------------------------------------------------------------------


def sample(state: Statevector, seed: int, count: int) -> list[str]:
    """``count`` independent computational-basis measurements.

    Inverse-CDF over the cumulative probabilities with a seeded PCG64 stream;
    the cumulative sum fixes the summation order, so results are reproducible
    for a given seed.
    """
    if count < 1:
        raise InvalidParameterError(f"sample count must be >= 1, got {count}")
    cdf = np.cumsum(state.probabilities())
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    draws = np.searchsorted(cdf, rng.random(count), side="right")
    return [format(int(k), f"0{state.n}b") for k in draws]


@dataclass(frozen=True)
class SampleReport:
    """Outcome of one repeated-measurement experiment."""

    repetitions: int
    seed: int
    cut_values: tuple[int, ...]
    best_cut: int
    per_edge_value: float
    threshold: int
    threshold_met: bool
    girth_ok: bool

    def to_json_dict(self) -> dict:
        return {
            "repetitions": self.repetitions,
            "seed": self.seed,
            "cut_values": list(self.cut_values),
            "best_cut": self.best_cut,
            "per_edge_value": self.per_edge_value,
            "threshold": self.threshold,
            "threshold_met": self.threshold_met,
            "girth_ok": self.girth_ok,
        }


def sampling_experiment(
    graph: Graph,
    params: ParamSet,
    repetitions: int,
    seed: int = 0,
    state: Statevector | None = None,
    qubit_cap: int = DEFAULT_QUBIT_CAP,
) -> SampleReport:
    """Best-of-``repetitions`` cut from measuring the circuit output.

    Records whether the best sampled cut reaches
    ``floor(|E| * c_edge(params))``, the guaranteed-in-expectation level.  The
    per-edge guarantee needs girth at least ``2p + 2``; a warning is issued
    (and the report flagged) when the graph falls short.
    """
    if repetitions < 1:
        raise InvalidParameterError(f"repetitions must be >= 1, got {repetitions}")
    g = girth(graph)
    girth_ok = g >= 2 * params.p + 2
    if not girth_ok:
        warnings.warn(
            f"girth {g} < {2 * params.p + 2}: the tree-neighborhood guarantee "
            "does not apply to this graph",
            stacklevel=2,
        )
    per_edge = edge_expectation(params).c_edge
    threshold = int(np.floor(graph.edge_count * per_edge))
    if state is None:
        state = qaoa_state(graph, params, qubit_cap=qubit_cap)
    bits_list = sample(state, seed, repetitions)
    cuts = tuple(
        sum(1 for u, v in graph.edges if bits[u] != bits[v]) for bits in bits_list
    )
    best = max(cuts)
    return SampleReport(
        repetitions=repetitions,
        seed=seed,
        cut_values=cuts,
        best_cut=best,
        per_edge_value=per_edge,
        threshold=threshold,
        threshold_met=best >= threshold,
        girth_ok=girth_ok,
    )
