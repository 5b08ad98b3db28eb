"""Simple-graph utilities: parsing, girth, edge coloring, cuts, independent sets.

Everything here is a pure function of its inputs; graphs are immutable once
constructed.  Bitstrings are strings of ``'0'``/``'1'`` where position ``i``
is the label of vertex ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphParseError, InvalidInputError, ResourceLimitError

INFINITE = math.inf


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1`` with an ordered edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise InvalidInputError(f"vertex count must be nonnegative, got {n}")
        normalized: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidInputError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            normalized.append(key)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(normalized))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(nbrs)) for nbrs in adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def regular_degree(self) -> int | None:
        """The common degree if the graph is regular, else None."""
        if self.n == 0:
            return None
        degrees = {len(nbrs) for nbrs in self.adjacency}
        return degrees.pop() if len(degrees) == 1 else None


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document.

    Lines are ``u v`` pairs of nonnegative integers; ``#`` starts a comment;
    an optional header line ``n <count>`` declares the vertex count (otherwise
    it is one more than the largest vertex id).
    """
    declared_n: int | None = None
    raw_edges: list[tuple[int, int, int]] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "n":
            if declared_n is not None:
                raise GraphParseError("duplicate 'n' header", lineno)
            if len(fields) != 2 or not fields[1].isdigit():
                raise GraphParseError(f"malformed header {line!r}", lineno)
            declared_n = int(fields[1])
            continue
        if len(fields) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError(f"negative vertex in {line!r}", lineno)
        raw_edges.append((u, v, lineno))
        max_id = max(max_id, u, v)

    n = declared_n if declared_n is not None else max_id + 1
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for u, v, lineno in raw_edges:
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        if u >= n or v >= n:
            raise GraphParseError(f"vertex id beyond declared count {n}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge ({key[0]}, {key[1]})", lineno)
        seen.add(key)
        edges.append(key)
    return Graph(n, edges)


def format_graph(graph: Graph) -> str:
    """Serialize to the edge-list format accepted by :func:`parse_graph`."""
    lines = [f"n {graph.n}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def girth(graph: Graph) -> int | float:
    """Length of the shortest cycle, or ``math.inf`` for forests.

    Runs a breadth-first search from every vertex; every non-tree edge seen
    from root ``s`` closes a walk of length ``dist[u] + dist[w] + 1`` which
    upper-bounds the girth, and the minimum over all roots is exact.
    """
    adj = graph.adjacency
    best: int | float = INFINITE
    for s in range(graph.n):
        dist = [-1] * graph.n
        parent = [-1] * graph.n
        dist[s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if 2 * dist[u] >= best:
                continue
            for w in adj[u]:
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cand = dist[u] + dist[w] + 1
                    if cand < best:
                        best = cand
    return best


def certified_depth_for_girth(g: int | float) -> int | float:
    """Largest circuit depth whose edge neighborhoods are trees at girth ``g``."""
    if g == INFINITE:
        return INFINITE
    return (int(g) - 2) // 2


def max_certified_depth(graph: Graph) -> int | float:
    """Largest depth at which the per-edge tree evaluation applies to ``graph``.

    Requires a regular graph; forests have no cycle constraint and return
    ``math.inf``.
    """
    if graph.regular_degree() is None:
        raise InvalidInputError("graph is not regular; per-edge bound does not apply")
    return certified_depth_for_girth(girth(graph))


# ---------------------------------------------------------------------------
# Edge coloring (Misra-Gries): proper coloring with at most Delta + 1 colors.
# ---------------------------------------------------------------------------


def edge_coloring(graph: Graph) -> dict[tuple[int, int], int]:
    """Proper edge coloring using at most ``Delta + 1`` colors.

    Misra-Gries construction: for each uncolored edge build a maximal fan,
    invert an alternating two-color path, then rotate a prefix of the fan.
    Color indices are 0-based.
    """
    if graph.edge_count == 0:
        return {}
    delta = max(len(nbrs) for nbrs in graph.adjacency)
    palette = range(delta + 1)
    color: dict[tuple[int, int], int] = {}
    # used[v]: color -> neighbor joined by the edge of that color at v
    used: list[dict[int, int]] = [{} for _ in range(graph.n)]

    def ekey(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    def free_color(v: int) -> int:
        for c in palette:
            if c not in used[v]:
                return c
        raise AssertionError("no free color; coloring invariant broken")

    def is_free(v: int, c: int) -> bool:
        return c not in used[v]

    def assign(a: int, b: int, c: int) -> None:
        key = ekey(a, b)
        old = color.get(key)
        if old is not None:
            del used[a][old]
            del used[b][old]
        color[key] = c
        used[a][c] = b
        used[b][c] = a

    def unassign(a: int, b: int) -> None:
        key = ekey(a, b)
        old = color.pop(key)
        del used[a][old]
        del used[b][old]

    for u, v in graph.edges:
        # Maximal fan of u starting at v: each next edge's color is free on
        # the previous fan vertex; vertices stay distinct.
        fan = [v]
        in_fan = {v}
        while True:
            last = fan[-1]
            nxt = None
            for w in graph.adjacency[u]:
                if w in in_fan:
                    continue
                cw = color.get(ekey(u, w))
                if cw is not None and is_free(last, cw):
                    nxt = w
                    break
            if nxt is None:
                break
            fan.append(nxt)
            in_fan.add(nxt)

        c = free_color(u)
        d = free_color(fan[-1])

        if c != d:
            # Invert the maximal path through u whose edges alternate d, c.
            path = []
            cur, col = u, d
            while col in used[cur]:
                nxt = used[cur][col]
                path.append((cur, nxt))
                cur = nxt
                col = c if col == d else d
            for a, b in path:
                unassign(a, b)
            col = d
            for a, b in path:
                assign(a, b, c if col == d else d)
                col = c if col == d else d

        # After the inversion d is free on u; rotate the shortest fan prefix
        # ending at a vertex where d is free, then color its last edge d.
        w_index = None
        for i, w in enumerate(fan):
            if is_free(w, d):
                prefix_ok = True
                for j in range(1, i + 1):
                    cj = color.get(ekey(u, fan[j]))
                    if cj is None or not is_free(fan[j - 1], cj):
                        prefix_ok = False
                        break
                if prefix_ok:
                    w_index = i
                    break
        if w_index is None:
            raise AssertionError("no rotatable fan prefix; coloring invariant broken")
        for j in range(w_index):
            assign(u, fan[j], color[ekey(u, fan[j + 1])])
        if ekey(u, fan[w_index]) in color:
            unassign(u, fan[w_index])
        assign(u, fan[w_index], d)

    return color


# ---------------------------------------------------------------------------
# Cut and independent-set cost functions.
# ---------------------------------------------------------------------------


def _bit_tuple(bits: Sequence[int] | str, n: int) -> tuple[int, ...]:
    if len(bits) != n:
        raise InvalidInputError(f"bitstring length {len(bits)} != vertex count {n}")
    try:
        out = tuple(int(b) for b in bits)
    except (TypeError, ValueError):
        raise InvalidInputError(f"bitstring must contain only 0/1, got {bits!r}") from None
    if any(b not in (0, 1) for b in out):
        raise InvalidInputError(f"bitstring must contain only 0/1, got {bits!r}")
    return out


def cut_value(graph: Graph, bits: Sequence[int] | str) -> int:
    """Number of edges whose endpoints carry different bits."""
    b = _bit_tuple(bits, graph.n)
    return sum(1 for u, v in graph.edges if b[u] != b[v])


def i1_value(graph: Graph, bits: Sequence[int] | str) -> int:
    """Hamming weight minus the number of edges internal to the 1-set."""
    b = _bit_tuple(bits, graph.n)
    return sum(b) - sum(b[u] * b[v] for u, v in graph.edges)


def i2_value(graph: Graph, bits: Sequence[int] | str) -> int:
    """Two-sided objective: the 1-set term plus the same term for the 0-set.

    Equals ``n - |E| + cut_value`` on every input.
    """
    b = _bit_tuple(bits, graph.n)
    comp = tuple(1 - x for x in b)
    return i1_value(graph, b) + i1_value(graph, comp)


def repair_independent(
    graph: Graph,
    bits: Sequence[int] | str,
    rng: np.random.Generator | None = None,
) -> set[int]:
    """Shrink the 1-set to an independent set of size at least ``i1_value``.

    Repeatedly removes one endpoint of a violated edge; each removal drops the
    Hamming weight by one and at least one violation, so the objective never
    decreases.  The default rule is deterministic: take the lowest-index
    violated edge and drop the endpoint with more neighbors still in the set
    (ties broken toward the higher vertex index).  Passing ``rng`` switches to
    a uniformly random endpoint choice.
    """
    b = list(_bit_tuple(bits, graph.n))
    adj = graph.adjacency
    while True:
        violated = None
        for u, v in graph.edges:
            if b[u] and b[v]:
                violated = (u, v)
                break
        if violated is None:
            break
        u, v = violated
        if rng is not None:
            drop = int(rng.choice([u, v]))
        else:
            du = sum(b[w] for w in adj[u])
            dv = sum(b[w] for w in adj[v])
            if du != dv:
                drop = u if du > dv else v
            else:
                drop = max(u, v)
        b[drop] = 0
    return {i for i, x in enumerate(b) if x}


def two_independent_sets(
    graph: Graph,
    bits: Sequence[int] | str,
    rng: np.random.Generator | None = None,
) -> tuple[set[int], set[int]]:
    """Disjoint independent sets carved from the 1-side and the 0-side.

    Their combined size is at least ``i2_value(graph, bits)``.
    """
    b = _bit_tuple(bits, graph.n)
    comp = tuple(1 - x for x in b)
    return repair_independent(graph, b, rng), repair_independent(graph, comp, rng)


# ---------------------------------------------------------------------------
# Brute-force baseline.
# ---------------------------------------------------------------------------

_BRUTE_FORCE_CAP = 28
_CHUNK = 1 << 20


def brute_force_maxcut_bits(graph: Graph, limit: int = _BRUTE_FORCE_CAP) -> tuple[int, str]:
    """Exact maximum cut with a witness assignment, by enumeration.

    Fixes the last vertex to side 0 (complementation symmetry) and scans the
    remaining ``2^(n-1)`` assignments in vectorized chunks.
    """
    n = graph.n
    if n > limit:
        raise ResourceLimitError(
            f"brute force needs 2^{n - 1} assignments; cap is n <= {limit}"
        )
    if n == 0:
        return 0, ""
    total = 1 << max(n - 1, 0)
    best_val = -1
    best_mask = 0
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        cuts = np.zeros(masks.shape, dtype=np.int32)
        for u, v in graph.edges:
            cuts += (((masks >> u) ^ (masks >> v)) & 1).astype(np.int32)
        idx = int(np.argmax(cuts))
        if int(cuts[idx]) > best_val:
            best_val = int(cuts[idx])
            best_mask = int(masks[idx])
    bits = "".join(str((best_mask >> i) & 1) for i in range(n))
    return best_val, bits


def brute_force_maxcut(graph: Graph, limit: int = _BRUTE_FORCE_CAP) -> int:
    """Exact maximum cut value by enumeration (``n`` capped for tractability)."""
    return brute_force_maxcut_bits(graph, limit)[0]


# ---------------------------------------------------------------------------
# Named fixture graphs.
# ---------------------------------------------------------------------------


def _lcf_graph(n: int, pattern: Sequence[int], repeats: int) -> Graph:
    # LCF notation: Hamiltonian cycle 0..n-1 plus a chord i -> i + jump_i.
    jumps = list(pattern) * repeats
    assert len(jumps) == n
    edges = {(i, (i + 1) % n) for i in range(n)}
    normalized = {(min(u, v), max(u, v)) for u, v in edges}
    for i, jump in enumerate(jumps):
        j = (i + jump) % n
        normalized.add((min(i, j), max(i, j)))
    return Graph(n, sorted(normalized))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidInputError(f"cycle needs at least 3 vertices, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise InvalidInputError("both parts must be nonempty")
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def named_graph(name: str, size: int | tuple[int, int] | None = None) -> Graph:
    """Standard construction by name; ``size`` applies to parametric families."""
    key = name.strip().lower().replace("-", "_")
    if key == "cycle":
        if size is None:
            raise InvalidInputError("cycle requires a size")
        return cycle_graph(int(size))
    if key in ("complete_bipartite", "k33"):
        if key == "k33" or size is None:
            a, b = 3, 3
        elif isinstance(size, tuple):
            a, b = size
        else:
            a = b = int(size)
        return complete_bipartite_graph(a, b)
    if key == "petersen":
        return petersen_graph()
    if key == "heawood":
        return _lcf_graph(14, [5, -5], 7)
    if key == "pappus":
        return _lcf_graph(18, [5, 7, -7, 7, -7, -5], 3)
    if key == "moebius_kantor":
        return _lcf_graph(16, [5, -5], 8)
    if key == "mcgee":
        return _lcf_graph(24, [12, 7, -7], 8)
    if key == "tutte_coxeter":
        return _lcf_graph(30, [-13, -9, 7, -7, 9, 13], 5)
    raise InvalidInputError(f"unknown graph name {name!r}")
