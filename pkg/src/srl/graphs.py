"""Synthetic graph generators and symmetric aggregation operators.

Two random-graph families are supported: preferential attachment
(Barabasi-Albert) and random regular graphs via the pairing model.  From a
graph we build the self-loop-normalized adjacency and PSD variants of it
that act as the aggregation operator on node features.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import GenerationFailureError, InvalidParameterError
from .rng import stream

OPERATOR_KINDS = ("normalized_adjacency", "shift_psd", "squared", "sgc_power")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Edges are stored canonically: each pair (u, v) with u < v, the whole
    tuple sorted lexicographically.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError(f"vertex count must be positive, got {self.n}")
        canon = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidParameterError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if not (0 <= u < v < self.n):
                raise InvalidParameterError(f"edge ({u}, {v}) outside vertex range")
            canon.append((u, v))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise InvalidParameterError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a


def _sample_distinct(pool: list[int], m: int, rng: np.random.Generator) -> list[int]:
    """Draw m distinct values from pool (propensity = multiplicity in pool)."""
    chosen: set[int] = set()
    while len(chosen) < m:
        chosen.add(pool[int(rng.integers(len(pool)))])
    return sorted(chosen)


def generate_ba(n: int, m: int, seed: int) -> Graph:
    """Preferential-attachment graph: m initial vertices, each later vertex
    attaches m edges to existing vertices with probability proportional to
    degree (repeated-endpoint list sampling, duplicates rejected).

    The first added vertex links to all m initial vertices, so the result
    is connected and has exactly m*(n-m) edges.
    """
    if m < 1 or m >= n:
        raise InvalidParameterError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = stream(seed)
    edges: list[tuple[int, int]] = []
    # Each endpoint appears in `repeated` once per incident edge, which makes
    # uniform sampling from the list degree-proportional.
    repeated: list[int] = []
    targets = list(range(m))
    for source in range(m, n):
        edges.extend((t, source) for t in targets)
        repeated.extend(targets)
        repeated.extend([source] * m)
        if source < n - 1:
            targets = _sample_distinct(repeated, m, rng)
    return Graph(n, tuple(edges))


def _pairing_possible(edges: set[tuple[int, int]], leftover: dict[int, int]) -> bool:
    """Can any two leftover stub owners still form a new simple edge?"""
    if not leftover:
        return True
    nodes = list(leftover)
    for i, u in enumerate(nodes):
        for v in nodes[:i]:
            a, b = (u, v) if u < v else (v, u)
            if (a, b) not in edges:
                return True
    return False


def _try_pairing(n: int, k: int, rng: np.random.Generator) -> set[tuple[int, int]] | None:
    """One attempt of the stub-pairing construction.

    Stubs are shuffled and paired; pairs that would create a self-loop or a
    duplicate edge return their stubs to the pool for the next round.  Gives
    up (returns None) when the remaining stubs cannot form any simple edge.
    """
    edges: set[tuple[int, int]] = set()
    stubs = list(range(n)) * k
    while stubs:
        leftover: dict[int, int] = {}
        rng.shuffle(stubs)
        it = iter(stubs)
        for u, v in zip(it, it):
            if u > v:
                u, v = v, u
            if u != v and (u, v) not in edges:
                edges.add((u, v))
            else:
                leftover[u] = leftover.get(u, 0) + 1
                leftover[v] = leftover.get(v, 0) + 1
        if not _pairing_possible(edges, leftover):
            return None
        stubs = [node for node, count in leftover.items() for _ in range(count)]
    return edges


def generate_regular(n: int, k: int, seed: int, max_retries: int = 1000) -> Graph:
    """Uniform-ish random k-regular graph via the pairing model.

    Rejected pairings (self-loops / duplicate edges) are repaired within an
    attempt; unrepairable attempts are restarted up to max_retries times.
    """
    if k < 0 or k >= n:
        raise InvalidParameterError(f"need 0 <= k < n, got k={k}, n={n}")
    if (n * k) % 2 != 0:
        raise InvalidParameterError(f"n*k must be even, got n={n}, k={k}")
    rng = stream(seed)
    for _ in range(max_retries):
        edges = _try_pairing(n, k, rng)
        if edges is not None:
            return Graph(n, tuple(edges))
    raise GenerationFailureError(
        f"no simple {k}-regular graph on {n} vertices found in {max_retries} attempts"
    )


def normalized_adjacency(g: Graph) -> np.ndarray:
    """Self-loop normalized adjacency D~^(-1/2) (A + I) D~^(-1/2).

    Symmetric with eigenvalues in [-1, 1]; isolated vertices get a diagonal
    entry of 1 from their self-loop.
    """
    a_tilde = g.adjacency()
    np.fill_diagonal(a_tilde, a_tilde.diagonal() + 1.0)
    inv_sqrt = 1.0 / np.sqrt(a_tilde.sum(axis=1))
    out = a_tilde * inv_sqrt[:, None] * inv_sqrt[None, :]
    return (out + out.T) / 2.0


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian D - A (no self loops, no normalization).

    Its top eigenvalues track the largest vertex degrees, so unlike the
    degree-normalized operators it keeps hub structure visible.
    """
    a = g.adjacency()
    out = np.diag(a.sum(axis=1)) - a
    return (out + out.T) / 2.0


@dataclass(frozen=True)
class GraphOperator:
    """Aggregation operator: a dense symmetric matrix plus its provenance."""

    matrix: np.ndarray
    kind: str
    layers: int = 1

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def build_operator(g: Graph, kind: str, power: int = 1) -> GraphOperator:
    """Build an aggregation operator from a graph.

    kinds:
      normalized_adjacency -- the normalized adjacency itself (may be indefinite)
      shift_psd            -- (I + A_hat)/2, eigenvalues in [0, 1]
      squared              -- A_hat^2, PSD
      sgc_power            -- the shift_psd operator raised to `power`
    """
    if kind not in OPERATOR_KINDS:
        raise InvalidParameterError(f"unknown operator kind {kind!r}")
    if power < 1:
        raise InvalidParameterError(f"power must be >= 1, got {power}")
    if power != 1 and kind != "sgc_power":
        raise InvalidParameterError(f"power only applies to sgc_power, got kind={kind!r}")
    a_hat = normalized_adjacency(g)
    eye = np.eye(g.n)
    if kind == "normalized_adjacency":
        mat = a_hat
    elif kind == "shift_psd":
        mat = (eye + a_hat) / 2.0
    elif kind == "squared":
        mat = a_hat @ a_hat
    else:  # sgc_power
        mat = np.linalg.matrix_power((eye + a_hat) / 2.0, power)
    mat = (mat + mat.T) / 2.0
    return GraphOperator(matrix=mat, kind=kind, layers=power)


def graph_to_json(g: Graph) -> str:
    """Serialize as {"n": ..., "edges": [[u, v], ...]} (edges sorted)."""
    return json.dumps({"n": g.n, "edges": [[u, v] for u, v in g.edges]})


def graph_from_json(text: str) -> Graph:
    obj = json.loads(text)
    return Graph(int(obj["n"]), tuple((int(u), int(v)) for u, v in obj["edges"]))


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated "u v" lines; n is the max endpoint + 1."""
    edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidParameterError(f"line {lineno}: expected 'u v', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if not edges:
        raise InvalidParameterError("edge list is empty")
    n = max(max(u, v) for u, v in edges) + 1
    return Graph(n, tuple(edges))


def load_graph(path) -> Graph:
    """Load a graph from JSON or edge-list text (sniffed by first character)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return graph_from_json(text)
    return parse_edge_list(text)


def save_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(graph_to_json(g))
        fh.write("\n")
