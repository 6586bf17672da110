"""Graph storage, edge-list ingestion, synthetic generators and degree statistics.

Adjacency follows the convention ``A[v, u] = 1`` iff the arc ``(u, v)`` is in E,
i.e. row ``v`` of the stored CSR matrix lists the nodes that can infect ``v``.
For undirected graphs the matrix is symmetric.  ``deg(v)`` always means the
in-degree, which coincides with the ordinary degree in the undirected case.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, TextIO

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import EmptyGraphError, GenerationError, ParameterError, ParseError

MODELS = ("regular", "erdos_renyi", "preferential_attachment")


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator seeded from a 64-bit integer."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    adj: sp.csr_matrix
    directed: bool = False

    def __post_init__(self):
        adj = self.adj
        if adj.shape != (self.n, self.n):
            raise ParameterError(f"adjacency shape {adj.shape} does not match n={self.n}")
        for arr in (adj.data, adj.indices, adj.indptr):
            arr.flags.writeable = False

    @classmethod
    def from_arcs(cls, n: int, src, dst, directed: bool = False) -> "Graph":
        """Build from arc arrays ``src -> dst``; self-loops and repeats are removed.

        In undirected mode each pair is symmetrized.
        """
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        keep = src != dst
        src, dst = src[keep], dst[keep]
        if not directed:
            src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        # row = infected node (dst), column = infecting node (src)
        mat = sp.coo_matrix((np.ones(src.size, dtype=np.float64), (dst, src)), shape=(n, n)).tocsr()
        mat.sum_duplicates()
        mat.data[:] = 1.0
        mat.sort_indices()
        return cls(n=n, adj=mat, directed=directed)

    @property
    def in_adj(self) -> sp.csr_matrix:
        return self.adj

    @property
    def out_adj(self) -> sp.csr_matrix:
        if not self.directed:
            return self.adj
        return self.adj.T.tocsr()

    @property
    def in_degree(self) -> np.ndarray:
        return np.diff(self.adj.indptr)

    @property
    def out_degree(self) -> np.ndarray:
        if not self.directed:
            return self.in_degree
        return np.bincount(self.adj.indices, minlength=self.n)

    @property
    def degree(self) -> np.ndarray:
        return self.in_degree

    @property
    def num_arcs(self) -> int:
        return int(self.adj.nnz)

    @property
    def num_edges(self) -> int:
        """Distinct edges (undirected) or arcs (directed)."""
        return self.num_arcs if self.directed else self.num_arcs // 2

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.adj.indices[self.adj.indptr[v]:self.adj.indptr[v + 1]]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield ``(u, v)`` arcs, or ``u < v`` pairs for undirected graphs."""
        coo = self.adj.tocoo()
        for v, u in zip(coo.row.tolist(), coo.col.tolist()):
            if self.directed or u < v:
                yield (u, v)

    def with_edge(self, u: int, v: int) -> "Graph":
        coo = self.adj.tocoo()
        # stored arcs are already symmetric for undirected graphs; re-symmetrizing is idempotent
        src = np.append(coo.col, u)
        dst = np.append(coo.row, v)
        return Graph.from_arcs(self.n, src, dst, directed=self.directed)

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        ncomp = csgraph.connected_components(self.adj, directed=self.directed, connection="weak",
                                                return_labels=False)
        return ncomp == 1

    def dense(self) -> np.ndarray:
        return self.adj.toarray()


@dataclass(frozen=True)
class LoadReport:
    nodes: int
    edges: int
    duplicates_dropped: int
    self_loops_dropped: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=False)


def load_edge_list(source: TextIO | Iterable[str], directed: bool = False) -> tuple[Graph, LoadReport]:
    """Parse a whitespace-separated edge list.

    Lines starting with ``#`` (and blank lines) are skipped.  Node ids are
    remapped to ``0..n-1`` in order of first appearance.  Repeated edges and
    self-loops are dropped and counted in the returned report; in undirected
    mode ``u v`` and ``v u`` are the same edge.
    """
    ids: dict[int, int] = {}
    src: list[int] = []
    dst: list[int] = []
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    loops = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 2 tokens, got {len(parts)}: {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if a < 0 or b < 0:
            raise ParseError(f"negative node id in {line!r}", lineno)
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        if u == v:
            loops += 1
            continue
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        src.append(u)
        dst.append(v)
    if not ids:
        raise EmptyGraphError("edge list contains no edges")
    g = Graph.from_arcs(len(ids), src, dst, directed=directed)
    return g, LoadReport(g.n, g.num_edges, duplicates, loops)


def read_edge_list(path, directed: bool = False) -> tuple[Graph, LoadReport]:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh, directed=directed)


def write_edge_list(g: Graph, fh: TextIO) -> None:
    fh.write(f"# nodes {g.n} edges {g.num_edges} {'directed' if g.directed else 'undirected'}\n")
    for u, v in g.edges():
        fh.write(f"{u} {v}\n")


# --- generators -------------------------------------------------------------

def _regular_attempt(n, d, rng):
    # Steger-Wormald style pairing: pair random stubs, keep valid pairs, re-pair the rest.
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n), d)
    while stubs.size:
        leftover: dict[int, int] = defaultdict(int)
        rng.shuffle(stubs)
        for s1, s2 in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                leftover[s1] += 1
                leftover[s2] += 1
        if not leftover:
            break
        nodes = list(leftover)
        suitable = any(
            a != b and (min(a, b), max(a, b)) not in edges
            for i, a in enumerate(nodes) for b in nodes[i + 1:]
        )
        if not suitable:
            return None
        stubs = np.array([v for v, c in leftover.items() for _ in range(c)], dtype=np.int64)
    return edges


def random_regular(n: int, d: int, seed: int, max_retries: int = 100) -> Graph:
    if d < 0 or d >= n or (n * d) % 2:
        raise ParameterError(f"no simple {d}-regular graph on {n} nodes")
    rng = make_rng(seed)
    if d == 0:
        return Graph.from_arcs(n, [], [])
    for _ in range(max_retries):
        edges = _regular_attempt(n, d, rng)
        if edges is not None:
            pairs = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
            return Graph.from_arcs(n, pairs[:, 0], pairs[:, 1])
    raise GenerationError(f"regular({n}, {d}) failed after {max_retries} attempts")


def _decode_pairs(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # index k enumerates pairs (i, j), i < j, row by row
    idx = idx.astype(np.int64)
    rows_before = lambda i: i * (2 * n - i - 1) // 2  # noqa: E731
    i = np.floor(((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8.0 * idx)) / 2).astype(np.int64)
    # correct any float rounding
    i = np.clip(i, 0, n - 2)
    while True:
        lo = rows_before(i)
        too_big = lo > idx
        too_small = rows_before(i + 1) <= idx
        if not (too_big.any() or too_small.any()):
            break
        i = i - too_big + too_small
    j = idx - rows_before(i) + i + 1
    return i, j


def erdos_renyi(n: int, m: int | float, seed: int) -> Graph:
    """G(n, M): exactly ``m`` distinct edges chosen uniformly.

    A float ``0 < m < 1`` is read as an edge probability ``p`` and converted to
    ``M = round(p * n(n-1)/2)``.
    """
    total = n * (n - 1) // 2
    if isinstance(m, float) and not float(m).is_integer():
        if not 0.0 <= m <= 1.0:
            raise ParameterError(f"edge probability {m} outside [0, 1]")
        m = int(round(m * total))
    m = int(m)
    if m < 0 or m > total:
        raise ParameterError(f"cannot place {m} edges on {n} nodes (max {total})")
    rng = make_rng(seed)
    if m == 0:
        return Graph.from_arcs(n, [], [])
    idx = np.sort(rng.choice(total, size=m, replace=False))
    i, j = _decode_pairs(idx, n)
    return Graph.from_arcs(n, i, j)


def preferential_attachment(n: int, m: int, seed: int) -> Graph:
    """Seed clique on ``m + 1`` nodes, then each new node attaches ``m`` edges
    to distinct existing nodes chosen with probability proportional to degree."""
    if m < 1 or n < m + 1:
        raise ParameterError(f"preferential attachment needs m >= 1 and n >= m + 1 (got n={n}, m={m})")
    rng = make_rng(seed)
    src: list[int] = []
    dst: list[int] = []
    # node v appears deg(v) times in `repeated`
    repeated: list[int] = []
    for a in range(m + 1):
        for b in range(a + 1, m + 1):
            src.append(a)
            dst.append(b)
            repeated.extend((a, b))
    for new in range(m + 1, n):
        targets: list[int] = []
        chosen: set[int] = set()
        while len(targets) < m:
            t = repeated[int(rng.integers(len(repeated)))]
            if t not in chosen:
                chosen.add(t)
                targets.append(t)
        for t in targets:
            src.append(t)
            dst.append(new)
            repeated.extend((t, new))
    return Graph.from_arcs(n, src, dst)


def generate(model: str, n: int, target, seed: int) -> Graph:
    """Dispatch to a synthetic generator; ``target`` is the model parameter."""
    if n < 1:
        raise ParameterError("n must be positive")
    if model == "regular":
        return random_regular(n, int(target), seed)
    if model in ("erdos_renyi", "er"):
        return erdos_renyi(n, target, seed)
    if model in ("preferential_attachment", "pa"):
        return preferential_attachment(n, int(target), seed)
    raise ParameterError(f"unknown model {model!r}; expected one of {MODELS}")


def parse_generator_spec(spec: str) -> tuple[str, int, float | int]:
    """Parse ``MODEL:N:PARAM``, e.g. ``regular:2000:6`` or ``erdos_renyi:2000:6001``."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ParameterError(f"generator spec {spec!r} is not MODEL:N:PARAM")
    model, n_s, p_s = parts
    aliases = {"er": "erdos_renyi", "pa": "preferential_attachment", "ba": "preferential_attachment"}
    model = aliases.get(model, model)
    if model not in MODELS:
        raise ParameterError(f"unknown model {model!r}; expected one of {MODELS}")
    try:
        n = int(n_s)
        param = float(p_s) if any(c in p_s for c in ".eE") else int(p_s)
    except ValueError:
        raise ParameterError(f"bad numbers in generator spec {spec!r}") from None
    return model, n, param


# --- degree statistics --------------------------------------------------------

def resolve_average_degree(avg: float, present_degrees: Iterable[int]) -> tuple[int, int]:
    """Return ``(rounded, resolved)`` for the average-degree class.

    ``rounded`` is ``avg`` rounded half-up.  If no node has that degree the
    nearest present degree is used, preferring the smaller one on ties.
    """
    rounded = int(math.floor(avg + 0.5))
    present = sorted(set(int(k) for k in present_degrees))
    if not present or rounded in present:
        return rounded, rounded
    best = min(present, key=lambda k: (abs(k - rounded), k))
    return rounded, best


@dataclass(frozen=True, eq=False)
class DegreeStats:
    degree: np.ndarray
    avg_degree: float
    max_degree: int
    histogram: np.ndarray
    second_order: np.ndarray
    k_prime: np.ndarray
    k_rounded: int
    k_hat: int
    mean_2deg_at_avg: float
    class_size_at_avg: int = field(default=0)

    def summary(self) -> dict:
        s2 = self.second_order
        return {
            "avg_degree": self.avg_degree,
            "max_degree": self.max_degree,
            "k_hat": self.k_hat,
            "k_rounded": self.k_rounded,
            "class_size_at_avg": self.class_size_at_avg,
            "mean_2deg_at_avg": self.mean_2deg_at_avg,
            "second_order": {
                "min": int(s2.min()) if s2.size else 0,
                "max": int(s2.max()) if s2.size else 0,
                "mean": float(s2.mean()) if s2.size else 0.0,
            },
        }


def second_order_degree(g: Graph) -> np.ndarray:
    """Sum of in-neighbour degrees minus the number of reciprocated neighbours.

    For undirected graphs the subtracted term equals ``deg(v)``.
    """
    deg = g.degree.astype(np.int64)
    neighbor_sum = g.adj @ deg
    if g.directed:
        mutual = np.asarray(g.adj.multiply(g.adj.T).sum(axis=1)).ravel().astype(np.int64)
    else:
        mutual = deg
    return np.asarray(neighbor_sum, dtype=np.int64) - mutual


def degree_statistics(g: Graph) -> DegreeStats:
    if g.n < 1:
        raise ParameterError("degree statistics need at least one node")
    deg = g.degree.astype(np.int64)
    avg = float(deg.sum()) / g.n
    hist = np.bincount(deg)
    s2 = second_order_degree(g)
    k_prime = s2 / avg if avg > 0 else np.zeros(g.n)
    rounded, k_hat = resolve_average_degree(avg, np.nonzero(hist)[0])
    cls = deg == k_hat
    mean2 = float(s2[cls].mean()) if cls.any() else 0.0
    return DegreeStats(
        degree=deg,
        avg_degree=avg,
        max_degree=int(deg.max()),
        histogram=hist,
        second_order=s2,
        k_prime=k_prime,
        k_rounded=rounded,
        k_hat=k_hat,
        mean_2deg_at_avg=mean2,
        class_size_at_avg=int(cls.sum()),
    )
