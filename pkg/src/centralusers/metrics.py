"""Per-window network measures on a :class:`SimpleDigraph`.

Betweenness is the raw (unnormalized) Freeman count. The default is the
directed definition over ordered pairs; ``directed=False`` runs on the
symmetrized graph and counts each unordered pair once, so pure
broadcasters and pure receivers can still sit on shortest paths.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from . import _brandes
from .graph import SimpleDigraph, degrees


@dataclass(frozen=True)
class NodeMetrics:
    user: str
    in_degree: int
    out_degree: int
    betweenness: float
    rank: int = 0
    # raw interaction counts behind the deduplicated degrees; diagnostic only
    in_weight: int = 0
    out_weight: int = 0

    def as_dict(self) -> dict:
        return {
            "user": self.user,
            "in_degree": self.in_degree,
            "out_degree": self.out_degree,
            "in_weight": self.in_weight,
            "out_weight": self.out_weight,
            "betweenness": self.betweenness,
            "rank": self.rank,
        }


def csr(d: SimpleDigraph, symmetric: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Row-sorted CSR adjacency indexed by position in ``d.nodes``."""
    n = len(d.nodes)
    idx = d.index
    if d.arcs:
        pairs = np.array([(idx[u], idx[v]) for u, v in d.arcs], dtype=np.int64)
    else:
        pairs = np.empty((0, 2), dtype=np.int64)
    if symmetric:
        pairs = np.unique(np.vstack([pairs, pairs[:, ::-1]]), axis=0)
    else:
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(pairs[:, 0], minlength=n), out=indptr[1:])
    return indptr, np.ascontiguousarray(pairs[:, 1])


def betweenness_array(d: SimpleDigraph, directed: bool = True, parallel: bool = True) -> np.ndarray:
    n = len(d.nodes)
    if n < 3:
        return np.zeros(n)
    indptr, indices = csr(d, symmetric=not directed)
    kernel = _brandes.brandes_parallel if parallel else _brandes.brandes_serial
    values = kernel(indptr, indices, _brandes.block_bounds(n))
    if not directed:
        values = values / 2.0
    return values


def betweenness(d: SimpleDigraph, directed: bool = True, parallel: bool = True) -> dict[str, float]:
    values = betweenness_array(d, directed=directed, parallel=parallel)
    return {u: float(b) for u, b in zip(d.nodes, values)}


def density(d: SimpleDigraph) -> float:
    n = len(d.nodes)
    if n <= 1:
        return 0.0
    return len(d.arcs) / (n * (n - 1))


def undirected_neighbors(d: SimpleDigraph) -> dict[str, set[str]]:
    nbrs: dict[str, set[str]] = {u: set() for u in d.nodes}
    for u, v in d.arcs:
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def clustering(d: SimpleDigraph) -> tuple[dict[str, float], float]:
    """Local clustering on the undirected projection, plus the mean over all nodes."""
    nbrs = undirected_neighbors(d)
    per_node: dict[str, float] = {}
    for v in d.nodes:
        nv = nbrs[v]
        k = len(nv)
        if k < 2:
            per_node[v] = 0.0
            continue
        links = sum(len(nbrs[u] & nv) for u in nv) // 2
        per_node[v] = 2.0 * links / (k * (k - 1))
    average = sum(per_node[v] for v in d.nodes) / len(d.nodes) if d.nodes else 0.0
    return per_node, average


def _rank_key(m: NodeMetrics):
    return (-m.betweenness, -m.in_degree, m.user)


def rank_all(metrics: Iterable[NodeMetrics]) -> list[NodeMetrics]:
    """Every node ordered by betweenness, ties by in-degree then handle; ranks 1..N."""
    ordered = sorted(metrics, key=_rank_key)
    return [replace(m, rank=i) for i, m in enumerate(ordered, start=1)]


def rank_top_k(metrics: Iterable[NodeMetrics], k: int) -> list[NodeMetrics]:
    if k < 1:
        raise ValueError("k must be at least 1")
    return rank_all(metrics)[:k]


def node_metrics(
    d: SimpleDigraph,
    directed_betweenness: bool = False,
    parallel: bool = True,
) -> dict[str, NodeMetrics]:
    """Degree, betweenness and rank for every node of ``d``, keyed by user."""
    deg = degrees(d)
    w_in = dict.fromkeys(d.nodes, 0)
    w_out = dict.fromkeys(d.nodes, 0)
    for (u, v), count in d.weight.items():
        w_out[u] += count
        w_in[v] += count
    btw = betweenness_array(d, directed=directed_betweenness, parallel=parallel)
    raw = (
        NodeMetrics(u, deg[u][0], deg[u][1], float(b), 0, w_in[u], w_out[u])
        for u, b in zip(d.nodes, btw)
    )
    return {m.user: m for m in rank_all(raw)}
