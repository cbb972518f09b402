"""Louvain community detection and Newman modularity.

Both work on the undirected weighted projection of a window: every arc
becomes a weight-1 undirected edge, so a reciprocated pair weighs 2.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .graph import SimpleDigraph

_EPS = 1e-12


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    assignment: Mapping[str, int]

    @classmethod
    def from_labels(cls, labels: Mapping[str, object]) -> "Partition":
        """Relabel arbitrary community keys to dense ids, in order of each
        community's smallest member."""
        dense: dict[object, int] = {}
        out = {}
        for user in sorted(labels):
            out[user] = dense.setdefault(labels[user], len(dense))
        return cls(out)

    @classmethod
    def singletons(cls, nodes) -> "Partition":
        return cls({u: i for i, u in enumerate(sorted(nodes))})

    def __len__(self) -> int:
        return len(set(self.assignment.values()))

    def sizes(self) -> list[int]:
        """Community sizes, largest first."""
        return sorted(Counter(self.assignment.values()).values(), reverse=True)

    def groups(self) -> list[list[str]]:
        out: dict[int, list[str]] = {}
        for user in sorted(self.assignment):
            out.setdefault(self.assignment[user], []).append(user)
        return [out[c] for c in sorted(out)]


def undirected_weights(d: SimpleDigraph) -> dict[tuple[str, str], float]:
    w: dict[tuple[str, str], float] = {}
    for u, v in d.arcs:
        key = (u, v) if u < v else (v, u)
        w[key] = w.get(key, 0.0) + 1.0
    return w


def modularity(d: SimpleDigraph, p: Partition) -> float:
    missing = [u for u in d.nodes if u not in p.assignment]
    if missing:
        raise PartitionError(f"partition does not cover {len(missing)} node(s), e.g. {missing[0]!r}")
    edges = undirected_weights(d)
    m = sum(edges.values())
    if m == 0:
        return 0.0
    internal: dict[int, float] = {}
    total: dict[int, float] = {}
    for (u, v), w in sorted(edges.items()):
        cu, cv = p.assignment[u], p.assignment[v]
        if cu == cv:
            internal[cu] = internal.get(cu, 0.0) + w
        total[cu] = total.get(cu, 0.0) + w
        total[cv] = total.get(cv, 0.0) + w
    q = 0.0
    for c in sorted(total):
        q += internal.get(c, 0.0) / m - (total[c] / (2.0 * m)) ** 2
    return q


def _local_moves(adj, k, m2, rng):
    n = len(adj)
    comm = list(range(n))
    tot = list(k)
    order = list(range(n))
    rng.shuffle(order)
    moved_any = False
    while True:
        moves = 0
        for i in order:
            ci = comm[i]
            ki = k[i]
            links: dict[int, float] = {}
            for j, w in adj[i]:
                cj = comm[j]
                links[cj] = links.get(cj, 0.0) + w
            tot[ci] -= ki
            best = ci
            best_gain = links.get(ci, 0.0) - tot[ci] * ki / m2
            for c, w in links.items():
                gain = w - tot[c] * ki / m2
                if gain > best_gain + _EPS:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != ci:
                comm[i] = best
                moves += 1
        if not moves:
            return comm, moved_any
        moved_any = True


def _aggregate(adj, loops, k, comm):
    dense: dict[int, int] = {}
    labels = [dense.setdefault(c, len(dense)) for c in comm]
    nc = len(dense)
    new_loops = [0.0] * nc
    new_k = [0.0] * nc
    merged: list[dict[int, float]] = [{} for _ in range(nc)]
    for i, nbrs in enumerate(adj):
        ci = labels[i]
        new_loops[ci] += loops[i]
        new_k[ci] += k[i]
        for j, w in nbrs:
            cj = labels[j]
            if cj == ci:
                new_loops[ci] += w / 2.0
            else:
                merged[ci][cj] = merged[ci].get(cj, 0.0) + w
    new_adj = [sorted(row.items()) for row in merged]
    return new_adj, new_loops, new_k, labels


def communities(d: SimpleDigraph, seed: int = 0) -> Partition:
    """Greedy multi-level modularity maximization (Louvain).

    ``seed`` only shuffles the node visiting order; neighbor weights are
    always summed in ascending node order, so a seed fixes the result.
    """
    nodes = d.nodes
    n = len(nodes)
    idx = d.index
    rows: list[dict[int, float]] = [{} for _ in range(n)]
    for (u, v), w in undirected_weights(d).items():
        i, j = idx[u], idx[v]
        rows[i][j] = rows[i].get(j, 0.0) + w
        rows[j][i] = rows[j].get(i, 0.0) + w
    adj = [sorted(r.items()) for r in rows]
    k = [sum(w for _, w in r) for r in adj]
    m2 = sum(k)
    if m2 == 0:
        return Partition.singletons(nodes)

    rng = random.Random(seed)
    loops = [0.0] * n
    member = list(range(n))
    while True:
        comm, moved = _local_moves(adj, k, m2, rng)
        if not moved:
            break
        adj, loops, k, labels = _aggregate(adj, loops, k, comm)
        member = [labels[c] for c in member]
    return Partition.from_labels({u: member[i] for i, u in enumerate(nodes)})
