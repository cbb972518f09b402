"""Slow, independent reference computations used as test oracles.

None of these share code paths with the package: they work from plain
node/arc lists and the textbook definitions.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from datetime import datetime, timedelta, timezone

from centralusers.graph import Interaction, Kind


def bfs_dist(adj: dict, s) -> dict:
    dist = {s: 0}
    q = deque([s])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def brute_betweenness(nodes, arcs, directed=True) -> dict:
    """Enumerate every shortest path of every pair and count interior visits.

    Directed: ordered pairs. Undirected: unordered pairs.
    """
    fwd = {u: set() for u in nodes}
    rev = {u: set() for u in nodes}
    for u, v in arcs:
        fwd[u].add(v)
        rev[v].add(u)
        if not directed:
            fwd[v].add(u)
            rev[u].add(v)
    score = dict.fromkeys(nodes, 0.0)
    for s in nodes:
        ds = bfs_dist(fwd, s)
        for t in nodes:
            if t == s or t not in ds or (not directed and t < s):
                continue
            dt = bfs_dist(rev, t)
            paths = []

            def walk(v, path):
                if v == t:
                    paths.append(path)
                    return
                for w in fwd[v]:
                    if ds.get(w) == ds[v] + 1 and dt.get(w) == ds[t] - ds[w]:
                        walk(w, path + [w])

            walk(s, [s])
            for p in paths:
                for v in p[1:-1]:
                    score[v] += 1.0 / len(paths)
    return score


def brute_degrees(nodes, arcs) -> dict:
    return {
        u: (sum(1 for a, b in arcs if b == u), sum(1 for a, b in arcs if a == u))
        for u in nodes
    }


def brute_clustering(nodes, arcs) -> tuple[dict, float]:
    und = {frozenset(a) for a in arcs}
    per = {}
    for v in nodes:
        nb = [u for u in nodes if u != v and frozenset((u, v)) in und]
        k = len(nb)
        if k < 2:
            per[v] = 0.0
            continue
        tri = sum(1 for a, b in itertools.combinations(nb, 2) if frozenset((a, b)) in und)
        per[v] = tri / (k * (k - 1) / 2)
    return per, (sum(per.values()) / len(nodes) if nodes else 0.0)


def naive_modularity(nodes, arcs, labels) -> float:
    """Q = 1/(2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j) with an explicit double loop."""
    nodes = list(nodes)
    a = {(u, v): 0.0 for u in nodes for v in nodes}
    for u, v in arcs:
        a[(u, v)] += 1.0
        a[(v, u)] += 1.0
    k = {u: sum(a[(u, v)] for v in nodes) for u in nodes}
    two_m = sum(k.values())
    if two_m == 0:
        return 0.0
    q = 0.0
    for u in nodes:
        for v in nodes:
            if labels[u] == labels[v]:
                q += a[(u, v)] - k[u] * k[v] / two_m
    return q / two_m


def adjusted_rand(a: list, b: list) -> float:
    n = len(a)
    pairs = lambda x: x * (x - 1) / 2
    table: dict = {}
    for x, y in zip(a, b):
        table[(x, y)] = table.get((x, y), 0) + 1
    rows: dict = {}
    cols: dict = {}
    for (x, y), c in table.items():
        rows[x] = rows.get(x, 0) + c
        cols[y] = cols.get(y, 0) + c
    index = sum(pairs(c) for c in table.values())
    ra = sum(pairs(c) for c in rows.values())
    cb = sum(pairs(c) for c in cols.values())
    expected = ra * cb / pairs(n)
    best = (ra + cb) / 2
    return 1.0 if best == expected else (index - expected) / (best - expected)


def random_digraph(n: int, p: float, rng: random.Random, prefix="n"):
    nodes = [f"{prefix}{i:02d}" for i in range(n)]
    arcs = [(u, v) for u in nodes for v in nodes if u != v and rng.random() < p]
    return nodes, arcs


T0 = datetime(2017, 3, 1, tzinfo=timezone.utc)


def random_stream(rng: random.Random, n_users=25, n=200, days=180, tweet_share=0.15, ids=6):
    """Random interaction records with small user and tweet-id pools."""
    users = [f"u{i:02d}" for i in range(n_users)]
    recs = []
    for _ in range(n):
        ts = T0 + timedelta(seconds=rng.randrange(days * 86400))
        s = rng.choice(users)
        if rng.random() < tweet_share:
            recs.append(Interaction(s, s, Kind.TWEET, ts, f"t{rng.randrange(ids)}"))
            continue
        t = rng.choice([u for u in users if u != s])
        kind = rng.choice([Kind.RETWEET, Kind.MENTION, Kind.REPLY])
        tid = f"t{rng.randrange(ids)}" if kind is Kind.RETWEET and rng.random() < 0.9 else None
        recs.append(Interaction(s, t, kind, ts, tid))
    return recs


def first_seen_counts(records, intervals) -> dict:
    """Single pass over time-sorted records."""
    seen = set()
    counts = {iv: 0 for iv in intervals}
    for r in sorted(records, key=lambda r: r.timestamp):
        for u in (r.source, r.target):
            if u in seen:
                continue
            seen.add(u)
            for iv in intervals:
                if iv.start <= r.timestamp < iv.end:
                    counts[iv] += 1
    return counts


def brute_bridges(records, assignments, degree_max=25, hop="tweet") -> set:
    role = {a.user: a.role.value for a in assignments}
    arcs = {(r.source, r.target) for r in records if r.kind is not Kind.TWEET}
    users = {r.source for r in records} | {r.target for r in records}
    deg = {u: sum(1 for a in arcs if u in a) for u in users}
    out = set()
    for b_rec in records:
        for a_rec in records:
            b, i = b_rec.source, b_rec.target
            if b_rec.kind is not Kind.RETWEET or not b_rec.tweet_id:
                continue
            if role.get(i) != "Influencer" or role.get(b, "InformationBridge") != "InformationBridge":
                continue
            if deg[b] > degree_max:
                continue
            a = a_rec.source
            if role.get(a) != "ActiveEngager" or a == b:
                continue
            if hop == "tweet":
                ok = (a_rec.kind is Kind.RETWEET and a_rec.target == i and a_rec.tweet_id == b_rec.tweet_id)
            else:
                ok = a_rec.kind is not Kind.TWEET and a_rec.target == b
            if ok:
                out.add((b, i, a, b_rec.tweet_id))
    return out


def close(a: float, b: float, tol: float) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)
