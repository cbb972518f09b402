"""Longitudinal analysis over consecutive windows of a temporal graph."""

from __future__ import annotations

import bisect
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Iterable, Sequence

from .community import communities, modularity
from .graph import Interval, TemporalGraph, normalize_handle, next_month, project, to_utc, window
from .metrics import NodeMetrics, clustering, density, node_metrics
from .roles import (
    BridgeMotif,
    ConfigError,
    Role,
    RoleAssignment,
    RoleThresholds,
    bridge_assignments,
    classify,
    find_bridges,
)


def calendar_months(start: datetime, end: datetime) -> list[Interval]:
    """UTC calendar months from the month of ``start`` through the month holding ``end``."""
    start, end = to_utc(start), to_utc(end)
    cur = start.replace(day=1, hour=0, minute=0, second=0)
    out = []
    while cur <= end:
        nxt = next_month(cur)
        out.append(Interval(cur, nxt))
        cur = nxt
    return out


def fixed_windows(start: datetime, end: datetime, days: float) -> list[Interval]:
    """Back-to-back windows of ``days`` length from ``start`` until ``end`` is covered."""
    if days <= 0:
        raise ConfigError("window duration must be positive")
    step = timedelta(days=days)
    cur = to_utc(start)
    end = to_utc(end)
    out = []
    while cur <= end:
        out.append(Interval(cur, cur + step))
        cur += step
    return out


def make_plan(
    g: TemporalGraph,
    mode: str = "calendar-month",
    span: tuple[datetime, datetime] | None = None,
) -> list[Interval]:
    """Window plan from a mode string: ``calendar-month`` or ``duration:<days>``.

    ``span`` overrides the graph's own first/last timestamps (both inclusive).
    """
    if span is None:
        span = g.span
        if span is None:
            return []
    start, end = span
    if mode == "calendar-month":
        return calendar_months(start, end)
    if mode.startswith("duration:"):
        try:
            days = float(mode.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad window duration in {mode!r}") from None
        return fixed_windows(start, end, days)
    raise ConfigError(f"unknown window mode {mode!r}")


def validate_plan(plan: Sequence[Interval]) -> None:
    for a, b in zip(plan, plan[1:]):
        if b.start < a.end:
            raise ConfigError(f"windows {a.label} and {b.label} overlap or are out of order")


@dataclass(frozen=True)
class WindowReport:
    interval: Interval
    interaction_count: int = 0
    node_count: int = 0
    arc_count: int = 0
    density: float = 0.0
    avg_clustering: float = 0.0
    modularity: float = 0.0
    community_sizes: tuple[int, ...] = ()
    new_unique_users: int = 0
    top_k: tuple[NodeMetrics, ...] = ()
    roles: tuple[RoleAssignment, ...] = ()
    bridges: tuple[BridgeMotif, ...] = ()
    nodes: tuple[NodeMetrics, ...] = field(default=(), repr=False)

    @property
    def community_count(self) -> int:
        return len(self.community_sizes)

    def metrics_of(self, user: str) -> NodeMetrics | None:
        for m in self.nodes:
            if m.user == user:
                return m
        return None

    def role_of(self, user: str) -> Role | None:
        for a in self.roles:
            if a.user == user:
                return a.role
        return None


def first_seen(g: TemporalGraph) -> dict[str, datetime]:
    seen: dict[str, datetime] = {}
    for rec in g:
        seen.setdefault(rec.source, rec.timestamp)
        seen.setdefault(rec.target, rec.timestamp)
    return seen


def new_unique_users(plan: Sequence[Interval], g: TemporalGraph) -> dict[Interval, int]:
    """Users whose globally first interaction falls in each window."""
    counts = {iv: 0 for iv in plan}
    starts = [iv.start for iv in plan]
    for ts in first_seen(g).values():
        i = bisect.bisect_right(starts, ts) - 1
        if i >= 0 and ts in plan[i]:
            counts[plan[i]] += 1
    return counts


def analyze_window(
    g: TemporalGraph,
    interval: Interval,
    thresholds: RoleThresholds = RoleThresholds(),
    seed_user: str | None = None,
    louvain_seed: int = 0,
    directed_betweenness: bool = False,
    engager_hop: str = "tweet",
    new_users: int = 0,
    parallel: bool = True,
) -> WindowReport:
    w = window(g, interval.start, interval.end)
    d = project(w)
    if not d.nodes:
        return WindowReport(interval)
    metrics = node_metrics(d, directed_betweenness=directed_betweenness, parallel=parallel)
    _, avg_cc = clustering(d)
    part = communities(d, seed=louvain_seed)
    seed = seed_user if seed_user is not None and seed_user in d else None
    roles = classify(d, metrics, thresholds, seed_user=seed, window=interval)
    motifs = find_bridges(w, roles, thresholds, engager_hop=engager_hop)
    roles = roles + bridge_assignments(motifs, metrics, interval)
    ranked = tuple(sorted(metrics.values(), key=lambda m: m.rank))
    return WindowReport(
        interval=interval,
        interaction_count=len(w.interactions),
        node_count=len(d.nodes),
        arc_count=len(d.arcs),
        density=density(d),
        avg_clustering=avg_cc,
        modularity=modularity(d, part),
        community_sizes=tuple(part.sizes()),
        new_unique_users=new_users,
        top_k=ranked[: thresholds.top_k],
        roles=tuple(roles),
        bridges=tuple(motifs),
        nodes=ranked,
    )


def analyze_windows(
    g: TemporalGraph,
    plan: Sequence[Interval],
    thresholds: RoleThresholds = RoleThresholds(),
    seed_user: str | None = None,
    louvain_seed: int = 0,
    directed_betweenness: bool = False,
    engager_hop: str = "tweet",
    workers: int = 1,
) -> list[WindowReport]:
    """One report per window, in plan order.

    With ``workers > 1`` windows run on a thread pool; each window then uses
    the serial betweenness kernel, which gives the same bits as the parallel one.
    """
    plan = list(plan)
    validate_plan(plan)
    if seed_user is not None:
        seed_user = normalize_handle(seed_user)
        if seed_user not in g.nodes:
            raise ConfigError(f"seed user {seed_user!r} never appears in the input")
    fresh = new_unique_users(plan, g)

    def run(iv: Interval, parallel: bool) -> WindowReport:
        return analyze_window(
            g, iv, thresholds, seed_user, louvain_seed, directed_betweenness,
            engager_hop, fresh[iv], parallel=parallel,
        )

    if workers <= 1 or len(plan) <= 1:
        return [run(iv, True) for iv in plan]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda iv: run(iv, False), plan))


@dataclass(frozen=True)
class TrajectoryPoint:
    interval: Interval
    rank: int | None
    betweenness: float
    role: Role | None


@dataclass(frozen=True)
class Trajectory:
    user: str
    points: tuple[TrajectoryPoint, ...]


def trajectory(user: str, reports: Sequence[WindowReport]) -> Trajectory:
    try:
        user = normalize_handle(user)
    except ValueError:
        pass
    points = []
    for rep in reports:
        m = rep.metrics_of(user)
        rank = next((t.rank for t in rep.top_k if t.user == user), None)
        points.append(
            TrajectoryPoint(rep.interval, rank, m.betweenness if m else 0.0, rep.role_of(user))
        )
    return Trajectory(user, tuple(points))


def role_persistence(reports: Iterable[WindowReport]) -> dict[str, list[tuple[Interval, Role]]]:
    out: dict[str, list[tuple[Interval, Role]]] = {}
    for rep in reports:
        for a in rep.roles:
            out.setdefault(a.user, []).append((rep.interval, a.role))
    return out


def role_holders(reports: Iterable[WindowReport]) -> dict[Role, list[str]]:
    """Distinct holders of each role, in order of first appearance."""
    out: dict[Role, list[str]] = {}
    for rep in reports:
        for a in rep.roles:
            holders = out.setdefault(a.role, [])
            if a.user not in holders:
                holders.append(a.user)
    return out
