"""Central-user roles for one window.

Only the top-ranked users by betweenness are considered. Sink-like users
(many incoming links, few outgoing) are the conversation starter and the
influencers; among the rest a user linking several of those hubs with a
small total degree is a network builder, and a user with many more
outgoing than incoming links is an active engager. Information bridges are
found separately by a motif search over retweet records.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .graph import GraphWindow, Interval, Kind, SimpleDigraph, degrees, iso, normalize_handle, project
from .metrics import NodeMetrics, rank_all

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


class Role(str, Enum):
    CONVERSATION_STARTER = "ConversationStarter"
    INFLUENCER = "Influencer"
    ACTIVE_ENGAGER = "ActiveEngager"
    NETWORK_BUILDER = "NetworkBuilder"
    INFORMATION_BRIDGE = "InformationBridge"


@dataclass(frozen=True)
class RoleThresholds:
    top_k: int = 10
    sink_out_max: int = 25
    engager_in_max: int = 2
    builder_degree_max: int = 25
    min_influencers_linked: int = 2
    sink_in_min_quantile: float = 0.5

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.type == "int" and (not isinstance(value, int) or value < 0):
                raise ConfigError(f"{f.name} must be a non-negative integer, got {value!r}")
        if self.top_k < 1:
            raise ConfigError("top_k must be at least 1")
        if not 0.0 < self.sink_in_min_quantile <= 1.0:
            raise ConfigError("sink_in_min_quantile must lie in (0, 1]")

    @classmethod
    def from_mapping(cls, values: Mapping[str, object]) -> "RoleThresholds":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise ConfigError(f"unknown threshold {key!r}")
            try:
                kwargs[key] = float(raw) if known[key].type == "float" else int(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
        return cls(**kwargs)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class RoleAssignment:
    user: str
    role: Role
    rank: int
    window: Interval | None = None
    evidence: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "user": self.user,
            "role": self.role.value,
            "rank": self.rank,
            "evidence": list(self.evidence),
        }


@dataclass(frozen=True, order=True)
class BridgeMotif:
    bridge: str
    influencer: str
    engager: str
    tweet_id: str

    def as_dict(self) -> dict:
        return {
            "bridge": self.bridge,
            "influencer": self.influencer,
            "engager": self.engager,
            "tweet_id": self.tweet_id,
        }


def nearest_rank_quantile(values: Sequence[int], q: float) -> int:
    """Smallest value with at least a fraction ``q`` of the sample at or below it."""
    ordered = sorted(values)
    pos = max(1, math.ceil(q * len(ordered) - 1e-12))
    return ordered[pos - 1]


def central_users(metrics: Mapping[str, NodeMetrics], top_k: int) -> list[NodeMetrics]:
    """Top-k by betweenness rank, restricted to users on at least one shortest path."""
    ranked = rank_all(metrics.values())
    return [m for m in ranked[:top_k] if m.betweenness > 0]


def classify(
    d: SimpleDigraph,
    metrics: Mapping[str, NodeMetrics],
    thresholds: RoleThresholds = RoleThresholds(),
    seed_user: str | None = None,
    window: Interval | None = None,
) -> list[RoleAssignment]:
    missing = [u for u in d.nodes if u not in metrics]
    if missing:
        raise ValueError(f"metrics missing for {len(missing)} node(s), e.g. {missing[0]!r}")
    if seed_user is not None:
        seed_user = normalize_handle(seed_user)
        if seed_user not in d:
            raise ConfigError(f"seed user {seed_user!r} is not in the graph")

    top = central_users(metrics, thresholds.top_k)
    if not top:
        return []
    rank = {m.user: m.rank for m in top}
    in_cut = nearest_rank_quantile([m.in_degree for m in top], thresholds.sink_in_min_quantile)
    sink = [
        m for m in top if m.in_degree >= in_cut and m.out_degree <= thresholds.sink_out_max
    ]
    sink_users = {m.user for m in sink}

    starter: str | None = None
    if seed_user is not None:
        if seed_user in sink_users:
            starter = seed_user
        else:
            log.warning("seed user %s is not a sink-like central user; using earliest origin", seed_user)
    if starter is None:
        with_origin = [m for m in sink if m.user in d.origin_index]
        if with_origin:
            starter = min(with_origin, key=lambda m: (d.origin_index[m.user], rank[m.user])).user

    hubs = {m.user for m in sink}
    succ = d.successors()
    out: list[RoleAssignment] = []

    def emit(m: NodeMetrics, role: Role, *facts: str) -> None:
        base = (f"in_degree={m.in_degree}", f"out_degree={m.out_degree}", f"betweenness={m.betweenness:.6f}")
        out.append(RoleAssignment(m.user, role, rank[m.user], window, base + facts))

    for m in top:
        if m.user == starter:
            how = "seed_user" if m.user == seed_user else f"earliest_origin={iso(d.origin_index[m.user])}"
            emit(m, Role.CONVERSATION_STARTER, f"in_degree>={in_cut}", how)
        elif m.user in sink_users:
            emit(m, Role.INFLUENCER, f"in_degree>={in_cut}", f"out_degree<={thresholds.sink_out_max}")
        else:
            linked = sorted(set(succ[m.user]) & hubs)
            if (
                m.in_degree + m.out_degree <= thresholds.builder_degree_max
                and len(linked) >= thresholds.min_influencers_linked
            ):
                emit(m, Role.NETWORK_BUILDER, "linked=" + "|".join(linked))
            elif m.in_degree <= thresholds.engager_in_max and m.out_degree > m.in_degree:
                emit(m, Role.ACTIVE_ENGAGER, f"in_degree<={thresholds.engager_in_max}", "out_degree>in_degree")
    return out


def find_bridges(
    w: GraphWindow | Iterable,
    assignments: Iterable[RoleAssignment],
    thresholds: RoleThresholds = RoleThresholds(),
    engager_hop: str = "tweet",
) -> list[BridgeMotif]:
    """All (bridge, influencer, engager, tweet) motifs in a window.

    A low-degree user without a role retweets tweet T of an influencer and an
    active engager retweets the same T. With ``engager_hop="arc"`` the second
    condition is replaced by an engager -> bridge link instead.
    """
    if engager_hop not in ("tweet", "arc"):
        raise ConfigError(f"engager_hop must be 'tweet' or 'arc', not {engager_hop!r}")
    records = w.interactions if isinstance(w, GraphWindow) else tuple(w)
    deg = degrees(project(records))
    role_of = {a.user: a.role for a in assignments}
    influencers = {u for u, r in role_of.items() if r is Role.INFLUENCER}
    engagers = {u for u, r in role_of.items() if r is Role.ACTIVE_ENGAGER}
    if not influencers or not engagers:
        return []

    def low_degree(u: str) -> bool:
        if role_of.get(u, Role.INFORMATION_BRIDGE) is not Role.INFORMATION_BRIDGE:
            return False
        i, o = deg[u]
        return i + o <= thresholds.builder_degree_max

    engager_rt: dict[tuple[str, str], set[str]] = defaultdict(set)
    engager_arcs: dict[str, set[str]] = defaultdict(set)
    for r in records:
        if r.source not in engagers or r.kind is Kind.TWEET:
            continue
        engager_arcs[r.target].add(r.source)
        if r.motif_eligible:
            engager_rt[(r.target, r.tweet_id)].add(r.source)

    found: set[BridgeMotif] = set()
    for r in records:
        if not r.motif_eligible or r.target not in influencers or not low_degree(r.source):
            continue
        if engager_hop == "tweet":
            candidates = engager_rt.get((r.target, r.tweet_id), ())
        else:
            candidates = engager_arcs.get(r.source, ())
        for a in candidates:
            if a != r.source:
                found.add(BridgeMotif(r.source, r.target, a, r.tweet_id))
    return sorted(found)


def bridge_assignments(
    motifs: Iterable[BridgeMotif],
    metrics: Mapping[str, NodeMetrics],
    window: Interval | None = None,
) -> list[RoleAssignment]:
    """One InformationBridge assignment per distinct bridge user."""
    by_user: dict[str, list[BridgeMotif]] = defaultdict(list)
    for m in motifs:
        by_user[m.bridge].append(m)
    out = []
    for user in sorted(by_user, key=lambda u: metrics[u].rank):
        nm = metrics[user]
        facts = [f"in_degree={nm.in_degree}", f"out_degree={nm.out_degree}"]
        facts += [f"motif={m.influencer}|{m.engager}|{m.tweet_id}" for m in sorted(by_user[user])]
        out.append(RoleAssignment(user, Role.INFORMATION_BRIDGE, nm.rank, window, tuple(facts)))
    return out
