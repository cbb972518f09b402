"""Temporal interaction multigraph, time windows and the simple digraph projection.

Each record is one directed event between two Twitter users. Original tweets
are stored as a self-loop on the author.
Metrics never see the multigraph directly; they run on the deduplicated
:class:`SimpleDigraph` obtained from :func:`project`.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Mapping


class GraphError(ValueError):
    """A record that violates the interaction invariants."""

    def __init__(self, reason: str, line: str | None = None):
        self.reason = reason
        self.line = line
        super().__init__(reason if line is None else f"{reason}: {line}")


class IntervalError(ValueError):
    pass


class Kind(str, Enum):
    TWEET = "tweet"
    RETWEET = "retweet"
    MENTION = "mention"
    REPLY = "reply"

    @classmethod
    def parse(cls, token: str) -> "Kind":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise GraphError(f"unknown kind {token!r}") from None


def normalize_handle(raw: str) -> str:
    """Case-normalize a handle; a leading ``@`` is dropped."""
    handle = raw.strip()
    if handle.startswith("@"):
        handle = handle[1:].strip()
    handle = handle.lower()
    if not handle:
        raise GraphError(f"empty user handle {raw!r}")
    return handle


def to_utc(ts: datetime) -> datetime:
    """UTC, second resolution. Naive datetimes are taken as UTC."""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    else:
        ts = ts.astimezone(timezone.utc)
    return ts.replace(microsecond=0)


@dataclass(frozen=True, slots=True)
class Interaction:
    source: str
    target: str
    kind: Kind
    timestamp: datetime
    tweet_id: str | None = None

    @classmethod
    def create(
        cls,
        source: str,
        target: str,
        kind: Kind | str,
        timestamp: datetime,
        tweet_id: str | None = None,
        *,
        strict: bool = False,
    ) -> "Interaction":
        """Normalize fields and check the record invariants."""
        kind = kind if isinstance(kind, Kind) else Kind.parse(kind)
        if tweet_id is not None:
            tweet_id = tweet_id.strip() or None
        rec = cls(normalize_handle(source), normalize_handle(target), kind, to_utc(timestamp), tweet_id)
        rec.validate(strict=strict)
        return rec

    def validate(self, strict: bool = False) -> None:
        if self.kind is Kind.TWEET and self.source != self.target:
            raise GraphError("tweet must be a self-loop", self.describe())
        if self.kind is not Kind.TWEET and self.source == self.target:
            raise GraphError(f"{self.kind.value} cannot be a self-loop", self.describe())
        if strict and self.kind is Kind.RETWEET and not self.tweet_id:
            raise GraphError("retweet without tweet_id", self.describe())

    @property
    def motif_eligible(self) -> bool:
        return self.kind is Kind.RETWEET and bool(self.tweet_id)

    def describe(self) -> str:
        tid = self.tweet_id or ""
        return f"{self.source},{self.target},{self.kind.value},{tid},{self.timestamp.isoformat()}"


class TemporalGraph:
    """Append-only multiset of interactions kept in timestamp order.

    Ties keep insertion order. Construction is single-writer; once analysis
    starts the graph is only read.
    """

    def __init__(self, interactions: Iterable[Interaction] = (), *, strict: bool = False):
        self.strict = strict
        self._items: list[Interaction] = []
        self._times: list[datetime] = []
        self._degree: dict[str, int] = defaultdict(int)
        self.spellings: dict[str, set[str]] = defaultdict(set)
        recs = list(interactions)
        for rec in recs:
            rec.validate(strict)
        recs.sort(key=lambda r: r.timestamp)
        for rec in recs:
            self._items.append(rec)
            self._times.append(rec.timestamp)
            self._touch(rec)

    def _touch(self, rec: Interaction) -> None:
        self._degree[rec.source] += 1
        if rec.target != rec.source:
            self._degree[rec.target] += 1

    def add_interaction(self, rec: Interaction) -> "TemporalGraph":
        rec.validate(self.strict)
        pos = bisect.bisect_right(self._times, rec.timestamp)
        self._items.insert(pos, rec)
        self._times.insert(pos, rec.timestamp)
        self._touch(rec)
        return self

    def record_spelling(self, raw: str) -> None:
        try:
            self.spellings[normalize_handle(raw)].add(raw.strip())
        except GraphError:
            pass

    def collisions(self) -> dict[str, list[str]]:
        """Handles that were merged from more than one raw spelling."""
        return {h: sorted(s) for h, s in sorted(self.spellings.items()) if len(s) > 1}

    @property
    def interactions(self) -> tuple[Interaction, ...]:
        return tuple(self._items)

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self._degree)

    @property
    def span(self) -> tuple[datetime, datetime] | None:
        if not self._items:
            return None
        return self._times[0], self._times[-1]

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return self._items == other._items

    def window(self, start: datetime, end: datetime) -> "GraphWindow":
        return window(self, start, end)


@dataclass(frozen=True)
class Interval:
    start: datetime
    end: datetime

    def __post_init__(self):
        if not self.start < self.end:
            raise IntervalError(f"empty interval [{self.start}, {self.end})")

    def __contains__(self, ts: datetime) -> bool:
        return self.start <= ts < self.end

    @property
    def label(self) -> str:
        s, e = self.start, self.end
        if (s.day, s.hour, s.minute, s.second) == (1, 0, 0, 0) and e == next_month(s):
            return f"{s:%Y-%m}"
        return f"{s:%Y%m%dT%H%M%S}_{e:%Y%m%dT%H%M%S}"

    def as_dict(self) -> dict[str, str]:
        return {"label": self.label, "start": iso(self.start), "end": iso(self.end)}


def iso(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def next_month(ts: datetime) -> datetime:
    if ts.month == 12:
        return ts.replace(year=ts.year + 1, month=1, day=1, hour=0, minute=0, second=0, microsecond=0)
    return ts.replace(month=ts.month + 1, day=1, hour=0, minute=0, second=0, microsecond=0)


@dataclass(frozen=True)
class GraphWindow:
    parent: TemporalGraph = field(repr=False, compare=False)
    interval: Interval
    interactions: tuple[Interaction, ...]

    @property
    def start(self) -> datetime:
        return self.interval.start

    @property
    def end(self) -> datetime:
        return self.interval.end


def window(g: TemporalGraph, start: datetime, end: datetime) -> GraphWindow:
    interval = Interval(to_utc(start), to_utc(end))
    lo = bisect.bisect_left(g._times, interval.start)
    hi = bisect.bisect_left(g._times, interval.end)
    return GraphWindow(g, interval, tuple(g._items[lo:hi]))


@dataclass(frozen=True)
class SimpleDigraph:
    """Deduplicated directed graph of one window.

    ``nodes`` is sorted; ``arcs`` holds unique (u, v) pairs with u != v in
    sorted order; ``weight`` keeps the raw interaction count per arc for
    diagnostics only.
    """

    nodes: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    origin_index: Mapping[str, datetime] = field(default_factory=dict)
    weight: Mapping[tuple[str, str], int] = field(default_factory=dict, compare=False)

    @property
    def index(self) -> dict[str, int]:
        return {u: i for i, u in enumerate(self.nodes)}

    def successors(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {u: [] for u in self.nodes}
        for u, v in self.arcs:
            out[u].append(v)
        return out

    def __contains__(self, user: str) -> bool:
        i = bisect.bisect_left(self.nodes, user)
        return i < len(self.nodes) and self.nodes[i] == user

    def __len__(self) -> int:
        return len(self.nodes)


def project(w: GraphWindow | Iterable[Interaction]) -> SimpleDigraph:
    records = w.interactions if isinstance(w, GraphWindow) else w
    nodes: set[str] = set()
    weight: dict[tuple[str, str], int] = defaultdict(int)
    origin: dict[str, datetime] = {}
    for rec in records:
        nodes.add(rec.source)
        nodes.add(rec.target)
        if rec.kind is Kind.TWEET:
            seen = origin.get(rec.source)
            if seen is None or rec.timestamp < seen:
                origin[rec.source] = rec.timestamp
        else:
            weight[(rec.source, rec.target)] += 1
    arcs = tuple(sorted(weight))
    return SimpleDigraph(
        tuple(sorted(nodes)),
        arcs,
        dict(sorted(origin.items())),
        {a: weight[a] for a in arcs},
    )


def degrees(d: SimpleDigraph) -> dict[str, tuple[int, int]]:
    """(in, out) counts of unique counterparties for every node."""
    indeg = dict.fromkeys(d.nodes, 0)
    outdeg = dict.fromkeys(d.nodes, 0)
    for u, v in d.arcs:
        outdeg[u] += 1
        indeg[v] += 1
    return {u: (indeg[u], outdeg[u]) for u in d.nodes}
