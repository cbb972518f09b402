"""Synthetic interaction streams.

:func:`generate` plants one user per role in a hub-and-spoke network and
returns the labels, for end-to-end checks of the classifier and the bridge
search. :func:`scale_stream` produces an unlabeled heavy-tailed stream of a
given size for timing runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

import numpy as np

from .graph import Interaction, Kind, TemporalGraph, next_month
from .roles import ConfigError, Role

START = datetime(2017, 3, 1, tzinfo=timezone.utc)

STARTER = "starter"
ENGAGER = "engager"
BUILDER = "builder"
BRIDGE = "bridge"


@dataclass(frozen=True)
class PlantSpec:
    n_isolates: int = 50
    n_influencers: int = 3
    engager_out: int = 20
    builder_links: int = 2
    plant_bridge: bool = True
    months: int = 3
    seed: int = 7
    # 0-based month index from which the starter is silent
    starter_dropout_month: int | None = None
    start: datetime = START

    def validate(self) -> None:
        counts = ("n_isolates", "n_influencers", "engager_out", "builder_links")
        for name in counts:
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.months < 1:
            raise ConfigError("months must be >= 1")
        if self.builder_links > self.n_influencers + 1:
            raise ConfigError("builder_links cannot exceed n_influencers + 1")
        if self.starter_dropout_month is not None and self.starter_dropout_month < 0:
            raise ConfigError("starter_dropout_month must be >= 0")
        if self.plant_bridge and (self.n_influencers < 1 or self.engager_out < 1):
            raise ConfigError("a bridge needs at least one influencer and engager_out >= 1")


def influencer_name(i: int) -> str:
    return f"influencer_{i + 1:02d}"


def month_starts(start: datetime, months: int) -> list[datetime]:
    out = [start]
    for _ in range(months):
        out.append(next_month(out[-1]))
    return out


def generate(spec: PlantSpec = PlantSpec()) -> tuple[TemporalGraph, dict[str, Role]]:
    spec.validate()
    rng = random.Random(spec.seed)
    influencers = [influencer_name(i) for i in range(spec.n_influencers)]
    isolates = [f"user_{i + 1:04d}" for i in range(spec.n_isolates)]
    audience = [f"audience_{i + 1:03d}" for i in range(max(spec.engager_out - 1, 0))]
    recs: list[Interaction] = []

    def add(src, dst, kind, ts, tid=None):
        recs.append(Interaction(src, dst, kind, ts, tid))

    bounds = month_starts(spec.start, spec.months)
    for m in range(spec.months):
        t0 = bounds[m]
        span = (bounds[m + 1] - t0).total_seconds()

        def at(lo: float, hi: float) -> datetime:
            # a random second inside [lo, hi) fractions of the month
            return t0 + timedelta(seconds=int(rng.uniform(lo, hi) * span))

        starter_on = spec.starter_dropout_month is None or m < spec.starter_dropout_month
        hubs = ([STARTER] if starter_on else []) + influencers
        starter_tweets = []
        if starter_on:
            for j in range(3):
                tid = f"s{m}_{j}"
                starter_tweets.append(tid)
                add(STARTER, STARTER, Kind.TWEET, t0 + timedelta(hours=1 + j), tid)

        # every hub gets at least two isolates, the rest pick a hub at random
        order = isolates[:]
        rng.shuffle(order)
        for i, user in enumerate(order):
            if not hubs:
                break
            hub = hubs[i % len(hubs)] if i < 2 * len(hubs) else rng.choice(hubs)
            for _ in range(rng.randint(1, 3)):
                ts = at(0.05, 0.95)
                if hub == STARTER:
                    add(user, hub, Kind.RETWEET, ts, rng.choice(starter_tweets))
                else:
                    add(user, hub, Kind.MENTION, ts)

        if spec.engager_out:
            for user in audience:
                add(ENGAGER, user, Kind.MENTION, at(0.1, 0.9))
            if influencers:
                target = rng.choice(influencers)
                if spec.plant_bridge:
                    tid = f"{target}_{m}_bridge"
                    add(BRIDGE, target, Kind.RETWEET, at(0.2, 0.4), tid)
                    add(ENGAGER, target, Kind.RETWEET, at(0.5, 0.7), tid)
                else:
                    add(ENGAGER, target, Kind.MENTION, at(0.5, 0.7))

        linked = rng.sample(influencers, min(spec.builder_links, len(influencers)))
        if spec.builder_links > len(influencers) and starter_on:
            linked.append(STARTER)
        for hub in linked:
            add(BUILDER, hub, Kind.MENTION, at(0.1, 0.9))

    truth = {STARTER: Role.CONVERSATION_STARTER}
    truth.update({u: Role.INFLUENCER for u in influencers})
    if spec.engager_out:
        truth[ENGAGER] = Role.ACTIVE_ENGAGER
    if spec.builder_links:
        truth[BUILDER] = Role.NETWORK_BUILDER
    if spec.plant_bridge:
        truth[BRIDGE] = Role.INFORMATION_BRIDGE
    return TemporalGraph(recs), truth


def scale_stream(
    n_users: int = 10612,
    n_interactions: int = 24623,
    months: int = 6,
    seed: int = 0,
    start: datetime = START,
    tweet_share: float = 0.15,
    zipf: float = 1.1,
) -> TemporalGraph:
    """Random stream with exactly ``n_users`` users and ``n_interactions`` records.

    Every user posts at least once; targets follow a Zipf-like popularity so a
    few accounts collect most mentions and retweets.
    """
    if n_interactions < n_users:
        raise ConfigError("need at least one interaction per user")
    rng = np.random.default_rng(seed)
    users = [f"u{i:05d}" for i in range(n_users)]
    pop = 1.0 / np.arange(1, n_users + 1) ** zipf
    pop /= pop.sum()
    sources = np.concatenate([rng.permutation(n_users), rng.integers(0, n_users, n_interactions - n_users)])
    targets = rng.choice(n_users, size=n_interactions, p=pop)
    is_tweet = rng.random(n_interactions) < tweet_share
    kinds = rng.integers(0, 3, n_interactions)
    bounds = month_starts(start, months)
    month = rng.integers(0, months, n_interactions)
    frac = rng.random(n_interactions)
    other = (Kind.RETWEET, Kind.MENTION, Kind.REPLY)
    recs = []
    for i in range(n_interactions):
        s, t = int(sources[i]), int(targets[i])
        lo, hi = bounds[month[i]], bounds[month[i] + 1]
        ts = lo + timedelta(seconds=int(frac[i] * (hi - lo).total_seconds()))
        if is_tweet[i] or s == t:
            recs.append(Interaction(users[s], users[s], Kind.TWEET, ts, f"t{i}"))
            continue
        kind = other[kinds[i]]
        tid = f"t{t}_{i % 7}" if kind is Kind.RETWEET else None
        recs.append(Interaction(users[s], users[t], kind, ts, tid))
    return TemporalGraph(recs)
