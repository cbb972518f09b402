import random
from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centralusers.graph import (
    GraphError,
    Interaction,
    IntervalError,
    Kind,
    TemporalGraph,
    degrees,
    normalize_handle,
    project,
    window,
)
from centralusers.temporal import calendar_months

from oracles import T0, brute_degrees, random_digraph, random_stream


def t(sec):
    return T0 + timedelta(seconds=sec)


def rec(s, d, kind, sec, tid=None):
    return Interaction.create(s, d, kind, t(sec), tid)


def test_smallest_graph():
    g = TemporalGraph().add_interaction(rec("a", "a", "tweet", 0))
    assert len(g) == 1
    assert g.nodes == {"a"}
    assert g.span == (t(0), t(0))


def test_retweet_adds_node():
    g = TemporalGraph([rec("a", "a", "tweet", 0)])
    g.add_interaction(rec("b", "a", "retweet", 1, "T1"))
    assert g.nodes == {"a", "b"}
    assert len(g) == 2


def test_tweet_must_be_self_loop():
    with pytest.raises(GraphError, match="self-loop"):
        rec("a", "b", "tweet", 0)


def test_non_tweet_self_loop_rejected():
    with pytest.raises(GraphError):
        rec("a", "a", Kind.MENTION, 0)


def test_retweet_without_id_strict_only():
    r = Interaction.create("a", "b", "retweet", t(0))
    assert not r.motif_eligible
    TemporalGraph([r])  # lenient by default
    with pytest.raises(GraphError, match="tweet_id"):
        TemporalGraph(strict=True).add_interaction(r)


def test_error_carries_record_line():
    r = Interaction("a", "b", Kind.TWEET, t(0))
    with pytest.raises(GraphError) as exc:
        TemporalGraph().add_interaction(r)
    assert exc.value.line.startswith("a,b,tweet")


def test_empty_graph_has_no_span():
    assert TemporalGraph().span is None


@pytest.mark.parametrize("raw", ["Alice", " @ALICE ", "alice"])
def test_handle_normalization(raw):
    assert normalize_handle(raw) == "alice"
    assert normalize_handle(normalize_handle(raw)) == normalize_handle(raw)


@given(st.text(min_size=1).filter(lambda s: s.strip().lstrip("@").strip()))
def test_normalization_idempotent(raw):
    once = normalize_handle(raw)
    assert normalize_handle(once) == once


def test_empty_handle_rejected():
    with pytest.raises(GraphError):
        normalize_handle("  ")


def test_insert_keeps_time_order_and_ties_stable():
    g = TemporalGraph()
    g.add_interaction(rec("a", "b", "mention", 5))
    g.add_interaction(rec("c", "d", "mention", 1))
    g.add_interaction(rec("e", "f", "mention", 5))
    assert [r.source for r in g] == ["c", "a", "e"]


def test_window_half_open():
    g = TemporalGraph([rec("a", "b", "mention", s) for s in (1, 2, 3)])
    w = window(g, t(1), t(3))
    assert [r.timestamp for r in w.interactions] == [t(1), t(2)]


def test_window_outside_data_is_empty():
    g = TemporalGraph([rec("a", "b", "mention", s) for s in (1, 2, 3)])
    assert window(g, t(5), t(9)).interactions == ()


def test_window_rejects_empty_interval():
    g = TemporalGraph()
    with pytest.raises(IntervalError):
        window(g, t(3), t(3))


def test_monthly_partition_sums_to_total():
    recs = random_stream(random.Random(3), n=600, days=183)
    g = TemporalGraph(recs)
    months = calendar_months(*g.span)
    assert len(months) == 6
    parts = [window(g, iv.start, iv.end) for iv in months]
    assert sum(len(w.interactions) for w in parts) == len(g)
    joined = [r for w in parts for r in w.interactions]
    assert joined == list(g)
    for w in parts:
        assert all(w.start <= r.timestamp < w.end for r in w.interactions)


def test_project_dedupes_parallel_arcs():
    recs = [rec("a", "b", "mention", 1), rec("a", "b", "mention", 2), rec("a", "b", "retweet", 3, "x")]
    d = project(recs)
    assert d.arcs == (("a", "b"),)
    assert d.weight[("a", "b")] == 3


def test_project_tweet_goes_to_origin_index():
    d = project([rec("a", "a", "tweet", 7), rec("a", "a", "tweet", 4)])
    assert d.nodes == ("a",)
    assert d.arcs == ()
    assert d.origin_index == {"a": t(4)}


def test_project_matches_set_comprehension():
    recs = random_stream(random.Random(11), n=200)
    d = project(recs)
    expected = {(r.source, r.target) for r in recs if r.kind is not Kind.TWEET}
    assert set(d.arcs) == expected
    assert set(d.nodes) == {r.source for r in recs} | {r.target for r in recs}
    assert len(d.arcs) <= sum(1 for r in recs if r.kind is not Kind.TWEET)
    assert all(u != v for u, v in d.arcs)


def test_degrees_star():
    recs = [rec(x, "a", "mention", i) for i, x in enumerate("bcd")]
    deg = degrees(project(recs))
    assert deg["a"] == (3, 0)
    assert deg["b"] == (0, 1)


def test_degrees_conversation_starter_signature():
    recs = [rec(f"fan{i:03d}", "siasatpk", "retweet", i, "s1") for i in range(211)]
    recs += [rec(f"fan{i:03d}", "siasatpk", "mention", 500 + i) for i in range(0, 211, 3)]
    recs.append(rec("siasatpk", "dawn_com", "mention", 999))
    deg = degrees(project(recs))
    assert deg["siasatpk"] == (211, 1)


def test_degrees_match_adjacency_scan():
    nodes, arcs = random_digraph(30, 0.15, random.Random(5))
    recs = [rec(u, v, "mention", i) for i, (u, v) in enumerate(arcs)]
    recs += [rec(u, u, "tweet", 0) for u in nodes]
    deg = degrees(project(recs))
    assert deg == brute_degrees(nodes, arcs)


stream_seeds = st.integers(min_value=0, max_value=10_000)


@settings(max_examples=30, deadline=None)
@given(stream_seeds)
def test_degree_arc_consistency(seed):
    d = project(random_stream(random.Random(seed), n=120))
    deg = degrees(d)
    assert sum(i for i, _ in deg.values()) == sum(o for _, o in deg.values()) == len(d.arcs)


@settings(max_examples=30, deadline=None)
@given(stream_seeds, st.randoms(use_true_random=False))
def test_ingest_order_independence(seed, shuffler):
    recs = random_stream(random.Random(seed), n=150)
    shuffled = recs[:]
    shuffler.shuffle(shuffled)
    a, b = TemporalGraph(recs), TemporalGraph(shuffled)
    for iv in calendar_months(*a.span):
        assert project(window(a, iv.start, iv.end)) == project(window(b, iv.start, iv.end))


@settings(max_examples=30, deadline=None)
@given(stream_seeds)
def test_projection_idempotent_under_readding(seed):
    recs = random_stream(random.Random(seed), n=100)
    g = TemporalGraph(recs)
    lo, hi = g.span
    w = window(g, lo, hi + timedelta(seconds=1))
    doubled = TemporalGraph(list(w.interactions) + list(w.interactions))
    w2 = window(doubled, lo, hi + timedelta(seconds=1))
    assert project(w) == project(w2)


@settings(max_examples=30, deadline=None)
@given(stream_seeds, st.lists(st.integers(1, 179 * 86400), max_size=6))
def test_any_partition_preserves_count(seed, cuts):
    g = TemporalGraph(random_stream(random.Random(seed), n=150))
    lo, hi = g.span
    edges = sorted({lo, *(T0 + timedelta(seconds=c) for c in cuts if lo < T0 + timedelta(seconds=c) <= hi), hi + timedelta(seconds=1)})
    total = sum(len(window(g, a, b).interactions) for a, b in zip(edges, edges[1:]))
    assert total == len(g)


def test_collision_report():
    g = TemporalGraph()
    for raw in ("Alice", "alice", "ALICE", "bob"):
        g.record_spelling(raw)
    assert g.collisions() == {"alice": ["ALICE", "Alice", "alice"]}


def test_timestamps_normalized_to_utc_seconds():
    plus5 = timezone(timedelta(hours=5))
    r = Interaction.create("a", "b", "mention", datetime(2017, 3, 1, 5, 0, 0, 123456, tzinfo=plus5))
    assert r.timestamp == datetime(2017, 3, 1, tzinfo=timezone.utc)
