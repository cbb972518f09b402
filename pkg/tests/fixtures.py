"""Hand-built interaction windows shared by role and acceptance tests."""

from __future__ import annotations

from datetime import timedelta

from centralusers.graph import Interaction, TemporalGraph

from oracles import T0


class Recorder:
    def __init__(self, start=T0):
        self.now = start
        self.records: list[Interaction] = []

    def add(self, src, dst, kind, tid=None):
        self.now += timedelta(seconds=30)
        self.records.append(Interaction.create(src, dst, kind, self.now, tid))

    def graph(self) -> TemporalGraph:
        return TemporalGraph(self.records)


def hub(rec: Recorder, name: str, n_in: int, n_out: int, tid: str):
    """``n_in`` distinct fans point at ``name``; ``name`` points at ``n_out`` fresh leaves."""
    for i in range(n_in):
        kind = "retweet" if i % 2 == 0 else "mention"
        rec.add(f"{name}_fan{i:03d}", name, kind, tid if kind == "retweet" else None)
    for i in range(n_out):
        rec.add(name, f"{name}_leaf{i:03d}", "mention")


def degree_signature_window() -> TemporalGraph:
    """One month with the four degree signatures side by side.

    siasatpk 211/1 posts first, ptiofficial 266/1 and alirazatweets 150/1 are
    two other sinks, sugar9940 0/65 broadcasts to fresh users, and shahwar125
    0/2 points at ptiofficial and alirazatweets only.
    """
    rec = Recorder()
    rec.add("siasatpk", "siasatpk", "tweet", "s0")
    hub(rec, "siasatpk", 211, 1, "s0")
    rec.add("ptiofficial", "ptiofficial", "tweet", "p0")
    hub(rec, "ptiofficial", 265, 1, "p0")
    rec.add("alirazatweets", "alirazatweets", "tweet", "a0")
    hub(rec, "alirazatweets", 149, 1, "a0")
    for i in range(65):
        rec.add("sugar9940", f"reader{i:03d}", "mention")
    rec.add("shahwar125", "ptiofficial", "retweet", "p0")
    rec.add("shahwar125", "alirazatweets", "mention")
    return rec.graph()


def bridge_window(plant=True) -> TemporalGraph:
    """Influencer ``inf`` tweets T1; engager ``eng`` and low-degree ``brg`` both retweet it."""
    rec = Recorder()
    rec.add("src", "src", "tweet", "S")
    hub(rec, "src", 40, 1, "S")
    rec.add("inf", "inf", "tweet", "T1")
    rec.add("inf", "inf", "tweet", "T2")
    hub(rec, "inf", 30, 1, "T2")
    for i in range(30):
        rec.add("eng", f"aud{i:02d}", "mention")
    rec.add("eng", "inf", "retweet", "T1")
    rec.add("brg", "inf", "retweet", "T1" if plant else "T2")
    return rec.graph()
