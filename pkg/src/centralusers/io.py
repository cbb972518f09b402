"""CSV ingest and GEXF / DOT / JSON / CSV output.

Input is one interaction per row with the header
``source,target,kind,tweet_id,timestamp`` (any column order, extra columns
ignored, ``tweet_id`` optional). Original tweets are self-loops with
``kind=tweet``.
"""

from __future__ import annotations

import csv
import io
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime
from typing import IO, Iterable, Mapping, Sequence

from .graph import GraphError, Interaction, Interval, SimpleDigraph, TemporalGraph, iso
from .metrics import NodeMetrics
from .roles import BridgeMotif, Role, RoleAssignment
from .temporal import Trajectory, WindowReport

COLUMNS = ("source", "target", "kind", "tweet_id", "timestamp")
REQUIRED = ("source", "target", "kind", "timestamp")
TOPK_COLUMNS = ("user", "in_degree", "out_degree", "betweenness", "rank", "role")
TRAJECTORY_COLUMNS = ("interval", "rank", "betweenness", "role")


class IngestError(ValueError):
    def __init__(self, line: int, reason: str, text: str = ""):
        self.line = line
        self.reason = reason
        self.text = text
        super().__init__(f"line {line}: {reason}" + (f" [{text}]" if text else ""))


@dataclass(frozen=True)
class Diagnostic:
    line: int
    reason: str
    text: str = ""
    level: str = "error"

    def __str__(self) -> str:
        return f"{self.level}: line {self.line}: {self.reason}" + (f" [{self.text}]" if self.text else "")


def parse_timestamp(text: str) -> tuple[datetime, bool]:
    """Parse ISO-8601 / RFC 3339 text. Returns (value, had_timezone)."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(raw)
    except ValueError:
        raise GraphError(f"bad timestamp {text!r}") from None
    return ts, ts.tzinfo is not None


def parse_csv(
    stream: IO[str] | str,
    delimiter: str = ",",
    header: bool = True,
    lenient: bool = True,
) -> tuple[TemporalGraph, list[Diagnostic]]:
    """Read interactions into a :class:`TemporalGraph`.

    Lenient mode skips bad rows and reports each as an ``error`` diagnostic;
    strict mode raises :class:`IngestError` on the first bad row and also
    rejects retweets without a tweet id. Timestamps lacking a timezone are
    read as UTC with a ``warning`` diagnostic in either mode.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream, delimiter=delimiter)
    diags: list[Diagnostic] = []
    if header:
        try:
            head = next(reader)
        except StopIteration:
            return TemporalGraph(strict=not lenient), diags
        names = [h.strip().lower() for h in head]
        absent = [c for c in REQUIRED if c not in names]
        if absent:
            raise IngestError(reader.line_num, f"missing column(s): {', '.join(absent)}", delimiter.join(head))
        pos = {c: names.index(c) for c in COLUMNS if c in names}
    else:
        pos = {c: i for i, c in enumerate(COLUMNS)}

    records: list[Interaction] = []
    spellings: list[str] = []
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        line = reader.line_num
        text = delimiter.join(row)
        try:
            if len(row) <= max(pos[c] for c in REQUIRED):
                raise GraphError("too few fields")
            tid = row[pos["tweet_id"]] if "tweet_id" in pos and pos["tweet_id"] < len(row) else None
            ts, has_tz = parse_timestamp(row[pos["timestamp"]])
            rec = Interaction.create(
                row[pos["source"]], row[pos["target"]], row[pos["kind"]], ts, tid, strict=not lenient
            )
        except GraphError as exc:
            if not lenient:
                raise IngestError(line, exc.reason, text) from None
            diags.append(Diagnostic(line, exc.reason, text))
            continue
        if not has_tz:
            diags.append(Diagnostic(line, "timestamp without timezone, read as UTC", text, "warning"))
        records.append(rec)
        spellings += (row[pos["source"]], row[pos["target"]])
    g = TemporalGraph(records, strict=not lenient)
    for raw in spellings:
        g.record_spelling(raw)
    return g, diags


def serialize_csv(g: TemporalGraph | Iterable[Interaction]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in g:
        w.writerow((r.source, r.target, r.kind.value, r.tweet_id or "", iso(r.timestamp)))
    return buf.getvalue()


def _role_map(assignments: Iterable[RoleAssignment]) -> dict[str, str]:
    return {a.user: a.role.value for a in assignments}


def export_gexf(
    d: SimpleDigraph,
    metrics: Mapping[str, NodeMetrics],
    assignments: Iterable[RoleAssignment] = (),
) -> str:
    """GEXF 1.3 document for a window's digraph with per-node metric attributes."""
    roles = _role_map(assignments)
    ns = "http://gexf.net/1.3"
    root = ET.Element(
        "gexf",
        {
            "xmlns": ns,
            "xmlns:xsi": "http://www.w3.org/2001/XMLSchema-instance",
            "xsi:schemaLocation": f"{ns} {ns}/gexf.xsd",
            "version": "1.3",
        },
    )
    meta = ET.SubElement(root, "meta")
    ET.SubElement(meta, "creator").text = "centralusers"
    graph = ET.SubElement(root, "graph", {"defaultedgetype": "directed", "mode": "static"})
    attrs = ET.SubElement(graph, "attributes", {"class": "node", "mode": "static"})
    spec = (("in_degree", "integer"), ("out_degree", "integer"), ("betweenness", "double"), ("role", "string"))
    for i, (title, kind) in enumerate(spec):
        ET.SubElement(attrs, "attribute", {"id": str(i), "title": title, "type": kind})
    nodes = ET.SubElement(graph, "nodes")
    for u in d.nodes:
        m = metrics[u]
        node = ET.SubElement(nodes, "node", {"id": u, "label": u})
        values = ET.SubElement(node, "attvalues")
        for i, value in enumerate((str(m.in_degree), str(m.out_degree), repr(float(m.betweenness)), roles.get(u, ""))):
            ET.SubElement(values, "attvalue", {"for": str(i), "value": value})
    edges = ET.SubElement(graph, "edges")
    for i, (u, v) in enumerate(d.arcs):
        ET.SubElement(edges, "edge", {"id": str(i), "source": u, "target": v, "weight": f"{d.weight.get((u, v), 1)}.0"})
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def dot_id(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def export_dot(d: SimpleDigraph, assignments: Iterable[RoleAssignment] = (), name: str = "interactions") -> str:
    roles = _role_map(assignments)
    lines = [f"digraph {dot_id(name)} {{"]
    for u in d.nodes:
        if u in roles:
            lines.append(f"  {dot_id(u)} [role={dot_id(roles[u])}];")
        else:
            lines.append(f"  {dot_id(u)};")
    for u, v in d.arcs:
        lines.append(f"  {dot_id(u)} -> {dot_id(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- report JSON -------------------------------------------------------------


def _fmt_real(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _emit(obj, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_real(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(k)}: {_emit(v, indent + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (int, str)) and not isinstance(x, bool) for x in obj):
            return "[" + ", ".join(_emit(x, 0) for x in obj) + "]"
        body = ",\n".join(inner + _emit(x, indent + 1) for x in obj)
        return "[\n" + body + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_to_dict(r: WindowReport) -> dict:
    return {
        "interval": r.interval.as_dict(),
        "interaction_count": r.interaction_count,
        "node_count": r.node_count,
        "arc_count": r.arc_count,
        "density": float(r.density),
        "avg_clustering": float(r.avg_clustering),
        "modularity": float(r.modularity),
        "communities": {"count": r.community_count, "sizes": list(r.community_sizes)},
        "new_unique_users": r.new_unique_users,
        "top_k": [m.as_dict() for m in r.top_k],
        "roles": [a.as_dict() for a in r.roles],
        "bridges": [b.as_dict() for b in r.bridges],
        "nodes": [m.as_dict() for m in r.nodes],
    }


def write_report_json(reports: Sequence[WindowReport]) -> str:
    """Reports as JSON with a fixed key order and reals at six decimals."""
    return _emit([report_to_dict(r) for r in reports], 0) + "\n"


def _parse_iso(text: str) -> datetime:
    return parse_timestamp(text)[0]


def report_from_dict(obj: Mapping) -> WindowReport:
    iv = Interval(_parse_iso(obj["interval"]["start"]), _parse_iso(obj["interval"]["end"]))

    def nm(x):
        return NodeMetrics(
            x["user"], x["in_degree"], x["out_degree"], float(x["betweenness"]),
            x["rank"], x.get("in_weight", 0), x.get("out_weight", 0),
        )

    return WindowReport(
        interval=iv,
        interaction_count=obj["interaction_count"],
        node_count=obj["node_count"],
        arc_count=obj["arc_count"],
        density=float(obj["density"]),
        avg_clustering=float(obj["avg_clustering"]),
        modularity=float(obj["modularity"]),
        community_sizes=tuple(obj["communities"]["sizes"]),
        new_unique_users=obj["new_unique_users"],
        top_k=tuple(nm(x) for x in obj["top_k"]),
        roles=tuple(
            RoleAssignment(a["user"], Role(a["role"]), a["rank"], iv, tuple(a["evidence"]))
            for a in obj["roles"]
        ),
        bridges=tuple(BridgeMotif(**b) for b in obj["bridges"]),
        nodes=tuple(nm(x) for x in obj.get("nodes", ())),
    )


def read_report_json(text: str) -> list[WindowReport]:
    return [report_from_dict(o) for o in json.loads(text)]


# --- tables ------------------------------------------------------------------


def topk_csv(report: WindowReport) -> str:
    roles = _role_map(report.roles)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TOPK_COLUMNS)
    for m in report.top_k:
        w.writerow((m.user, m.in_degree, m.out_degree, f"{m.betweenness:.3f}", m.rank, roles.get(m.user, "")))
    return buf.getvalue()


def trajectory_csv(t: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for p in t.points:
        w.writerow((
            p.interval.label,
            "" if p.rank is None else p.rank,
            _fmt_real(p.betweenness),
            p.role.value if p.role else "",
        ))
    return buf.getvalue()
