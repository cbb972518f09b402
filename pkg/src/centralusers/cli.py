"""Command line: ``analyze``, ``trajectory`` and ``synth``.

Exit status 0 on success, 1 when a strict-mode parse fails, 2 on any
configuration problem. Nothing is written until every artifact of a run is
assembled in memory.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import os
import sys
from dataclasses import dataclass, field, replace
from datetime import datetime
from pathlib import Path

from . import io as cio
from .graph import TemporalGraph, project, window
from .roles import ConfigError, RoleThresholds
from .synth import PlantSpec, generate, scale_stream
from .temporal import analyze_windows, make_plan, trajectory

log = logging.getLogger("centralusers")

EXIT_OK, EXIT_PARSE, EXIT_CONFIG = 0, 1, 2

_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


@dataclass
class RunConfig:
    inputs: list[str] = field(default_factory=list)
    window: str = "calendar-month"
    span: tuple[datetime, datetime] | None = None
    thresholds: RoleThresholds = field(default_factory=RoleThresholds)
    seed_user: str | None = None
    louvain_seed: int = 0
    out: str = "out"
    json: bool = True
    tables: bool = True
    gexf: bool = False
    dot: bool = False
    strict: bool = False
    workers: int = 1
    betweenness: str = "undirected"
    engager_hop: str = "tweet"
    delimiter: str = ","

    def validate(self) -> None:
        if not self.inputs:
            raise ConfigError("at least one --input is required")
        for path in self.inputs:
            if not Path(path).is_file():
                raise ConfigError(f"input not found: {path}")
        if self.betweenness not in ("directed", "undirected"):
            raise ConfigError("betweenness must be 'directed' or 'undirected'")
        if self.engager_hop not in ("tweet", "arc"):
            raise ConfigError("engager_hop must be 'tweet' or 'arc'")
        out = Path(self.out).resolve()
        if out.exists() and not out.is_dir():
            raise ConfigError(f"output path is not a directory: {self.out}")
        probe = out
        while not probe.exists():
            probe = probe.parent
        if not os.access(probe, os.W_OK):
            raise ConfigError(f"output directory not writable: {self.out}")


def _bool(value: str, key: str) -> bool:
    try:
        return _BOOL[value.strip().lower()]
    except KeyError:
        raise ConfigError(f"{key}: expected a boolean, got {value!r}") from None


def _span(text: str) -> tuple[datetime, datetime]:
    try:
        lo, hi = text.split("/")
        return cio.parse_timestamp(lo)[0], cio.parse_timestamp(hi)[0]
    except (ValueError, cio.GraphError):
        raise ConfigError(f"span must look like START/END in ISO-8601, got {text!r}") from None


def read_ini(path: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parser


def load_thresholds(path: str, base: RoleThresholds | None = None) -> RoleThresholds:
    parser = read_ini(path)
    if not parser.has_section("thresholds"):
        raise ConfigError(f"{path}: no [thresholds] section")
    values = {**(base or RoleThresholds()).as_dict(), **dict(parser["thresholds"])}
    return RoleThresholds.from_mapping(values)


def apply_config_file(cfg: RunConfig, path: str) -> RunConfig:
    """Values from the config file win over command-line flags."""
    parser = read_ini(path)
    if parser.has_section("run"):
        run = parser["run"]
        for key, value in run.items():
            if key == "input":
                cfg.inputs = [p.strip() for p in value.split(",") if p.strip()]
            elif key == "span":
                cfg.span = _span(value)
            elif key in ("seed_user",):
                cfg.seed_user = value.strip() or None
            elif key in ("louvain_seed", "workers"):
                try:
                    setattr(cfg, key, int(value))
                except ValueError:
                    raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
            elif key in ("json", "tables", "gexf", "dot", "strict"):
                setattr(cfg, key, _bool(value, key))
            elif key in ("window", "out", "betweenness", "engager_hop", "delimiter"):
                setattr(cfg, key, value.strip())
            else:
                raise ConfigError(f"{path}: unknown key [run] {key}")
    if parser.has_section("thresholds"):
        values = {**cfg.thresholds.as_dict(), **dict(parser["thresholds"])}
        cfg.thresholds = RoleThresholds.from_mapping(values)
    return cfg


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        inputs=list(args.input or []),
        window=args.window,
        span=_span(args.span) if args.span else None,
        seed_user=args.seed_user,
        louvain_seed=args.louvain_seed,
        out=args.out,
        gexf=args.gexf,
        dot=args.dot,
        strict=args.strict,
        workers=args.workers,
        betweenness="directed" if args.directed_betweenness else "undirected",
        engager_hop=args.engager_hop,
        delimiter=args.delimiter,
    )
    if args.thresholds:
        cfg.thresholds = load_thresholds(args.thresholds)
    if args.top_k is not None:
        cfg.thresholds = replace(cfg.thresholds, top_k=args.top_k)
    if args.config:
        cfg = apply_config_file(cfg, args.config)
    return cfg


def load_graph(cfg: RunConfig) -> TemporalGraph:
    records = []
    spellings: dict[str, set[str]] = {}
    for path in cfg.inputs:
        with open(path, encoding="utf-8", newline="") as fh:
            g, diags = cio.parse_csv(fh, delimiter=cfg.delimiter, lenient=not cfg.strict)
        for d in diags:
            print(f"{path}: {d}", file=sys.stderr)
        records.extend(g)
        for handle, raw in g.spellings.items():
            spellings.setdefault(handle, set()).update(raw)
    merged = TemporalGraph(records, strict=cfg.strict)
    merged.spellings.update(spellings)
    for handle, raw in merged.collisions().items():
        print(f"warning: merged spellings {raw} into {handle!r}", file=sys.stderr)
    return merged


def run_analysis(cfg: RunConfig):
    g = load_graph(cfg)
    plan = make_plan(g, cfg.window, cfg.span)
    reports = analyze_windows(
        g,
        plan,
        cfg.thresholds,
        seed_user=cfg.seed_user,
        louvain_seed=cfg.louvain_seed,
        directed_betweenness=cfg.betweenness == "directed",
        engager_hop=cfg.engager_hop,
        workers=cfg.workers,
    )
    return g, reports


def cmd_analyze(cfg: RunConfig) -> int:
    cfg.validate()
    g, reports = run_analysis(cfg)
    files: dict[str, str] = {}
    if cfg.json:
        files["reports.json"] = cio.write_report_json(reports)
    for rep in reports:
        label = rep.interval.label
        if cfg.tables:
            files[f"topk_{label}.csv"] = cio.topk_csv(rep)
        if cfg.gexf or cfg.dot:
            d = project(window(g, rep.interval.start, rep.interval.end))
            if cfg.gexf:
                metrics = {m.user: m for m in rep.nodes}
                files[f"window_{label}.gexf"] = cio.export_gexf(d, metrics, rep.roles)
            if cfg.dot:
                files[f"window_{label}.dot"] = cio.export_dot(d, rep.roles, name=label)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(files):
        (out / name).write_text(files[name], encoding="utf-8")
    print(f"{len(reports)} window(s), {len(files)} file(s) written to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_trajectory(cfg: RunConfig, user: str, reports_path: str | None, dest: str | None) -> int:
    if reports_path:
        try:
            reports = cio.read_report_json(Path(reports_path).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read reports {reports_path}: {exc}") from None
    else:
        cfg.validate()
        _, reports = run_analysis(cfg)
    traj = trajectory(user, reports)
    known = any(rep.metrics_of(traj.user) for rep in reports)
    if not known:
        print(f"warning: user {user!r} does not appear in any window", file=sys.stderr)
        text = ",".join(cio.TRAJECTORY_COLUMNS) + "\n"
    else:
        text = cio.trajectory_csv(traj)
    if dest:
        Path(dest).parent.mkdir(parents=True, exist_ok=True)
        Path(dest).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    out = Path(args.out)
    if args.scale:
        g = scale_stream(args.scale_users, args.scale_interactions, args.months, args.seed)
        labels = {}
    else:
        spec = PlantSpec(
            n_isolates=args.isolates,
            n_influencers=args.influencers,
            engager_out=args.engager_out,
            builder_links=args.builder_links,
            plant_bridge=not args.no_bridge,
            months=args.months,
            seed=args.seed,
            starter_dropout_month=args.dropout_month,
        )
        g, truth = generate(spec)
        labels = {u: r.value for u, r in sorted(truth.items())}
    csv_text = cio.serialize_csv(g)
    out.mkdir(parents=True, exist_ok=True)
    (out / "interactions.csv").write_text(csv_text, encoding="utf-8")
    (out / "labels.json").write_text(json.dumps(labels, indent=2) + "\n", encoding="utf-8")
    print(f"{len(g)} interactions, {len(g.nodes)} users written to {out}", file=sys.stderr)
    return EXIT_OK


def _analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", action="append", help="interaction CSV (repeatable)")
    p.add_argument("--window", default="calendar-month", help="calendar-month or duration:<days>")
    p.add_argument("--span", help="START/END override, ISO-8601")
    p.add_argument("--top-k", type=int)
    p.add_argument("--seed-user")
    p.add_argument("--thresholds", help="INI file with a [thresholds] section")
    p.add_argument("--louvain-seed", type=int, default=0)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--workers", type=int, default=1, help="windows analysed concurrently")
    p.add_argument("--directed-betweenness", action="store_true",
                   help="rank by directed betweenness instead of the undirected count")
    p.add_argument("--engager-hop", choices=("tweet", "arc"), default="tweet")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--config", help="INI run configuration; its values override flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="centralusers", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="windowed metrics, roles and exports")
    _analysis_flags(a)
    a.add_argument("--out", default="out")
    a.add_argument("--gexf", action="store_true")
    a.add_argument("--dot", action="store_true")

    t = sub.add_parser("trajectory", help="rank / betweenness / role of one user per window")
    _analysis_flags(t)
    t.add_argument("--user", required=True)
    t.add_argument("--reports", help="reports.json from a previous analyze run")
    t.add_argument("--out", help="CSV destination (default: stdout)")

    s = sub.add_parser("synth", help="write a synthetic interaction CSV")
    s.add_argument("--out", required=True)
    s.add_argument("--isolates", type=int, default=PlantSpec.n_isolates)
    s.add_argument("--influencers", type=int, default=PlantSpec.n_influencers)
    s.add_argument("--engager-out", type=int, default=PlantSpec.engager_out)
    s.add_argument("--builder-links", type=int, default=PlantSpec.builder_links)
    s.add_argument("--no-bridge", action="store_true")
    s.add_argument("--months", type=int, default=PlantSpec.months)
    s.add_argument("--seed", type=int, default=PlantSpec.seed)
    s.add_argument("--dropout-month", type=int)
    s.add_argument("--scale", action="store_true", help="unlabeled heavy-tailed stream instead")
    s.add_argument("--scale-users", type=int, default=10612)
    s.add_argument("--scale-interactions", type=int, default=24623)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "trajectory":
            cfg = config_from_args(_with_defaults(args, out="out"))
            return cmd_trajectory(cfg, args.user, args.reports, args.out)
        return cmd_analyze(config_from_args(args))
    except cio.IngestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _with_defaults(args: argparse.Namespace, **defaults) -> argparse.Namespace:
    ns = argparse.Namespace(**vars(args))
    for key, value in defaults.items():
        setattr(ns, key, value)
    ns.gexf = ns.dot = False
    return ns


if __name__ == "__main__":
    sys.exit(main())
