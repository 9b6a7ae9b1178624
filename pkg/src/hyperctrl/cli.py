"""Command-line front-end.

    hyperctrl ctrb    --input H.json (--drivers 1,2 | --drivers-file B.json)
    hyperctrl obsv    --input H.json (--sensors 1,2 | --sensors-file L.json)
    hyperctrl mndn    --input H.json [--exact]
    hyperctrl mnsn    --input H.json [--exact]
    hyperctrl rank-at --input H.json --drivers 1 --at "x=1,2,3,4;t=1"

The exit status is 0 whenever the analysis ran, whatever its verdict, and 2
on invalid input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .ctrb import FULL_BRACKET, LITERAL, CtrbConfig, CtrbError, PolySystem, ctrb_matrix, unit_columns
from .hypergraph import HypergraphError, TemporalHypergraph, load, parse_weight
from .matrix import PolyMatrix
from .obsv import DIFFERENTIAL, obsv_matrix, unit_rows
from .poly import PolyError, as_rational
from .rank import (DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS, EXACT_CAP, RankError,
                   exact_rank_small, generic_rank, rank_at_point)
from .selection import (DRIVER, SENSOR, TIE_DEGREE, TIE_RANDOM, SelectionError, SelectionStalled,
                        brute_force_min_nodes, greedy_nodes)

COMMANDS = ("ctrb", "obsv", "mndn", "mnsn", "rank-at")
CTRB_MODES = (LITERAL, FULL_BRACKET)
OBSV_MODES = (DIFFERENTIAL, LITERAL)
REPORT_VERSION = 1


class CliError(ValueError):
    pass


@dataclass(frozen=True)
class AnalysisReport:
    command: str
    config: Dict[str, Any]
    n: int
    rows: int
    cols: int
    rank: int
    verdict: str
    failure_bound: str = "0"
    rank_method: str = "randomized"
    trace: List[Dict[str, int]] = field(default_factory=list)
    selection: Optional[Dict[str, Any]] = None
    brute_force: Optional[Dict[str, Any]] = None
    pointwise: Optional[Dict[str, Any]] = None
    wall_time: Optional[float] = None

    def to_dict(self) -> dict:
        d = {
            "version": REPORT_VERSION,
            "command": self.command,
            "config": self.config,
            "n": self.n,
            "dims": [self.rows, self.cols],
            "rank": self.rank,
            "rank_method": self.rank_method,
            "verdict": self.verdict,
            "failure_bound": self.failure_bound,
            "trace": self.trace,
        }
        for key in ("selection", "brute_force", "pointwise", "wall_time"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "AnalysisReport":
        if d.get("version") != REPORT_VERSION:
            raise CliError(f"unsupported report version {d.get('version')!r}")
        rows, cols = d["dims"]
        return cls(d["command"], d["config"], d["n"], rows, cols, d["rank"], d["verdict"],
                   d["failure_bound"], d["rank_method"], d["trace"], d.get("selection"),
                   d.get("brute_force"), d.get("pointwise"), d.get("wall_time"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.verdict}",
                 f"  matrix {self.rows}x{self.cols}, rank {self.rank}/{self.n} ({self.rank_method})"]
        if self.rank_method == "randomized":
            lines.append(f"  failure bound <= {float(Fraction(self.failure_bound)):.3e}")
        for it in self.trace:
            lines.append(f"  iteration {it['iteration']}: {it['candidates']} candidates, "
                         f"{it['zero_dropped']} zero, {it['retained']} retained, rank {it['rank_after']}")
        if self.selection:
            for i, s in enumerate(self.selection["steps"], 1):
                lines.append(f"  step {i}: chose {s['chosen_label']} (delta {s['deltas'][str(s['chosen'])]}, "
                             f"{s['reason']}) -> rank {s['rank_after']}")
        if self.brute_force:
            bf = self.brute_force
            sets = ", ".join("{" + ",".join(x) + "}" for x in bf["set_labels"])
            lines.append(f"  brute-force minimum {bf['min_cardinality']}: {sets}"
                         + (" ..." if bf["truncated"] else ""))
        if self.pointwise:
            p = self.pointwise
            lines.append(f"  at x={p['x']}, t={p['t']}: pointwise rank {p['rank']} (generic {self.rank})")
        if self.wall_time is not None:
            lines.append(f"  wall time {self.wall_time:.3f} s")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# input parsing

def parse_nodes(text: str, H: TemporalHypergraph, flag: str) -> List[int]:
    """``"1,3"`` or labels ``"s1,s3"`` to sorted unique 1-based indices."""
    labels = {H.label(v): v for v in range(1, H.n + 1)}
    out = []
    for tok in (s.strip() for s in text.split(",")):
        if not tok:
            continue
        if tok in labels:
            out.append(labels[tok])
        elif tok.isdigit() and 1 <= int(tok) <= H.n:
            out.append(int(tok))
        else:
            raise CliError(f"{flag}: unknown node {tok!r} (expected 1..{H.n} or a label)")
    if not out:
        raise CliError(f"{flag}: empty node list")
    if len(set(out)) != len(out):
        raise CliError(f"{flag}: repeated node")
    return sorted(out)


def load_matrix(path: str, n: int, flag: str) -> PolyMatrix:
    """Read a JSON list of rows whose entries are weight specs in t."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"{flag}: cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{flag}: {path} is not valid JSON ({exc.msg}, line {exc.lineno})") from None
    if not isinstance(doc, list) or not doc or not all(isinstance(r, list) and r for r in doc):
        raise CliError(f"{flag}: expected a non-empty list of non-empty rows")
    width = len(doc[0])
    if any(len(r) != width for r in doc):
        raise CliError(f"{flag}: rows have different lengths")
    try:
        rows = [[parse_weight(e, n, f"{flag}[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(doc)]
    except HypergraphError as exc:
        raise CliError(str(exc)) from None
    return PolyMatrix(rows, n, width)


_AT = re.compile(r"^x=\(?(?P<x>[^()]*?)\)?[;,]t=(?P<t>[^;,()]+)$")


def parse_point(text: str, n: int):
    m = _AT.match(re.sub(r"\s+", "", text))
    if not m:
        raise CliError(f"--at: expected 'x=v1,...,vn;t=v', got {text!r}")
    try:
        x = [as_rational(v) for v in m["x"].split(",") if v]
        t = as_rational(m["t"])
    except PolyError as exc:
        raise CliError(f"--at: {exc}") from None
    if len(x) != n:
        raise CliError(f"--at: point has {len(x)} coordinates, hypergraph has {n} nodes")
    return x, t


def parse_depth(text: str):
    if text == "auto":
        return "auto"
    if text.isdigit() and int(text) >= 1:
        return int(text)
    raise argparse.ArgumentTypeError("must be 'auto' or a positive integer")


# ---------------------------------------------------------------------------
# commands

def _config(args, kind: str) -> CtrbConfig:
    allowed = CTRB_MODES if kind == DRIVER else OBSV_MODES
    mode = args.mode or allowed[0]
    if mode not in allowed:
        raise CliError(f"--mode: {mode!r} is not available for {'drivers' if kind == DRIVER else 'sensors'} "
                       f"(choose from {', '.join(allowed)})")
    return CtrbConfig(mode=mode, max_depth=args.depth, prune=not args.no_prune,
                      trials=args.trials, seed=args.seed, prime=args.prime)


def _config_echo(args, cfg: CtrbConfig) -> Dict[str, Any]:
    return {
        "input": args.input,
        "mode": cfg.mode,
        "depth": cfg.max_depth,
        "prune": cfg.prune,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "prime": cfg.prime,
        "exact_rank": bool(getattr(args, "exact_rank", False)),
    }


def _kind_of(args) -> str:
    has_d = args.drivers is not None or args.drivers_file is not None
    has_s = args.sensors is not None or args.sensors_file is not None
    if args.command in ("ctrb", "mndn"):
        kind = DRIVER
    elif args.command in ("obsv", "mnsn"):
        kind = SENSOR
    else:
        if has_d == has_s:
            raise CliError("rank-at: give exactly one of --drivers/--drivers-file or --sensors/--sensors-file")
        kind = DRIVER if has_d else SENSOR
    if args.command in ("ctrb", "obsv", "rank-at"):
        inline, path = (args.drivers, args.drivers_file) if kind == DRIVER else (args.sensors, args.sensors_file)
        flag = "--drivers" if kind == DRIVER else "--sensors"
        if (inline is None) == (path is None):
            raise CliError(f"{args.command}: give exactly one of {flag} or {flag}-file")
    return kind


def _input_matrix(args, H: TemporalHypergraph, kind: str) -> PolyMatrix:
    n = H.n
    if kind == DRIVER:
        if args.drivers is not None:
            return unit_columns(n, parse_nodes(args.drivers, H, "--drivers"))
        B = load_matrix(args.drivers_file, n, "--drivers-file")
        if B.rows != n:
            raise CliError(f"--drivers-file: B must have {n} rows, got {B.rows}")
        return B
    if args.sensors is not None:
        return unit_rows(n, parse_nodes(args.sensors, H, "--sensors"))
    L = load_matrix(args.sensors_file, n, "--sensors-file")
    if L.cols != n:
        raise CliError(f"--sensors-file: L must have {n} columns, got {L.cols}")
    return L


def _verdict(kind: str, rank: int, n: int) -> str:
    word = "controllable" if kind == DRIVER else "observable"
    neg = "" if rank == n else "not "
    return f"{neg}weakly {word} (rank {rank}/{n})"


def _rank(M: PolyMatrix, cfg: CtrbConfig, exact: bool):
    """(rank, method, failure bound) honouring --exact-rank when the size permits."""
    if exact and min(M.rows, M.cols) <= EXACT_CAP:
        r = exact_rank_small(M)
        return r.rank, "exact", "0"
    r = generic_rank(M, cfg.trials, cfg.seed, cfg.prime)
    return r.rank, "randomized", str(r.failure_bound)


def run_analysis(args, H: TemporalHypergraph) -> AnalysisReport:
    kind = _kind_of(args)
    cfg = _config(args, kind)
    system = PolySystem.from_hypergraph(H)
    M0 = _input_matrix(args, H, kind)
    if kind == DRIVER:
        M, trace = ctrb_matrix(system, M0, cfg)
    else:
        M, trace = obsv_matrix(system, M0, cfg)
    rank, method, bound = _rank(M, cfg, args.exact_rank)
    pointwise = None
    if args.command == "rank-at":
        if args.at is None:
            raise CliError("rank-at: --at is required")
        x0, t0 = parse_point(args.at, H.n)
        pointwise = {"x": [str(v) for v in x0], "t": str(t0), "rank": rank_at_point(M, x0, t0)}
        verdict = f"pointwise rank {pointwise['rank']}, generic rank {rank} (of {H.n})"
    else:
        verdict = _verdict(kind, rank, H.n)
    return AnalysisReport(args.command, _config_echo(args, cfg), H.n, M.rows, M.cols, rank, verdict,
                          bound, method, [t.to_dict() for t in trace], pointwise=pointwise)


def run_selection(args, H: TemporalHypergraph) -> AnalysisReport:
    kind = DRIVER if args.command == "mndn" else SENSOR
    cfg = _config(args, kind)
    system = PolySystem.from_hypergraph(H)
    noun = "driver" if kind == DRIVER else "sensor"
    try:
        sel = greedy_nodes(system, kind, cfg, tie_break=args.tie_break, tie_seed=args.tie_seed,
                           workers=args.workers)
        stalled = False
    except SelectionStalled as exc:
        sel, stalled = exc.report, True
    chosen = sorted(sel.selected)
    if chosen:
        M0 = unit_columns(H.n, chosen) if kind == DRIVER else unit_rows(H.n, chosen)
        M, trace = (ctrb_matrix if kind == DRIVER else obsv_matrix)(system, M0, cfg)
        rank, method, bound = _rank(M, cfg, args.exact_rank)
        dims, trace = (M.rows, M.cols), [t.to_dict() for t in trace]
    else:
        rank, method, bound, dims, trace = 0, "randomized", "0", (0, 0), []
    names = "{" + ", ".join(H.label(v) for v in sel.selected) + "}"
    if stalled:
        verdict = (f"{noun} selection stalled at rank {sel.final_rank}/{H.n} with {names}; "
                   f"no remaining node raises the rank")
    else:
        verdict = f"{noun} set {names} of size {len(sel.selected)} (rank {rank}/{H.n})"
    selection = sel.to_dict()
    selection["stalled"] = stalled
    selection["selected_labels"] = [H.label(v) for v in sel.selected]
    for s in selection["steps"]:
        s["chosen_label"] = H.label(s["chosen"])
    brute = None
    if args.exact:
        bf = brute_force_min_nodes(system, kind, cfg, workers=args.workers)
        brute = bf.to_dict()
        brute["set_labels"] = [[H.label(v) for v in s] for s in bf.sets]
        if bf.min_cardinality is None:
            verdict += f"; no {noun} set reaches full rank"
        elif not stalled and len(sel.selected) == bf.min_cardinality:
            verdict += f"; certified minimal (cardinality {bf.min_cardinality})"
        else:
            verdict += f"; minimum cardinality is {bf.min_cardinality}"
    return AnalysisReport(args.command, _config_echo(args, cfg), H.n, dims[0], dims[1], rank, verdict,
                          bound, method, trace, selection=selection, brute_force=brute)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperctrl",
                                description="Controllability and observability of temporal hypergraphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "ctrb": "rank of the controllability matrix for given drivers",
        "obsv": "rank of the observability matrix for given sensors",
        "mndn": "greedy driver-node selection",
        "mnsn": "greedy sensor-node selection",
        "rank-at": "pointwise versus generic rank at a point",
    }
    for name in COMMANDS:
        c = sub.add_parser(name, help=helps[name])
        c.add_argument("--input", required=True, metavar="PATH", help="hypergraph JSON file")
        if name in ("ctrb", "rank-at"):
            c.add_argument("--drivers", metavar="NODES", help="comma-separated driver nodes (indices or labels)")
            c.add_argument("--drivers-file", metavar="PATH", help="JSON matrix B(t), one list per row")
        if name in ("obsv", "rank-at"):
            c.add_argument("--sensors", metavar="NODES", help="comma-separated sensor nodes")
            c.add_argument("--sensors-file", metavar="PATH", help="JSON matrix L(t), one list per row")
        c.set_defaults(drivers=None, drivers_file=None, sensors=None, sensors_file=None)
        c.add_argument("--mode", choices=sorted(set(CTRB_MODES + OBSV_MODES)),
                       help="literal|full-bracket for drivers (default literal); "
                            "differential|literal for sensors (default differential)")
        c.add_argument("--depth", type=parse_depth, default="auto", help="max iterations, 'auto' = n-1")
        c.add_argument("--no-prune", action="store_true", help="keep every nonzero candidate")
        c.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        c.add_argument("--seed", type=int, default=DEFAULT_SEED)
        c.add_argument("--prime", type=int, default=DEFAULT_PRIME)
        c.add_argument("--exact-rank", action="store_true", help="fraction-free elimination when small enough")
        if name in ("mndn", "mnsn"):
            c.add_argument("--exact", action="store_true", help="certify minimality by brute force")
            c.add_argument("--tie-break", choices=(TIE_DEGREE, TIE_RANDOM), default=TIE_DEGREE)
            c.add_argument("--tie-seed", type=int, default=0)
            c.add_argument("--workers", type=int, default=1, help="processes for candidate evaluation")
        if name == "rank-at":
            c.add_argument("--at", metavar="POINT", help="'x=1,2,3,4;t=1/2'")
        c.add_argument("--format", choices=("text", "structured"), default="text")
        c.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
        c.add_argument("--timing", action="store_true", help="include wall time in the report")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.trials < 1:
            raise CliError("--trials: must be >= 1")
        if args.prime < 3:
            raise CliError("--prime: must be an odd prime")
        try:
            H = load(args.input)
        except OSError as exc:
            raise CliError(f"--input: cannot read {args.input}: {exc.strerror or exc}") from None
        except json.JSONDecodeError as exc:
            raise CliError(f"--input: {args.input} is not valid JSON ({exc.msg}, line {exc.lineno})") from None
        except HypergraphError as exc:
            raise CliError(f"--input: {exc}") from None
        if args.command in ("mndn", "mnsn"):
            report = run_selection(args, H)
        else:
            report = run_analysis(args, H)
    except (CliError, CtrbError, RankError, SelectionError, PolyError) as exc:
        print(f"hyperctrl: error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        report = AnalysisReport(**{**report.__dict__, "wall_time": round(time.perf_counter() - start, 6)})
    text = report.to_json() if args.format == "structured" else report.to_text()
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            print(f"hyperctrl: error: --output: cannot write {args.output}: {exc.strerror or exc}",
                  file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
