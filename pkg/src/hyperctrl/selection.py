"""Greedy driver/sensor node selection and a brute-force minimum-set oracle.

Each greedy round scores every unselected node ``v`` by

    delta(v) = rank(M[D + {v}]) - rank(M[D])

where ``M`` is the controllability matrix built from unit input columns
(drivers) or the observability matrix built from unit output rows (sensors),
and appends the best node.  The full matrix is rebuilt for every candidate.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .ctrb import CtrbConfig, PolySystem, as_system, ctrb_matrix, unit_columns
from .hypergraph import TemporalHypergraph
from .obsv import DIFFERENTIAL, obsv_matrix, unit_rows
from .poly import Scalar

DRIVER = "driver"
SENSOR = "sensor"
KINDS = (DRIVER, SENSOR)
TIE_DEGREE = "degree"
TIE_RANDOM = "random"
BRUTE_FORCE_CAP = 10


class SelectionError(ValueError):
    pass


@dataclass(frozen=True)
class SelectionStep:
    deltas: Dict[int, int]
    chosen: int
    reason: str
    rank_after: int

    def to_dict(self) -> dict:
        return {
            "deltas": {str(k): v for k, v in sorted(self.deltas.items())},
            "chosen": self.chosen,
            "reason": self.reason,
            "rank_after": self.rank_after,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SelectionStep":
        return cls({int(k): int(v) for k, v in d["deltas"].items()}, int(d["chosen"]),
                   str(d["reason"]), int(d["rank_after"]))


@dataclass(frozen=True)
class SelectionReport:
    kind: str
    n: int
    selected: Tuple[int, ...]
    steps: Tuple[SelectionStep, ...]
    final_rank: int
    mode: str
    depth: Union[int, str]
    trials: int
    seed: int
    tie_break: str = TIE_DEGREE

    @property
    def full(self) -> bool:
        return self.final_rank == self.n

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "selected": list(self.selected),
            "steps": [s.to_dict() for s in self.steps],
            "final_rank": self.final_rank,
            "full": self.full,
            "mode": self.mode,
            "depth": self.depth,
            "trials": self.trials,
            "seed": self.seed,
            "tie_break": self.tie_break,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SelectionReport":
        return cls(d["kind"], int(d["n"]), tuple(d["selected"]),
                   tuple(SelectionStep.from_dict(s) for s in d["steps"]), int(d["final_rank"]),
                   d["mode"], d["depth"], int(d["trials"]), int(d["seed"]), d.get("tie_break", TIE_DEGREE))


class SelectionStalled(SelectionError):
    """No remaining node raises the rank although it is still below n."""

    def __init__(self, report: SelectionReport):
        self.report = report
        super().__init__(
            f"{report.kind} selection stalled at rank {report.final_rank}/{report.n} after "
            f"{list(report.selected)}: no remaining node raises the rank "
            f"(mode {report.mode}, depth {report.depth})")


@dataclass(frozen=True)
class BruteForceResult:
    kind: str
    min_cardinality: Optional[int]
    sets: Tuple[Tuple[int, ...], ...]
    truncated: bool = False
    checked: int = 0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "min_cardinality": self.min_cardinality,
            "sets": [list(s) for s in self.sets],
            "truncated": self.truncated,
            "checked": self.checked,
        }


def default_config(kind: str) -> CtrbConfig:
    return CtrbConfig() if kind == DRIVER else CtrbConfig(mode=DIFFERENTIAL)


def node_set_rank(system: Union[TemporalHypergraph, PolySystem], nodes: Sequence[int], kind: str,
                  cfg: Optional[CtrbConfig] = None,
                  scales: Optional[Mapping[int, Scalar]] = None) -> int:
    """Generic rank of the controllability/observability matrix for a node set."""
    system = as_system(system)
    cfg = cfg or default_config(kind)
    nodes = sorted(nodes)
    if not nodes:
        return 0
    sc = [scales[v] for v in nodes] if scales else None
    if kind == DRIVER:
        _, trace = ctrb_matrix(system, unit_columns(system.n, nodes, sc), cfg)
    elif kind == SENSOR:
        _, trace = obsv_matrix(system, unit_rows(system.n, nodes, sc), cfg)
    else:
        raise SelectionError(f"kind must be one of {KINDS}, got {kind!r}")
    return trace[-1].rank_after


def _rank_job(args):
    return node_set_rank(*args)


def _ranks(system, sets, kind, cfg, scales, workers):
    jobs = [(system, s, kind, cfg, scales) for s in sets]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_rank_job, jobs))
    return [_rank_job(j) for j in jobs]


def _degrees(system: PolySystem) -> Tuple[int, ...]:
    return system.degrees if len(system.degrees) == system.n else (0,) * system.n


def greedy_nodes(system: Union[TemporalHypergraph, PolySystem], kind: str,
                 cfg: Optional[CtrbConfig] = None, tie_break: str = TIE_DEGREE,
                 tie_seed: int = 0, scales: Optional[Mapping[int, Scalar]] = None,
                 workers: int = 1) -> SelectionReport:
    """Greedy selection loop shared by drivers and sensors.

    Ties on delta are broken by higher hyperedge degree, then lower index, or
    uniformly at random from ``tie_seed`` when ``tie_break == "random"``.
    Raises :class:`SelectionStalled` if no node raises the rank before it
    reaches n.
    """
    if kind not in KINDS:
        raise SelectionError(f"kind must be one of {KINDS}, got {kind!r}")
    if tie_break not in (TIE_DEGREE, TIE_RANDOM):
        raise SelectionError(f"tie_break must be {TIE_DEGREE!r} or {TIE_RANDOM!r}, got {tie_break!r}")
    system = as_system(system)
    cfg = cfg or default_config(kind)
    n = system.n
    deg = _degrees(system)
    rng = random.Random(tie_seed)
    selected: List[int] = []
    steps: List[SelectionStep] = []
    rank = 0

    def report() -> SelectionReport:
        return SelectionReport(kind, n, tuple(selected), tuple(steps), rank, cfg.mode,
                               cfg.max_depth, cfg.trials, cfg.seed, tie_break)

    while rank < n:
        cands = [v for v in range(1, n + 1) if v not in selected]
        ranks = _ranks(system, [selected + [v] for v in cands], kind, cfg, scales, workers)
        deltas = {v: r - rank for v, r in zip(cands, ranks)}
        best = max(deltas.values())
        if best <= 0:
            raise SelectionStalled(report())
        tied = [v for v in cands if deltas[v] == best]
        if len(tied) == 1:
            chosen, reason = tied[0], "unique"
        elif tie_break == TIE_RANDOM:
            chosen, reason = rng.choice(tied), "random"
        else:
            top = max(deg[v - 1] for v in tied)
            by_deg = [v for v in tied if deg[v - 1] == top]
            chosen = by_deg[0]
            reason = "degree" if len(by_deg) == 1 else "index"
        selected.append(chosen)
        rank += best
        steps.append(SelectionStep(deltas, chosen, reason, rank))
    return report()


def greedy_driver_nodes(system, cfg: Optional[CtrbConfig] = None, **kw) -> SelectionReport:
    """Greedy driver set; columns of B are unit basis vectors of the chosen nodes."""
    return greedy_nodes(system, DRIVER, cfg, **kw)


def greedy_sensor_nodes(system, cfg: Optional[CtrbConfig] = None, **kw) -> SelectionReport:
    """Greedy sensor set; rows of L are unit basis vectors of the chosen nodes."""
    return greedy_nodes(system, SENSOR, cfg, **kw)


def brute_force_min_nodes(system: Union[TemporalHypergraph, PolySystem], kind: str,
                          cfg: Optional[CtrbConfig] = None, cap: int = BRUTE_FORCE_CAP,
                          max_sets: int = 1000, workers: int = 1) -> BruteForceResult:
    """Smallest cardinality with a full-rank node set, and every such set (up to ``max_sets``)."""
    if kind not in KINDS:
        raise SelectionError(f"kind must be one of {KINDS}, got {kind!r}")
    system = as_system(system)
    cfg = cfg or default_config(kind)
    n = system.n
    if n > cap:
        raise SelectionError(f"brute force limited to n <= {cap}, got n = {n}")
    checked = 0
    for size in range(1, n + 1):
        subsets = [list(s) for s in itertools.combinations(range(1, n + 1), size)]
        ranks = _ranks(system, subsets, kind, cfg, None, workers)
        checked += len(subsets)
        found = [tuple(s) for s, r in zip(subsets, ranks) if r == n]
        if found:
            return BruteForceResult(kind, size, tuple(found[:max_sets]), len(found) > max_sets, checked)
    return BruteForceResult(kind, None, (), False, checked)
