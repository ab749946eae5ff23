"""Las Vegas construction of equitable colorings.

Small instances (m below n^2 (r-1) / (2 ln n)) draw colorings at the target
class sizes directly and keep the first proper one.  Larger instances run
the two-stage interval coloring, reject on any monochromatic edge, then
close the gap between class sizes and targets: the rebalancing pass when
the shortage is confined to color r, a greedy repair otherwise.  Every
candidate is verified before it is returned, so the output is correct
whenever there is one; only the number of restarts is random.

At desk scale the per-attempt success probability carries no guarantee, so
after exhausting its restarts the solver consults the brute-force oracle
when the instance fits the enumeration budget, separating "provably no
equitable coloring" from "gave up".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .chains import ChainRecord, MonoEdge, extract_chain
from .hypergraph import (
    Coloring,
    Hypergraph,
    brute_force_equitable,
    class_targets,
    is_equitable,
    is_proper,
)
from .intervals import (
    build_partition,
    choose_p,
    run_interval_coloring,
    sample_weights,
)
from .rebalance import (
    RegimeViolation,
    RebalancePlan,
    apply_recolor,
    build_rebalance_plan,
    excess_shortage,
)
from .seeding import ROLE_BALANCED, ROLE_VSETS, ROLE_WEIGHTS, derive

__all__ = [
    "AUTO",
    "BALANCED_ONLY",
    "EXHAUSTED",
    "INFEASIBLE",
    "SUCCESS",
    "TWO_STAGE_ONLY",
    "SolveConfig",
    "SolveReport",
    "greedy_repair",
    "solve_equitable",
]

AUTO = "auto"
BALANCED_ONLY = "balanced-only"
TWO_STAGE_ONLY = "two-stage-only"

SUCCESS = "success"
EXHAUSTED = "exhausted"
INFEASIBLE = "infeasible-by-oracle"

PATH_BALANCED = "balanced"
PATH_TWO_STAGE = "two-stage"


@dataclass(frozen=True)
class SolveConfig:
    seed: int = 0
    max_restarts: int = 10_000
    enumeration_budget: int = 10**6
    force_path: str = AUTO
    allow_fallback_repair: bool = True
    strict_divisibility: bool = False

    def __post_init__(self) -> None:
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be at least 1")
        if self.force_path not in (AUTO, BALANCED_ONLY, TWO_STAGE_ONLY):
            raise ValueError(f"unknown path choice {self.force_path!r}")


@dataclass
class SolveReport:
    """Outcome of a solve: the coloring on success, plus per-attempt failure
    counters, the chains extracted from the last rejected run, and the last
    rebalance plan, for diagnostics."""

    outcome: str
    coloring: Optional[Coloring]
    attempts: int
    path: str
    r: int
    diagnostics: dict = field(default_factory=dict)
    chains: tuple[ChainRecord, ...] = ()
    plan: Optional[RebalancePlan] = None
    oracle_feasible: Optional[bool] = None

    def to_json_dict(self, explain: bool = False) -> dict:
        out = {
            "outcome": self.outcome,
            "attempts": self.attempts,
            "path": self.path,
            "r": self.r,
            "coloring": None if self.coloring is None else self.coloring.to_json_dict(),
            "diagnostics": dict(self.diagnostics),
            "oracle_feasible": self.oracle_feasible,
        }
        if explain:
            out["chains"] = [c.to_json_dict() for c in self.chains]
            out["plan"] = None if self.plan is None else self.plan.to_json_dict()
        return out


def _route(h: Hypergraph, r: int, cfg: SolveConfig) -> str:
    if cfg.force_path == BALANCED_ONLY:
        return PATH_BALANCED
    if cfg.force_path == TWO_STAGE_ONLY:
        return PATH_TWO_STAGE
    if h.n < 2:
        return PATH_BALANCED
    if h.m < h.n**2 * (r - 1) / (2.0 * math.log(h.n)):
        return PATH_BALANCED
    return PATH_TWO_STAGE


def _sample_at_targets(m: int, targets: tuple[int, ...], rng) -> Coloring:
    """Uniformly random coloring with class i holding exactly targets[i-1]
    vertices: permute the vertices and cut consecutive blocks."""
    perm = rng.permutation(m)
    coloring = Coloring(m, len(targets))
    pos = 0
    for i, t in enumerate(targets, start=1):
        for v in perm[pos : pos + t]:
            coloring.assign(int(v), i)
        pos += t
    return coloring


def _verified(h: Hypergraph, coloring: Coloring) -> bool:
    return coloring.is_total() and is_proper(h, coloring) and is_equitable(h, coloring)


def greedy_repair(
    h: Hypergraph,
    coloring: Coloring,
    targets,
    weights=None,
) -> Optional[Coloring]:
    """Move vertices from over-target classes to under-target ones whenever
    the move keeps the coloring proper, scanning vertices in increasing
    weight (vertex order when no weights are given).  Returns a proper
    coloring meeting the targets, or None when no move applies.
    """
    if not coloring.is_total() or not is_proper(h, coloring):
        raise ValueError("repair requires a total proper coloring")
    targets = tuple(targets)
    if len(targets) != coloring.r:
        raise ValueError("need one target per color")
    out = coloring.copy()
    if weights is None:
        order = list(range(h.m))
    else:
        order = sorted(range(h.m), key=lambda v: (weights[v], v))
    max_moves = h.m * out.r
    for _ in range(max_moves):
        over = [c for c in range(1, out.r + 1) if out.sizes[c - 1] > targets[c - 1]]
        under = [c for c in range(1, out.r + 1) if out.sizes[c - 1] < targets[c - 1]]
        if not over:
            return out
        moved = False
        for v in order:
            c_from = out.colors[v]
            if c_from not in over:
                continue
            for c_to in under:
                if _move_keeps_proper(h, out, v, c_to):
                    out.assign(v, c_to)
                    moved = True
                    break
            if moved:
                break
        if not moved:
            return None
    return out if tuple(out.sizes) == targets else None


def _move_keeps_proper(h: Hypergraph, coloring: Coloring, v: int, c_to: int) -> bool:
    for e in h.incidence[v]:
        if all(coloring.colors[u] == c_to for u in h.edges[e] if u != v):
            return False
    return True


def solve_equitable(h: Hypergraph, r: int, cfg: SolveConfig = SolveConfig()) -> SolveReport:
    """Attempt up to cfg.max_restarts independently seeded constructions and
    return the first verified equitable coloring.

    Attempt t draws all of its randomness through seeds derived from
    (cfg.seed, t), so identical inputs give an identical report.  With
    strict_divisibility only perfectly balanced targets are accepted and
    r | m is enforced up front; otherwise targets differ by at most one.
    After exhaustion,
    instances with r**m within the enumeration budget get a brute-force
    verdict, upgrading Exhausted to Infeasible-by-oracle when no equitable
    coloring exists at all.
    """
    if r < 2:
        raise ValueError("need at least 2 colors")
    if cfg.strict_divisibility and h.m % r != 0:
        raise ValueError(f"strict divisibility requires r | m, got m={h.m}, r={r}")

    path = _route(h, r, cfg)
    targets = class_targets(h.m, r)
    diagnostics = {"mono-edge": 0, "rebalance-infeasible": 0, "repair-failed": 0}
    chains: tuple[ChainRecord, ...] = ()
    plan: Optional[RebalancePlan] = None

    partition = None
    if path == PATH_TWO_STAGE:
        partition = build_partition(choose_p(h.n, r), r)

    for attempt in range(cfg.max_restarts):
        if path == PATH_BALANCED:
            rng = derive(cfg.seed, attempt, ROLE_BALANCED)
            coloring = _sample_at_targets(h.m, targets, rng)
            if is_proper(h, coloring):
                return SolveReport(
                    SUCCESS, coloring, attempt + 1, path, r, diagnostics, chains, plan
                )
            diagnostics["mono-edge"] += 1
            continue

        wa = sample_weights(h.m, derive(cfg.seed, attempt, ROLE_WEIGHTS))
        init = run_interval_coloring(h, r, partition, wa)
        cols = init.coloring.colors
        mono = [
            e
            for e, edge in enumerate(h.edges)
            if all(cols[v] == cols[edge[0]] for v in edge)
        ]
        if mono:
            diagnostics["mono-edge"] += 1
            chains = tuple(
                extract_chain(h, partition, wa, init, MonoEdge(e, cols[h.edges[e][0]]))
                for e in mono
            )
            continue

        if is_equitable(h, init.coloring):
            return SolveReport(
                SUCCESS, init.coloring, attempt + 1, path, r, diagnostics, chains, plan
            )

        ex, sh = excess_shortage(init.coloring, targets)
        if all(s == 0 for s in sh[:-1]) and any(sh):
            try:
                plan = build_rebalance_plan(
                    h,
                    partition,
                    wa,
                    init.coloring,
                    targets,
                    derive(cfg.seed, attempt, ROLE_VSETS),
                )
            except RegimeViolation:
                diagnostics["rebalance-infeasible"] += 1
            else:
                if plan.feasible:
                    candidate = apply_recolor(init.coloring, plan.wsets)
                    if _verified(h, candidate):
                        return SolveReport(
                            SUCCESS, candidate, attempt + 1, path, r,
                            diagnostics, chains, plan,
                        )
                diagnostics["rebalance-infeasible"] += 1

        if cfg.allow_fallback_repair:
            repaired = greedy_repair(h, init.coloring, targets, weights=wa.weights)
            if repaired is not None and _verified(h, repaired):
                return SolveReport(
                    SUCCESS, repaired, attempt + 1, path, r, diagnostics, chains, plan
                )
            diagnostics["repair-failed"] += 1

    oracle_feasible = None
    if h.m >= 1 and r**h.m <= cfg.enumeration_budget:
        oracle_feasible = (
            brute_force_equitable(h, r, budget=cfg.enumeration_budget) is not None
        )
    outcome = INFEASIBLE if oracle_feasible is False else EXHAUSTED
    return SolveReport(
        outcome, None, cfg.max_restarts, path, r, diagnostics, chains, plan,
        oracle_feasible=oracle_feasible,
    )
