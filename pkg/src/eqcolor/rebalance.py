"""Rebalancing an initial coloring whose class sizes miss their targets.

After the two stages, the first r-1 classes tend to run over target while
class r runs short.  Rebalancing repairs exactly this shape: it samples a
candidate set V_i inside each large block, spots the dangerous edges (those
an unlucky recoloring could turn monochromatic in color r), and moves the
lowest-weight candidates into class r while keeping one vertex of every
dangerous edge pinned in place.  Pinning one vertex per dangerous edge is
enough: an edge can only become monochromatic in r if every one of its
candidate vertices moved, and the pinned one never does.

The recolor sets bring every class exactly to target when the shortage is
confined to color r; the solver falls back to restarts or greedy repair
when selection is infeasible or the shape does not match.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .chains import DangerousEdge
from .hypergraph import Coloring, Hypergraph
from .intervals import LARGE, IntervalPartition, WeightAssignment
from .seeding import ROLE_VSETS, derive

__all__ = [
    "RebalancePlan",
    "RegimeViolation",
    "apply_recolor",
    "build_rebalance_plan",
    "compute_p_tilde",
    "compute_q",
    "excess_shortage",
    "find_dangerous_edges",
    "sample_candidate_sets",
    "select_recolor_sets",
]


class RegimeViolation(ValueError):
    """The instance is too small for the sampling probability to make sense."""


@dataclass(frozen=True)
class RebalancePlan:
    """Everything one rebalancing pass decided, in evaluation order."""

    excess: tuple[int, ...]
    shortage: tuple[int, ...]
    q: float
    p_tilde: float
    vsets: tuple[frozenset, ...]
    dangerous: tuple[DangerousEdge, ...]
    wsets: Optional[tuple[frozenset, ...]]

    @property
    def feasible(self) -> bool:
        return self.wsets is not None

    def to_json_dict(self) -> dict:
        return {
            "ex": list(self.excess),
            "sh": list(self.shortage),
            "q": self.q,
            "p_tilde": self.p_tilde,
            "V": [sorted(s) for s in self.vsets],
            "dangerous": [
                {"edge": d.edge, "U": list(d.u_vertices)} for d in self.dangerous
            ],
            "W": None if self.wsets is None else [sorted(s) for s in self.wsets],
        }


def excess_shortage(
    coloring: Coloring, targets: Sequence[int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Per-color (max(0, size - target), max(0, target - size))."""
    if len(targets) != coloring.r:
        raise ValueError("need one target per color")
    ex = tuple(max(0, s - t) for s, t in zip(coloring.sizes, targets))
    sh = tuple(max(0, t - s) for s, t in zip(coloring.sizes, targets))
    return ex, sh


def compute_q(m: int, n: int, r: int, p: float) -> float:
    """Candidate-set size scale: m p / (r (r-1)) + 2 sqrt(13 m ln r / r)
    + ((r+1)/r) n / ln n."""
    if n < 2 or r < 2 or m < 1:
        raise ValueError("q requires m >= 1, n >= 2, r >= 2")
    return (
        m * p / (r * (r - 1))
        + 2.0 * math.sqrt(13.0 * m * math.log(r) / r)
        + (r + 1) / r * n / math.log(n)
    )


def compute_p_tilde(m: int, n: int, r: int, p: float, q: Optional[float] = None) -> float:
    """Per-vertex keep probability q r / ((1-p) m) for candidate sampling.

    Raises RegimeViolation when the value exceeds 1, which happens whenever
    m is small relative to the q scale; callers may then pass an explicit
    probability instead.
    """
    if q is None:
        q = compute_q(m, n, r, p)
    p_tilde = q * r / ((1.0 - p) * m)
    if p_tilde > 1.0:
        raise RegimeViolation(
            f"candidate keep probability {p_tilde:.6g} exceeds 1; "
            f"m={m} is too small for this n, r"
        )
    return p_tilde


def sample_candidate_sets(
    h: Hypergraph,
    partition: IntervalPartition,
    wa: WeightAssignment,
    p_tilde: float,
    seed: Union[int, np.random.Generator],
) -> tuple[frozenset, ...]:
    """Sample V_1 .. V_{r-1}: each occupant of large_i is kept in V_i
    independently with probability p_tilde."""
    if not 0.0 <= p_tilde <= 1.0:
        raise ValueError("keep probability must lie in [0, 1]")
    rng = seed if isinstance(seed, np.random.Generator) else derive(seed, ROLE_VSETS)
    keep = rng.random(h.m) < p_tilde
    members: list[set] = [set() for _ in range(partition.r - 1)]
    for v in range(h.m):
        loc = partition.locate(wa.weights[v])
        if loc.kind == LARGE and loc.index <= partition.r - 1 and keep[v]:
            members[loc.index - 1].add(v)
    return tuple(frozenset(s) for s in members)


def find_dangerous_edges(
    h: Hypergraph,
    coloring: Coloring,
    vsets: Sequence[frozenset],
) -> list[DangerousEdge]:
    """Edges that would turn monochromatic in color r if every one of their
    candidate-set vertices were recolored: some vertex lies in the union of
    the candidate sets and every other vertex already carries color r."""
    union = set().union(*vsets) if vsets else set()
    r = coloring.r
    out = []
    for e, edge in enumerate(h.edges):
        u = tuple(v for v in edge if v in union)
        if not u:
            continue
        if all(coloring.colors[v] == r for v in edge if v not in union):
            out.append(DangerousEdge(e, u))
    return out


def select_recolor_sets(
    vsets: Sequence[frozenset],
    dangerous: Sequence[DangerousEdge],
    excess: Sequence[int],
    wa: WeightAssignment,
) -> Optional[tuple[frozenset, ...]]:
    """Pick W_i, the excess_i lowest-weight vertices of V_i, skipping one
    pinned vertex per dangerous edge.  Returns None when some V_i cannot
    supply enough vertices.

    The pinned vertex is the lowest-numbered candidate vertex of the edge.
    Any edge that could become monochromatic in r after recoloring must have
    had all of its candidate vertices moved, and the pin rules that out.
    """
    pinned = {d.u_vertices[0] for d in dangerous}
    wsets = []
    for i, vs in enumerate(vsets):
        need = excess[i]
        pool = sorted(vs - pinned, key=lambda v: (wa.weights[v], v))
        if len(pool) < need:
            return None
        wsets.append(frozenset(pool[:need]))
    return tuple(wsets)


def apply_recolor(coloring: Coloring, wsets: Sequence[frozenset]) -> Coloring:
    """Move every vertex of W_i out of class i into class r, on a copy."""
    r = coloring.r
    if len(wsets) != r - 1:
        raise ValueError("need one recolor set per color below r")
    out = coloring.copy()
    for i, ws in enumerate(wsets, start=1):
        for v in ws:
            if out.colors[v] != i:
                raise ValueError(f"recolor set {i} contains vertex {v} not colored {i}")
            out.assign(v, r)
    return out


def build_rebalance_plan(
    h: Hypergraph,
    partition: IntervalPartition,
    wa: WeightAssignment,
    coloring: Coloring,
    targets: Sequence[int],
    seed: Union[int, np.random.Generator],
    p_tilde: Optional[float] = None,
) -> RebalancePlan:
    """Run one full rebalancing pass and record every intermediate artifact.

    ``p_tilde`` overrides the derived keep probability; without it, small
    instances raise RegimeViolation before any sampling happens.
    """
    ex, sh = excess_shortage(coloring, targets)
    q = compute_q(h.m, h.n, partition.r, partition.p)
    if p_tilde is None:
        p_tilde = compute_p_tilde(h.m, h.n, partition.r, partition.p, q=q)
    vsets = sample_candidate_sets(h, partition, wa, p_tilde, seed)
    dangerous = tuple(find_dangerous_edges(h, coloring, vsets))
    wsets = select_recolor_sets(vsets, dangerous, ex, wa)
    return RebalancePlan(ex, sh, q, p_tilde, vsets, dangerous, wsets)
