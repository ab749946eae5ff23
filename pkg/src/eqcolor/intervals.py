"""Interval partition of [0,1) and the two-stage randomized coloring.

Each vertex draws a uniform weight in [0,1).  The unit interval is split
into r large blocks separated by r-1 small blocks,

    large_1, small_1, large_2, small_2, ..., small_{r-1}, large_r,

where every large block has length (1-p)/r and every small block has
length p/(r-1).  Stage 1 colors the vertices of large_i with color i.
Stage 2 walks the small-block vertices in increasing weight: a vertex in
small_i takes color i unless that would complete a monochromatic edge
among the already colored vertices, in which case it is deflected to
color i+1 unconditionally.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .hypergraph import Coloring, Hypergraph

__all__ = [
    "LARGE",
    "SMALL",
    "InitialColoring",
    "IntervalPartition",
    "MonoProbability",
    "Subinterval",
    "WeightAssignment",
    "balanced_mono_prob",
    "build_partition",
    "choose_p",
    "run_interval_coloring",
    "sample_balanced_coloring",
    "sample_weights",
]

LARGE = "large"
SMALL = "small"


class Subinterval(NamedTuple):
    kind: str
    index: int


def choose_p(n: int, r: int) -> float:
    """Total small-block mass p = ((r-1)/r) * ln(n / ln n) / n.

    Tuned so stage 2 has just enough slack to absorb deflections when the
    edge count is below the colorability threshold.
    """
    if n < 2 or r < 2:
        raise ValueError("choose_p requires n >= 2 and r >= 2")
    p = (r - 1) / r * math.log(n / math.log(n)) / n
    if not 0.0 < p < 1.0:
        raise ValueError(f"degenerate parameters: p = {p} outside (0, 1)")
    return p


@dataclass(frozen=True)
class IntervalPartition:
    """The 2r-1 alternating subintervals of [0,1) for a given p and r.

    Boundaries are computed from the closed forms
    large_i = [(i-1)(L+s), iL + (i-1)s) and small_i = [iL + (i-1)s, i(L+s))
    with L = (1-p)/r and s = p/(r-1), never by accumulating sums.
    """

    p: float
    r: int
    large_bounds: tuple[tuple[float, float], ...] = field(init=False)
    small_bounds: tuple[tuple[float, float], ...] = field(init=False)
    lefts: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("partition requires r >= 2")
        if not 0.0 <= self.p < 1.0:
            raise ValueError(f"p must lie in [0, 1), got {self.p}")
        big = (1.0 - self.p) / self.r
        small = self.p / (self.r - 1)
        large = tuple(
            ((i - 1) * (big + small), i * big + (i - 1) * small) for i in range(1, self.r + 1)
        )
        tiny = tuple((i * big + (i - 1) * small, i * (big + small)) for i in range(1, self.r))
        lefts = []
        for i in range(self.r - 1):
            lefts.append(large[i][0])
            lefts.append(tiny[i][0])
        lefts.append(large[-1][0])
        object.__setattr__(self, "large_bounds", large)
        object.__setattr__(self, "small_bounds", tiny)
        object.__setattr__(self, "lefts", tuple(lefts))

    def slot_of(self, x: float) -> int:
        """Flat subinterval index 0..2r-2; even slots are large, odd small."""
        if not 0.0 <= x < 1.0:
            raise ValueError(f"weight {x} outside [0, 1)")
        return bisect_right(self.lefts, x) - 1

    def locate(self, x: float) -> Subinterval:
        s = self.slot_of(x)
        if s % 2 == 0:
            return Subinterval(LARGE, s // 2 + 1)
        return Subinterval(SMALL, s // 2 + 1)

    def slot_lengths(self) -> list[float]:
        big = (1.0 - self.p) / self.r
        small = self.p / (self.r - 1)
        out = []
        for _ in range(self.r - 1):
            out.append(big)
            out.append(small)
        out.append(big)
        return out


def build_partition(p: float, r: int) -> IntervalPartition:
    return IntervalPartition(p, r)


class WeightAssignment:
    """Vertex weights plus the induced vertex order.

    Ties (which have probability zero under continuous draws but can be
    constructed) break by vertex id, and every first/last comparison in the
    package goes through the rank array so the order is used consistently.
    """

    __slots__ = ("weights", "sorted_order", "rank")

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        self.weights = w
        order = np.lexsort((np.arange(len(w)), w))
        self.sorted_order = order
        rank = np.empty(len(w), dtype=np.int64)
        rank[order] = np.arange(len(w))
        self.rank = rank

    @property
    def m(self) -> int:
        return len(self.weights)

    def first_vertex(self, vertices: Sequence[int]) -> int:
        return min(vertices, key=lambda v: self.rank[v])

    def last_vertex(self, vertices: Sequence[int]) -> int:
        return max(vertices, key=lambda v: self.rank[v])


def sample_weights(m: int, seed) -> WeightAssignment:
    """Independent uniform [0,1) weights for m vertices (PCG64, fixed seed).

    ``seed`` may be an integer or a numpy Generator to draw from directly.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return WeightAssignment(rng.random(m))


@dataclass
class InitialColoring:
    """Output of the two-stage coloring.

    deflections[i-1] counts the small_i vertices pushed to color i+1, and
    occupancy[i-1] counts the vertices whose weight landed in
    large_i union small_i (just large_r for the last color).  blocking maps
    each deflected vertex to the edge index that forced the deflection,
    the lowest-index incident edge that would have gone monochromatic.
    """

    coloring: Coloring
    deflections: tuple[int, ...]
    occupancy: tuple[int, ...]
    blocking: dict[int, int]

    def to_json_dict(self) -> dict:
        out = self.coloring.to_json_dict()
        out["X"] = list(self.deflections)
        out["Z"] = list(self.occupancy)
        return out


def _stage_colors(
    h: Hypergraph, r: int, partition: IntervalPartition, wa: WeightAssignment
) -> tuple[list[int], list[int], list[int], dict[int, int]]:
    """Core of the two-stage coloring, shared with the Monte Carlo driver."""
    m = h.m
    weights = wa.weights
    slot_of = partition.slot_of
    colors = [0] * m
    occupancy = [0] * r
    deflections = [0] * (r - 1)
    blocking: dict[int, int] = {}
    edges = h.edges
    incidence = h.incidence

    pending: list[tuple[int, int]] = []
    for v in wa.sorted_order:
        s = slot_of(weights[v])
        block = s // 2
        occupancy[block] += 1
        if s % 2 == 0:
            colors[v] = block + 1
        else:
            pending.append((int(v), block + 1))

    for v, i in pending:
        blocked = -1
        for e_idx in incidence[v]:
            e = edges[e_idx]
            if all(colors[u] == i for u in e if u != v):
                blocked = e_idx
                break
        if blocked >= 0:
            colors[v] = i + 1
            deflections[i - 1] += 1
            blocking[v] = blocked
        else:
            colors[v] = i
    return colors, deflections, occupancy, blocking


def run_interval_coloring(
    h: Hypergraph, r: int, partition: IntervalPartition, wa: WeightAssignment
) -> InitialColoring:
    """Run both stages deterministically for the given weights.

    Stage 2 processes small-block vertices in increasing weight (ties by
    vertex id).  A vertex of small_i only ever receives color i or i+1;
    deflection to i+1 is unconditional even if it completes a
    monochromatic edge of color i+1.
    """
    if partition.r != r:
        raise ValueError("partition was built for a different number of colors")
    if wa.m != h.m:
        raise ValueError("weight vector length does not match vertex count")
    colors, deflections, occupancy, blocking = _stage_colors(h, r, partition, wa)
    return InitialColoring(
        Coloring(h.m, r, colors), tuple(deflections), tuple(occupancy), blocking
    )


class MonoProbability(NamedTuple):
    value: float
    exact: Fraction


def balanced_mono_prob(m: int, n: int, r: int) -> MonoProbability:
    """P(a fixed n-edge is monochromatic) under a uniform balanced coloring.

    Exactly r * C(m-n, m/r-n) / C(m, m/r), computed in integer arithmetic.
    Zero when a class cannot hold a whole edge (n > m/r).
    """
    if m % r != 0:
        raise ValueError(f"balanced colorings need r | m, got m={m}, r={r}")
    if not 0 < n <= m:
        raise ValueError(f"edge size {n} outside 1..{m}")
    size = m // r
    if n > size:
        frac = Fraction(0)
    else:
        frac = Fraction(r * math.comb(m - n, size - n), math.comb(m, size))
    return MonoProbability(float(frac), frac)


def sample_balanced_coloring(m: int, r: int, seed) -> Coloring:
    """Uniformly random coloring with every class of size exactly m/r.

    A uniform permutation is cut into r consecutive blocks; each balanced
    coloring arises from the same number of permutations, so the draw is
    uniform.  ``seed`` may be an integer or a numpy Generator.
    """
    if m % r != 0:
        raise ValueError(f"balanced colorings need r | m, got m={m}, r={r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    perm = rng.permutation(m)
    colors = [0] * m
    size = m // r
    for c in range(r):
        for v in perm[c * size : (c + 1) * size]:
            colors[v] = c + 1
    return Coloring(m, r, colors)
