"""Monte Carlo estimators and an exact discrete oracle for the coloring
process.

The estimators sample the two-stage coloring (or the balanced draw) in
chunks and report a point estimate with a 3-sigma half-width, next to a
comparison value: the exact oracle where enumeration is affordable, the
closed-form bound otherwise.  Each trial's randomness is a pure function of
(seed, trial index), so aggregate counts do not depend on execution order
or on the total trial count.

The oracle exploits a discreteness property of the process: the outcome
depends only on which of the 2r-1 subintervals each vertex falls in (the
probability is a product of subinterval lengths) and on the relative order
of vertices inside each small block (uniform over permutations).  Summing
the exact measure over all such configurations gives the event probability
with no sampling error.  The oracle's simulator is written against that
discrete representation, separately from the sampling kernel, so the two
routes can check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product
from typing import Optional, Sequence

import numpy as np

from .chains import (
    Deflected,
    chain_probability_bound,
    dangerous_count_bound,
    expected_deflections_bound,
    mono_edge_probability_bound,
)
from .hypergraph import BudgetExceeded, Hypergraph, class_targets
from .intervals import balanced_mono_prob, build_partition, choose_p
from .rebalance import compute_p_tilde
from .seeding import ROLE_TRIALS, derive

__all__ = [
    "ChainEventSpec",
    "Comparison",
    "EstimateReport",
    "MonoEdgeExists",
    "QUANTITIES",
    "exact_c0_event_prob",
    "mc_estimate",
]

CHUNK_ROWS = 16384
_CHUNK_CELLS = 1 << 22

QUANTITIES = (
    "mono-edge",
    "expected-deflections",
    "excess-pattern",
    "dangerous-count",
    "balanced-mono",
    "chain-event",
    "deflected",
)


@dataclass(frozen=True)
class MonoEdgeExists:
    """Oracle event: some edge is monochromatic after the two stages."""


@dataclass(frozen=True)
class ChainEventSpec:
    """Oracle event: the fixed edge tuple forms an ordered chain certifying
    a monochromatic last edge of the given color."""

    edges: tuple[int, ...]
    color: int


@dataclass(frozen=True)
class Comparison:
    kind: str  # "exact" | "bound"
    value: float


@dataclass(frozen=True)
class EstimateReport:
    quantity: str
    trials: int
    estimate: float
    half_width: float
    comparison: Optional[Comparison]

    def to_json_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "trials": self.trials,
            "estimate": self.estimate,
            "half_width": self.half_width,
            "comparison": None
            if self.comparison is None
            else {"kind": self.comparison.kind, "value": self.comparison.value},
        }


def _chunk_rows(width: int) -> int:
    return max(1, min(CHUNK_ROWS, _CHUNK_CELLS // max(1, width)))


def _trial_colors(h: Hypergraph, r: int, slots_row, order_row) -> list[int]:
    """Colors after both stages, given each vertex's subinterval slot (0,
    2, ... are large blocks; 1, 3, ... small) and the vertices in weight
    order.  Mirrors the floating-point pipeline; the two are held equal by
    tests."""
    colors = [0] * h.m
    for v in range(h.m):
        s = slots_row[v]
        if s % 2 == 0:
            colors[v] = s // 2 + 1
    for v in order_row:
        s = slots_row[v]
        if s % 2 == 0:
            continue
        i = (s + 1) // 2
        deflect = False
        for e in h.incidence[v]:
            if all(colors[u] == i for u in h.edges[e] if u != v):
                deflect = True
                break
        colors[v] = i + 1 if deflect else i
    return colors


def _mono_exists(h: Hypergraph, colors: Sequence[int]) -> bool:
    for edge in h.edges:
        c = colors[edge[0]]
        if all(colors[v] == c for v in edge[1:]):
            return True
    return False


def _run_two_stage(
    h: Hypergraph,
    r: int,
    p: float,
    trials: int,
    seed: int,
    stat,
    with_keep: bool = False,
) -> tuple[float, float]:
    """Chunked sampling loop.  ``stat(colors, slots_row, u_row, keep_row)``
    returns the trial's statistic; the sums of values and squared values
    come back for the caller to turn into estimate and half-width."""
    partition = build_partition(p, r)
    lefts = np.asarray(partition.lefts)
    m = h.m
    width = 2 * m if with_keep else m
    rows = _chunk_rows(width)
    total = 0.0
    total_sq = 0.0
    done = 0
    chunk = 0
    while done < trials:
        take = min(rows, trials - done)
        rng = derive(seed, chunk, ROLE_TRIALS)
        mat = rng.random((take, width))
        u = mat[:, :m]
        slots = np.searchsorted(lefts, u, side="right") - 1
        order = np.argsort(u, axis=1, kind="stable")
        for t in range(take):
            slots_row = slots[t].tolist()
            order_row = order[t].tolist()
            colors = _trial_colors(h, r, slots_row, order_row)
            keep_row = mat[t, m:] if with_keep else None
            val = stat(colors, slots_row, u[t], keep_row)
            total += val
            total_sq += val * val
        done += take
        chunk += 1
    return total, total_sq


def _prob_report(quantity: str, trials: int, successes: float, comparison) -> EstimateReport:
    p_hat = successes / trials
    hw = 3.0 * math.sqrt(max(0.0, p_hat * (1.0 - p_hat)) / trials)
    return EstimateReport(quantity, trials, p_hat, hw, comparison)


def _mean_report(
    quantity: str, trials: int, total: float, total_sq: float, comparison
) -> EstimateReport:
    mean = total / trials
    if trials >= 2:
        var = max(0.0, (total_sq - total * total / trials) / (trials - 1))
        hw = 3.0 * math.sqrt(var / trials)
    else:
        hw = 0.0
    return EstimateReport(quantity, trials, mean, hw, comparison)


def _oracle_or_bound(
    h: Hypergraph,
    r: int,
    p: float,
    event,
    bound_value: Optional[float],
    budget: int = 10**6,
) -> Optional[Comparison]:
    if h.m <= 8 and r <= 3:
        try:
            return Comparison("exact", exact_c0_event_prob(h, r, event, p=p, budget=budget))
        except BudgetExceeded:
            pass
    if bound_value is None:
        return None
    return Comparison("bound", bound_value)


def mc_estimate(
    quantity: str,
    h: Hypergraph,
    r: int,
    params: Optional[dict] = None,
    trials: int = 10**5,
    seed: int = 0,
    compare: bool = True,
) -> EstimateReport:
    """Estimate one quantity of the coloring process by simulation.

    Quantities and their params:

    * ``mono-edge``: probability that the two stages leave some edge
      monochromatic.
    * ``expected-deflections`` (``i``): mean number of deflections out of
      small_i.
    * ``excess-pattern``: probability that every class below r ends at or
      above its target size (its closed-form comparison is a lower bound).
    * ``dangerous-count`` (optional ``p_tilde``): mean number of dangerous
      edges when candidate sets are drawn after every run, monochromatic
      or not; the comparison value is the tail threshold the count should
      rarely exceed, not its mean.
    * ``balanced-mono`` (optional ``edge``): probability that a fixed edge
      is monochromatic under a uniform balanced draw; requires r | m.
    * ``chain-event`` (``edges``, ``color``): probability that the fixed
      tuple forms an ordered chain certifying a monochromatic last edge.
    * ``deflected`` (``v``, optional ``i``): probability that a fixed
      vertex is deflected, out of small_i or out of any small block.

    ``p`` in params overrides the derived subinterval parameter.  With
    ``compare`` the report carries the exact oracle value when m <= 8 and
    r <= 3 allow enumeration, falling back to the closed-form bound.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    params = dict(params or {})
    m = h.m

    if quantity == "balanced-mono":
        if m % r != 0:
            raise ValueError("balanced draws require r | m")
        if not h.edges:
            raise ValueError("balanced-mono needs an edge to watch")
        edge_idx = int(params.pop("edge", 0))
        _reject_extra(params)
        edge = list(h.edges[edge_idx])
        rows = _chunk_rows(m)
        block = m // r
        successes = 0
        done = 0
        chunk = 0
        while done < trials:
            take = min(rows, trials - done)
            rng = derive(seed, chunk, ROLE_TRIALS)
            u = rng.random((take, m))
            ranks = np.argsort(np.argsort(u, axis=1, kind="stable"), axis=1, kind="stable")
            cols = ranks // block
            sub = cols[:, edge]
            successes += int(np.sum(np.all(sub == sub[:, :1], axis=1)))
            done += take
            chunk += 1
        comparison = None
        if compare:
            comparison = Comparison("exact", float(balanced_mono_prob(m, h.n, r).value))
        return _prob_report(f"balanced-mono(edge={edge_idx})", trials, successes, comparison)

    p_param = params.pop("p", None)
    p = float(p_param) if p_param is not None else choose_p(h.n, r)

    if quantity == "mono-edge":
        _reject_extra(params)

        def stat(colors, slots, u, keep):
            return 1 if _mono_exists(h, colors) else 0

        total, _ = _run_two_stage(h, r, p, trials, seed, stat)
        comparison = (
            _oracle_or_bound(h, r, p, MonoEdgeExists(), mono_edge_probability_bound())
            if compare
            else None
        )
        return _prob_report("mono-edge", trials, total, comparison)

    if quantity == "expected-deflections":
        i = int(_require(params, "i", quantity))
        _reject_extra(params)
        if not 1 <= i <= r - 1:
            raise ValueError(f"small-block index must lie in 1..{r - 1}")
        slot = 2 * i - 1

        def stat(colors, slots, u, keep):
            return sum(
                1 for v in range(m) if slots[v] == slot and colors[v] == i + 1
            )

        total, total_sq = _run_two_stage(h, r, p, trials, seed, stat)
        comparison = None
        if compare:
            if m <= 8 and r <= 3:
                try:
                    exact = sum(
                        exact_c0_event_prob(h, r, Deflected(v, i), p=p, budget=10**6)
                        for v in range(m)
                    )
                    comparison = Comparison("exact", exact)
                except BudgetExceeded:
                    comparison = None
            if comparison is None:
                comparison = Comparison("bound", expected_deflections_bound(h.n, r))
        return _mean_report(f"expected-deflections(i={i})", trials, total, total_sq, comparison)

    if quantity == "excess-pattern":
        _reject_extra(params)
        targets = class_targets(m, r)

        def stat(colors, slots, u, keep):
            sizes = [0] * r
            for c in colors:
                sizes[c - 1] += 1
            return 1 if all(sizes[c] >= targets[c] for c in range(r - 1)) else 0

        total, _ = _run_two_stage(h, r, p, trials, seed, stat)
        comparison = Comparison("bound", 0.5 - 0.04 * math.e) if compare else None
        return _prob_report("excess-pattern", trials, total, comparison)

    if quantity == "dangerous-count":
        p_tilde = params.pop("p_tilde", None)
        _reject_extra(params)
        p_tilde = (
            float(p_tilde) if p_tilde is not None else compute_p_tilde(m, h.n, r, p)
        )
        if not 0.0 <= p_tilde <= 1.0:
            raise ValueError("keep probability must lie in [0, 1]")

        def stat(colors, slots, u, keep):
            count = 0
            for edge in h.edges:
                has_candidate = False
                rest_all_r = True
                for v in edge:
                    s = slots[v]
                    if s % 2 == 0 and s // 2 + 1 <= r - 1 and keep[v] < p_tilde:
                        has_candidate = True
                    elif colors[v] != r:
                        rest_all_r = False
                        break
                if has_candidate and rest_all_r:
                    count += 1
            return count

        total, total_sq = _run_two_stage(h, r, p, trials, seed, stat, with_keep=True)
        comparison = (
            Comparison("bound", dangerous_count_bound(h.n, r)) if compare else None
        )
        return _mean_report(
            f"dangerous-count(p_tilde={p_tilde:.6g})", trials, total, total_sq, comparison
        )

    if quantity == "chain-event":
        seq = tuple(int(e) for e in _require(params, "edges", quantity))
        color = int(_require(params, "color", quantity))
        _reject_extra(params)
        k = len(seq)
        if k < 1 or not all(0 <= e < len(h.edges) for e in seq):
            raise ValueError("edges must index into the hypergraph")
        if color - k + 1 < 1 or color > r:
            raise ValueError("chain length does not fit the color")
        members = [h.edges[e] for e in seq]
        shared = []
        for j in range(k - 1):
            common = set(members[j]) & set(members[j + 1])
            if len(common) != 1:
                raise ValueError("consecutive edges must share exactly one vertex")
            shared.append(common.pop())

        def stat(colors, slots, u, keep):
            if any(colors[v] != color for v in members[-1]):
                return 0
            for j in range(k - 1):
                c = color - k + j + 2
                v = shared[j]
                if slots[v] != 2 * c - 3:
                    return 0
                b_others = [w for w in members[j] if w != v]
                a_others = [w for w in members[j + 1] if w != v]
                if any(u[w] > u[v] for w in b_others):
                    return 0
                if any(u[w] < u[v] for w in a_others):
                    return 0
                if any(colors[w] != c - 1 for w in b_others):
                    return 0
            if k == 1:
                return 1 if all(slots[v] == 2 * color - 2 for v in members[0]) else 0
            c1 = color - k + 1
            first = min(members[0], key=lambda w: u[w])
            return 1 if slots[first] in (2 * c1 - 2, 2 * c1 - 1) else 0

        total, _ = _run_two_stage(h, r, p, trials, seed, stat)
        comparison = (
            _oracle_or_bound(
                h,
                r,
                p,
                ChainEventSpec(seq, color),
                chain_probability_bound(h.n, r, k),
            )
            if compare
            else None
        )
        label = f"chain-event(edges={','.join(map(str, seq))};color={color})"
        return _prob_report(label, trials, total, comparison)

    # deflected
    v0 = int(_require(params, "v", quantity))
    i = params.pop("i", None)
    _reject_extra(params)
    if not 0 <= v0 < m:
        raise ValueError("vertex out of range")
    if i is not None:
        i = int(i)
        if not 1 <= i <= r - 1:
            raise ValueError(f"small-block index must lie in 1..{r - 1}")

    def stat(colors, slots, u, keep):
        s = slots[v0]
        if s % 2 == 0:
            return 0
        block = (s + 1) // 2
        if i is not None and block != i:
            return 0
        return 1 if colors[v0] == block + 1 else 0

    total, _ = _run_two_stage(h, r, p, trials, seed, stat)
    comparison = (
        _oracle_or_bound(h, r, p, Deflected(v0, i), None) if compare else None
    )
    label = f"deflected(v={v0})" if i is None else f"deflected(v={v0},i={i})"
    return _prob_report(label, trials, total, comparison)


def _reject_extra(params: dict) -> None:
    if params:
        raise ValueError(f"unexpected params: {sorted(params)}")


def _require(params: dict, key: str, quantity: str):
    if key not in params:
        raise ValueError(f"{quantity} needs params[{key!r}]")
    return params.pop(key)


def exact_c0_event_prob(
    h: Hypergraph,
    r: int,
    event,
    p: Optional[float] = None,
    budget: int = 10**7,
) -> float:
    """Exact probability of an event of the two-stage coloring, by
    enumerating every (subinterval assignment, within-small-block order)
    configuration with its exact measure.

    Supports MonoEdgeExists, Deflected (interval None means any small
    block), and ChainEventSpec.  Requires m <= 8 and r <= 3; raises
    BudgetExceeded when the configuration count passes ``budget``.
    """
    if r < 2:
        raise ValueError("need at least 2 colors")
    if h.m > 8 or r > 3:
        raise ValueError("exact enumeration supports m <= 8 and r <= 3")
    if p is None:
        p = choose_p(h.n, r)
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    m = h.m
    large_len = (1.0 - p) / r
    small_len = p / (r - 1)
    lengths = [large_len if s % 2 == 0 else small_len for s in range(2 * r - 1)]
    factorial = math.factorial

    total = 0.0
    visits = 0
    for slots in product(range(2 * r - 1), repeat=m):
        weight = 1.0
        for s in slots:
            weight *= lengths[s]
        occupants = [
            [v for v in range(m) if slots[v] == 2 * i - 1] for i in range(1, r)
        ]
        denom = 1
        for g in occupants:
            denom *= factorial(len(g))
        w_order = weight / denom
        for orders in product(*(permutations(g) for g in occupants)):
            visits += 1
            if visits > budget:
                raise BudgetExceeded(f"exact enumeration exceeded budget {budget}")
            colors = _simulate_discrete(h, r, slots, orders)
            if _event_holds(h, r, event, slots, orders, colors):
                total += w_order
    return total


def _simulate_discrete(
    h: Hypergraph, r: int, slots: Sequence[int], orders
) -> list[int]:
    """The oracle's own simulator: color large blocks, then process each
    small block in position order, deflecting a vertex whenever keeping it
    would finish a monochromatic edge among colored vertices."""
    colors = [0] * h.m
    for v in range(h.m):
        if slots[v] % 2 == 0:
            colors[v] = slots[v] // 2 + 1
    for i, block in enumerate(orders, start=1):
        for v in block:
            deflect = False
            for e in h.incidence[v]:
                if all(colors[u] == i for u in h.edges[e] if u != v):
                    deflect = True
                    break
            colors[v] = i + 1 if deflect else i
    return colors


def _event_holds(h, r, event, slots, orders, colors) -> bool:
    if isinstance(event, MonoEdgeExists):
        return _mono_exists(h, colors)

    if isinstance(event, Deflected):
        v = event.vertex
        s = slots[v]
        if s % 2 == 0:
            return False
        block = (s + 1) // 2
        if event.interval is not None and block != event.interval:
            return False
        return colors[v] == block + 1

    if isinstance(event, ChainEventSpec):
        seq = event.edges
        color = event.color
        k = len(seq)
        if color - k + 1 < 1:
            return False
        members = [h.edges[e] for e in seq]
        if any(colors[v] != color for v in members[-1]):
            return False
        # rank: slots order first, then position inside the small block;
        # vertex id breaks ties inside large blocks, where order is
        # immaterial to every comparison below
        pos = {}
        for block in orders:
            for idx, v in enumerate(block):
                pos[v] = idx

        def rank(v):
            return (slots[v], pos.get(v, v))

        if k == 1:
            return all(slots[v] == 2 * color - 2 for v in members[0])
        for j in range(k - 1):
            c = color - k + j + 2
            common = set(members[j]) & set(members[j + 1])
            if len(common) != 1:
                return False
            v = common.pop()
            if slots[v] != 2 * c - 3:
                return False
            if max(members[j], key=rank) != v or min(members[j + 1], key=rank) != v:
                return False
            if any(colors[w] != c - 1 for w in members[j] if w != v):
                return False
        c1 = color - k + 1
        first = min(members[0], key=rank)
        return slots[first] in (2 * c1 - 2, 2 * c1 - 1)

    raise TypeError(f"unknown event type {type(event).__name__}")
