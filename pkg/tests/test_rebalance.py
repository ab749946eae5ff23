"""Excess accounting, candidate sampling, dangerous edges, and the recoloring pass."""

import math

import numpy as np
import pytest

from eqcolor import (
    Coloring,
    Hypergraph,
    RegimeViolation,
    WeightAssignment,
    apply_recolor,
    build_partition,
    build_rebalance_plan,
    choose_p,
    class_targets,
    compute_p_tilde,
    compute_q,
    excess_shortage,
    find_dangerous_edges,
    is_proper,
    run_interval_coloring,
    sample_candidate_sets,
    sample_weights,
    select_recolor_sets,
)
from eqcolor.chains import DangerousEdge


def _coloring_with_sizes(sizes):
    colors = []
    for c, s in enumerate(sizes, start=1):
        colors.extend([c] * s)
    return Coloring(sum(sizes), len(sizes), colors)


def test_excess_shortage_examples():
    assert excess_shortage(_coloring_with_sizes((3, 2, 1)), (2, 2, 2)) == (
        (1, 0, 0),
        (0, 0, 1),
    )
    assert excess_shortage(_coloring_with_sizes((2, 2, 2)), (2, 2, 2)) == (
        (0, 0, 0),
        (0, 0, 0),
    )
    assert excess_shortage(_coloring_with_sizes((4, 1, 1)), (2, 2, 2)) == (
        (2, 0, 0),
        (0, 1, 1),
    )


def test_excess_shortage_checks_target_length():
    with pytest.raises(ValueError):
        excess_shortage(_coloring_with_sizes((2, 2)), (2, 2, 2))


def test_excess_shortage_balances_when_targets_do():
    rng = np.random.default_rng(3)
    for _ in range(100):
        r = int(rng.integers(2, 6))
        m = int(rng.integers(r, 30))
        colors = [int(rng.integers(1, r + 1)) for _ in range(m)]
        ex, sh = excess_shortage(Coloring(m, r, colors), class_targets(m, r))
        assert sum(ex) == sum(sh)
        assert all(e == 0 or s == 0 for e, s in zip(ex, sh))


def test_compute_q_spot_value_and_decomposition():
    p = choose_p(100, 2)
    q = compute_q(10**4, 100, 2, p)
    assert q == pytest.approx(534.0430709897241, rel=1e-12)
    term1 = 10**4 * p / (2 * 1)
    term2 = 2 * math.sqrt(13 * 10**4 * math.log(2) / 2)
    term3 = (3 / 2) * 100 / math.log(100)
    assert term1 == pytest.approx(76.94976400450476, rel=1e-9)
    assert q == pytest.approx(term1 + term2 + term3, rel=1e-12)


def test_compute_q_sqrt_term_scales_with_m():
    p = choose_p(100, 2)
    base = compute_q(10**4, 100, 2, p)
    quad = compute_q(4 * 10**4, 100, 2, p)
    term1 = 10**4 * p / 2
    term3 = 1.5 * 100 / math.log(100)
    assert quad - 4 * term1 - term3 == pytest.approx(2 * (base - term1 - term3), rel=1e-9)


def test_compute_p_tilde_spot_value():
    p = choose_p(100, 2)
    assert compute_p_tilde(10**4, 100, 2, p) == pytest.approx(
        0.10847808683425605, rel=1e-12
    )
    assert compute_p_tilde(10**4, 100, 2, p, q=0.0) == 0.0


def test_compute_p_tilde_rejects_small_instances():
    with pytest.raises(RegimeViolation):
        compute_p_tilde(20, 100, 2, choose_p(100, 2))


def _fixture_run(m=14, seed=5, r=3):
    h = Hypergraph(m, 2, [(0, 1), (2, 3), (4, 5)])
    part = build_partition(0.3, r)
    wa = sample_weights(m, seed)
    init = run_interval_coloring(h, r, part, wa)
    return h, part, wa, init


def test_sample_candidate_sets_extremes_and_determinism():
    h, part, wa, _ = _fixture_run()
    empty = sample_candidate_sets(h, part, wa, 0.0, seed=1)
    assert all(len(s) == 0 for s in empty)
    full = sample_candidate_sets(h, part, wa, 1.0, seed=1)
    occupants = [set() for _ in range(part.r - 1)]
    for v in range(h.m):
        loc = part.locate(wa.weights[v])
        if loc.kind == "large" and loc.index < part.r:
            occupants[loc.index - 1].add(v)
    assert [set(s) for s in full] == occupants
    again = sample_candidate_sets(h, part, wa, 0.5, seed=7)
    assert sample_candidate_sets(h, part, wa, 0.5, seed=7) == again
    for s, occ in zip(again, occupants):
        assert s <= occ


def test_sample_candidate_sets_keep_rate():
    h, part, wa, _ = _fixture_run(m=40, seed=2)
    occupants = sample_candidate_sets(h, part, wa, 1.0, seed=0)
    total_occ = sum(len(s) for s in occupants)
    p_tilde = 0.35
    kept = 0
    trials = 3000
    for t in range(trials):
        vs = sample_candidate_sets(h, part, wa, p_tilde, seed=t)
        kept += sum(len(s) for s in vs)
    mean = kept / trials
    sigma = math.sqrt(total_occ * p_tilde * (1 - p_tilde) / trials)
    assert abs(mean - total_occ * p_tilde) < 4 * sigma


def test_sample_candidate_sets_rejects_bad_probability():
    h, part, wa, _ = _fixture_run()
    with pytest.raises(ValueError):
        sample_candidate_sets(h, part, wa, 1.5, seed=0)


def test_find_dangerous_edges_hand_case():
    # edge (2,3,4): vertices 3,4 wear the top color, vertex 2 is a candidate
    h = Hypergraph(5, 3, [(2, 3, 4)])
    coloring = Coloring(5, 2, [1, 1, 1, 2, 2])
    dangerous = find_dangerous_edges(h, coloring, (frozenset({2}),))
    assert dangerous == [DangerousEdge(0, (2,))]
    assert find_dangerous_edges(h, coloring, (frozenset(),)) == []
    # vertex 1 not in any candidate set and not colored r: edge is safe
    h2 = Hypergraph(5, 3, [(1, 2, 4)])
    assert find_dangerous_edges(h2, coloring, (frozenset({2}),)) == []


def test_find_dangerous_edges_takes_maximal_candidate_set():
    h = Hypergraph(4, 3, [(0, 1, 3)])
    coloring = Coloring(4, 2, [1, 1, 1, 2])
    dangerous = find_dangerous_edges(h, coloring, (frozenset({0, 1}),))
    assert dangerous == [DangerousEdge(0, (0, 1))]


def test_select_recolor_sets_basic():
    wa = WeightAssignment((0.05, 0.15, 0.25, 0.35))
    vsets = (frozenset({0, 1, 2}),)
    dangerous = [DangerousEdge(0, (0,))]  # pins vertex 0
    wsets = select_recolor_sets(vsets, dangerous, (1,), wa)
    assert wsets == (frozenset({1}),)  # lowest-weight unpinned candidate


def test_select_recolor_sets_zero_excess():
    wa = WeightAssignment((0.05, 0.15))
    assert select_recolor_sets((frozenset({0, 1}),), [], (0,), wa) == (frozenset(),)


def test_select_recolor_sets_forced_infeasible():
    wa = WeightAssignment((0.05, 0.15))
    vsets = (frozenset({0}),)
    dangerous = [DangerousEdge(0, (0,))]
    assert select_recolor_sets(vsets, dangerous, (1,), wa) is None


def test_select_recolor_sets_never_swallows_a_candidate_set():
    # a recoloring chosen by the rule can never cover any dangerous edge's
    # full candidate set
    rng = np.random.default_rng(17)
    for _ in range(200):
        m = int(rng.integers(3, 12))
        wa = WeightAssignment(rng.random(m))
        vs = frozenset(int(v) for v in rng.choice(m, rng.integers(1, m), replace=False))
        n_d = int(rng.integers(0, 4))
        dangerous = []
        for _ in range(n_d):
            size = int(rng.integers(1, max(2, len(vs))))
            u = tuple(sorted(rng.choice(sorted(vs), min(size, len(vs)), replace=False)))
            dangerous.append(DangerousEdge(0, u))
        ex = int(rng.integers(0, len(vs) + 1))
        wsets = select_recolor_sets((vs,), dangerous, (ex,), wa)
        if wsets is None:
            continue
        assert len(wsets[0]) == ex and wsets[0] <= vs
        for d in dangerous:
            assert not set(d.u_vertices) <= wsets[0]


def test_apply_recolor_examples():
    c = _coloring_with_sizes((3, 1))
    unchanged = apply_recolor(c, (frozenset(),))
    assert unchanged.colors == c.colors and unchanged is not c
    moved = apply_recolor(c, (frozenset({0}),))
    assert moved.sizes == [2, 2] and moved.colors[0] == 2
    assert c.sizes == [3, 1]  # original untouched
    with pytest.raises(ValueError):
        apply_recolor(c, (frozenset({3}),))  # vertex 3 wears color 2, not 1
    with pytest.raises(ValueError):
        apply_recolor(c, ())  # needs r-1 sets


def test_build_rebalance_plan_records_everything():
    h, part, wa, init = _fixture_run(m=14, seed=11)
    targets = class_targets(h.m, part.r)
    plan = build_rebalance_plan(
        h, part, wa, init.coloring, targets, seed=3, p_tilde=0.6
    )
    assert plan.excess == tuple(
        max(0, s - t) for s, t in zip(init.coloring.sizes, targets)
    )
    assert plan.p_tilde == 0.6
    obj = plan.to_json_dict()
    assert set(obj) == {"ex", "sh", "q", "p_tilde", "V", "dangerous", "W"}
    assert (obj["W"] is not None) == plan.feasible


def test_build_rebalance_plan_regime_violation_without_override():
    h, part, wa, init = _fixture_run(m=14, seed=11)
    with pytest.raises(RegimeViolation):
        build_rebalance_plan(
            h, part, wa, init.coloring, class_targets(h.m, part.r), seed=3
        )


def test_rebalance_safety_property():
    # whenever the pass succeeds on a proper coloring whose only shortage is
    # the top color, the result is proper and exactly at the targets
    rng = np.random.default_rng(29)
    applied = 0
    attempts = 0
    while applied < 40 and attempts < 3000:
        attempts += 1
        m = int(rng.integers(6, 24))
        r = int(rng.integers(2, 4))
        if m % r:
            m -= m % r
            if m < r * 2:
                continue
        ne = int(rng.integers(1, min(math.comb(m, 2), 8) + 1))
        edges = set()
        while len(edges) < ne:
            edges.add(tuple(sorted(rng.choice(m, 2, replace=False).tolist())))
        h = Hypergraph(m, 2, sorted(edges))
        part = build_partition(float(rng.uniform(0.1, 0.5)), r)
        wa = sample_weights(m, int(rng.integers(0, 2**32)))
        init = run_interval_coloring(h, r, part, wa)
        coloring = init.coloring
        if not coloring.is_total() or not is_proper(h, coloring):
            continue
        targets = class_targets(m, r)
        ex, sh = excess_shortage(coloring, targets)
        if any(sh[:-1]) or sum(ex) == 0:
            continue
        plan = build_rebalance_plan(
            h, part, wa, coloring, targets, seed=int(rng.integers(0, 2**32)),
            p_tilde=float(rng.uniform(0.3, 1.0)),
        )
        if not plan.feasible:
            continue
        after = apply_recolor(coloring, plan.wsets)
        assert is_proper(h, after)
        assert list(after.sizes) == targets
        applied += 1
    assert applied == 40
