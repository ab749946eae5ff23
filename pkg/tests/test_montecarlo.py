"""Monte Carlo estimators against the exact discrete oracle and the bounds."""

import math

import numpy as np
import pytest

from eqcolor import (
    BudgetExceeded,
    ChainEventSpec,
    Comparison,
    Hypergraph,
    MonoEdgeExists,
    WeightAssignment,
    balanced_mono_prob,
    build_partition,
    choose_p,
    exact_c0_event_prob,
    mc_estimate,
    run_interval_coloring,
)
from eqcolor.montecarlo import QUANTITIES, Deflected, _trial_colors

SINGLE = Hypergraph(2, 2, [(0, 1)])
# two triangles sharing vertices with a third, forcing interactions between
# deflections: the workhorse calibration instance
TRI_PAIR = Hypergraph(6, 3, [(0, 1, 2), (2, 3, 4), (1, 4, 5)])


def test_oracle_single_edge_hand_value():
    # p=0.2, r=2: slots have lengths (0.4, 0.2, 0.4).  The edge goes mono
    # when both vertices draw the first large block (0.16), when both draw
    # the small block (0.04: the later vertex always deflects, so the pair
    # splits... except both-small orders keep the first at color 1 and
    # deflect the second, never mono), when one draws large 1 and the other
    # the small block with the small vertex processed second (deflects to 2,
    # not mono) or first (keeps 1, then large vertex is already 1: mono via
    # stage 1?  stage 1 colors large vertices before stage 2 runs, so the
    # small vertex sees color 1 and deflects: not mono).  Remaining mass:
    # both in large 2 (0.16).  Total 0.32.
    assert exact_c0_event_prob(SINGLE, 2, MonoEdgeExists(), p=0.2) == pytest.approx(
        0.32, abs=1e-12
    )


def test_oracle_is_a_probability_everywhere():
    for p in (0.1, 0.35, 0.6):
        val = exact_c0_event_prob(SINGLE, 2, MonoEdgeExists(), p=p)
        assert 0.0 <= val <= 1.0


def test_oracle_frozen_values_on_calibration_instance():
    assert exact_c0_event_prob(TRI_PAIR, 2, MonoEdgeExists()) == pytest.approx(
        0.41634184975008515, rel=1e-12
    )
    assert exact_c0_event_prob(TRI_PAIR, 2, Deflected(2, 1)) == pytest.approx(
        0.07188601748440646, rel=1e-12
    )
    assert exact_c0_event_prob(TRI_PAIR, 2, Deflected(2, None)) == pytest.approx(
        0.07188601748440646, rel=1e-12  # r=2 has a single small block
    )
    assert exact_c0_event_prob(TRI_PAIR, 2, ChainEventSpec((0, 1), 2)) == pytest.approx(
        0.008017001787568267, rel=1e-12
    )


def test_oracle_respects_budget():
    with pytest.raises(BudgetExceeded):
        exact_c0_event_prob(TRI_PAIR, 2, MonoEdgeExists(), budget=10)


def test_oracle_rejects_oversized_instances():
    big = Hypergraph(40, 2, [(0, 1)])
    with pytest.raises(ValueError):
        exact_c0_event_prob(big, 2, MonoEdgeExists())


def test_mc_quantities_registry():
    assert set(QUANTITIES) == {
        "mono-edge",
        "expected-deflections",
        "excess-pattern",
        "dangerous-count",
        "balanced-mono",
        "chain-event",
        "deflected",
    }


def test_mc_edgeless_mono_probability_is_zero():
    h = Hypergraph(4, 2, [])
    rep = mc_estimate("mono-edge", h, 2, params={"p": 0.2}, trials=500, seed=1)
    assert rep.estimate == 0.0 and rep.half_width == 0.0
    assert rep.trials == 500


def test_mc_deterministic_across_calls():
    a = mc_estimate("mono-edge", TRI_PAIR, 2, trials=4000, seed=9)
    b = mc_estimate("mono-edge", TRI_PAIR, 2, trials=4000, seed=9)
    assert a.estimate == b.estimate and a.half_width == b.half_width
    c = mc_estimate("mono-edge", TRI_PAIR, 2, trials=4000, seed=10)
    assert c.estimate != a.estimate


def test_mc_chunk_boundaries_do_not_bias():
    # trials straddling the chunk size agree with the oracle band
    h = SINGLE
    exact = 0.32
    rep = mc_estimate(
        "mono-edge", h, 2, params={"p": 0.2}, trials=20000, seed=4, compare=False
    )
    assert abs(rep.estimate - exact) <= rep.half_width


def test_mc_half_width_formula_probability():
    rep = mc_estimate("mono-edge", TRI_PAIR, 2, trials=3000, seed=2, compare=False)
    expected = 3.0 * math.sqrt(rep.estimate * (1.0 - rep.estimate) / rep.trials)
    assert rep.half_width == pytest.approx(expected, rel=1e-12)


def test_mc_attaches_exact_comparison_when_enumerable():
    rep = mc_estimate("mono-edge", SINGLE, 2, params={"p": 0.2}, trials=2000, seed=3)
    assert rep.comparison == Comparison("exact", pytest.approx(0.32, abs=1e-12))
    assert abs(rep.estimate - rep.comparison.value) <= rep.half_width


def test_mc_falls_back_to_bound_comparison():
    big = Hypergraph(12, 2, [(0, 1), (2, 3), (4, 5)])
    rep = mc_estimate("mono-edge", big, 2, trials=1000, seed=3)
    assert rep.comparison.kind == "bound"
    assert rep.comparison.value == pytest.approx(0.04 * math.e, abs=1e-12)


def test_mc_expected_deflections_in_band():
    rep = mc_estimate(
        "expected-deflections", TRI_PAIR, 2, params={"i": 1}, trials=30000, seed=6
    )
    assert rep.comparison.kind == "exact"
    assert rep.comparison.value == pytest.approx(0.3333713623046095, rel=1e-12)
    assert abs(rep.estimate - rep.comparison.value) <= rep.half_width


def test_mc_deflected_in_band():
    rep = mc_estimate("deflected", TRI_PAIR, 2, params={"v": 2}, trials=30000, seed=7)
    assert abs(rep.estimate - 0.07188601748440646) <= rep.half_width


def test_mc_chain_event_in_band():
    rep = mc_estimate(
        "chain-event",
        TRI_PAIR,
        2,
        params={"edges": (0, 1), "color": 2},
        trials=60000,
        seed=8,
    )
    assert abs(rep.estimate - 0.008017001787568267) <= rep.half_width


def test_mc_balanced_mono_matches_formula():
    h = Hypergraph(4, 2, [(0, 1)])
    rep = mc_estimate("balanced-mono", h, 2, trials=30000, seed=5)
    assert rep.comparison == Comparison("exact", pytest.approx(1 / 3, abs=1e-15))
    assert abs(rep.estimate - 1 / 3) <= rep.half_width
    with pytest.raises(ValueError):
        mc_estimate("balanced-mono", Hypergraph(5, 2, [(0, 1)]), 2, trials=10)


def test_mc_dangerous_count_runs_and_bounds():
    rep = mc_estimate(
        "dangerous-count", TRI_PAIR, 2, params={"p_tilde": 0.5}, trials=5000, seed=11
    )
    assert rep.estimate >= 0.0
    assert rep.comparison.kind == "bound"


def test_mc_excess_pattern_probability():
    rep = mc_estimate("excess-pattern", TRI_PAIR, 2, trials=5000, seed=12)
    assert 0.0 <= rep.estimate <= 1.0


def test_mc_rejects_bad_requests():
    with pytest.raises(ValueError):
        mc_estimate("no-such-quantity", SINGLE, 2, trials=10)
    with pytest.raises(ValueError):
        mc_estimate("mono-edge", SINGLE, 2, trials=0)
    with pytest.raises(ValueError, match="params\\['i'\\]"):
        mc_estimate("expected-deflections", SINGLE, 2, trials=10)
    with pytest.raises(ValueError, match="params\\['v'\\]"):
        mc_estimate("deflected", SINGLE, 2, trials=10)
    with pytest.raises(ValueError):
        mc_estimate("mono-edge", SINGLE, 2, params={"i": 1}, trials=10)  # stray param
    with pytest.raises(ValueError):
        mc_estimate("expected-deflections", SINGLE, 2, params={"i": 7}, trials=10)


def test_mc_report_json_shape():
    rep = mc_estimate("mono-edge", SINGLE, 2, params={"p": 0.2}, trials=100, seed=0)
    obj = rep.to_json_dict()
    assert obj["quantity"] == "mono-edge"
    assert obj["trials"] == 100
    assert set(obj) >= {"quantity", "trials", "estimate", "half_width", "comparison"}
    assert obj["comparison"]["kind"] == "exact"


def test_vectorized_kernel_matches_reference_coloring():
    # the integer kernel inside the estimator must color exactly like the
    # reference implementation, draw for draw
    rng = np.random.default_rng(23)
    for _ in range(300):
        m = int(rng.integers(2, 12))
        n = int(rng.integers(2, min(m, 4) + 1))
        ne = int(rng.integers(0, min(math.comb(m, n), 6) + 1))
        edges = set()
        while len(edges) < ne:
            edges.add(tuple(sorted(rng.choice(m, n, replace=False).tolist())))
        h = Hypergraph(m, n, sorted(edges))
        r = int(rng.integers(2, 4))
        p = float(rng.uniform(0.05, 0.6))
        part = build_partition(p, r)
        u = rng.random(m)
        slots = np.searchsorted(part.lefts, u, side="right") - 1
        order = np.argsort(u, kind="stable")
        kernel = _trial_colors(h, r, slots, order)
        reference = run_interval_coloring(h, r, part, WeightAssignment(u))
        assert kernel == reference.coloring.colors


def test_oracle_orders_small_blocks_by_weight_not_id():
    # two small-block vertices in the same block: the oracle must average
    # over both processing orders; a fixed-id order would give 0 or 1 here
    h = Hypergraph(2, 2, [(0, 1)])
    # both vertices forced into the small block: order decides nothing for
    # mono (the later one always deflects) so mono prob is 0 conditional on
    # both landing there; overall mono prob is driven by the large blocks
    p = 0.5
    val = exact_c0_event_prob(h, 2, MonoEdgeExists(), p=p)
    # direct: both in large 1 (0.0625) + both in large 2 (0.0625)
    assert val == pytest.approx(2 * (0.25 * 0.25), abs=1e-12)
