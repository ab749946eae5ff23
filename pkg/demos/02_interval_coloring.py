"""The two-stage interval coloring.

Vertices get i.i.d. uniform weights in [0,1); the unit interval is cut into
alternating large blocks (stage 1 assigns their occupants color i outright)
and small blocks (stage 2 walks their occupants by increasing weight and
deflects a vertex to the next color when keeping it would finish a
monochromatic edge).
"""

from eqcolor import (
    Hypergraph,
    WeightAssignment,
    build_partition,
    choose_p,
    run_interval_coloring,
    sample_weights,
)

# The small-block budget p shrinks as instances grow.
for n, r in ((100, 2), (1000, 3)):
    print(f"choose_p(n={n}, r={r}) = {choose_p(n, r):.6f}")

# A partition for r=2 at p=0.2: large_1 = [0, 0.4), small_1 = [0.4, 0.6),
# large_2 = [0.6, 1.0).
part = build_partition(0.2, 2)
print("slot lengths:", [round(w, 3) for w in part.slot_lengths()])
for x in (0.1, 0.45, 0.95):
    print(f"  locate({x}) ->", part.locate(x))

# Hand-picked weights.  Vertex 1 lands in small_1; when its turn comes,
# vertex 0 already wears color 1 and edge (0,1) would go monochromatic, so
# vertex 1 is deflected to color 2.
h = Hypergraph(4, 2, [(0, 1)])
wa = WeightAssignment([0.1, 0.5, 0.7, 0.45])
init = run_interval_coloring(h, 2, part, wa)
print("colors:", init.coloring.colors)
print("deflections X:", init.deflections)
print("occupancy Z:", init.occupancy)
print("blocking edge per deflected vertex:", init.blocking)

# The bookkeeping identity: each class collects its block occupants, minus
# the vertices deflected out, plus the ones deflected in.
for i in range(1, 3):
    x_i = init.deflections[i - 1] if i < 2 else 0
    x_prev = init.deflections[i - 2] if i >= 2 else 0
    assert init.coloring.sizes[i - 1] == init.occupancy[i - 1] - x_i + x_prev
print("class-size identity: ok")

# Random weights are seeded; the whole pipeline is deterministic from
# (instance, r, partition, seed).
h2 = Hypergraph(30, 3, [(i, i + 1, i + 2) for i in range(28)])
wa2 = sample_weights(30, seed=7)
a = run_interval_coloring(h2, 3, build_partition(choose_p(3, 3), 3), wa2)
b = run_interval_coloring(h2, 3, build_partition(choose_p(3, 3), 3), wa2)
assert a.coloring.colors == b.coloring.colors
print("30-vertex run: sizes", list(a.coloring.sizes),
      "deflections", a.deflections)
