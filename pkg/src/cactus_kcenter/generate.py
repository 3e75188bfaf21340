"""Reproducible random cactus instances.

Construction is O(n): grow a random tree skeleton and splice in cycles built
from fresh vertices, so the single-edge-per-cycle rule holds by construction.
Anchors are drawn either uniformly (bushy shapes) or from recent vertices
(long chains of paths and cycles), which produces stem-rich topologies.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .graph import CactusGraph, validate_cactus


def random_cactus_parts(
    n: int,
    cycle_density: float = 0.4,
    weight_range=(1, 5),
    length_range=(1, 5),
    seed: int = 0,
):
    """Raw (vertices, edges) lists for a random n-vertex cactus."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0 <= cycle_density <= 1):
        raise ValueError("cycle-density must be in [0, 1]")
    wlo, whi = weight_range
    llo, lhi = length_range
    if wlo < 0 or llo <= 0 or wlo > whi or llo > lhi:
        raise ValueError("bad weight/length ranges")
    rng = random.Random(seed)

    edges = []
    placed = 1  # vertex 0 exists
    on_cycle_target = round(cycle_density * n)
    on_cycle = 0
    recent = [0]

    def anchor():
        if rng.random() < 0.5 and recent:
            return recent[-1]
        return rng.randrange(placed)

    while placed < n:
        remaining = n - placed
        want_cycle = on_cycle < on_cycle_target and remaining >= 2
        if want_cycle:
            size = rng.randint(3, min(3 + rng.randrange(6), remaining + 1))
            a = anchor()
            fresh = list(range(placed, placed + size - 1))
            chain = [a] + fresh
            for x, y in zip(chain, chain[1:]):
                edges.append((x, y, rng.randint(llo, lhi)))
            edges.append((chain[-1], a, rng.randint(llo, lhi)))
            placed += size - 1
            on_cycle += size
            recent = [rng.choice(fresh)]
        else:
            a = anchor()
            v = placed
            edges.append((a, v, rng.randint(llo, lhi)))
            placed += 1
            recent.append(v)
            if len(recent) > 4:
                recent.pop(0)
    vertices = [(i, rng.randint(wlo, whi)) for i in range(n)]
    return vertices, edges


def random_cactus(
    n: int,
    cycle_density: float = 0.4,
    weight_range=(1, 5),
    length_range=(1, 5),
    seed: int = 0,
    fast: bool = False,
) -> CactusGraph:
    vertices, edges = random_cactus_parts(n, cycle_density, weight_range, length_range, seed)
    if fast:
        vertices = [(i, float(w)) for i, w in vertices]
        edges = [(u, v, float(ln)) for u, v, ln in edges]
    else:
        vertices = [(i, Fraction(w)) for i, w in vertices]
        edges = [(u, v, Fraction(ln)) for u, v, ln in edges]
    return validate_cactus(vertices, edges, fast=fast)
