"""Seeded random instance generators."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .applications import CapKecssInstance, CutThresholdFamily, NearMinCutsInstance
from .family import ExplicitFamily, complete_graph
from .graph import Graph, full_set

RNG_NAME = "python-random-mt19937"


def instance_rng(seed: int, source: str, index: int) -> random.Random:
    # string seeds go through sha512, stable across platforms and runs
    return random.Random(f"{seed}:{source}:{index}")


def random_cost(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(0, 12), rng.choice((1, 1, 1, 2, 3)))


def random_connected_graph(rng: random.Random, n: int, m: int, *, parallel: bool = False,
                           max_capacity: int = 1) -> Graph:
    """Random spanning tree plus ``m - (n - 1)`` extra edges."""
    order = list(range(n))
    rng.shuffle(order)
    pairs = []
    for i in range(1, n):
        pairs.append((order[rng.randrange(i)], order[i]))
    free = [(u, v) for u in range(n) for v in range(u + 1, n)]
    used = {tuple(sorted(p)) for p in pairs}
    while len(pairs) < m:
        if parallel:
            u, v = rng.sample(range(n), 2)
        else:
            left = [p for p in free if p not in used]
            if not left:
                break
            u, v = rng.choice(left)
            used.add((u, v))
        pairs.append((u, v))
    rng.shuffle(pairs)
    return Graph.build(n, [(u, v, random_cost(rng), rng.randint(1, max_capacity)) for u, v in pairs])


def _violating_pair(members: list[int], lookup: set, uncrossable: bool) -> Optional[tuple[int, int]]:
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            i_, u_, ab, ba = (a & b) in lookup, (a | b) in lookup, (a & ~b) in lookup, (b & ~a) in lookup
            ok = (i_ and u_) or (ab and ba) if uncrossable else (i_ + u_ + ab + ba) >= 2
            if not ok:
                return a, b
    return None


def repair_family(rng: random.Random, n: int, seeds: list[int], *, uncrossable: bool = False,
                  cap: int = 40) -> Optional[ExplicitFamily]:
    """Close ``seeds`` under the pair condition by inserting derived sets.

    Returns None when the family grows past ``cap`` members.
    """
    full = full_set(n)
    lookup = {s for s in seeds if 0 < s < full}
    while True:
        if len(lookup) > cap:
            return None
        members = sorted(lookup)
        pair = _violating_pair(members, lookup, uncrossable)
        if pair is None:
            return ExplicitFamily(n, members)
        a, b = pair
        if uncrossable:
            options = [(a & ~b, b & ~a)]
            if 0 < (a | b) < full and (a & b):
                options.append((a & b, a | b))
            add = rng.choice(options)
        else:
            derived = [a & b, a | b, a & ~b, b & ~a]
            present = sum(1 for d in derived if d in lookup)
            missing = sorted({d for d in derived if 0 < d < full and d not in lookup})
            add = rng.sample(missing, 2 - present)
        lookup.update(d for d in add if 0 < d < full)


def random_explicit_instance(rng: random.Random, *, uncrossable: bool = False, max_n: int = 8,
                             max_m: int = 12, cap: int = 60) -> tuple[Graph, ExplicitFamily]:
    while True:
        n = rng.randint(3, max_n)
        m = rng.randint(n - 1, min(max_m, n * (n - 1) // 2))
        full = full_set(n)
        seeds = [rng.randint(1, full - 1) for _ in range(rng.randint(2, 2 * n))]
        fam = repair_family(rng, n, seeds, uncrossable=uncrossable, cap=cap)
        if fam is not None:
            return random_connected_graph(rng, n, m), fam


def random_nmc_instance(rng: random.Random, *, max_n: int = 8, max_m: int = 12) -> NearMinCutsInstance:
    n = rng.randint(3, max_n)
    base_m = rng.randint(n - 1, min(2 * n, n * (n - 1) // 2))
    g0 = random_connected_graph(rng, n, base_m, parallel=True)
    k = rng.randint(1, 4)
    m = rng.randint(n - 1, min(max_m, n * (n - 1) // 2))
    cand = random_connected_graph(rng, n, m)
    return NearMinCutsInstance(g0, cand, k)


def random_capk_instance(rng: random.Random, *, max_n: int = 5, max_m: int = 10) -> CapKecssInstance:
    n = rng.randint(2, max_n)
    m = rng.randint(n, max_m)
    g = random_connected_graph(rng, n, m, parallel=True, max_capacity=3)
    k = rng.randint(1, 4)
    while k > 1 and len(CutThresholdFamily(g, g.all_edges(), k, capacitated=True)):
        k -= 1
    return CapKecssInstance(g, k)


def random_minimal_cover(rng: random.Random, g: Graph, fam) -> list[int]:
    """Reverse delete over all edges of ``g`` in a random order."""
    order = list(range(g.m))
    rng.shuffle(order)
    cover = list(order)
    for e in order:
        trial = [f for f in cover if f != e]
        if fam.covered_by(trial, g):
            cover = trial
    return sorted(cover)


def random_chain_probe(rng: random.Random) -> tuple[Graph, ExplicitFamily]:
    """Small dense instances, where long hollow chains are most likely."""
    while True:
        n = rng.choice((4, 5, 5, 6))
        full = full_set(n)
        seeds = [rng.randint(1, full - 1) for _ in range(rng.randint(2, 2 * n))]
        fam = repair_family(rng, n, seeds, cap=60)
        if fam is not None:
            g = complete_graph(n) if n <= 5 else random_connected_graph(rng, n, 12)
            return g, fam
