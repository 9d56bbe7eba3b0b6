"""Exact optima by branch and bound over edge subsets, for small instances."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .family import FamilyOracle
from .graph import CapacityError, Graph, full_set

MAX_BASELINE_EDGES = 22


@dataclass(frozen=True)
class BaselineResult:
    opt_cost: Optional[Fraction]
    opt_set: Optional[frozenset[int]]

    @property
    def feasible(self) -> bool:
        return self.opt_cost is not None


class _Search:
    """Depth-first include/exclude search on cost-sorted edges.

    Ties between optimal sets are broken towards the lexicographically
    smallest sorted id tuple.
    """

    def __init__(self, g: Graph):
        self.order = sorted(range(g.m), key=lambda e: (g.edges[e].cost, e))
        self.costs = [g.edges[e].cost for e in self.order]
        self.best_cost: Optional[Fraction] = None
        self.best_key: Optional[tuple[int, ...]] = None

    def offer(self, cost: Fraction, chosen: list[int]) -> None:
        key = tuple(sorted(chosen))
        if self.best_cost is None or cost < self.best_cost or (
                cost == self.best_cost and key < self.best_key):
            self.best_cost, self.best_key = cost, key

    def pruned(self, cost: Fraction) -> bool:
        return self.best_cost is not None and cost > self.best_cost

    def result(self) -> BaselineResult:
        if self.best_cost is None:
            return BaselineResult(None, None)
        return BaselineResult(self.best_cost, frozenset(self.best_key))


def _check_size(g: Graph) -> None:
    if g.m > MAX_BASELINE_EDGES:
        raise CapacityError(f"exact baseline needs |E| <= {MAX_BASELINE_EDGES}, got {g.m}")


def optimal_cover(g: Graph, oracle: FamilyOracle) -> BaselineResult:
    """Minimum-cost edge set covering every member of ``oracle``.

    Coverage is evaluated directly on cut membership of the enumerated
    members; the oracle's own core computation is only used to cross-check
    the answer.
    """
    _check_size(g)
    members = oracle.members()
    full = (1 << len(members)) - 1
    search = _Search(g)
    masks = []
    for e in search.order:
        edge = g.edges[e]
        masks.append(sum(1 << j for j, s in enumerate(members) if edge.crosses(s)))
    m = len(masks)
    reach = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        reach[i] = reach[i + 1] | masks[i]
    # cheapest[i][j]: min cost of an edge at position >= i covering member j
    cheapest = [[None] * len(members) for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        row = list(cheapest[i + 1])
        for j in range(len(members)):
            if masks[i] >> j & 1 and (row[j] is None or search.costs[i] < row[j]):
                row[j] = search.costs[i]
        cheapest[i] = row

    chosen: list[int] = []

    def dfs(i: int, covered: int, cost: Fraction) -> None:
        if search.pruned(cost):
            return
        if covered == full:
            search.offer(cost, chosen)
        if i == m:
            return
        missing = full & ~covered
        if missing & ~reach[i]:
            return
        if missing:
            row = cheapest[i]
            lb = max(row[j] for j in range(len(members)) if missing >> j & 1)
            if search.pruned(cost + lb):
                return
        chosen.append(search.order[i])
        dfs(i + 1, covered | masks[i], cost + search.costs[i])
        chosen.pop()
        dfs(i + 1, covered, cost)

    dfs(0, 0, Fraction(0))
    res = search.result()
    if res.feasible:
        assert oracle.covered_by(res.opt_set, g), "coverage routes disagree"
    return res


def optimal_cap_kecss(g: Graph, k: int) -> BaselineResult:
    """Minimum-cost ``J`` with capacity at least ``k`` across every cut."""
    _check_size(g)
    if k <= 0:
        return BaselineResult(Fraction(0), frozenset())
    n = g.n
    # each cut is counted once through the side not containing vertex n-1
    cuts = list(range(1, 1 << (n - 1)))
    search = _Search(g)
    caps = []
    for e in search.order:
        edge = g.edges[e]
        caps.append([edge.capacity if edge.crosses(s) else 0 for s in cuts])
    m = len(caps)
    remaining = [[0] * len(cuts) for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        remaining[i] = [a + b for a, b in zip(remaining[i + 1], caps[i])]
    if any(r < k for r in remaining[0]):
        return BaselineResult(None, None)

    chosen: list[int] = []

    def dfs(i: int, have: list[int], cost: Fraction) -> None:
        if search.pruned(cost):
            return
        if all(h >= k for h in have):
            search.offer(cost, chosen)
        if i == m:
            return
        rem = remaining[i]
        if any(h + r < k for h, r in zip(have, rem)):
            return
        chosen.append(search.order[i])
        dfs(i + 1, [h + c for h, c in zip(have, caps[i])], cost + search.costs[i])
        chosen.pop()
        dfs(i + 1, have, cost)

    dfs(0, [0] * len(cuts), Fraction(0))
    return search.result()


def cap_cut_ok(g: Graph, J, k: int) -> bool:
    """Direct check that every cut of ``J`` carries capacity at least ``k``."""
    J = list(J)
    for s in range(1, full_set(g.n)):
        if sum(g.edges[e].capacity for e in J if g.edges[e].crosses(s)) < k:
            return False
    return True
