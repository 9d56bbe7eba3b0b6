"""Near Min-Cuts Cover and the round-based Cap-k-ECSS reduction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .family import MAX_ENUM_VERTICES, FamilyOracle
from .graph import CapacityError, Graph, format_set
from .solver import InfeasibleError, SolveResult, solve


def _popcounts(arr: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(arr.shape, dtype=np.int64)
    for v in range(n):
        out += (arr >> v) & 1
    return out


class CutThresholdFamily(FamilyOracle):
    """``{∅ ≠ S ⊊ V : w(δ_J(S)) < k}`` for a fixed edge set ``J`` of ``g``.

    ``w`` counts edges, or sums capacities when ``capacitated`` is set.
    Members are enumerated once over the power set (``n <= 20``) and kept
    sorted by (popcount, bitmask), which is the scan order for cores.
    """

    pliable = True

    def __init__(self, g: Graph, J: Iterable[int], k: int, capacitated: bool = False):
        if g.n > MAX_ENUM_VERTICES:
            raise CapacityError(f"cut-threshold oracle enumerates 2^n subsets; needs n <= {MAX_ENUM_VERTICES}")
        if k < 0:
            raise ValueError("threshold k must be non-negative")
        self.n = g.n
        self.g = g
        self.J = frozenset(J)
        self.k = k
        self.capacitated = capacitated
        g.check_edges(self.J)
        self._edges = [g.edges[e] for e in sorted(self.J)]

        subsets = np.arange(1, (1 << g.n) - 1, dtype=np.int64)
        weight = np.zeros(subsets.shape, dtype=np.int64)
        for e in self._edges:
            w = e.capacity if capacitated else 1
            weight += w * (((subsets >> e.u) ^ (subsets >> e.v)) & 1)
        mem = subsets[weight < k]
        order = np.lexsort((mem, _popcounts(mem, g.n)))
        self._scan = mem[order]
        self._sorted = sorted(int(s) for s in mem)

    def weight(self, s: int) -> int:
        return sum((e.capacity if self.capacitated else 1) for e in self._edges if e.crosses(s))

    def is_member(self, s: int) -> bool:
        if s <= 0 or s >= (1 << self.n) - 1:
            return False
        return self.weight(s) < self.k

    def members(self) -> list[int]:
        return list(self._sorted)

    def __len__(self):
        return len(self._sorted)

    def min_cores(self, I: Iterable[int], g: Graph) -> list[int]:
        cand = self._scan
        if cand.size == 0:
            return []
        covered = np.zeros(cand.shape, dtype=bool)
        for e in I:
            edge = g.edges[e]
            covered |= (((cand >> edge.u) ^ (cand >> edge.v)) & 1).astype(bool)
        cores: list[int] = []
        for s in cand[~covered].tolist():
            if not any(c & s == c for c in cores):
                cores.append(s)
        return self._checked(sorted(cores))


@dataclass(frozen=True)
class NearMinCutsInstance:
    g0: Graph
    candidates: Graph
    k: int

    def __post_init__(self):
        if self.g0.n != self.candidates.n:
            raise ValueError("base graph and candidate graph differ in vertex count")
        if self.k < 1:
            raise ValueError("k must be positive")


@dataclass(frozen=True)
class CapKecssInstance:
    g: Graph
    k: int

    @property
    def u_min(self) -> int:
        return min(e.capacity for e in self.g.edges)

    @property
    def round_bound(self) -> int:
        return math.ceil(self.k / self.u_min) if self.g.m else 0


def near_min_cuts_oracle(inst: NearMinCutsInstance) -> CutThresholdFamily:
    g0 = inst.g0
    return CutThresholdFamily(g0, g0.all_edges(), inst.k)


def solve_near_min_cuts(inst: NearMinCutsInstance) -> SolveResult:
    fam = near_min_cuts_oracle(inst)
    res = solve(inst.candidates, fam)
    res.extra["family_size"] = len(fam)
    res.extra["initial_cores"] = len(fam.min_cores((), inst.candidates))
    return res


def min_cut_capacity(g: Graph, J: Iterable[int]) -> int:
    J = list(J)
    best = None
    for s in range(1, (1 << (g.n - 1))):
        w = sum(g.edges[e].capacity for e in J if g.edges[e].crosses(s))
        if best is None or w < best:
            best = w
    return 0 if best is None else best


@dataclass
class CapKecssResult:
    J: frozenset[int]
    rounds: list[SolveResult] = field(default_factory=list)
    min_cuts: list[int] = field(default_factory=list)  # min capacitated cut of J after each round

    @property
    def cost(self):
        return sum((r.cost for r in self.rounds), 0)


def solve_cap_kecss(inst: CapKecssInstance) -> CapKecssResult:
    """Cover deficient cuts in rounds until every cut carries capacity ``k``.

    Each round covers ``{S : u(δ_J(S)) < k}`` with the edges not yet bought
    and adds the round's solution to ``J``.  Every deficient cut gains at
    least one edge of capacity ``>= u_min`` per round.
    """
    g, k = inst.g, inst.k
    if g.n > MAX_ENUM_VERTICES:
        raise CapacityError(f"Cap-k-ECSS rounds need n <= {MAX_ENUM_VERTICES}")
    everything = CutThresholdFamily(g, g.all_edges(), k, capacitated=True)
    if len(everything):
        raise InfeasibleError(everything.members()[0],
                              f"cut {format_set(everything.members()[0])} has capacity "
                              f"< {k} even using every edge")
    J: set[int] = set()
    out = CapKecssResult(frozenset())
    while True:
        fam = CutThresholdFamily(g, J, k, capacitated=True)
        if not len(fam):
            break
        rest = [e for e in range(g.m) if e not in J]
        sub = Graph.build(g.n, [(g.edges[e].u, g.edges[e].v, g.edges[e].cost, g.edges[e].capacity)
                                for e in rest])
        res = solve(sub, fam)
        picked = {rest[e] for e in res.solution}
        res.extra["round_edges"] = sorted(picked)
        J |= picked
        out.rounds.append(res)
        out.min_cuts.append(min_cut_capacity(g, J))
    out.J = frozenset(J)
    assert len(out.rounds) <= inst.round_bound or inst.k <= 0
    return out
