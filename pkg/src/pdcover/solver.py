"""Primal-dual edge cover with reverse delete.

Phase 1 raises the duals of the current minimal uncovered sets (cores)
uniformly until a new edge becomes tight and adds that edge.  Phase 2 scans
the added edges in reverse and drops every edge whose removal keeps the
family covered.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .family import FamilyOracle
from .graph import Graph, format_set, vertices_of


class InfeasibleError(RuntimeError):
    """Some uncovered member cannot be covered by any remaining edge."""

    def __init__(self, core: int, message: str | None = None):
        self.core = core
        super().__init__(message or f"no available edge covers core {format_set(core)}")


@dataclass
class DualState:
    y: dict[int, Fraction]
    slack: list[Fraction]

    @property
    def total(self) -> Fraction:
        return sum(self.y.values(), Fraction(0))


@dataclass(frozen=True)
class IterationRecord:
    index: int
    cores: tuple[int, ...]
    epsilon: Fraction
    added_edge: int
    min_slack: Fraction  # minimum edge slack right after the raise


@dataclass
class SolveResult:
    solution: frozenset[int]
    phase1_edges: tuple[int, ...]
    duals: DualState
    iterations: list[IterationRecord]
    cost: Fraction
    dual_total: Fraction
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "solution": sorted(self.solution),
            "phase1_edges": list(self.phase1_edges),
            "cost": frac_str(self.cost),
            "dual_total": frac_str(self.dual_total),
            "duals": [
                {"set": vertices_of(s), "y": frac_str(v)}
                for s, v in sorted(self.duals.y.items())
            ],
            "iterations": [
                {
                    "index": r.index,
                    "cores": [vertices_of(c) for c in r.cores],
                    "epsilon": frac_str(r.epsilon),
                    "added_edge": r.added_edge,
                }
                for r in self.iterations
            ],
            **self.extra,
        }


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def phase1(g: Graph, oracle: FamilyOracle) -> tuple[list[int], DualState, list[IterationRecord]]:
    """Grow a cover by uniform dual raising on the current cores.

    Exactly one edge is added per iteration: among edges outside ``I`` that
    cross at least one core, the one minimising ``slack / #cores crossed``,
    smallest id on ties.  The raise may be zero.
    """
    edges = g.edges
    I: list[int] = []
    in_I = [False] * g.m
    y: dict[int, Fraction] = {}
    slack = [e.cost for e in edges]
    log: list[IterationRecord] = []

    while True:
        cores = oracle.min_cores(I, g)
        if not cores:
            break
        crossing = [0] * g.m
        best = None
        best_ratio = None
        for e in edges:
            if in_I[e.id]:
                continue
            k = sum(1 for c in cores if e.crosses(c))
            crossing[e.id] = k
            if k:
                ratio = slack[e.id] / k
                if best_ratio is None or ratio < best_ratio:
                    best, best_ratio = e.id, ratio
        if best is None:
            raise InfeasibleError(cores[0])
        eps = best_ratio
        for c in cores:
            y[c] = y.get(c, Fraction(0)) + eps
        if eps:
            for e in edges:
                if crossing[e.id]:
                    slack[e.id] -= eps * crossing[e.id]
        low = min(slack)
        assert low >= 0, "dual infeasible"
        assert slack[best] == 0
        I.append(best)
        in_I[best] = True
        log.append(IterationRecord(len(log), tuple(cores), eps, best, low))
    return I, DualState(y, slack), log


def phase2_reverse_delete(g: Graph, oracle: FamilyOracle, phase1_edges: Sequence[int]) -> frozenset[int]:
    current = list(phase1_edges)
    for e in reversed(phase1_edges):
        trial = [f for f in current if f != e]
        if oracle.covered_by(trial, g):
            current = trial
    return frozenset(current)


def solve(g: Graph, oracle: FamilyOracle) -> SolveResult:
    if oracle.n != g.n:
        raise ValueError(f"family ground set {oracle.n} does not match graph with {g.n} vertices")
    added, duals, log = phase1(g, oracle)
    sol = phase2_reverse_delete(g, oracle, added)
    assert oracle.covered_by(sol, g)
    assert all(duals.slack[e] == 0 for e in sol)
    return SolveResult(
        solution=sol,
        phase1_edges=tuple(added),
        duals=duals,
        iterations=log,
        cost=g.cost(sol),
        dual_total=duals.total,
    )


def format_certificate(result: SolveResult, g: Graph) -> str:
    """Human-readable rendering of a solve certificate."""
    lines = [
        f"cost {frac_str(result.cost)}",
        f"dual_total {frac_str(result.dual_total)}",
        "solution " + " ".join(
            f"{e}:({g.edges[e].u},{g.edges[e].v})" for e in sorted(result.solution)),
        "phase1 " + " ".join(map(str, result.phase1_edges)),
    ]
    for s, v in sorted(result.duals.y.items()):
        lines.append(f"y {format_set(s)} {frac_str(v)}")
    for r in result.iterations:
        cores = " ".join(format_set(c) for c in r.cores)
        lines.append(f"iter {r.index} eps {frac_str(r.epsilon)} add {r.added_edge} cores {cores}")
    for key, val in result.extra.items():
        lines.append(f"{key} {val}")
    return "\n".join(lines) + "\n"
