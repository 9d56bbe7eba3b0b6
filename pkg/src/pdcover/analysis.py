"""Mechanical checks of the structural lemmas behind the ratio-10 bound.

For each Phase-1 iteration of a solved instance we rebuild the objects used
in the counting argument: the residual family at that iteration, the
surviving edges added from then on, a laminar witness family for those
edges, its tree, the hollow chains of the tree and the core-degree sums.
Every check returns data; nothing here raises on a failed lemma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .family import FamilyOracle, ResidualFamily, crosses, overlaps
from .graph import Graph, format_set, full_set, popcount, vertices_of
from .solver import SolveResult


class WitnessError(RuntimeError):
    """Raised when no laminar witness family can be built.

    ``kind`` is ``"not_cover"``, ``"not_minimal"`` or ``"not_pliable"``.
    """

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


# -- witness families -------------------------------------------------------

@dataclass(frozen=True)
class UncrossStep:
    edges: tuple[int, ...]
    replaced: tuple[int, ...]
    new_sets: tuple[int, ...]
    beta_before: int
    beta_after: int


@dataclass
class WitnessForest:
    n: int
    witness_of: dict[int, int]          # edge id -> witness set
    parent: dict[int, int]              # set -> smallest strictly containing set (root V)
    steps: list[UncrossStep] = field(default_factory=list)

    @property
    def root(self) -> int:
        return full_set(self.n)

    @property
    def sets(self) -> list[int]:
        return sorted(self.witness_of.values()) + [self.root]

    @property
    def edge_of(self) -> dict[int, int]:
        return {s: e for e, s in self.witness_of.items()}

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {s: [] for s in self.sets}
        for s, p in sorted(self.parent.items()):
            out[p].append(s)
        return out


def beta(sets: Sequence[int]) -> int:
    """Total overlap count: ordered pairs of overlapping sets."""
    return sum(1 for a in sets for b in sets if overlaps(a, b))


def is_laminar(sets: Sequence[int]) -> bool:
    return not any(overlaps(a, b) for i, a in enumerate(sets) for b in sets[i + 1:])


def _witness_edges(s: int, I: Sequence[int], g: Graph) -> list[int]:
    return [e for e in I if g.edges[e].crosses(s)]


def build_witness_forest(g: Graph, family: FamilyOracle, I: Iterable[int]) -> WitnessForest:
    """Laminar witness family for an inclusion-minimal cover ``I`` of ``family``.

    Each edge starts with the smallest-bitmask core of the family left
    uncovered by ``I - {e}``.  While two witness sets overlap, one of them
    (or both) is replaced by a derived set (intersection, union or a
    difference) that is a member and still a witness.  Only replacements that
    lower the total overlap count are taken; a single replacement can create
    new overlaps with third sets, so the count is recomputed for each
    candidate.
    """
    I = sorted(I)
    if family.min_cores(I, g):
        raise WitnessError("not_cover", "edge set does not cover the family")
    witness: dict[int, int] = {}
    for e in reversed(I):
        cores = family.min_cores([f for f in I if f != e], g)
        if not cores:
            raise WitnessError("not_minimal", f"edge {e} is redundant; cover is not minimal")
        witness[e] = cores[0]
        assert _witness_edges(cores[0], I, g) == [e]

    steps: list[UncrossStep] = []
    while True:
        sets_now = list(witness.values())
        if is_laminar(sets_now):
            break
        before = beta(sets_now)
        move = _best_uncrossing(witness, family, I, g, before)
        if move is None:
            a, b = witness[_first_overlap(witness)[0]], witness[_first_overlap(witness)[1]]
            raise WitnessError(
                "not_pliable",
                f"no overlap-reducing uncrossing exists (first overlap {format_set(a)}, "
                f"{format_set(b)}); the family is not pliable")
        old = tuple(witness[edge] for edge, _ in move)
        for edge, new in move:
            witness[edge] = new
        steps.append(UncrossStep(tuple(e for e, _ in move), old, tuple(x for _, x in move),
                                 before, beta(list(witness.values()))))

    root = full_set(g.n)
    sets = sorted(witness.values())
    parent = {}
    for s in sets:
        sups = [t for t in sets if t != s and t & s == s]
        parent[s] = min(sups, key=lambda t: (popcount(t), t)) if sups else root
    return WitnessForest(g.n, witness, parent, steps)


def _first_overlap(witness: dict[int, int]) -> Optional[tuple[int, int]]:
    items = sorted(witness.items())
    for i, (e, a) in enumerate(items):
        for f, b in items[i + 1:]:
            if overlaps(a, b):
                return e, f
    return None


def _best_uncrossing(witness: dict[int, int], family: FamilyOracle, I: Sequence[int],
                     g: Graph, before: int) -> Optional[list[tuple[int, int]]]:
    """Cheapest replacement lowering the total overlap count.

    Scans overlapping witness pairs in edge order.  For a pair ``(A, B)`` of
    edges ``(e, f)`` the candidates are the derived sets of ``A`` and ``B``
    that are members and witnesses of ``e`` or ``f``.  A single replacement
    is preferred (smallest new set first); replacing both sets is the
    fallback.  Returns a list of ``(edge, new_set)`` moves or None.
    """
    items = sorted(witness.items())
    doubles = []
    for i, (e, a) in enumerate(items):
        for f, b in items[i + 1:]:
            if not overlaps(a, b):
                continue
            for_e, for_f = [], []
            for cand in (a & b, a | b, a & ~b, b & ~a):
                if not cand or not family.is_member(cand):
                    continue
                owners = _witness_edges(cand, I, g)
                if owners == [e]:
                    for_e.append(cand)
                elif owners == [f]:
                    for_f.append(cand)
            singles = []
            for edge, cands in ((e, for_e), (f, for_f)):
                for cand in cands:
                    trial = dict(witness)
                    trial[edge] = cand
                    if beta(list(trial.values())) < before:
                        singles.append((popcount(cand), cand, edge))
            if singles:
                _, cand, edge = min(singles)
                return [(edge, cand)]
            for x in for_e:
                for y in for_f:
                    trial = dict(witness)
                    trial[e], trial[f] = x, y
                    if x != y and beta(list(trial.values())) < before:
                        doubles.append((popcount(x) + popcount(y), x, y, e, f))
    if doubles:
        _, x, y, e, f = min(doubles)
        return [(e, x), (f, y)]
    return None


def check_witness_forest(wf: WitnessForest, g: Graph, I: Iterable[int],
                         family: FamilyOracle) -> list[str]:
    """Exact structural checks on a witness forest; returns violations."""
    I = sorted(I)
    problems = []
    if sorted(wf.witness_of) != I:
        problems.append("witness map is not a bijection onto I")
    sets = list(wf.witness_of.values())
    if len(set(sets)) != len(sets):
        problems.append("two edges share a witness set")
    for e, s in wf.witness_of.items():
        if _witness_edges(s, I, g) != [e]:
            problems.append(f"{format_set(s)} is not a witness for edge {e}")
        if not family.is_member(s):
            problems.append(f"witness {format_set(s)} is not a family member")
    if not is_laminar(sets):
        problems.append("witness family is not laminar")
    if len(wf.sets) != len(I) + 1:
        problems.append("tree does not have |I|+1 nodes")
    for st in wf.steps:
        if not st.beta_after < st.beta_before:
            problems.append(f"uncrossing step on edges {st.edges} did not decrease beta")
    return problems


# -- hollow chains ----------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    sets: tuple[int, ...]       # S_0 .. S_l
    edges: tuple[int, ...]      # edge covering S_i
    a: tuple[int, ...]          # endpoint inside S_i
    b: tuple[int, ...]          # endpoint outside S_i

    @property
    def length(self) -> int:
        return len(self.sets) - 1


@dataclass
class ChainReport:
    chains: list[Chain]
    hollow: frozenset[int]
    owner: dict[int, int]       # core -> owning set
    cores: tuple[int, ...]

    @property
    def union(self) -> int:
        u = 0
        for c in self.cores:
            u |= c
        return u

    @property
    def max_length(self) -> int:
        return max((c.length for c in self.chains), default=0)

    def contribution(self, chain: Chain) -> int:
        u = self.union
        return sum((u >> x & 1) + (u >> y & 1) for x, y in zip(chain.a, chain.b))


def find_hollow_chains(wf: WitnessForest, cores: Sequence[int], g: Graph) -> ChainReport:
    """Split the witness tree into maximal hollow chains, one per bottom set."""
    nodes = wf.sets
    owner = {}
    for c in cores:
        holders = [s for s in nodes if s & c == c]
        owner[c] = min(holders, key=lambda s: (popcount(s), s))
    owning = set(owner.values())
    hollow = frozenset(s for s in nodes if s not in owning)
    kids = wf.children()
    root = wf.root

    def interior(s: int) -> bool:
        return s != root and s in hollow and len(kids[s]) == 1

    edge_of = wf.edge_of
    chains = []
    for s in sorted(wf.witness_of.values()):
        if interior(s):
            continue
        seq = [s]
        while interior(wf.parent[seq[-1]]):
            seq.append(wf.parent[seq[-1]])
        es, aa, bb = [], [], []
        for t in seq:
            e = edge_of[t]
            edge = g.edges[e]
            inside, outside = (edge.u, edge.v) if t >> edge.u & 1 else (edge.v, edge.u)
            es.append(e)
            aa.append(inside)
            bb.append(outside)
        chains.append(Chain(tuple(seq), tuple(es), tuple(aa), tuple(bb)))
    return ChainReport(chains, hollow, owner, tuple(sorted(cores)))


def verify_chain_lemma(report: ChainReport) -> list[str]:
    """Case checks on every hollow chain; returns violation messages.

    Length at most 3; (a) a_1 in U forces length 1; (b) b_0 in U forces
    length <= 2, and at length 2 a_1 is outside U and b_0, b_1, a_2 lie in
    one core; (c) b_1 in U forces length <= 3, and at length 3 a_1, b_0, a_2
    are outside U and b_1, b_2, a_3 lie in one core.  For length >= 1 one of
    a_1, b_1 is in U.  Also the general step rules: a_i in U (i >= 1) ends
    the chain at i, and b_{i-1} in U gives length <= i+1 with the same-core
    condition at i+1.  Shortcut contribution is at most 5, at most 4 for
    length 1 and at most 2 for length 0.
    """
    U = report.union

    def inU(v: int) -> bool:
        return bool(U >> v & 1)

    def core_of(v: int) -> Optional[int]:
        for c in report.cores:
            if c >> v & 1:
                return c
        return None

    def same_core(*vs: int) -> bool:
        c = core_of(vs[0])
        return c is not None and all(core_of(v) == c for v in vs)

    out = []
    for ch in report.chains:
        l, a, b = ch.length, ch.a, ch.b
        tag = f"chain {[format_set(s) for s in ch.sets]}"
        if l > 3:
            out.append(f"{tag}: length {l} > 3")
        if l >= 1:
            if inU(a[1]) and l != 1:
                out.append(f"{tag}: (a) a_1 in U but length {l}")
            if not (inU(a[1]) or inU(b[1])):
                out.append(f"{tag}: neither a_1 nor b_1 in U")
        if inU(b[0]):
            if l > 2:
                out.append(f"{tag}: (b) b_0 in U but length {l}")
            if l == 2 and (inU(a[1]) or not same_core(b[0], b[1], a[2])):
                out.append(f"{tag}: (b) length 2 endpoint condition fails")
        if l >= 1 and inU(b[1]):
            if l > 3:
                out.append(f"{tag}: (c) b_1 in U but length {l}")
            if l == 3 and (inU(a[1]) or inU(b[0]) or inU(a[2])
                           or not same_core(b[1], b[2], a[3])):
                out.append(f"{tag}: (c) length 3 endpoint condition fails")
        for i in range(1, l + 1):
            if inU(a[i]) and l != i:
                out.append(f"{tag}: a_{i} in U but length {l}")
            if inU(b[i - 1]):
                if l > i + 1:
                    out.append(f"{tag}: b_{i - 1} in U but length {l} > {i + 1}")
                if l == i + 1 and not same_core(b[i - 1], b[i], a[i + 1]):
                    out.append(f"{tag}: b_{i - 1}, b_{i}, a_{i + 1} not in one core")
        cap = 2 if l == 0 else 4 if l == 1 else 5
        got = report.contribution(ch)
        if got > cap:
            out.append(f"{tag}: shortcut contributes {got} > {cap}")
    return out


# -- counting bounds --------------------------------------------------------

@dataclass(frozen=True)
class DegreeBound:
    lhs: int
    bound: int
    passed: bool
    uncovering_edges: tuple[int, ...] = ()   # precondition violations


def verify_core_degree_bound(solution: Iterable[int], cores: Sequence[int], g: Graph,
                             symmetric: bool) -> DegreeBound:
    solution = sorted(solution)
    lhs = sum(1 for c in cores for e in solution if g.edges[e].crosses(c))
    k = len(cores)
    bound = 10 * (k - 1) if symmetric else 5 * (2 * k - 1)
    idle = tuple(e for e in solution if not any(g.edges[e].crosses(c) for c in cores))
    return DegreeBound(lhs, bound, lhs <= bound, idle)


@dataclass(frozen=True)
class TreeBound:
    edges: int
    non_hollow: int
    root_children: int
    hypothesis_ok: bool
    passed: bool


def verify_tree_edge_bound(wf: WitnessForest, report: ChainReport) -> TreeBound:
    """Shortcut every maximal hollow chain and count edges of the result.

    Requires at most ``2|R| - 1`` edges for ``R`` the non-hollow nodes, and
    ``2(|R| - 1)`` when the root keeps at least two children.
    """
    kids = wf.children()
    kept = set(wf.sets) - {s for ch in report.chains for s in ch.sets[1:]}
    # each child of a kept node is the top of exactly one chain
    root = wf.root
    hyp = all(len(kids[s]) >= 2 for s in kept if s in report.hollow and s != root)
    n_edges = len(report.chains)
    r = sum(1 for s in kept if s not in report.hollow)
    root_children = len(kids[root])
    limit = 2 * (r - 1) if root_children >= 2 else 2 * r - 1
    return TreeBound(n_edges, r, root_children, hyp, hyp and n_edges <= limit)


def check_contra(wf: WitnessForest, report: ChainReport, family: FamilyOracle) -> list[str]:
    """No member fits inside S - A for a hollow S with single child A."""
    kids = wf.children()
    out = []
    for s in wf.sets:
        if s in report.hollow and len(kids[s]) == 1:
            gap = s & ~kids[s][0]
            sub = gap
            while sub:
                if family.is_member(sub):
                    out.append(f"member {format_set(sub)} inside {format_set(s)} minus its child")
                    break
                sub = (sub - 1) & gap
    return out


def check_long_core(report: ChainReport, n: int) -> list[str]:
    """A core meeting S_i outside S_0 crosses S_i."""
    out = []
    for ch in report.chains:
        s0 = ch.sets[0]
        for si in ch.sets[1:]:
            for c in report.cores:
                if (c & si) & ~s0 and not crosses(c, si, n):
                    out.append(f"core {format_set(c)} meets {format_set(si)} outside "
                               f"{format_set(s0)} but does not cross it")
    return out


# -- per-iteration snapshots ------------------------------------------------

@dataclass
class SnapshotReport:
    index: int
    cores: int
    lhs: int
    accounting_ok: bool          # lhs <= 10 |C|
    bound: int
    bound_ok: bool               # lhs <= 5(2|C|-1), or 10(|C|-1) if symmetric
    reduced_edges: int           # surviving edges that cover no core
    witness_problems: list[str] = field(default_factory=list)
    beta_steps: int = 0
    max_chain: int = 0
    chain_violations: list[str] = field(default_factory=list)
    tree_ok: bool = True
    contra_violations: list[str] = field(default_factory=list)
    long_core_violations: list[str] = field(default_factory=list)

    @property
    def witness_ok(self) -> bool:
        return not self.witness_problems

    @property
    def lemmas_ok(self) -> bool:
        return (self.bound_ok and self.accounting_ok and self.tree_ok
                and not self.chain_violations and not self.contra_violations
                and not self.long_core_violations)

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "cores": self.cores,
            "lhs": self.lhs,
            "bound": self.bound,
            "accounting_ok": self.accounting_ok,
            "bound_ok": self.bound_ok,
            "reduced_edges": self.reduced_edges,
            "witness_problems": self.witness_problems,
            "beta_steps": self.beta_steps,
            "max_chain": self.max_chain,
            "chain_violations": self.chain_violations,
            "tree_ok": self.tree_ok,
            "contra_violations": self.contra_violations,
            "long_core_violations": self.long_core_violations,
        }


@dataclass
class AnalysisReport:
    snapshots: list[SnapshotReport]
    ratio_ok: bool                 # cost <= 10 * dual_total
    minimal: bool

    @property
    def max_chain(self) -> int:
        return max((s.max_chain for s in self.snapshots), default=0)

    @property
    def witness_ok(self) -> bool:
        return self.minimal and all(s.witness_ok for s in self.snapshots)

    @property
    def lemmas_ok(self) -> bool:
        return self.ratio_ok and all(s.lemmas_ok for s in self.snapshots)

    def as_dict(self) -> dict:
        return {
            "ratio_ok": self.ratio_ok,
            "minimal": self.minimal,
            "max_chain": self.max_chain,
            "snapshots": [s.as_dict() for s in self.snapshots],
        }


def is_minimal_cover(g: Graph, family: FamilyOracle, I: Iterable[int]) -> bool:
    I = sorted(I)
    if family.min_cores(I, g):
        return False
    return all(family.min_cores([f for f in I if f != e], g) for e in I)


def analyze_cover(g: Graph, family: FamilyOracle, cover: Iterable[int], symmetric: bool,
                  index: int = 0) -> SnapshotReport:
    """Check the counting argument for an inclusion-minimal cover of ``family``.

    Cover edges that cover no core of ``family`` are moved into the fixed
    part of a residual view.  That keeps the cores and the minimality of the
    rest of the cover, and makes every remaining edge cover a core.
    """
    cover = sorted(cover)
    cores = family.min_cores((), g)
    deg = verify_core_degree_bound(cover, cores, g, symmetric)
    idle = list(deg.uncovering_edges)
    active = [e for e in cover if e not in idle]
    snap = SnapshotReport(
        index=index, cores=len(cores), lhs=deg.lhs, accounting_ok=deg.lhs <= 10 * len(cores),
        bound=deg.bound, bound_ok=deg.passed, reduced_edges=len(idle))

    if not is_minimal_cover(g, family, cover):
        snap.witness_problems.append("not_minimal: cover is not an inclusion-minimal cover")
        return snap
    reduced = ResidualFamily(family, idle, g)
    if reduced.min_cores((), g) != cores:
        snap.witness_problems.append("cores changed after fixing idle edges")
        return snap
    try:
        wf = build_witness_forest(g, reduced, active)
    except WitnessError as exc:
        snap.witness_problems.append(f"{exc.kind}: {exc}")
        return snap
    snap.witness_problems += check_witness_forest(wf, g, active, reduced)
    snap.beta_steps = len(wf.steps)
    report = find_hollow_chains(wf, cores, g)
    snap.max_chain = report.max_length
    snap.chain_violations = verify_chain_lemma(report)
    snap.tree_ok = verify_tree_edge_bound(wf, report).passed
    snap.contra_violations = check_contra(wf, report, reduced)
    snap.long_core_violations = check_long_core(report, g.n)
    return snap


def analyze_snapshot(g: Graph, oracle: FamilyOracle, result: SolveResult, index: int,
                     symmetric: bool) -> SnapshotReport:
    """Check one Phase-1 iteration of a solve.

    The family is the residual at the start of the iteration and the cover is
    the set of surviving edges added from this iteration on.
    """
    rec = result.iterations[index]
    before = result.phase1_edges[:index]
    pos = {e: i for i, e in enumerate(result.phase1_edges)}
    later = [e for e in result.solution if pos[e] >= index]
    family = ResidualFamily(oracle, before, g)
    snap = analyze_cover(g, family, later, symmetric, index)
    if snap.cores != len(rec.cores):
        snap.witness_problems.append("recorded cores differ from the residual family's cores")
    return snap


def analyze(g: Graph, oracle: FamilyOracle, result: SolveResult, symmetric: bool) -> AnalysisReport:
    snaps = [analyze_snapshot(g, oracle, result, t, symmetric)
             for t in range(len(result.iterations))]
    return AnalysisReport(
        snapshots=snaps,
        ratio_ok=result.cost <= 10 * result.dual_total,
        minimal=is_minimal_cover(g, oracle, result.solution),
    )
