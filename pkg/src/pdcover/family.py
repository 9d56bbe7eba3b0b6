"""Set-family oracles, residual families, cores and family classification."""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import (
    CapacityError,
    Graph,
    InputDomainError,
    ParseError,
    check_set,
    format_set,
    full_set,
    is_proper,
    popcount,
    vertex_set,
    vertices_of,
)

MAX_ENUM_VERTICES = 20
GAMMA_EXHAUSTIVE_MAX_EDGES = 12


def minimal_sets(sets: Iterable[int]) -> list[int]:
    """Inclusion-minimal elements of ``sets``, ascending by bitmask."""
    ordered = sorted(set(sets), key=lambda s: (popcount(s), s))
    kept: list[int] = []
    for s in ordered:
        if not any(c & s == c for c in kept):
            kept.append(s)
    return sorted(kept)


def _disjoint(sets: Sequence[int]) -> bool:
    acc = 0
    for s in sets:
        if acc & s:
            return False
        acc |= s
    return True


class FamilyOracle(ABC):
    """Membership and minimal-core queries for a set family on ``n`` vertices.

    ``min_cores(I, g)`` returns the inclusion-minimal members not covered by
    the edge ids ``I`` of ``g``.  Subclasses marked ``pliable`` assert that
    the cores they return are pairwise disjoint.
    """

    n: int
    pliable: bool = False

    @abstractmethod
    def is_member(self, s: int) -> bool: ...

    @abstractmethod
    def min_cores(self, I: Iterable[int], g: Graph) -> list[int]: ...

    def members(self) -> list[int]:
        """All members, ascending.  Falls back to a scan over the power set."""
        if self.n > MAX_ENUM_VERTICES:
            raise CapacityError(f"member enumeration needs n <= {MAX_ENUM_VERTICES}")
        return [s for s in range(1, full_set(self.n)) if self.is_member(s)]

    def covered_by(self, I: Iterable[int], g: Graph) -> bool:
        return not self.min_cores(I, g)

    def _checked(self, cores: list[int]) -> list[int]:
        if __debug__ and self.pliable:
            assert _disjoint(cores), "cores of a pliable family must be disjoint"
        return cores


class ExplicitFamily(FamilyOracle):
    """A family given by its list of members."""

    def __init__(self, n: int, members: Iterable[int], pliable: bool = False):
        self.n = n
        seen = set()
        for s in members:
            check_set(s, n)
            if not is_proper(s, n):
                raise InputDomainError(f"family member {format_set(s)} is empty or V")
            seen.add(s)
        self._members = tuple(sorted(seen))
        self._lookup = frozenset(seen)
        self.pliable = pliable

    @classmethod
    def from_lists(cls, n: int, members: Iterable[Iterable[int]], **kw) -> "ExplicitFamily":
        return cls(n, [vertex_set(m) for m in members], **kw)

    def __len__(self):
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    def __repr__(self):
        return f"ExplicitFamily(n={self.n}, {[format_set(s) for s in self._members]})"

    def __eq__(self, other):
        return isinstance(other, ExplicitFamily) and (self.n, self._members) == (other.n, other._members)

    def __hash__(self):
        return hash((self.n, self._members))

    def is_member(self, s: int) -> bool:
        return s in self._lookup

    def members(self) -> list[int]:
        return list(self._members)

    def min_cores(self, I: Iterable[int], g: Graph) -> list[int]:
        edges = [g.edges[e] for e in I]
        uncovered = [s for s in self._members if not any(e.crosses(s) for e in edges)]
        return self._checked(minimal_sets(uncovered))


class ResidualFamily(FamilyOracle):
    """View of ``base`` restricted to members not covered by a fixed edge set."""

    def __init__(self, base: FamilyOracle, fixed: Iterable[int], g: Graph):
        self.base = base
        self.n = base.n
        self.g = g
        self.fixed = frozenset(fixed)
        self._fixed_edges = [g.edges[e] for e in sorted(self.fixed)]
        self.pliable = base.pliable

    def is_member(self, s: int) -> bool:
        return self.base.is_member(s) and not any(e.crosses(s) for e in self._fixed_edges)

    def members(self) -> list[int]:
        return [s for s in self.base.members() if not any(e.crosses(s) for e in self._fixed_edges)]

    def min_cores(self, I: Iterable[int], g: Graph) -> list[int]:
        return self.base.min_cores(self.fixed.union(I), g)


def residual(fam: FamilyOracle, I: Iterable[int], g: Graph) -> ExplicitFamily:
    """Members of ``fam`` that no edge of ``I`` covers, as an explicit family."""
    I = list(I)
    g.check_edges(I)
    edges = [g.edges[e] for e in I]
    return ExplicitFamily(
        fam.n, [s for s in fam.members() if not any(e.crosses(s) for e in edges)],
        pliable=fam.pliable)


def min_cores(fam: FamilyOracle, I: Iterable[int], g: Graph) -> list[int]:
    I = list(I)
    g.check_edges(I)
    return fam.min_cores(I, g)


def crosses(a: int, b: int, n: int) -> bool:
    full = full_set(n)
    return bool(a & b) and bool(full & ~(a | b)) and bool(a & ~b) and bool(b & ~a)


def overlaps(a: int, b: int) -> bool:
    return bool(a & b) and bool(a & ~b) and bool(b & ~a)


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class FamilyClass:
    uncrossable: bool
    semi_uncrossable: bool
    pliable: bool
    symmetric: bool
    gamma_pliable: Optional[bool] = None

    def as_dict(self) -> dict:
        return {
            "uncrossable": self.uncrossable,
            "semi_uncrossable": self.semi_uncrossable,
            "pliable": self.pliable,
            "gamma_pliable": self.gamma_pliable,
            "symmetric": self.symmetric,
        }


def _pair_flags(a: int, b: int, inf) -> tuple[bool, bool, bool]:
    i, u, ab, ba = inf(a & b), inf(a | b), inf(a & ~b), inf(b & ~a)
    pliable = (i + u + ab + ba) >= 2
    uncrossable = (i and u) or (ab and ba)
    semi = (i and (u or ab or ba)) or (ab and ba)
    return uncrossable, semi, pliable


def classify(fam: FamilyOracle, g: Graph | None = None, with_gamma: bool = True) -> FamilyClass:
    """Exhaustive pair check of the uncrossing-type properties of ``fam``.

    Property (gamma) is evaluated only when it is affordable: over the edges of
    ``g`` if given, else over the complete graph when it has at most
    ``GAMMA_EXHAUSTIVE_MAX_EDGES`` edges.  Otherwise ``gamma_pliable`` is None.
    """
    members = fam.members()
    lookup = frozenset(members)
    full = full_set(fam.n)

    def inf(s: int) -> bool:
        return s in lookup  # empty set and V are never stored

    unc = semi = pl = True
    for idx, a in enumerate(members):
        for b in members[idx + 1:]:
            fu, fs, fp = _pair_flags(a, b, inf)
            unc &= fu
            semi &= fs
            pl &= fp
            if not pl:
                break
        if not pl:
            break
    if not pl:
        unc = semi = False
    symmetric = all((full & ~s) in lookup for s in members)

    gamma = None
    if pl and with_gamma:
        if g is None and fam.n * (fam.n - 1) // 2 <= GAMMA_EXHAUSTIVE_MAX_EDGES:
            g = complete_graph(fam.n)
        if g is not None:
            mode = "exhaustive" if g.m <= GAMMA_EXHAUSTIVE_MAX_EDGES else "sampled"
            gamma = check_gamma(fam, g, mode=mode).holds
    elif not pl:
        gamma = False
    return FamilyClass(bool(unc), bool(semi), bool(pl), symmetric, gamma)


def complete_graph(n: int) -> Graph:
    return Graph.build(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


# -- Property (gamma) -------------------------------------------------------

@dataclass(frozen=True)
class GammaCounterexample:
    I: frozenset
    s1: int
    s2: int
    core: int

    def describe(self) -> str:
        return (f"I={sorted(self.I)} S1={format_set(self.s1)} S2={format_set(self.s2)} "
                f"C={format_set(self.core)}")


@dataclass(frozen=True)
class GammaResult:
    holds: bool
    examined: int
    counterexample: Optional[GammaCounterexample] = None


def gamma_violation(res_members: Sequence[int], n: int) -> Optional[tuple[int, int, int]]:
    """First ``(S1, S2, C)`` breaking Property (gamma) inside one residual family."""
    lookup = frozenset(res_members)
    for c in minimal_sets(res_members):
        crossing = [s for s in sorted(res_members) if crosses(c, s, n)]
        for s1 in crossing:
            for s2 in crossing:
                if s1 != s2 and s1 & s2 == s1:
                    rest = s2 & ~(s1 | c)
                    if rest and rest not in lookup:
                        return s1, s2, c
    return None


def check_gamma(fam: FamilyOracle, g: Graph, mode: str = "exhaustive",
                samples: int = 200, seed: int = 0) -> GammaResult:
    """Check Property (gamma) over residual families ``F^I`` for ``I`` ⊆ E(g).

    ``mode`` is ``"exhaustive"`` (all 2^|E| edge subsets, |E| <= 12) or
    ``"sampled"`` (the empty set plus ``samples`` uniform random subsets drawn
    from ``random.Random(seed)``).  Residual families reached by several
    edge sets are checked once.
    """
    members = fam.members()
    m = g.m
    cover_masks = []
    for e in g.edges:
        mask = 0
        for j, s in enumerate(members):
            if e.crosses(s):
                mask |= 1 << j
        cover_masks.append(mask)

    if mode == "exhaustive":
        if m > GAMMA_EXHAUSTIVE_MAX_EDGES:
            raise CapacityError(
                f"exhaustive Property (gamma) check needs |E| <= {GAMMA_EXHAUSTIVE_MAX_EDGES}, "
                f"got {m}; use sampled mode")
        covered = [0] * (1 << m)
        subsets = range(1 << m)
        for x in range(1, 1 << m):
            low = x & -x
            covered[x] = covered[x ^ low] | cover_masks[low.bit_length() - 1]
        def cov(x):
            return covered[x]
    elif mode == "sampled":
        rng = random.Random(seed)
        subsets = [0] + [rng.getrandbits(m) if m else 0 for _ in range(samples)]
        def cov(x):
            acc = 0
            for e in range(m):
                if x >> e & 1:
                    acc |= cover_masks[e]
            return acc
    else:
        raise ValueError(f"unknown mode {mode!r}")

    seen: set[int] = set()
    examined = 0
    for x in subsets:
        c = cov(x)
        if c in seen:
            continue
        seen.add(c)
        examined += 1
        res = [s for j, s in enumerate(members) if not c >> j & 1]
        bad = gamma_violation(res, fam.n)
        if bad is not None:
            I = frozenset(e for e in range(m) if x >> e & 1)
            return GammaResult(False, examined, GammaCounterexample(I, *bad))
    return GammaResult(True, examined)


# -- text format ------------------------------------------------------------

def parse_family(text: str) -> ExplicitFamily:
    """Parse ``n count`` followed by one member per line as a vertex list."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("empty family file", 1)
    lineno, header = rows[0]
    try:
        n, count = (int(x) for x in header)
    except ValueError:
        raise ParseError("header must be 'n count'", lineno) from None
    if len(rows) - 1 != count:
        raise ParseError(f"header announces {count} members, found {len(rows) - 1}", lineno)
    members = []
    for ln, fields in rows[1:]:
        try:
            vs = [int(x) for x in fields]
        except ValueError:
            raise ParseError("member must be a list of vertex ids", ln) from None
        if any(not 0 <= v < n for v in vs):
            raise ParseError(f"vertex outside 0..{n - 1}", ln)
        s = vertex_set(vs)
        if not is_proper(s, n):
            raise ParseError("member is empty or the whole ground set", ln)
        members.append(s)
    return ExplicitFamily(n, members)


def format_family(fam: FamilyOracle) -> str:
    members = fam.members()
    lines = [f"{fam.n} {len(members)}"]
    lines += [" ".join(map(str, vertices_of(s))) for s in members]
    return "\n".join(lines) + "\n"
