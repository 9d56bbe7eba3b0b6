"""Ground sets, edges and cut primitives.

Vertex sets are plain ``int`` bitmasks over vertex ids ``0..n-1``; bit ``v``
is set iff vertex ``v`` belongs to the set.  Edge sets are collections of
edge ids.  Costs are :class:`fractions.Fraction` so that tightness tests in
the primal-dual solver are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

MAX_VERTICES = 64


class InputDomainError(ValueError):
    """An edge id or vertex bit outside the ground set."""


class ParseError(ValueError):
    """Malformed instance text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(ValueError):
    """An instance exceeds a size cap of an enumeration-based routine."""


# -- vertex set helpers -----------------------------------------------------

def full_set(n: int) -> int:
    return (1 << n) - 1


def popcount(s: int) -> int:
    return bin(s).count("1")


def vertex_set(vertices: Iterable[int]) -> int:
    s = 0
    for v in vertices:
        if v < 0:
            raise InputDomainError(f"negative vertex id {v}")
        s |= 1 << v
    return s


def vertices_of(s: int) -> list[int]:
    out = []
    v = 0
    while s:
        if s & 1:
            out.append(v)
        s >>= 1
        v += 1
    return out


def check_set(s: int, n: int) -> None:
    if s < 0 or s >> n:
        raise InputDomainError(f"vertex set {s:#x} has bits outside 0..{n - 1}")


def is_proper(s: int, n: int) -> bool:
    """True iff ``s`` is neither empty nor the whole ground set."""
    return s != 0 and s != full_set(n)


def format_set(s: int) -> str:
    return "{" + ",".join(map(str, vertices_of(s))) + "}"


# -- graph ------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    cost: Fraction = Fraction(1)
    capacity: int = 1

    def __post_init__(self):
        if self.u == self.v:
            raise InputDomainError(f"edge {self.id} is a self-loop at {self.u}")
        if self.cost < 0:
            raise InputDomainError(f"edge {self.id} has negative cost")
        if self.capacity < 1:
            raise InputDomainError(f"edge {self.id} has capacity < 1")

    def crosses(self, s: int) -> bool:
        return bool(((s >> self.u) ^ (s >> self.v)) & 1)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise InputDomainError(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise InputDomainError(f"edge at position {i} has id {e.id}")
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise InputDomainError(f"edge {i} endpoint outside 0..{self.n - 1}")

    @classmethod
    def build(cls, n: int, edges: Iterable[tuple]) -> "Graph":
        """Build from ``(u, v)``, ``(u, v, cost)`` or ``(u, v, cost, capacity)`` tuples."""
        out = []
        for i, t in enumerate(edges):
            u, v = t[0], t[1]
            cost = Fraction(t[2]) if len(t) > 2 else Fraction(1)
            cap = int(t[3]) if len(t) > 3 else 1
            out.append(Edge(i, u, v, cost, cap))
        return cls(n, tuple(out))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertex_mask(self) -> int:
        return full_set(self.n)

    def all_edges(self) -> frozenset[int]:
        return frozenset(range(self.m))

    def cost(self, J: Iterable[int]) -> Fraction:
        return sum((self.edges[e].cost for e in J), Fraction(0))

    def check_edges(self, J: Iterable[int]) -> None:
        for e in J:
            if not 0 <= e < self.m:
                raise InputDomainError(f"edge id {e} outside 0..{self.m - 1}")


def delta(J: Iterable[int], s: int, g: Graph) -> frozenset[int]:
    """Edge ids of ``J`` with exactly one endpoint in ``s``."""
    check_set(s, g.n)
    J = list(J)
    g.check_edges(J)
    edges = g.edges
    return frozenset(e for e in J if edges[e].crosses(s))


def cut_degree(J: Iterable[int], s: int, g: Graph) -> int:
    return len(delta(J, s, g))


def cut_capacity(J: Iterable[int], s: int, g: Graph) -> int:
    return sum(g.edges[e].capacity for e in delta(J, s, g))


def covers(J: Iterable[int], s: int, g: Graph) -> bool:
    return cut_degree(J, s, g) >= 1


def crossing_edges(J: Iterable[int], s: int, g: Graph) -> Iterator[int]:
    """Unchecked fast path of :func:`delta` for internal loops."""
    edges = g.edges
    for e in J:
        if edges[e].crosses(s):
            yield e


# -- text format ------------------------------------------------------------

def _data_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _parse_edge_fields(fields: list[str], lineno: int) -> tuple[int, int, Fraction, int]:
    if len(fields) not in (3, 4):
        raise ParseError("expected 'u v cost [capacity]'", lineno)
    try:
        u, v = int(fields[0]), int(fields[1])
        cost = Fraction(fields[2])
        cap = int(fields[3]) if len(fields) == 4 else 1
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), lineno) from None
    return u, v, cost, cap


def parse_graph(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v num/den [capacity]``."""
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError("empty graph file", 1)
    lineno, header = lines[0]
    if len(header) != 2:
        raise ParseError("header must be 'n m'", lineno)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("header must be two integers", lineno) from None
    if len(lines) - 1 != m:
        raise ParseError(f"header announces {m} edges, found {len(lines) - 1}", lineno)
    edges = []
    for i, (ln, fields) in enumerate(lines[1:]):
        u, v, cost, cap = _parse_edge_fields(fields, ln)
        try:
            edges.append(Edge(i, u, v, cost, cap))
        except InputDomainError as exc:
            raise ParseError(str(exc), ln) from None
    try:
        return Graph(n, tuple(edges))
    except InputDomainError as exc:
        raise ParseError(str(exc), lineno) from None


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    for e in g.edges:
        lines.append(f"{e.u} {e.v} {e.cost.numerator}/{e.cost.denominator} {e.capacity}")
    return "\n".join(lines) + "\n"


def parse_sectioned_graph(text: str) -> tuple[Graph, Graph]:
    """Parse a near-min-cuts instance: ``n`` then ``#base`` and ``#candidates`` sections.

    Each section lists edges one per line as ``u v [cost [capacity]]``; base
    edge costs default to 0 and are ignored by the solver.
    """
    n = None
    section = None
    base: list[tuple] = []
    cand: list[tuple] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            tag = stripped[1:].strip().lower()
            if tag in ("base", "candidates"):
                section = tag
            continue
        fields = stripped.split()
        if not fields:
            continue
        if n is None:
            if len(fields) != 1:
                raise ParseError("first line must be the vertex count", lineno)
            try:
                n = int(fields[0])
            except ValueError:
                raise ParseError("vertex count must be an integer", lineno) from None
            continue
        if section is None:
            raise ParseError("edge outside a #base or #candidates section", lineno)
        if len(fields) == 2:
            fields = fields + ["0" if section == "base" else "1"]
        u, v, cost, cap = _parse_edge_fields(fields, lineno)
        (base if section == "base" else cand).append((u, v, cost, cap))
    if n is None:
        raise ParseError("missing vertex count", 1)
    try:
        return Graph.build(n, base), Graph.build(n, cand)
    except InputDomainError as exc:
        raise ParseError(str(exc)) from None


def format_sectioned_graph(base: Graph, candidates: Graph) -> str:
    lines = [str(base.n), "#base"]
    lines += [f"{e.u} {e.v}" for e in base.edges]
    lines.append("#candidates")
    lines += [f"{e.u} {e.v} {e.cost.numerator}/{e.cost.denominator} {e.capacity}"
              for e in candidates.edges]
    return "\n".join(lines) + "\n"
