"""The topological graph of a system, drawn as a discrete labelled graph.

Vertices are ultrafilters.  Each label ``l`` contributes one edge per
ultrafilter ``x`` of its range: ``d`` is ``x`` and ``r`` is the pullback of
``x`` along the action.  On the cofinite backend only a band of principal
vertices is drawn, together with the point at infinity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Union

from .boolean_core import AT_INFINITY, AtInfinity, Principal, Ultrafilter, ultrafilter_key
from .dynamics import BooleanDynamicalSystem, Shift, TailAction, Word, out_labels
from .errors import UnsupportedBackend
from .limits import resolve_bound


@dataclass(frozen=True)
class Edge:
    label: str
    d: Ultrafilter
    r: Ultrafilter


@dataclass(frozen=True)
class TopoGraph:
    vertices: tuple
    edges: tuple
    windowed: bool = False


def vertex_name(v: Ultrafilter) -> str:
    return "inf" if isinstance(v, AtInfinity) else str(v.point)


def _edge_key(e: Edge):
    return (e.label, ultrafilter_key(e.d), ultrafilter_key(e.r))


def build_graph(sys: BooleanDynamicalSystem) -> TopoGraph:
    if sys.is_finite:
        vertices = tuple(Principal(a) for a in sys.backend.atoms)
        edges = []
        for label in sys.labels:
            for source in sys.backend.atoms:
                for target in sys.atom_image(label, source).sorted_members():
                    edges.append(Edge(label, Principal(target), Principal(source)))
        return TopoGraph(vertices, tuple(sorted(edges, key=_edge_key)), False)

    backend = sys.backend
    reach = sys.window() + sys.max_shift() + 1
    drawn = backend.band(reach)
    vertices = tuple(Principal(i) for i in backend.band(reach + sys.max_shift())) + (AT_INFINITY,)
    edges = []
    for label in sys.labels:
        action: TailAction = sys.actions[label]
        for i in drawn:
            source = _preimage_point(action, i)
            if source is not None:
                edges.append(Edge(label, Principal(i), Principal(source)))
        if sys.range((label,)).cofinite:
            edges.append(Edge(label, AT_INFINITY, _pullback_at_infinity(action)))
    return TopoGraph(vertices, tuple(sorted(edges, key=_edge_key)), True)


def _preimage_point(action: TailAction, i: int):
    for key, image in action.exceptions.items():
        if image.has_point(i):
            return key
    if isinstance(action.tail, Shift):
        j = i - action.tail.offset
        if j not in action.exceptions and action.backend.in_universe(j):
            return j
    return None


def _pullback_at_infinity(action: TailAction) -> Ultrafilter:
    for key, image in sorted(action.exceptions.items()):
        if image.cofinite:
            return Principal(key)
    return AT_INFINITY


# -- classification -------------------------------------------------------


SHAPES = {"rg": "circle", "sce": "box", "fin-rg": "diamond", "sg": "doublecircle"}


def classify_vertices(sys: BooleanDynamicalSystem, graph: TopoGraph) -> dict:
    """Tag each vertex: sce (no outgoing label), rg (regular neighbourhood), otherwise fin-rg."""
    tags = {}
    for v in graph.vertices:
        if isinstance(v, AtInfinity):
            moving = sys.tail_labels()
            tags[v] = "rg" if moving else "sce"
            continue
        if not out_labels(sys, sys.point_elem(v.point)):
            tags[v] = "sce"
        else:
            tags[v] = "rg"
    return tags


# -- boundary paths -------------------------------------------------------


@dataclass(frozen=True)
class Finite:
    word: Word
    terminal: str


@dataclass(frozen=True)
class EventuallyPeriodic:
    prefix: Word
    period: Word
    anchor: str


@dataclass(frozen=True)
class InfinitePathSpace:
    reason: str
    cap: int


BoundaryPath = Union[Finite, EventuallyPeriodic]


def _successors(sys: BooleanDynamicalSystem, atom: str) -> list[tuple[str, str]]:
    return [(l, b) for l in sys.labels for b in sys.atom_image(l, atom).sorted_members()]


def _strongly_connected(nodes: list[str], succ: dict) -> list[set]:
    index, low, stack, on_stack, comps, counter = {}, {}, [], set(), [], [0]

    def visit(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for _, w in succ[v]:
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.add(w)
                if w == v:
                    break
            comps.append(comp)

    for v in nodes:
        if v not in index:
            visit(v)
    return comps


def boundary_paths(sys: BooleanDynamicalSystem, cap: int | None = None):
    """Finite paths ending at sources and infinite paths cut at their first repeated vertex.

    Returns ``InfinitePathSpace`` when a strongly connected part has more
    internal edges than vertices (uncountably many infinite paths) or when the
    listing would exceed ``cap``.
    """
    if not sys.is_finite:
        raise UnsupportedBackend("boundary paths are listed on the finite backend only")
    limit = resolve_bound(cap, 10 ** 6)
    atoms = list(sys.backend.atoms)
    succ = {a: _successors(sys, a) for a in atoms}
    for comp in _strongly_connected(atoms, succ):
        internal = sum(1 for a in comp for _, b in succ[a] if b in comp)
        if internal > len(comp):
            return InfinitePathSpace("branching cycle", limit)

    found: set = set()

    def walk(atom: str, word: Word, visited: list[str]) -> bool:
        if not succ[atom]:
            found.add(Finite(word, atom))
            return len(found) <= limit
        for label, nxt in succ[atom]:
            step = word + (label,)
            if nxt in visited:
                k = visited.index(nxt)
                found.add(EventuallyPeriodic(step[:k], step[k:], nxt))
            elif not walk(nxt, step, visited + [nxt]):
                return False
            if len(found) > limit:
                return False
        return True

    for a in atoms:
        if not walk(a, (), [a]):
            return InfinitePathSpace("cap exceeded", limit)
    return sorted(found, key=_path_key)


def _path_key(p: BoundaryPath):
    if isinstance(p, Finite):
        return (0, p.word, (), p.terminal)
    return (1, p.prefix, p.period, p.anchor)


# -- DOT ------------------------------------------------------------------


def to_dot(graph: TopoGraph, tags: dict | None = None) -> str:
    lines = ["digraph bds {"]
    for v in graph.vertices:
        shape = SHAPES.get((tags or {}).get(v, "rg"), "circle")
        lines.append(f'  "{vertex_name(v)}" [shape={shape}];')
    for e in graph.edges:
        lines.append(f'  "{vertex_name(e.d)}" -> "{vertex_name(e.r)}" [label="{e.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- independent K-theory -------------------------------------------------


def _minor_determinant(rows: list[list[int]]) -> int:
    """Determinant by rational Gaussian elimination."""
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= factor * a[k][j]
    return int(det)


def _determinantal_divisors(matrix: list[list[int]], rows: int, cols: int) -> list[int]:
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, _minor_determinant([[matrix[i][j] for j in cs] for i in rs]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        divisors.append(g)
    return divisors


def graph_ktheory_oracle(graph: TopoGraph):
    """K-groups read directly off the edge data via determinantal divisors."""
    from .ktheory import Group, KGroups  # value types only

    if graph.windowed:
        raise UnsupportedBackend("the oracle needs a finite graph")
    vertices = list(graph.vertices)
    position = {v: i for i, v in enumerate(vertices)}
    receivers = [v for v in vertices if any(e.r == v for e in graph.edges)]
    matrix = [[0] * len(receivers) for _ in vertices]
    for col, v in enumerate(receivers):
        matrix[position[v]][col] += 1
        for e in graph.edges:
            if e.r == v:
                matrix[position[e.d]][col] -= 1
    divisors = _determinantal_divisors(matrix, len(vertices), len(receivers))
    rank = len(divisors) - 1
    factors = [divisors[k] // divisors[k - 1] for k in range(1, rank + 1)]
    return KGroups(
        Group(len(vertices) - rank, tuple(f for f in factors if f > 1)),
        Group(len(receivers) - rank, ()),
    )
