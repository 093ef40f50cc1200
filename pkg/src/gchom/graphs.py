"""Loop-free multigraphs and signed canonical labeling.

A generator of the commutative graph complex is an isomorphism class of
connected multigraphs carrying an orientation: for the even complex an
ordering of the edges, for the odd complex an ordering of the vertices
together with a direction on every edge.  Relabeling acts on the
orientation by a sign, and a graph admitting an automorphism of sign -1
is identically zero as a generator.

This module owns the graph type, the canonical-form search (iterative
refinement plus backtracking over labelings) with sign tracking, and the
structural predicates (connectivity, triconnectivity) used downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache


class Parity(Enum):
    """Parity of the complex; the value is the representative n."""

    EVEN = 2
    ODD = 3

    @property
    def n(self) -> int:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> "Parity":
        try:
            return {"even": cls.EVEN, "odd": cls.ODD}[name.lower()]
        except KeyError:
            raise ValueError(f"unknown parity {name!r}; expected 'even' or 'odd'")

    def __str__(self) -> str:
        return self.name.lower()


class SelfEdgeError(ValueError):
    """Raised when an edge joins a vertex to itself (tadpoles are excluded)."""


@dataclass(frozen=True, slots=True)
class Multigraph:
    """Connected or not, loop-free multigraph in storage normal form.

    ``edges`` is the lexicographically sorted tuple of pairs ``(u, v)``
    with ``0 <= u < v < num_vertices``; parallel edges appear as repeated
    pairs.  Instances are immutable and hashable.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("need at least one vertex")
        prev = None
        for e in self.edges:
            u, v = e
            if u == v:
                raise SelfEdgeError(f"self-edge at vertex {u}")
            if not (0 <= u < v < self.num_vertices):
                raise ValueError(f"edge {e} out of range or not normalized")
            if prev is not None and e < prev:
                raise ValueError("edge list not sorted")
            prev = e

    @classmethod
    def from_edges(cls, num_vertices: int, edges) -> "Multigraph":
        """Build a graph from unnormalized (u, v) pairs."""
        norm = tuple(sorted((u, v) if u < v else (v, u) for u, v in edges))
        return cls(num_vertices, norm)

    # -- basic counts ---------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def loop_order(self) -> int:
        """First Betti number E - V + 1 (meaningful for connected graphs)."""
        return len(self.edges) - self.num_vertices + 1

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.num_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def min_degree(self) -> int:
        return min(self.degrees()) if self.num_vertices else 0

    def multiplicity(self, u: int, v: int) -> int:
        e = (u, v) if u < v else (v, u)
        return sum(1 for f in self.edges if f == e)

    def is_simple(self) -> bool:
        return len(set(self.edges)) == len(self.edges)

    def adjacency(self) -> list[list[int]]:
        """Dense V x V multiplicity matrix."""
        w = [[0] * self.num_vertices for _ in range(self.num_vertices)]
        for u, v in self.edges:
            w[u][v] += 1
            w[v][u] += 1
        return w

    def neighbors(self, v: int) -> list[int]:
        """Neighbors of v with multiplicity, sorted."""
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def relabel(self, perm) -> "Multigraph":
        """Apply a vertex permutation (perm[old] = new label)."""
        return Multigraph.from_edges(
            self.num_vertices, ((perm[u], perm[v]) for u, v in self.edges)
        )

    # -- text format: "V E u1 v1 u2 v2 ..." -----------------------------

    def to_line(self) -> str:
        parts = [str(self.num_vertices), str(len(self.edges))]
        for u, v in self.edges:
            parts.append(str(u))
            parts.append(str(v))
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "Multigraph":
        tokens = line.split()
        if len(tokens) < 2:
            raise ValueError(f"malformed graph line: {line!r}")
        nv, ne = int(tokens[0]), int(tokens[1])
        if len(tokens) != 2 + 2 * ne:
            raise ValueError(f"expected {ne} edges on line: {line!r}")
        it = iter(tokens[2:])
        edges = tuple((int(u), int(v)) for u, v in zip(it, it))
        return cls(nv, edges)

    def __str__(self) -> str:
        return self.to_line()


@dataclass(frozen=True, slots=True)
class CanonicalResult:
    """Canonical representative and sign, or the zero generator.

    ``canonical`` is None exactly for the zero result, in which case
    ``sign`` is 0.  Otherwise sign is +1 or -1 and relates the input
    labeling's orientation to the canonical representative's.
    """

    canonical: Multigraph | None
    sign: int

    @classmethod
    def zero(cls) -> "CanonicalResult":
        return cls(None, 0)

    @property
    def is_zero(self) -> bool:
        return self.canonical is None


def perm_sign(perm) -> int:
    """Sign of a permutation given in one-line notation (perm[i] = image)."""
    n = len(perm)
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def orientation_sign(graph: Multigraph, perm, parity: Parity) -> int:
    """Sign picked up by relabeling ``graph`` with the vertex permutation.

    Even parity: sign of the induced permutation of the sorted edge list
    (parallel copies are matched stably; any ambiguity only arises for
    graphs that are zero anyway).  Odd parity: sign of the vertex
    permutation times (-1) for every edge whose direction (low vertex to
    high vertex) gets reversed.
    """
    if parity is Parity.ODD:
        sign = perm_sign(perm)
        reversals = sum(1 for u, v in graph.edges if perm[u] > perm[v])
        if reversals % 2:
            sign = -sign
        return sign
    mapped = []
    for u, v in graph.edges:
        a, b = perm[u], perm[v]
        mapped.append((a, b) if a < b else (b, a))
    order = sorted(range(len(mapped)), key=mapped.__getitem__)
    return perm_sign(order)


# ---------------------------------------------------------------------------
# Canonical form search.
#
# Iterative degree/neighborhood refinement with multiplicities as edge
# colors, then backtracking individualization.  The canonical form is the
# lexicographically smallest relabeled edge list over all leaves of the
# (isomorphism-invariant) search tree; every leaf attaining it yields one
# automorphism, so the group order and the orientation signs of the full
# automorphism group come for free.
# ---------------------------------------------------------------------------


def _refine(cells: list[list[int]], weights) -> list[list[int]]:
    while True:
        changed = False
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                wv = weights[v]
                key = tuple(sum(wv[u] for u in other) for other in cells)
                groups.setdefault(key, []).append(v)
            if len(groups) == 1:
                new_cells.append(cell)
            else:
                changed = True
                for key in sorted(groups):
                    new_cells.append(groups[key])
        cells = new_cells
        if not changed:
            return cells


def _initial_cells(graph: Multigraph, weights) -> list[list[int]]:
    groups: dict[tuple, list[int]] = {}
    for v in range(graph.num_vertices):
        mults = sorted((m for m in weights[v] if m), reverse=True)
        key = (sum(mults), tuple(mults))
        groups.setdefault(key, []).append(v)
    return [groups[k] for k in sorted(groups)]


@lru_cache(maxsize=1 << 18)
def canonical_data(graph: Multigraph) -> tuple[Multigraph, tuple[tuple[int, ...], ...]]:
    """Canonical representative and all minimal labelings.

    Returns ``(canonical, labelings)`` where each labeling maps original
    vertex -> canonical position and relabels the graph onto the same
    minimal edge list.  The labelings are in bijection with Aut(graph).
    """
    n = graph.num_vertices
    edges = graph.edges
    if n == 1:
        return graph, ((0,),)
    weights = graph.adjacency()
    cells = _refine(_initial_cells(graph, weights), weights)

    best: list[tuple[tuple[int, int], ...] | None] = [None]
    best_labelings: list[tuple[int, ...]] = []

    def leaf(cells):
        pos = [0] * n
        for i, cell in enumerate(cells):
            pos[cell[0]] = i
        relabeled = sorted(
            (pos[u], pos[v]) if pos[u] < pos[v] else (pos[v], pos[u]) for u, v in edges
        )
        key = tuple(relabeled)
        if best[0] is None or key < best[0]:
            best[0] = key
            best_labelings.clear()
            best_labelings.append(tuple(pos))
        elif key == best[0]:
            best_labelings.append(tuple(pos))

    def search(cells):
        for idx, cell in enumerate(cells):
            if len(cell) > 1:
                break
        else:
            leaf(cells)
            return
        rest = cells[idx + 1:]
        head = cells[:idx]
        for v in cell:
            others = [u for u in cell if u != v]
            child = _refine(head + [[v], others] + rest, weights)
            search(child)

    search(cells)
    canon = Multigraph(n, best[0])
    return canon, tuple(best_labelings)


@lru_cache(maxsize=1 << 18)
def canonicalize(graph: Multigraph, parity: Parity) -> CanonicalResult:
    """Canonical representative with sign, or Zero.

    Zero is returned exactly when some automorphism acts with sign -1 on
    the orientation datum; under even parity any graph with a parallel
    edge vanishes this way (swapping the two copies is an odd edge
    permutation fixing the graph).
    """
    if parity is Parity.EVEN and not graph.is_simple():
        return CanonicalResult.zero()
    canon, labelings = canonical_data(graph)
    sign0 = orientation_sign(graph, labelings[0], parity)
    for lab in labelings[1:]:
        if orientation_sign(graph, lab, parity) != sign0:
            return CanonicalResult.zero()
    return CanonicalResult(canon, sign0)


def automorphism_group_size(graph: Multigraph) -> int:
    """Order of the automorphism group of the multigraph.

    Counts compatible pairs of vertex and edge bijections: the number of
    vertex automorphisms times m! for every parallel class of size m.
    """
    order = len(canonical_data(graph)[1])
    run = 1
    for prev, cur in zip(graph.edges, graph.edges[1:]):
        if cur == prev:
            run += 1
            order *= run
        else:
            run = 1
    return order


def automorphisms(graph: Multigraph) -> list[tuple[int, ...]]:
    """All automorphisms of the graph, in one-line notation."""
    _, labelings = canonical_data(graph)
    base = labelings[0]
    inv = [0] * graph.num_vertices
    for v, p in enumerate(base):
        inv[p] = v
    auts = []
    for lab in labelings:
        auts.append(tuple(inv[lab[v]] for v in range(graph.num_vertices)))
    return auts


# ---------------------------------------------------------------------------
# Structural predicates.
# ---------------------------------------------------------------------------


def is_connected(graph: Multigraph) -> bool:
    n = graph.num_vertices
    if n == 1:
        return True
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in set(graph.edges):
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == n


def _connected_after_deleting(graph: Multigraph, removed: tuple[int, int]) -> bool:
    n = graph.num_vertices
    alive = [v for v in range(n) if v not in removed]
    if not alive:
        return True
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in set(graph.edges):
        if u in removed or v in removed:
            continue
        adj[u].append(v)
        adj[v].append(u)
    seen = {alive[0]}
    stack = [alive[0]]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(alive)


def is_triconnected(graph: Multigraph) -> bool:
    """Simple, at least 4 vertices, and no disconnecting vertex pair.

    All-pairs vertex deletion; exact and fast enough at the graph sizes
    this pipeline produces (<= ~16 vertices).  K4 counts as triconnected.
    """
    if not graph.is_simple():
        return False
    n = graph.num_vertices
    if n < 4:
        return False
    if not is_connected(graph):
        return False
    for pair in itertools.combinations(range(n), 2):
        if not _connected_after_deleting(graph, pair):
            return False
    return True
