"""Generator bases of the graph complexes and the contraction differential.

A slice of the complex fixes the loop order g and the vertex count V
(so E = V + g - 1) and holds one canonical representative per nonzero
isomorphism class of connected multigraphs with all degrees >= 3 and no
self-edges.  The "full" variant takes all such graphs, the triconnected
variant only the simple 3-connected ones.  The differential contracts
edges and lowers V by one.

Slices are enumerated bottom-up in V: every admissible graph that has
at least one non-parallel edge arises by splitting a vertex of an
admissible graph with one vertex fewer, and the remaining graphs (all
edges parallel) are enumerated directly from their simple supports.
This is isomorphism-free up to a final canonical dedup and never touches
the astronomically larger labeled search space.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, cached_property

from gchom.graphs import (
    CanonicalResult,
    Multigraph,
    Parity,
    canonical_data,
    canonicalize,
    is_connected,
    is_triconnected,
    perm_sign,
)
from gchom.sparse import IntSparseMatrix


class Variant(Enum):
    FULL = "full"
    TRICONNECTED = "tri"

    @classmethod
    def from_name(cls, name: str) -> "Variant":
        try:
            return {"full": cls.FULL, "tri": cls.TRICONNECTED}[name.lower()]
        except KeyError:
            raise ValueError(f"unknown variant {name!r}; expected 'full' or 'tri'")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ComplexSpec:
    parity: Parity
    variant: Variant
    loops: int

    def __post_init__(self):
        if self.loops < 2:
            raise ValueError("loop order must be >= 2")

    def degree_of(self, num_vertices: int) -> int:
        """Cohomological degree of the slice with the given vertex count."""
        if self.parity is Parity.EVEN:
            return num_vertices - self.loops - 1
        return num_vertices - 2 * self.loops - 1


def vertex_count(parity: Parity, loops: int, degree: int) -> int | None:
    """Vertex count of the slice in the given degree, or None if empty.

    Inverts the degree formula; the structural range is 2 <= V <= 2(g-1),
    the upper bound being the trivalent case (2E >= 3V with E = V+g-1).
    """
    if loops < 2:
        raise ValueError("loop order must be >= 2")
    if parity is Parity.EVEN:
        v = degree + loops + 1
    else:
        v = degree + 2 * loops + 1
    if 2 <= v <= 2 * (loops - 1):
        return v
    return None


@dataclass(frozen=True)
class BasisSlice:
    spec: ComplexSpec
    num_vertices: int
    generators: tuple[Multigraph, ...]

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def degree(self) -> int:
        return self.spec.degree_of(self.num_vertices)

    @cached_property
    def index(self) -> dict[Multigraph, int]:
        return {g: i for i, g in enumerate(self.generators)}


# ---------------------------------------------------------------------------
# Enumeration.
# ---------------------------------------------------------------------------


def graphs_by_edge_addition(num_vertices: int, num_edges: int, *,
                            max_multiplicity: int | None = None,
                            min_degree: int = 0,
                            max_degree: int | None = None,
                            connected: bool = True) -> list[Multigraph]:
    """All isomorphism classes with the given counts, by levelwise growth.

    Adds one edge at a time, collapsing each level to canonical forms.
    Intended for small instances (test oracles, parallel-class supports);
    the production slice enumeration goes through vertex splitting.
    """
    if num_vertices < 1 or num_edges < 0:
        raise ValueError("bad vertex or edge count")
    pairs = list(itertools.combinations(range(num_vertices), 2))
    level = {Multigraph(num_vertices, ())}
    for done in range(num_edges):
        remaining = num_edges - done - 1
        nxt: set[Multigraph] = set()
        for g in level:
            deg = list(g.degrees())
            mult = Counter(g.edges)
            for u, v in pairs:
                if max_multiplicity is not None and mult[(u, v)] >= max_multiplicity:
                    continue
                if max_degree is not None and (deg[u] >= max_degree or deg[v] >= max_degree):
                    continue
                deficit = 0
                if min_degree:
                    for w, d in enumerate(deg):
                        need = min_degree - d
                        if w == u or w == v:
                            need -= 1
                        if need > 0:
                            deficit += need
                    if deficit > 2 * remaining:
                        continue
                child = Multigraph(num_vertices, tuple(sorted(g.edges + ((u, v),))))
                nxt.add(canonical_data(child)[0])
        level = nxt
    out = [
        g for g in level
        if g.min_degree() >= min_degree and (not connected or is_connected(g))
    ]
    return sorted(out, key=lambda m: m.edges)


def _all_parallel_graphs(num_vertices: int, num_edges: int) -> list[Multigraph]:
    """Connected loopless multigraphs, degrees >= 3, every edge parallel.

    These are the graphs with no contractible edge; they only exist when
    a connected simple support with at most E/2 edges fits, i.e. for
    V <= g + 1.  Enumerated as support graphs plus multiplicities >= 2.
    """
    out: set[Multigraph] = set()
    if num_vertices == 1 or 2 * (num_vertices - 1) > num_edges:
        return []
    for s in range(num_vertices - 1, num_edges // 2 + 1):
        extra = num_edges - 2 * s
        for support in graphs_by_edge_addition(num_vertices, s,
                                               max_multiplicity=1,
                                               min_degree=1, connected=True):
            sup_edges = support.edges
            for comp in _compositions(extra, s):
                mults = [2 + c for c in comp]
                deg = [0] * num_vertices
                for (u, v), m in zip(sup_edges, mults):
                    deg[u] += m
                    deg[v] += m
                if min(deg) < 3:
                    continue
                edges = []
                for (u, v), m in zip(sup_edges, mults):
                    edges.extend([(u, v)] * m)
                g = Multigraph(num_vertices, tuple(sorted(edges)))
                out.add(canonical_data(g)[0])
    return sorted(out, key=lambda m: m.edges)


def _compositions(total: int, parts: int):
    """All ways to write total as an ordered sum of `parts` nonnegative ints."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def vertex_splits(graph: Multigraph) -> list[Multigraph]:
    """All one-vertex splits keeping minimum degree 3.

    Splitting vertex v distributes its half-edges over two vertices
    joined by a fresh edge; both sides must keep at least two old
    half-edges.  Only vertices of degree >= 4 split.  The new vertex
    gets the highest label; results are not canonicalized.
    """
    out = []
    n = graph.num_vertices
    degrees = graph.degrees()
    incident: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v in set(graph.edges):
        m = graph.multiplicity(u, v)
        incident[u].append((v, m))
        incident[v].append((u, m))
    base_edges = list(graph.edges)
    for v in range(n):
        d = degrees[v]
        if d < 4:
            continue
        nbrs = sorted(incident[v])
        others = [e for e in base_edges if v not in e]
        counts = [m for _, m in nbrs]
        for take in itertools.product(*(range(m + 1) for m in counts)):
            size = sum(take)
            if not (2 <= size <= d - 2):
                continue
            comp = tuple(m - k for m, k in zip(counts, take))
            if take > comp:  # unordered pair of sides, keep one representative
                continue
            edges = list(others)
            for (x, _), k, c in zip(nbrs, take, comp):
                edges.extend([(n, x)] * k)
                edges.extend([(v, x)] * c)
            edges.append((v, n))
            out.append(Multigraph.from_edges(n + 1, edges))
    return out


@lru_cache(maxsize=None)
def raw_slice(loops: int, num_vertices: int) -> tuple[Multigraph, ...]:
    """Canonical forms of every admissible graph class in the slice.

    Admissible: connected, loopless, min degree >= 3, E = V + g - 1.
    Parity and variant filtering happen in enumerate_basis; keeping the
    raw classes lets all four (parity, variant) combinations share one
    enumeration.
    """
    g, v = loops, num_vertices
    if g < 2:
        raise ValueError("loop order must be >= 2")
    num_edges = v + g - 1
    if v < 2 or v > 2 * (g - 1):
        return ()
    found: set[Multigraph] = set()
    if v > 2:
        for parent in raw_slice(g, v - 1):
            for child in vertex_splits(parent):
                found.add(canonical_data(child)[0])
    found.update(_all_parallel_graphs(v, num_edges))
    return tuple(sorted(found, key=lambda m: m.edges))


def enumerate_basis(spec: ComplexSpec, num_vertices: int) -> BasisSlice:
    """All generators of the slice: admissible, variant-filtered, nonzero."""
    if num_vertices < 1:
        raise ValueError("vertex count must be positive")
    gens = []
    for m in raw_slice(spec.loops, num_vertices):
        if spec.variant is Variant.TRICONNECTED and not is_triconnected(m):
            continue
        if canonicalize(m, spec.parity).is_zero:
            continue
        gens.append(m)
    return BasisSlice(spec, num_vertices, tuple(gens))


# ---------------------------------------------------------------------------
# Differential.
# ---------------------------------------------------------------------------


def contract_edge(graph: Multigraph, edge_index: int, parity: Parity) -> CanonicalResult:
    """Contract one edge and canonicalize, with the orientation sign.

    Contracting an edge with a parallel partner would create tadpoles,
    so it gives zero.  Even parity: move the edge to the front of the
    edge order (sign (-1)^index), drop it, then account for re-sorting
    the surviving edges.  Odd parity: with the edge directed low-to-high,
    cycle its head to the last vertex position, merge, and pick up -1
    for every surviving edge whose direction flips.
    """
    edges = graph.edges
    if not 0 <= edge_index < len(edges):
        raise IndexError(f"edge index {edge_index} out of range")
    u, v = edges[edge_index]
    if graph.multiplicity(u, v) >= 2:
        return CanonicalResult.zero()
    n = graph.num_vertices

    def shift(x: int) -> int:
        if x == v:
            return u
        return x - 1 if x > v else x

    if parity is Parity.EVEN:
        sign = -1 if edge_index % 2 else 1
        mapped = []
        for i, (a, b) in enumerate(edges):
            if i == edge_index:
                continue
            a2, b2 = shift(a), shift(b)
            mapped.append((a2, b2) if a2 < b2 else (b2, a2))
        order = sorted(range(len(mapped)), key=mapped.__getitem__)
        sign *= perm_sign(order)
        result = Multigraph(n - 1, tuple(sorted(mapped)))
    else:
        sign = -1 if (n - 1 - v) % 2 else 1
        mapped = []
        for i, (a, b) in enumerate(edges):
            if i == edge_index:
                continue
            a2, b2 = shift(a), shift(b)
            if a2 > b2:
                sign = -sign
                a2, b2 = b2, a2
            mapped.append((a2, b2))
        result = Multigraph(n - 1, tuple(sorted(mapped)))

    res = canonicalize(result, parity)
    if res.is_zero:
        return res
    return CanonicalResult(res.canonical, sign * res.sign)


def differential_matrix(src: BasisSlice, dst: BasisSlice,
                        parity: Parity | None = None) -> IntSparseMatrix:
    """Matrix of the contraction differential from src into dst coordinates.

    Column j expands the contractions of src generator j in dst's basis.
    In the triconnected variant, image classes outside the basis are the
    quotient's zero and are dropped; in the full variant every nonzero
    image must be a dst generator.
    """
    if parity is None:
        parity = src.spec.parity
    if src.spec != dst.spec or parity is not src.spec.parity:
        raise ValueError("slice mismatch: src and dst must share one spec")
    if dst.num_vertices != src.num_vertices - 1:
        raise ValueError("dst must have one vertex fewer than src")
    tri = src.spec.variant is Variant.TRICONNECTED
    acc: dict[tuple[int, int], int] = {}
    lookup = dst.index
    for j, gen in enumerate(src.generators):
        for e in range(gen.num_edges):
            res = contract_edge(gen, e, parity)
            if res.is_zero:
                continue
            i = lookup.get(res.canonical)
            if i is None:
                if tri:
                    continue
                raise RuntimeError(
                    f"contraction image missing from target slice: {res.canonical}"
                )
            key = (i, j)
            acc[key] = acc.get(key, 0) + res.sign
    return IntSparseMatrix(len(dst), len(src),
                           {k: val for k, val in acc.items() if val})


# ---------------------------------------------------------------------------
# Basis slice files (.gls).
# ---------------------------------------------------------------------------


def dump_basis(slice_: BasisSlice) -> str:
    spec = slice_.spec
    head = (
        f"#gls parity={spec.parity} variant={spec.variant} "
        f"loops={spec.loops} vertices={slice_.num_vertices} count={len(slice_)}"
    )
    lines = [head]
    lines.extend(g.to_line() for g in slice_.generators)
    return "\n".join(lines) + "\n"


def load_basis(text: str) -> BasisSlice:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#gls"):
        raise ValueError("missing #gls header")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    spec = ComplexSpec(
        Parity.from_name(fields["parity"]),
        Variant.from_name(fields["variant"]),
        int(fields["loops"]),
    )
    count = int(fields["count"])
    gens = tuple(Multigraph.from_line(ln) for ln in lines[1:])
    if len(gens) != count:
        raise ValueError(f"header count {count} != {len(gens)} graphs")
    return BasisSlice(spec, int(fields["vertices"]), gens)
