"""Top-degree upper bounds from barrel graphs.

The top cohomology of the g-loop complex is spanned by barrel graphs:
two rims of g-1 vertices joined by a permutation of vertical edges.
Relations come from the graphs one degree below with a single 4-valent
vertex (the X and Y families over S_{g-2}); their coboundaries land in
the barrel span plus an explicit complement (the A and A' families, with
accidental barrels excluded).  The upper bound is then

    dim B  -  rank(d restricted to span(X, Y))  +  dim B-complement,

with the rank taken over a prime field, which can only lower it.  The
restricted differential is assembled by contracting the trivalent
generators and reading coefficients in the X/Y basis; that matrix is
the transpose of the coboundary in dual bases, so all ranks agree.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from gchom.complexes import contract_edge, vertex_splits
from gchom.graphs import Multigraph, Parity, canonical_data, canonicalize
from gchom.linalg import (
    PrimeField,
    TwoPhase,
    gauss_rank,
    reduce_mod_p,
    wiedemann_rank,
)
from gchom.sparse import IntSparseMatrix

FAMILY_KINDS = ("B", "X", "Y", "A", "Aprime")


class ImageOutsideSpanError(RuntimeError):
    """A coboundary image fell outside the barrel span and its complement."""


def _check_perm(perm) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"not a permutation of 0..{len(perm) - 1}: {perm}")
    return perm


def barrel(perm) -> Multigraph:
    """Barrel graph: two N-cycles joined by verticals i -> perm[i].

    2N vertices, 3N edges, loop order N+1, every vertex trivalent.  For
    N=2 each rim degenerates to a parallel pair.
    """
    perm = _check_perm(perm)
    n = len(perm)
    if n < 2:
        raise ValueError("barrel needs rims of at least 2 vertices")
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((n + i, n + (i + 1) % n))
        edges.append((i, n + perm[i]))
    return Multigraph.from_edges(2 * n, edges)


def x_graph(perm) -> Multigraph:
    """Near-barrel with one 4-valent vertex: rim sizes m and m+1.

    Vertex 0 sits on the short rim and takes two verticals; the lower
    rim vertex m is its fixed partner, and perm routes the remaining
    m strands to the upper slots (0's second slot first, then 1..m-1).
    """
    perm = _check_perm(perm)
    m = len(perm)
    if m < 2:
        raise ValueError("need at least 2 strands")
    edges = []
    for i in range(m):
        edges.append((i, (i + 1) % m))
    for j in range(m + 1):
        edges.append((m + j, m + (j + 1) % (m + 1)))
    edges.append((0, m))
    for i in range(m):
        edges.append((perm[i], m + 1 + i))
    return Multigraph.from_edges(2 * m + 1, edges)


def y_graph(perm) -> Multigraph:
    """Near-barrel with a hub: rims of size m plus one extra vertex.

    The hub l = 2m is tied to upper vertex 0 and lower vertex m; the m
    strands from [l, w_1, ..., w_{m-1}] land on the upper slots
    [u_0, ..., u_{m-1}] through perm, so u_0 is the 4-valent vertex.
    Routing l's strand back to u_0 doubles the l edge.
    """
    perm = _check_perm(perm)
    m = len(perm)
    if m < 2:
        raise ValueError("need at least 2 strands")
    hub = 2 * m
    edges = [(0, hub), (m, hub)]
    for i in range(m):
        edges.append((i, (i + 1) % m))
        edges.append((m + i, m + (i + 1) % m))
    sources = [hub] + [m + i for i in range(1, m)]
    for i in range(m):
        edges.append((perm[i], sources[i]))
    return Multigraph.from_edges(2 * m + 1, edges)


def a_graph(perm) -> Multigraph:
    """Trivalent coboundary partner of x_graph: its vertical-pair split.

    The 4-valent vertex of X splits so the new vertex q keeps both
    verticals; q hangs off the short rim and reaches two lower-rim
    vertices (adjacent ones only for special perms).
    """
    perm = _check_perm(perm)
    m = len(perm)
    q = 2 * m + 1
    edges = []
    for i in range(m):
        edges.append((i, (i + 1) % m))
    for j in range(m + 1):
        edges.append((m + j, m + (j + 1) % (m + 1)))
    edges.append((q, m))
    edges.append((0, q))
    for i in range(m):
        target = perm[i] if perm[i] != 0 else q
        edges.append((target, m + 1 + i))
    return Multigraph.from_edges(2 * m + 2, edges)


def a_prime_graph(perm) -> Multigraph:
    """Trivalent coboundary partner of y_graph: its hub-pair split.

    The 4-valent vertex of Y splits so the new vertex q keeps the hub
    edge and the strand landing there; q's edges double up exactly when
    the strand comes from the hub.
    """
    perm = _check_perm(perm)
    m = len(perm)
    hub = 2 * m
    q = 2 * m + 1
    edges = [(m, hub), (q, hub), (0, q)]
    for i in range(m):
        edges.append((i, (i + 1) % m))
        edges.append((m + i, m + (i + 1) % m))
    sources = [hub] + [m + i for i in range(1, m)]
    for i in range(m):
        target = perm[i] if perm[i] != 0 else q
        edges.append((target, sources[i]))
    return Multigraph.from_edges(2 * m + 2, edges)


_BUILDERS = {
    "B": barrel,
    "X": x_graph,
    "Y": y_graph,
    "A": a_graph,
    "Aprime": a_prime_graph,
}


@dataclass(frozen=True)
class BarrelFamily:
    kind: str
    loops: int
    parity: Parity
    representatives: dict[Multigraph, tuple[tuple[int, ...], ...]]

    @property
    def members(self) -> tuple[Multigraph, ...]:
        return tuple(sorted(self.representatives, key=lambda m: m.edges))

    def __len__(self) -> int:
        return len(self.representatives)


def _supported(loops: int, parity: Parity) -> None:
    minimum = 5 if parity is Parity.EVEN else 4
    if loops < minimum:
        raise ValueError(
            f"top-degree reduction needs loop order >= {minimum} for {parity}"
        )


@lru_cache(maxsize=None)
def _barrel_forms(loops: int) -> frozenset[Multigraph]:
    """Canonical forms of every barrel, zero or not (isomorphism only)."""
    return frozenset(
        canonical_data(barrel(perm))[0]
        for perm in itertools.permutations(range(loops - 1))
    )


def build_family(kind: str, loops: int, parity: Parity) -> BarrelFamily:
    """Nonzero isomorphism classes of one graph family.

    Enumerates the defining permutations (S_{g-1} for barrels, S_{g-2}
    otherwise), drops classes that vanish under the parity, and for the
    complement kinds A and A' also drops graphs isomorphic to a barrel.
    """
    if kind not in _BUILDERS:
        raise ValueError(f"unknown family kind {kind!r}")
    _supported(loops, parity)
    degree = loops - 1 if kind == "B" else loops - 2
    build = _BUILDERS[kind]
    excluded = _barrel_forms(loops) if kind in ("A", "Aprime") else frozenset()
    # hub families keep only their simple members: the permutation cell
    # that routes the hub strand back onto its own anchor doubles an edge,
    # and those degenerate graphs are not part of the relation span
    simple_only = kind in ("Y", "Aprime")
    reps: dict[Multigraph, list[tuple[int, ...]]] = {}
    for perm in itertools.permutations(range(degree)):
        g = build(perm)
        if simple_only and not g.is_simple():
            continue
        form = canonical_data(g)[0]
        if form in excluded:
            continue
        if canonicalize(g, parity).is_zero:
            continue
        reps.setdefault(form, []).append(perm)
    return BarrelFamily(kind, loops, parity,
                        {k: tuple(v) for k, v in reps.items()})


@dataclass(frozen=True)
class KneisslerFamilies:
    """All five families for one (loops, parity), with fixed orderings."""

    loops: int
    parity: Parity
    barrels: BarrelFamily
    x: BarrelFamily
    y: BarrelFamily
    a: BarrelFamily
    aprime: BarrelFamily

    @property
    def b_members(self) -> tuple[Multigraph, ...]:
        return self.barrels.members

    @property
    def bperp_members(self) -> tuple[Multigraph, ...]:
        merged = set(self.a.representatives) | set(self.aprime.representatives)
        return tuple(sorted(merged, key=lambda m: m.edges))

    @property
    def v_members(self) -> tuple[Multigraph, ...]:
        merged = set(self.x.representatives) | set(self.y.representatives)
        return tuple(sorted(merged, key=lambda m: m.edges))

    @property
    def dim_b(self) -> int:
        return len(self.b_members)

    @property
    def dim_bperp(self) -> int:
        return len(self.bperp_members)

    @property
    def dim_v(self) -> int:
        return len(self.v_members)


@lru_cache(maxsize=8)
def build_families(loops: int, parity: Parity) -> KneisslerFamilies:
    _supported(loops, parity)
    return KneisslerFamilies(
        loops,
        parity,
        build_family("B", loops, parity),
        build_family("X", loops, parity),
        build_family("Y", loops, parity),
        build_family("A", loops, parity),
        build_family("Aprime", loops, parity),
    )


def _verify_images_in_span(fam: KneisslerFamilies) -> None:
    """Every coboundary image of a V generator must hit the B or B' span.

    The images are the one-vertex splits of the unique 4-valent vertex;
    a nonzero image class outside both families signals a mis-built
    complement.
    """
    allowed = set(fam.b_members) | set(fam.bperp_members)
    for x in fam.v_members:
        for image in vertex_splits(x):
            if canonicalize(image, fam.parity).is_zero:
                continue
            if canonical_data(image)[0] not in allowed:
                raise ImageOutsideSpanError(
                    f"split of {x} produced {canonical_data(image)[0]}"
                )


def restricted_differential(loops: int, parity: Parity) -> IntSparseMatrix:
    """Coboundary matrix from the X/Y span into barrels plus complement.

    Rows are the barrel members followed by the complement members (each
    in canonical order), columns the X/Y classes.  Entry (i, j) is the
    coefficient of column graph j in the contraction differential of row
    graph i; by duality of contraction and vertex splitting this is the
    matrix of the coboundary in the dual bases.  Raises
    ImageOutsideSpanError if a coboundary image escapes the row span.
    """
    fam = build_families(loops, parity)
    _verify_images_in_span(fam)
    rows = list(fam.b_members) + list(fam.bperp_members)
    col_index = {g: j for j, g in enumerate(fam.v_members)}
    acc: dict[tuple[int, int], int] = {}
    for i, gamma in enumerate(rows):
        for e in range(gamma.num_edges):
            res = contract_edge(gamma, e, parity)
            if res.is_zero:
                continue
            j = col_index.get(res.canonical)
            if j is None:
                continue  # restriction: image class outside the X/Y span
            key = (i, j)
            acc[key] = acc.get(key, 0) + res.sign
    return IntSparseMatrix(len(rows), len(col_index),
                           {k: v for k, v in acc.items() if v})


def dperp_rank(loops: int, parity: Parity, prime: int = 3323) -> tuple[int, int]:
    """(rank of the complement block, dim of the complement).

    Equality is the surjectivity of the coboundary onto the complement.
    """
    fam = build_families(loops, parity)
    matrix = restricted_differential(loops, parity)
    nb = fam.dim_b
    block = {
        (i - nb, j): v for (i, j), v in matrix.entries.items() if i >= nb
    }
    sub = IntSparseMatrix(fam.dim_bperp, matrix.ncols, block)
    rank = gauss_rank(reduce_mod_p(sub, PrimeField(prime))).rank
    return rank, fam.dim_bperp


@dataclass(frozen=True)
class KneisslerReport:
    g: int
    parity: Parity
    dim_B: int
    dim_Bperp: int
    dim_V: int
    rank_d: int
    upper_bound: int
    prime: int
    method: str
    seed: int

    def to_json(self) -> str:
        return json.dumps({
            "g": self.g,
            "parity": str(self.parity),
            "dim_B": self.dim_B,
            "dim_Bperp": self.dim_Bperp,
            "dim_V": self.dim_V,
            "rank_d": self.rank_d,
            "upper_bound": self.upper_bound,
            "prime": self.prime,
            "method": self.method,
            "seed": self.seed,
        }, indent=2)

    def columns(self) -> tuple[int, int, int, int, int]:
        return (self.dim_B, self.dim_Bperp, self.dim_V, self.rank_d,
                self.upper_bound)


def upper_bound(loops: int, parity: Parity, prime: int = 3323,
                method: str = "gauss", seed: int = 0) -> KneisslerReport:
    """Top-degree upper bound dim B - rank(d) + dim B-complement.

    The Gauss rank uses the two-phase pivoting: eliminate the complement
    rows first, then the X-derived columns.
    """
    fam = build_families(loops, parity)
    matrix = restricted_differential(loops, parity)
    fp = PrimeField(prime)
    mp = reduce_mod_p(matrix, fp)
    if method == "gauss":
        nb = fam.dim_b
        pref_rows = frozenset(range(nb, nb + fam.dim_bperp))
        x_forms = set(fam.x.representatives)
        pref_cols = frozenset(
            j for j, g in enumerate(fam.v_members) if g in x_forms
        )
        rank = gauss_rank(mp, TwoPhase(pref_rows, pref_cols), seed=seed).rank
    elif method == "wiedemann":
        rank = wiedemann_rank(mp, 1, seed=seed).rank
    else:
        raise ValueError(f"unknown method {method!r}")
    bound = fam.dim_b - rank + fam.dim_bperp
    if bound < 0 or rank > fam.dim_v:
        raise RuntimeError("inconsistent rank in upper bound computation")
    return KneisslerReport(loops, parity, fam.dim_b, fam.dim_bperp, fam.dim_v,
                           rank, bound, prime, method, seed)
