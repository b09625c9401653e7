"""Finite simple graphs: degree statistics, induced subgraphs, the recursive
regular decomposition, and brute-force automorphism enumeration.

Vertices are 0-based everywhere in data structures; printing layers add
1-based labels.  Graphs are immutable; every operation returns new values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import LoopRejected, OutOfRange, SizeMismatch, TooLarge

AUTOMORPHISM_BOUND = 9

Permutation = tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    edges is a sorted tuple of (u, v) pairs with u < v; use
    :meth:`from_edges` to build one from raw input.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 1:
            raise OutOfRange(f"vertex count must be >= 1, got {n}")
        normalized = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise LoopRejected(f"self-loop {{{u},{u}}} is not allowed in a simple graph")
            if not (0 <= u < n and 0 <= v < n):
                raise OutOfRange(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            normalized.add((min(u, v), max(u, v)))
        return cls(n, tuple(sorted(normalized)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, itertools.combinations(range(n), 2))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_edges(n, [])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=int)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        a.setflags(write=False)
        return a

    @cached_property
    def _edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def adjacent(self, x: int, y: int) -> bool:
        """Adjacency with the simple-graph convention x ~/~ x."""
        if x == y:
            return False
        return (min(x, y), max(x, y)) in self._edge_set

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(u for u in range(self.n) if self.adjacent(v, u))

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise OutOfRange(f"vertex {v} outside 0..{self.n - 1}")
        return int(self.adjacency_matrix[v].sum())

    def degrees(self) -> tuple[int, ...]:
        return tuple(int(d) for d in self.adjacency_matrix.sum(axis=1))

    @property
    def is_regular(self) -> bool:
        degs = self.degrees()
        return len(set(degs)) <= 1

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex v renamed to perm[v]."""
        p = validate_permutation(perm, self.n)
        return Graph.from_edges(self.n, [(p[u], p[v]) for u, v in self.edges])


@dataclass(frozen=True)
class DegreeClass:
    degree: int
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class DegreePartition:
    """Degree classes in strictly increasing degree order.

    Vertices inside a class keep their input order, so the partition is a
    deterministic function of the (ordered) vertex set.
    """

    classes: tuple[DegreeClass, ...]

    def vertex_order(self) -> tuple[int, ...]:
        return tuple(v for c in self.classes for v in c.vertices)

    def class_sizes(self) -> dict[int, int]:
        return {c.degree: len(c.vertices) for c in self.classes}


def degree_partition(g: Graph) -> DegreePartition:
    by_degree: dict[int, list[int]] = {}
    for v in range(g.n):
        by_degree.setdefault(g.degree(v), []).append(v)
    classes = tuple(
        DegreeClass(k, tuple(by_degree[k])) for k in sorted(by_degree)
    )
    return DegreePartition(classes)


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced by the given vertices, plus the old->new index map.

    The map sends vertices[i] -> i, preserving the order in which the subset
    was supplied.
    """
    subset = [int(v) for v in vertices]
    if not subset:
        raise OutOfRange("induced subgraph subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise OutOfRange("induced subgraph subset contains duplicates")
    for v in subset:
        if not 0 <= v < g.n:
            raise OutOfRange(f"vertex {v} outside 0..{g.n - 1}")
    index = {v: i for i, v in enumerate(subset)}
    edges = [
        (index[u], index[v])
        for u, v in g.edges
        if u in index and v in index
    ]
    return Graph.from_edges(len(subset), edges), index


@dataclass(frozen=True)
class DecompositionTree:
    """Node of the recursive degree refinement.

    vertices are in the labels of the *original* graph; subgraph is the
    induced subgraph on them; degree_in_parent is the degree (within the
    parent's induced subgraph) that carved this class out, None at the root.
    Leaves are exactly the nodes whose induced subgraph is regular.
    """

    vertices: tuple[int, ...]
    subgraph: Graph
    regular: bool
    degree_in_parent: int | None
    children: tuple["DecompositionTree", ...] = field(default_factory=tuple)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> list["DecompositionTree"]:
        if self.is_leaf:
            return [self]
        out: list[DecompositionTree] = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def leaf_subsets(self) -> list[tuple[int, ...]]:
        return [leaf.vertices for leaf in self.leaves()]


def regular_decomposition(g: Graph) -> DecompositionTree:
    """Recursively split vertex classes by degree until every part is regular.

    Children of a node partition its vertex set by degree within the node's
    induced subgraph; a node whose induced subgraph is regular is a leaf.
    """

    def build(vertices: tuple[int, ...], degree_in_parent: int | None) -> DecompositionTree:
        sub, _ = induced_subgraph(g, vertices)
        if sub.is_regular:
            return DecompositionTree(vertices, sub, True, degree_in_parent)
        children = []
        for cls in degree_partition(sub).classes:
            original = tuple(vertices[i] for i in cls.vertices)
            children.append(build(original, cls.degree))
        return DecompositionTree(vertices, sub, False, degree_in_parent, tuple(children))

    return build(tuple(range(g.n)), None)


def degree_compatibility(g1: Graph, g2: Graph) -> bool:
    """True iff the graphs have the same number of vertices of each degree.

    This is the necessary condition for any bi-unitary to satisfy the
    orthogonality relations of the pair: a mismatch forces a zero row or
    column of blocks, contradicting unitarity.
    """
    if g1.n != g2.n:
        raise SizeMismatch(f"vertex counts differ: {g1.n} vs {g2.n}")
    return degree_partition(g1).class_sizes() == degree_partition(g2).class_sizes()


def validate_permutation(perm: Sequence[int], n: int) -> Permutation:
    p = tuple(int(v) for v in perm)
    if len(p) != n or sorted(p) != list(range(n)):
        raise OutOfRange(f"not a permutation of 0..{n - 1}: {perm}")
    return p


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p after q): v -> p[q[v]]."""
    return tuple(p[q[v]] for v in range(len(q)))


def inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def is_automorphism(g: Graph, perm: Sequence[int]) -> bool:
    p = validate_permutation(perm, g.n)
    a = g.adjacency_matrix
    for x in range(g.n):
        for y in range(x + 1, g.n):
            if a[x, y] != a[p[x], p[y]]:
                return False
    return True


def automorphisms(g: Graph) -> list[Permutation]:
    """All adjacency-preserving permutations, by plain filtering (n <= 9)."""
    if g.n > AUTOMORPHISM_BOUND:
        raise TooLarge(f"brute-force automorphism search is limited to n <= {AUTOMORPHISM_BOUND}")
    a = g.adjacency_matrix
    found = []
    for perm in itertools.permutations(range(g.n)):
        ok = True
        for x in range(g.n):
            px = perm[x]
            for y in range(x + 1, g.n):
                if a[x, y] != a[px, perm[y]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(perm)
    return found
