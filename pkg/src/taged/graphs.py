"""Directed graphs, counting of full walks, and brute-force Hamiltonian checks.

A *full walk* is an edge-consistent vertex sequence with exactly ``|V|``
entries (so ``|V| - 1`` edges); vertices may repeat.  A Hamiltonian path is a
full walk whose entries are pairwise distinct.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable

from .errors import PreconditionError, ResourceLimitError

DEFAULT_MAX_VERTICES = 10
DEFAULT_MAX_WALK_CANDIDATES = 10_000_000


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __init__(self, vertices: Iterable, edges: Iterable = ()):
        vs = tuple(sorted({str(v) for v in vertices}))
        es = frozenset((str(u), str(v)) for u, v in edges)
        bad = {x for e in es for x in e} - set(vs)
        if bad:
            raise ValueError(f"edges mention unknown vertices {sorted(bad)}")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)

    def __len__(self):
        return len(self.vertices)

    def successors(self, u: str) -> list[str]:
        return sorted(v for a, v in self.edges if a == u)

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(self.edges)


def _require_vertices(G: Digraph):
    if not G.vertices:
        raise PreconditionError("the graph has no vertices")


def walk_count_table(G: Digraph) -> dict[tuple[int, str, str], int]:
    """``table[k, u, v]`` = number of walks with ``k`` vertices from ``u`` to ``v``.

    Rows ``k = 1 .. |V|``: ``[u == v]`` for ``k = 1``, then each row sums the
    previous one over the out-edges of ``u``.
    """
    _require_vertices(G)
    V = G.vertices
    succ = {u: G.successors(u) for u in V}
    table = {(1, u, v): int(u == v) for u in V for v in V}
    for k in range(1, len(V)):
        for u in V:
            for v in V:
                table[k + 1, u, v] = sum(table[k, w, v] for w in succ[u])
    return table


def count_full_walks(G: Digraph) -> int:
    """Number of walks visiting exactly ``|V|`` vertices, in polynomial time."""
    table = walk_count_table(G)
    n = len(G.vertices)
    return sum(table[n, u, v] for u in G.vertices for v in G.vertices)


def _check_enumeration_cap(G: Digraph, cap: int):
    n = len(G.vertices)
    if n ** n > cap:
        raise ResourceLimitError(
            f"{n}^{n} candidate sequences exceed the cap of {cap}",
            cap_name="max_walk_candidates", cap=cap, needed=n ** n,
        )


def enumerate_full_walks(G: Digraph, *, max_candidates: int = DEFAULT_MAX_WALK_CANDIDATES) -> list[tuple[str, ...]]:
    """All full walks, in lexicographic order."""
    _require_vertices(G)
    _check_enumeration_cap(G, max_candidates)
    n = len(G.vertices)
    walks = []

    def extend(walk):
        if len(walk) == n:
            walks.append(tuple(walk))
            return
        for v in G.successors(walk[-1]):
            walk.append(v)
            extend(walk)
            walk.pop()

    for u in G.vertices:
        extend([u])
    return walks


def _check_vertex_cap(G: Digraph, max_vertices: int):
    if len(G.vertices) > max_vertices:
        raise ResourceLimitError(
            f"graph has {len(G.vertices)} vertices, cap is {max_vertices}",
            cap_name="max_vertices", cap=max_vertices, needed=len(G.vertices),
        )


def _is_walk(G: Digraph, seq) -> bool:
    return all((a, b) in G.edges for a, b in zip(seq, seq[1:]))


def hamiltonian_paths(G: Digraph, *, max_vertices: int = DEFAULT_MAX_VERTICES) -> list[tuple[str, ...]]:
    _require_vertices(G)
    _check_vertex_cap(G, max_vertices)
    return [p for p in itertools.permutations(G.vertices) if _is_walk(G, p)]


def find_hamiltonian_path(G: Digraph, *, max_vertices: int = DEFAULT_MAX_VERTICES) -> tuple[str, ...] | None:
    _require_vertices(G)
    _check_vertex_cap(G, max_vertices)
    return next((p for p in itertools.permutations(G.vertices) if _is_walk(G, p)), None)


def has_hamiltonian_path(G: Digraph, *, max_vertices: int = DEFAULT_MAX_VERTICES) -> bool:
    return find_hamiltonian_path(G, max_vertices=max_vertices) is not None


def count_hamiltonian_paths(G: Digraph, *, max_vertices: int = DEFAULT_MAX_VERTICES) -> int:
    return len(hamiltonian_paths(G, max_vertices=max_vertices))


# -- instance families -------------------------------------------------------

def all_digraphs(n: int) -> list[Digraph]:
    """Every digraph on vertices ``1..n``, self-loops included (``2^(n*n)`` graphs)."""
    V = [str(i) for i in range(1, n + 1)]
    pairs = [(u, v) for u in V for v in V]
    return [
        Digraph(V, [p for p, bit in zip(pairs, bits) if bit])
        for bits in itertools.product((0, 1), repeat=len(pairs))
    ]


def random_digraph(n: int, rng: random.Random, p: float | None = None) -> Digraph:
    """Random digraph on ``1..n``; each ordered pair (self-loops too) is an edge with
    probability ``p``, itself drawn uniformly from [0.2, 0.8] when omitted."""
    if p is None:
        p = rng.uniform(0.2, 0.8)
    V = [str(i) for i in range(1, n + 1)]
    return Digraph(V, [(u, v) for u in V for v in V if rng.random() < p])


def random_population(count: int, sizes, seed: int) -> list[Digraph]:
    rng = random.Random(seed)
    return [random_digraph(rng.choice(list(sizes)), rng) for _ in range(count)]
