"""Exact maximum clique tilings and factor decisions.

A K_r-tiling is a family of pairwise-disjoint r-cliques; its deficiency is
the number of vertices left uncovered; a factor is a tiling of deficiency
zero.  The solver branches on the lowest-indexed uncovered vertex: cover it
with one of its r-cliques (enumerated lazily, lexicographically) or declare
it uncovered.  Factor queries prune the moment a vertex is stranded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .graphs import Graph, VertexSet, iter_bits, iter_clique_masks
from .rng import SplitMix64


@dataclass
class CliqueTiling:
    """Pairwise-disjoint vertex sets, each inducing a complete graph of
    order r.  ``covered`` is the cached union."""
    r: int
    members: List[VertexSet]

    @property
    def covered_mask(self) -> int:
        m = 0
        for s in self.members:
            m |= s.mask
        return m

    def covered(self, g: Graph) -> VertexSet:
        return VertexSet(g, self.covered_mask)

    def __len__(self) -> int:
        return len(self.members)

    def canonical(self) -> "CliqueTiling":
        return CliqueTiling(self.r, sorted(self.members, key=lambda s: s.vertices()))


@dataclass
class TilingResult:
    best: CliqueTiling
    optimal: bool
    deficiency: int
    nodes_explored: int


@dataclass
class FactorResult:
    """``tiling`` is None unless a perfect tiling was found; ``status`` is
    one of found / none / divisibility / cap (cap = search truncated,
    existence undecided)."""
    tiling: Optional[CliqueTiling]
    status: str

    @property
    def found(self) -> bool:
        return self.tiling is not None


def verify_tiling(g: Graph, t: CliqueTiling, within: Optional[VertexSet] = None) -> bool:
    """Independent validity check: disjointness and clique-ness by direct
    pairwise adjacency lookups (no shared code with the solver)."""
    seen: set = set()
    allowed = within.vertices() if within is not None else None
    for s in t.members:
        vs = s.vertices()
        if len(vs) != t.r:
            return False
        for v in vs:
            if v in seen:
                return False
            if allowed is not None and v not in allowed:
                return False
            seen.add(v)
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                if not g.has_edge(vs[i], vs[j]):
                    return False
    return True


def _coverable_bound(adj, active: int, r: int) -> int:
    """Vertices with fewer than r-1 active neighbors can never be covered."""
    count = 0
    for v in iter_bits(active):
        if (adj[v] & active).bit_count() >= r - 1:
            count += 1
    return count // r


def _lex_greedy_masks(g: Graph, r: int, active: int) -> List[int]:
    """Deterministic first-fit tiling used as the branch-and-bound incumbent."""
    adj = g.adj
    out = []
    rest = active
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        placed = False
        for cm in iter_clique_masks(g, r - 1, rest & adj[v]):
            out.append(cm | low)
            rest &= ~(cm | low)
            placed = True
            break
        if not placed:
            rest ^= low
    return out


def max_tiling(g: Graph, r: int, within: Optional[VertexSet] = None,
               node_cap: Optional[int] = None) -> TilingResult:
    """Maximum K_r-tiling by branch and bound; certificate canonicalized."""
    if r < 2:
        raise ValueError("r must be >= 2")
    universe = g.full_mask() if within is None else within.mask
    adj = g.adj
    n_active = universe.bit_count()
    ceiling = n_active // r

    best: List[int] = _lex_greedy_masks(g, r, universe)
    nodes = 0
    budget = node_cap
    complete = True

    def search(active: int, tiles: List[int]) -> bool:
        nonlocal best, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            return False
        if len(tiles) > len(best):
            best = tiles.copy()
        if len(best) == ceiling:
            return True
        if not active:
            return True
        if len(tiles) + _coverable_bound(adj, active, r) <= len(best):
            return True
        low = active & -active
        v = low.bit_length() - 1
        for cm in iter_clique_masks(g, r - 1, active & adj[v]):
            clique = cm | low
            tiles.append(clique)
            ok = search(active & ~clique, tiles)
            tiles.pop()
            if not ok:
                return False
            if len(best) == ceiling:
                return True
        return search(active ^ low, tiles)

    complete = search(universe, [])
    members = [VertexSet(g, m) for m in best]
    til = CliqueTiling(r, members).canonical()
    deficiency = n_active - r * len(members)
    # first incumbent of optimal size may have been found mid-branch; the
    # optimum value is exact whenever the search ran to completion or hit
    # the ceiling
    optimal = complete or len(members) == ceiling
    return TilingResult(best=til, optimal=optimal, deficiency=deficiency,
                        nodes_explored=nodes)


def has_factor(g: Graph, r: int, within: Optional[VertexSet] = None,
               node_cap: Optional[int] = None) -> FactorResult:
    """Perfect K_r-tiling decision; branches that strand a vertex are cut."""
    if r < 2:
        raise ValueError("r must be >= 2")
    universe = g.full_mask() if within is None else within.mask
    n_active = universe.bit_count()
    if n_active % r != 0:
        return FactorResult(None, "divisibility")
    adj = g.adj
    nodes = 0
    budget = node_cap
    found: Optional[List[int]] = None

    def search(active: int, tiles: List[int]) -> bool:
        nonlocal found, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            return False
        if not active:
            found = tiles.copy()
            return True
        low = active & -active
        v = low.bit_length() - 1
        # every remaining vertex must keep r-1 active neighbors
        if (adj[v] & active).bit_count() < r - 1:
            return True
        for cm in iter_clique_masks(g, r - 1, active & adj[v]):
            clique = cm | low
            tiles.append(clique)
            ok = search(active & ~clique, tiles)
            tiles.pop()
            if not ok or found is not None:
                return ok
        return True

    complete = search(universe, [])
    if found is not None:
        til = CliqueTiling(r, [VertexSet(g, m) for m in found]).canonical()
        return FactorResult(til, "found")
    return FactorResult(None, "none" if complete else "cap")


def greedy_tiling(g: Graph, r: int, seed: int,
                  within: Optional[VertexSet] = None) -> CliqueTiling:
    """Seeded greedy tiling: shuffled vertex order, greedy clique extension
    in that order.  Size never exceeds the optimum."""
    if r < 2:
        raise ValueError("r must be >= 2")
    universe = g.full_mask() if within is None else within.mask
    adj = g.adj
    order = list(iter_bits(universe))
    rng = SplitMix64(seed)
    rng.shuffle(order)
    rank = {v: i for i, v in enumerate(order)}
    rest = universe
    members = []
    for v in order:
        if not rest >> v & 1:
            continue
        clique = 1 << v
        avail = rest & adj[v]
        size = 1
        while size < r and avail:
            u = min(iter_bits(avail), key=rank.__getitem__)
            clique |= 1 << u
            size += 1
            avail &= adj[u] & ~clique
        if size == r:
            members.append(VertexSet(g, clique))
            rest &= ~clique
    return CliqueTiling(r, members).canonical()
