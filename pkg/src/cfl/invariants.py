"""Clique-independence invariants and the tiny-n degree-threshold oracle.

The central quantity is the l-independence number: the maximum size of a
vertex subset inducing no K_l (l=2 recovers the ordinary independence
number).  The exact solver is a branch-and-bound over (chosen, candidate)
bitsets; the upper bound partitions the candidates into cliques greedily,
each clique contributing at most l-1 vertices to any K_l-free set.

Resource caps are node counts, not wall clock, so capped results are
machine-independent and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .graphs import Graph, VertexSet, iter_bits, iter_clique_masks
from .rng import SplitMix64
from . import tiling


@dataclass
class AlphaResult:
    """Outcome of an l-independence computation.

    ``exact`` is False when a node cap stopped the search; the witness is
    then the best K_l-free set found, a valid lower bound.
    """
    value: int
    witness: VertexSet
    exact: bool
    nodes_explored: int
    ell: int


class _NodeBudget:
    __slots__ = ("left", "used")

    def __init__(self, cap: Optional[int]):
        self.left = cap
        self.used = 0

    def tick(self) -> bool:
        self.used += 1
        if self.left is None:
            return True
        self.left -= 1
        return self.left >= 0


def _has_clique_within(adj, size: int, mask: int) -> bool:
    """Early-exit test for a clique of ``size`` inside ``mask``."""
    if size <= 0:
        return True
    if size == 1:
        return mask != 0
    rest = mask
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        rest ^= low
        if _has_clique_within(adj, size - 1, rest & adj[v]):
            return True
    return False


def is_klfree(g: Graph, ell: int, mask: Optional[int] = None) -> bool:
    """True iff the (sub)graph spans no K_ell."""
    m = g.full_mask() if mask is None else mask
    return not _has_clique_within(g.adj, ell, m)


def _clique_cover_bound(adj, mask: int, ell: int) -> int:
    """Greedy clique partition of ``mask``; each clique of size q caps the
    contribution of its vertices to a K_ell-free set at min(q, ell-1)."""
    bound = 0
    cap = ell - 1
    rest = mask
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        clique = low
        avail = rest & adj[v]
        size = 1
        while avail:
            ulow = avail & -avail
            u = ulow.bit_length() - 1
            clique |= ulow
            size += 1
            avail &= adj[u]
        rest &= ~clique
        bound += size if size < cap else cap
    return bound


def _feasible_candidates(adj, ell: int, chosen: int, cand: int, v: int) -> int:
    """Filter ``cand`` after v joins ``chosen``: drop any u whose addition
    would complete a K_ell (i.e. a K_{ell-2} sits in chosen & N(u) & N(v))."""
    out = cand
    for u in iter_bits(cand & adj[v]):
        if _has_clique_within(adj, ell - 2, chosen & adj[u] & adj[v]):
            out &= ~(1 << u)
    return out


def alpha_ell_exact(g: Graph, ell: int, node_cap: Optional[int] = None,
                    within: Optional[VertexSet] = None) -> AlphaResult:
    """Exact maximum K_ell-free subset, with witness.

    Branches on a maximum-degree candidate (degree inside the candidate
    set); include branch first.  A node cap turns the result into a flagged
    lower bound instead of raising.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    adj = g.adj
    universe = g.full_mask() if within is None else within.mask
    budget = _NodeBudget(node_cap)
    best_mask = 0
    best_size = 0

    def branch(chosen: int, size: int, cand: int) -> bool:
        nonlocal best_mask, best_size
        if not budget.tick():
            return False
        if size > best_size:
            best_size, best_mask = size, chosen
        if not cand:
            return True
        if size + _clique_cover_bound(adj, cand, ell) <= best_size:
            return True
        csize = cand.bit_count()
        if csize == 1:
            v = cand.bit_length() - 1
        else:
            v = max(iter_bits(cand), key=lambda u: ((adj[u] & cand).bit_count(), u))
        ok = branch(chosen | (1 << v), size + 1,
                    _feasible_candidates(adj, ell, chosen, cand & ~(1 << v), v))
        if not ok:
            return False
        return branch(chosen, size, cand & ~(1 << v))

    complete = branch(0, 0, universe)
    return AlphaResult(value=best_size, witness=VertexSet(g, best_mask),
                       exact=complete, nodes_explored=budget.used, ell=ell)


def alpha_ell_greedy(g: Graph, ell: int, seed: int,
                     within: Optional[VertexSet] = None) -> AlphaResult:
    """Randomized greedy K_ell-free set: one shuffled pass, keep a vertex
    whenever the set stays K_ell-free.  Always a valid lower bound."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    adj = g.adj
    universe = g.full_mask() if within is None else within.mask
    order = list(iter_bits(universe))
    SplitMix64(seed).shuffle(order)
    chosen = 0
    for v in order:
        if not _has_clique_within(adj, ell - 1, chosen & adj[v]):
            chosen |= 1 << v
    return AlphaResult(value=chosen.bit_count(), witness=VertexSet(g, chosen),
                       exact=False, nodes_explored=len(order), ell=ell)


def has_clique_cover(g: Graph, v: int, r: int,
                     forbidden: Optional[VertexSet] = None) -> Optional[VertexSet]:
    """First (lexicographic) K_r through v avoiding ``forbidden``, else None."""
    banned = forbidden.mask if forbidden is not None else 0
    if banned >> v & 1:
        raise ValueError("distinguished vertex may not be forbidden")
    if r < 1:
        raise ValueError("r must be >= 1")
    if r == 1:
        return VertexSet(g, 1 << v)
    pool = g.adj[v] & ~banned
    for m in iter_clique_masks(g, r - 1, pool):
        return VertexSet(g, m | (1 << v))
    return None


# -- the tiny-n oracle ----------------------------------------------------


@dataclass
class RttResult:
    """Largest minimum degree over n-vertex graphs that satisfy the
    clique-independence ceiling yet have no K_r-factor."""
    n: int
    r: int
    ell: int
    alpha_bound: int
    value: Optional[int]
    witness: Optional[Graph]
    exhaustive: bool
    degenerate: bool
    feasible: bool
    graphs_scanned: int


_EXHAUSTIVE_LIMIT = 7


def _pair_index_masks(n: int) -> List[int]:
    """For each vertex, the incidence mask over the C(n,2) pair slots."""
    masks = [0] * n
    k = 0
    for u in range(n):
        for v in range(u + 1, n):
            masks[u] |= 1 << k
            masks[v] |= 1 << k
            k += 1
    return masks


def _graph_from_pair_mask(n: int, mask: int) -> Graph:
    edges = []
    k = 0
    for u in range(n):
        for v in range(u + 1, n):
            if mask >> k & 1:
                edges.append((u, v))
            k += 1
    return Graph(n, edges)


def rtt_oracle(n: int, r: int, ell: int, alpha_bound: int, seed: int = 0,
               tries: int = 2000) -> RttResult:
    """Maximize min degree subject to "clique-independence <= alpha_bound"
    and "no K_r-factor".

    n <= 7: exhaustive over all 2^C(n,2) labeled graphs, scanned in
    decreasing-min-degree order (degree pruning only; isomorph rejection is
    unnecessary for exhaustiveness).  Larger n: seeded randomized search,
    flagged non-exhaustive.  r not dividing n is accepted but flagged
    degenerate (no graph has a factor, so the factor constraint is vacuous).
    """
    if n < 1 or r < 2 or ell < 2:
        raise ValueError("need n >= 1, r >= 2, ell >= 2")
    degenerate = n % r != 0
    if n <= _EXHAUSTIVE_LIMIT:
        return _rtt_exhaustive(n, r, ell, alpha_bound, degenerate)
    return _rtt_search(n, r, ell, alpha_bound, degenerate, seed, tries)


def _rtt_exhaustive(n: int, r: int, ell: int, alpha_bound: int,
                    degenerate: bool) -> RttResult:
    npairs = n * (n - 1) // 2
    total = 1 << npairs
    pair_masks = _pair_index_masks(n)
    masks_arr = np.arange(total, dtype=np.uint32)
    mindeg = np.full(total, 255, dtype=np.uint8)
    for v in range(n):
        dv = np.bitwise_count(masks_arr & np.uint32(pair_masks[v])).astype(np.uint8)
        np.minimum(mindeg, dv, out=mindeg)
    order = np.argsort(-mindeg.astype(np.int16), kind="stable")
    scanned = 0
    for idx in order:
        scanned += 1
        g = _graph_from_pair_mask(n, int(idx))
        if alpha_ell_exact(g, ell).value > alpha_bound:
            continue
        if not degenerate:
            if tiling.has_factor(g, r).tiling is not None:
                continue
        return RttResult(n, r, ell, alpha_bound, value=g.min_degree(), witness=g,
                         exhaustive=True, degenerate=degenerate, feasible=True,
                         graphs_scanned=scanned)
    return RttResult(n, r, ell, alpha_bound, value=None, witness=None,
                     exhaustive=True, degenerate=degenerate, feasible=False,
                     graphs_scanned=scanned)


def _rtt_search(n: int, r: int, ell: int, alpha_bound: int, degenerate: bool,
                seed: int, tries: int) -> RttResult:
    """Random sampling plus a min-degree hill climb; every incumbent is
    re-certified by the exact solvers before acceptance."""
    from .graphs import random_gnp

    rng = SplitMix64(seed)
    best: Optional[Graph] = None
    best_val = -1
    scanned = 0

    def feasible(g: Graph) -> bool:
        if alpha_ell_exact(g, ell).value > alpha_bound:
            return False
        if degenerate:
            return True
        return tiling.has_factor(g, r).tiling is None

    for t in range(tries):
        p = 0.2 + 0.6 * rng.random()
        g = random_gnp(n, p, rng.next_u64())
        scanned += 1
        if not feasible(g):
            continue
        g = _climb(g, feasible, rng)
        if g.min_degree() > best_val:
            best_val = g.min_degree()
            best = g
    return RttResult(n, r, ell, alpha_bound,
                     value=best_val if best is not None else None,
                     witness=best, exhaustive=False, degenerate=degenerate,
                     feasible=best is not None, graphs_scanned=scanned)


def _climb(g: Graph, feasible, rng: SplitMix64, rounds: int = 200) -> Graph:
    """Add edges at a minimum-degree vertex while feasibility survives."""
    current = g
    for _ in range(rounds):
        degs = current.degrees()
        v = min(range(current.n), key=lambda i: (degs[i], i))
        non = [u for u in range(current.n)
               if u != v and not current.has_edge(u, v)]
        if not non:
            break
        non.sort(key=lambda u: (degs[u], u))
        improved = False
        for u in non:
            candidate = Graph(current.n, list(current.edges()) + [(min(u, v), max(u, v))])
            if feasible(candidate):
                current = candidate
                improved = True
                break
        if not improved:
            break
    return current
