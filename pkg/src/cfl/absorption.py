"""Certifiers and small-scale searchers for absorption-method objects.

The objects certified here:

* absorber for a set S: a disjoint set A with both G[A] and G[A u S]
  admitting clique factors;
* reachable set for a vertex pair {u, v}: a set S with both G[{u} u S] and
  G[{v} u S] admitting clique factors;
* absorbing set: a set A swallowing every small leftover R (G[A u R] has a
  factor whenever |R| is small and divisibility permits);
* closedness: statistics of how many disjoint reachable sets connect the
  pairs of a vertex set.

Every certificate stores the factor tilings themselves and re-verifies via
the independent tiling checker.  Searches are greedy first-fit over
candidates in lexicographic order: the counts are honest lower bounds, and
exact packing lives only in the test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from statistics import median
from typing import Dict, List, Optional, Tuple

from .graphs import Graph, VertexSet, iter_bits, iter_clique_masks, mask_of
from .numbers import exact_fraction
from .rng import SplitMix64, derive_seed
from .tiling import CliqueTiling, has_factor, verify_tiling


@dataclass
class AbsorberCertificate:
    """A set A (at most r*t vertices, disjoint from S) such that both A and
    A u S carry perfect clique tilings; the tilings are the certificate."""
    s: VertexSet
    a: VertexSet
    r: int
    t: int
    factor_of_a: CliqueTiling
    factor_of_a_union_s: CliqueTiling


@dataclass
class ReachableCertificate:
    """A set S such that {u} u S and {v} u S both carry perfect clique
    tilings."""
    u: int
    v: int
    s: VertexSet
    r: int
    factor_u: CliqueTiling
    factor_v: CliqueTiling


def verify_absorber(g: Graph, cert: AbsorberCertificate) -> bool:
    if cert.a.mask & cert.s.mask:
        return False
    if len(cert.a) > cert.r * cert.t or len(cert.a) % cert.r:
        return False
    return (verify_tiling(g, cert.factor_of_a, within=cert.a)
            and cert.factor_of_a.covered_mask == cert.a.mask
            and verify_tiling(g, cert.factor_of_a_union_s,
                              within=VertexSet(g, cert.a.mask | cert.s.mask))
            and cert.factor_of_a_union_s.covered_mask == (cert.a.mask | cert.s.mask))


def verify_reachable(g: Graph, cert: ReachableCertificate) -> bool:
    um, vm = 1 << cert.u, 1 << cert.v
    if cert.s.mask & (um | vm):
        return False
    return (verify_tiling(g, cert.factor_u, within=VertexSet(g, cert.s.mask | um))
            and cert.factor_u.covered_mask == (cert.s.mask | um)
            and verify_tiling(g, cert.factor_v, within=VertexSet(g, cert.s.mask | vm))
            and cert.factor_v.covered_mask == (cert.s.mask | vm))


def certify_absorber(g: Graph, s: VertexSet, a: VertexSet, r: int,
                     t: int) -> Optional[AbsorberCertificate]:
    """Certificate iff both factor queries succeed; size or divisibility
    failure returns None (not an error)."""
    if len(s) != r:
        raise ValueError(f"S must have exactly r={r} vertices")
    if a.mask & s.mask:
        raise ValueError("absorber must be disjoint from S")
    if len(a) > r * t or len(a) % r != 0:
        return None
    fa = has_factor(g, r, within=a)
    if fa.tiling is None:
        return None
    fas = has_factor(g, r, within=VertexSet(g, a.mask | s.mask))
    if fas.tiling is None:
        return None
    cert = AbsorberCertificate(s=s, a=a, r=r, t=t, factor_of_a=fa.tiling,
                               factor_of_a_union_s=fas.tiling)
    assert verify_absorber(g, cert)
    return cert


def certify_reachable(g: Graph, u: int, v: int, s: VertexSet,
                      r: int) -> Optional[ReachableCertificate]:
    if u == v:
        raise ValueError("endpoints must differ")
    if u in s or v in s:
        raise ValueError("endpoints may not lie in S")
    if (len(s) + 1) % r != 0:
        return None
    fu = has_factor(g, r, within=VertexSet(g, s.mask | (1 << u)))
    if fu.tiling is None:
        return None
    fv = has_factor(g, r, within=VertexSet(g, s.mask | (1 << v)))
    if fv.tiling is None:
        return None
    cert = ReachableCertificate(u=u, v=v, s=s, r=r, factor_u=fu.tiling,
                                factor_v=fv.tiling)
    assert verify_reachable(g, cert)
    return cert


def find_disjoint_reachable_sets(g: Graph, u: int, v: int, r: int, t: int,
                                 limit: int, within: Optional[VertexSet] = None,
                                 candidate_budget: int = 200_000
                                 ) -> List[ReachableCertificate]:
    """Greedy first-fit collection of pairwise-disjoint reachable sets for
    {u, v}, sizes r-1, 2r-1, ..., rt-1 in that order, candidates in
    lexicographic order.  The count is a lower bound on the true maximum.

    Size r-1 has a fast path: such a set works iff it is an (r-1)-clique
    adjacent to both endpoints.  Larger sizes enumerate subsets outright
    under the candidate budget.
    """
    if limit <= 0:
        return []
    universe = (g.full_mask() if within is None else within.mask)
    universe &= ~((1 << u) | (1 << v))
    out: List[ReachableCertificate] = []
    used = 0
    budget = candidate_budget

    # fast path: single-clique reachable sets
    pool = universe & g.adj[u] & g.adj[v]
    for cm in iter_clique_masks(g, r - 1, pool):
        if budget <= 0 or len(out) >= limit:
            return out
        budget -= 1
        if cm & used:
            continue
        cert = certify_reachable(g, u, v, VertexSet(g, cm), r)
        if cert is not None:
            out.append(cert)
            used |= cm
    for k in range(2, t + 1):
        size = k * r - 1
        avail = list(iter_bits(universe & ~used))
        if len(avail) < size:
            break
        for combo in combinations(avail, size):
            if budget <= 0 or len(out) >= limit:
                return out
            budget -= 1
            cm = mask_of(combo)
            if cm & used:
                continue
            cert = certify_reachable(g, u, v, VertexSet(g, cm), r)
            if cert is not None:
                out.append(cert)
                used |= cm
    return out


@dataclass
class AbsorbingVerdict:
    """Exhaustive verdicts are ground truth; sampled verdicts are one-sided
    (absorbing=True means "no violating leftover found in checked trials")."""
    absorbing: bool
    mode: str
    xi: Fraction
    r: int
    checked: int
    witness_r: Optional[VertexSet] = None


EXHAUSTIVE_ABSORB_N_CAP = 16
EXHAUSTIVE_ABSORB_SIZE_CAP = 4


def certify_xi_absorbing(g: Graph, a: VertexSet, r: int, xi,
                         mode: str = "exhaustive", samples: int = 2000,
                         seed: int = 0) -> AbsorbingVerdict:
    """Check that every qualifying leftover R (|R| <= xi*n, |A u R|
    divisible by r, R outside A) leaves G[A u R] with a clique factor."""
    x = exact_fraction(xi)
    n = g.n
    max_size = int(x * n)  # floor
    outside = [w for w in range(n) if w not in a]
    sizes = [s for s in range(0, max_size + 1)
             if (len(a) + s) % r == 0 and s <= len(outside)]
    checked = 0
    if mode == "exhaustive":
        if n > EXHAUSTIVE_ABSORB_N_CAP or max_size > EXHAUSTIVE_ABSORB_SIZE_CAP:
            raise ValueError(
                f"exhaustive mode capped at n <= {EXHAUSTIVE_ABSORB_N_CAP} and "
                f"xi*n <= {EXHAUSTIVE_ABSORB_SIZE_CAP}")
        for s in sizes:
            for combo in combinations(outside, s):
                checked += 1
                rm = mask_of(combo)
                if has_factor(g, r, within=VertexSet(g, a.mask | rm)).tiling is None:
                    return AbsorbingVerdict(False, mode, x, r, checked,
                                            witness_r=VertexSet(g, rm))
        return AbsorbingVerdict(True, mode, x, r, checked)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if not sizes:
        return AbsorbingVerdict(True, mode, x, r, 0)
    rng = SplitMix64(derive_seed(seed, "xi-absorb"))
    for _ in range(samples):
        s = sizes[rng.randrange(len(sizes))]
        idx = list(range(len(outside)))
        rng.shuffle(idx)
        combo = [outside[i] for i in idx[:s]]
        checked += 1
        rm = mask_of(combo)
        if has_factor(g, r, within=VertexSet(g, a.mask | rm)).tiling is None:
            return AbsorbingVerdict(False, mode, x, r, checked,
                                    witness_r=VertexSet(g, rm))
    return AbsorbingVerdict(True, mode, x, r, checked)


@dataclass
class ClosednessReport:
    """Disjoint-reachable-set counts over sampled (or all) pairs of U.
    implied_beta is min_count / |U|, an observational quantity."""
    r: int
    t: int
    variant: str                  # "closed" | "inner-closed"
    pairs_evaluated: int
    all_pairs: bool
    min_count: int
    median_count: float
    max_count: int
    implied_beta: Fraction
    per_pair: List[Tuple[int, int, int]] = field(default_factory=list)


def closedness_report(g: Graph, u_set: VertexSet, r: int, t: int,
                      pair_budget: int, inner: bool = False,
                      per_pair_limit: int = 8, seed: int = 0,
                      candidate_budget: int = 50_000) -> ClosednessReport:
    """Greedy disjoint-reachable counts across pairs of U.  The inner
    variant restricts the reachable sets themselves to U."""
    verts = u_set.vertices()
    pairs = [(verts[i], verts[j]) for i in range(len(verts))
             for j in range(i + 1, len(verts))]
    all_pairs = len(pairs) <= pair_budget
    if not all_pairs:
        rng = SplitMix64(derive_seed(seed, "closedness"))
        idx = list(range(len(pairs)))
        rng.shuffle(idx)
        pairs = [pairs[i] for i in sorted(idx[:pair_budget])]
    within = u_set if inner else None
    counts: List[Tuple[int, int, int]] = []
    for (a, b) in pairs:
        certs = find_disjoint_reachable_sets(
            g, a, b, r, t, limit=per_pair_limit, within=within,
            candidate_budget=candidate_budget)
        counts.append((a, b, len(certs)))
    values = [c for (_, _, c) in counts] or [0]
    return ClosednessReport(
        r=r, t=t, variant="inner-closed" if inner else "closed",
        pairs_evaluated=len(pairs), all_pairs=all_pairs,
        min_count=min(values), median_count=float(median(values)),
        max_count=max(values),
        implied_beta=Fraction(min(values), max(1, len(u_set))),
        per_pair=counts)


# -- the explicit reachable-set gadget ------------------------------------------


@dataclass
class ReachGadget:
    """Two endpoint vertices plus a (4r-1)-vertex reachable set built from
    two (r+1)-cliques sharing one vertex and two clique tails hanging off
    the endpoints."""
    graph: Graph
    u: int
    v: int
    reach_set: VertexSet
    parts: Dict[str, VertexSet]
    anchor_u: int
    anchor_v: int
    shared: int


def build_reachable_gadget(r: int) -> ReachGadget:
    """Assemble the explicit gadget on 4r+1 vertices.

    Layout: u=0, v=1; tail C = 2..r (clique joined to u and to the left
    anchor); tail D = r+1..2r-1 (clique joined to v and to the right
    anchor); left clique = 2r..3r with anchor 2r; right clique = 3r..4r
    with anchor 4r; the two big cliques share vertex 3r.  The reachable set
    is everything except u and v; G[set + u] and G[set + v] decompose into
    four r-cliques each.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    u, v = 0, 1
    tail_u = list(range(2, r + 1))
    tail_v = list(range(r + 1, 2 * r))
    left = list(range(2 * r, 3 * r + 1))
    right = list(range(3 * r, 4 * r + 1))
    anchor_u, shared, anchor_v = 2 * r, 3 * r, 4 * r
    edges = set()

    def add_clique(vs):
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                edges.add((min(vs[i], vs[j]), max(vs[i], vs[j])))

    add_clique(tail_u + [u])
    add_clique(tail_u + [anchor_u])
    add_clique(tail_v + [v])
    add_clique(tail_v + [anchor_v])
    add_clique(left)
    add_clique(right)
    n = 4 * r + 1
    g = Graph(n, sorted(edges))
    reach = VertexSet.of(g, range(2, n))
    parts = {
        "tail_u": VertexSet.of(g, tail_u),
        "tail_v": VertexSet.of(g, tail_v),
        "clique_left": VertexSet.of(g, left),
        "clique_right": VertexSet.of(g, right),
    }
    return ReachGadget(graph=g, u=u, v=v, reach_set=reach, parts=parts,
                       anchor_u=anchor_u, anchor_v=anchor_v, shared=shared)
