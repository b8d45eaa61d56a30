"""Builders for the extremal graph families used throughout the package.

Two deterministic constructions and one randomized sampler:

* lower-bound family: a clique X1, joined completely to a K_{l+1}-free
  inner graph on X2.  Every r-clique must take at least r-l vertices from
  X1, which caps every K_r-tiling at |X1|/(r-l) copies.
* cover-threshold family: a hub vertex v whose neighborhood carries a
  K_{r-1}-free inner graph, plus a clique joined completely to that
  neighborhood but not to v.  No K_r covers v, so no K_r-factor exists.
* sparse K_{l+1}-free sampler: G(n, p) at p = n^(-(2-gamma)/(l+1)),
  accepted only when certified K_{l+1}-free with l-independence at most
  ceil(n^(1-gamma)).

Inner graphs are certified clique-free at build time, never trusted.
Fractional sizes round to nearest with ties up, and builds report realized
sizes so downstream audits use realized, not nominal, parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import graphs as gr
from .graphs import Graph, VertexSet, has_clique
from .invariants import alpha_ell_exact
from .numbers import exact_fraction as _as_fraction, round_half_up
from .rng import SplitMix64, derive_seed


class ConstructionError(ValueError):
    pass


# -- lower-bound family ----------------------------------------------------


@dataclass
class LowerBoundSpec:
    """Parameters of one lower-bound graph.

    ``eta`` in (0, (r-l)/r) fixes |X1| = round(eta*n); the inner graph must
    have exactly n - |X1| vertices and no K_{l+1}.
    """
    n: int
    r: int
    ell: int
    eta: Fraction
    inner: Graph

    def __post_init__(self):
        self.eta = _as_fraction(self.eta)

    @property
    def clique_size(self) -> int:
        return round_half_up(self.eta * self.n)

    @classmethod
    def with_clique_size(cls, n: int, r: int, ell: int, clique_size: int,
                         inner: Graph) -> "LowerBoundSpec":
        return cls(n=n, r=r, ell=ell, eta=Fraction(clique_size, n), inner=inner)

    def validate(self) -> None:
        if not self.r > self.ell >= 2:
            raise ConstructionError(f"need r > ell >= 2, got r={self.r}, ell={self.ell}")
        if not 0 < self.eta < Fraction(self.r - self.ell, self.r):
            raise ConstructionError(
                f"eta={self.eta} outside (0, (r-ell)/r = {Fraction(self.r - self.ell, self.r)})")
        x1 = self.clique_size
        if x1 < 1:
            raise ConstructionError("clique part X1 must have at least one vertex")
        if self.inner.n != self.n - x1:
            raise ConstructionError(
                f"inner graph has {self.inner.n} vertices, expected {self.n - x1}")
        if has_clique(self.inner, self.ell + 1):
            raise ConstructionError(f"inner graph contains a K_{self.ell + 1}")


@dataclass
class LowerBoundBuild:
    graph: Graph
    spec: LowerBoundSpec
    clique_part: VertexSet            # X1
    inner_part: VertexSet             # X2
    min_degree: int
    tiling_size_limit: Fraction       # |X1| / (r - ell)
    nominal_uncovered_fraction: Fraction
    alpha_audit: Optional[dict] = None


def build_lower_bound_graph(spec: LowerBoundSpec,
                            audit_alpha: Optional[bool] = None) -> LowerBoundBuild:
    """Assemble clique + complete join + inner graph; certify the inner graph.

    X1 occupies vertices 0..|X1|-1, the inner graph sits on the rest in
    order.  ``audit_alpha`` (auto: on for n <= 32) verifies the
    l-independence bound (ell-1) + alpha_ell(inner) against the exact solver.
    """
    spec.validate()
    x1 = spec.clique_size
    edges = [(u, v) for u in range(x1) for v in range(u + 1, spec.n)]
    # inner edges shifted onto X2
    for u, v in spec.inner.edges():
        edges.append((x1 + u, x1 + v))
    g = Graph(spec.n, edges)
    r_minus_l = spec.r - spec.ell
    mu = Fraction(spec.r, r_minus_l) * (Fraction(r_minus_l, spec.r) - spec.eta)
    build = LowerBoundBuild(
        graph=g,
        spec=spec,
        clique_part=VertexSet.of(g, range(x1)),
        inner_part=VertexSet.of(g, range(x1, spec.n)),
        min_degree=g.min_degree(),
        tiling_size_limit=Fraction(x1, r_minus_l),
        nominal_uncovered_fraction=mu,
    )
    if audit_alpha is None:
        audit_alpha = spec.n <= 32
    if audit_alpha:
        whole = alpha_ell_exact(g, spec.ell)
        inner = alpha_ell_exact(spec.inner, spec.ell)
        bound = spec.ell - 1 + inner.value
        build.alpha_audit = {
            "alpha": whole.value,
            "alpha_inner": inner.value,
            "bound": bound,
            "holds": whole.value <= bound,
        }
    return build


# -- cover-threshold family --------------------------------------------------


@dataclass
class CoverThresholdSpec:
    """Hub vertex with neighborhood size round(x*n) carrying a K_{r-1}-free
    inner graph; a clique of size n - round(x*n) - 1 completes the picture."""
    n: int
    r: int
    ell: int
    x: Fraction
    inner: Graph

    def __post_init__(self):
        self.x = _as_fraction(self.x)

    @property
    def neighborhood_size(self) -> int:
        return round_half_up(self.x * self.n)

    @property
    def clique_size(self) -> int:
        return self.n - self.neighborhood_size - 1

    def validate(self) -> None:
        if self.r < 2:
            raise ConstructionError("r must be >= 2")
        if not 0 < self.x < 1:
            raise ConstructionError(f"x={self.x} outside (0, 1)")
        s = self.neighborhood_size
        if s < 1:
            raise ConstructionError("hub neighborhood must be nonempty")
        if self.clique_size < 1:
            raise ConstructionError("clique part must have at least one vertex")
        if self.inner.n != s:
            raise ConstructionError(
                f"inner graph has {self.inner.n} vertices, expected {s}")
        if has_clique(self.inner, self.r - 1):
            raise ConstructionError(f"inner graph contains a K_{self.r - 1}")


@dataclass
class CoverThresholdBuild:
    graph: Graph
    spec: CoverThresholdSpec
    hub: int                      # the distinguished vertex, always 0
    neighborhood: VertexSet
    clique_part: VertexSet
    min_degree: int
    degree_breakdown: dict


def build_cover_threshold_graph(spec: CoverThresholdSpec) -> CoverThresholdBuild:
    """Hub = vertex 0; neighborhood = 1..s (inner graph); clique = the rest,
    complete to the neighborhood, with no edge to the hub.

    The "no K_r covers the hub" property is re-certified after assembly.
    """
    spec.validate()
    s = spec.neighborhood_size
    edges = [(0, 1 + i) for i in range(s)]
    for u, v in spec.inner.edges():
        edges.append((1 + u, 1 + v))
    clique_lo = 1 + s
    for u in range(clique_lo, spec.n):
        for v in range(1, s + 1):
            edges.append((v, u))
        for v in range(u + 1, spec.n):
            edges.append((u, v))
    g = Graph(spec.n, edges)
    from .invariants import has_clique_cover

    if has_clique_cover(g, 0, spec.r) is not None:
        raise AssertionError("construction invariant broken: hub is covered")
    hub_deg = g.degree(0)
    nb = VertexSet.of(g, range(1, s + 1))
    cl = VertexSet.of(g, range(clique_lo, spec.n))
    breakdown = {
        "hub": hub_deg,
        "neighborhood_min": min(g.degree(v) for v in nb),
        "clique_min": min(g.degree(v) for v in cl) if len(cl) else None,
    }
    return CoverThresholdBuild(graph=g, spec=spec, hub=0, neighborhood=nb,
                               clique_part=cl, min_degree=g.min_degree(),
                               degree_breakdown=breakdown)


# -- sparse clique-free sampler ----------------------------------------------


@dataclass
class SparseAttempt:
    index: int
    seed: int
    reason: str          # "accepted", "contains-clique", "alpha-too-large"
    alpha: Optional[int] = None


@dataclass
class SparseSample:
    graph: Optional[Graph]
    p: float
    exponent: float
    alpha_target: int
    attempts: List[SparseAttempt]

    @property
    def accepted(self) -> bool:
        return self.graph is not None


def sparse_gamma_limit(ell: int) -> Fraction:
    return Fraction(ell - 1, ell * ell + 2 * ell)


def sample_sparse_klfree(n: int, ell: int, gamma: float, seed: int,
                         max_tries: int = 20) -> SparseSample:
    """Repeatedly sample G(n, n^(-(2-gamma)/(l+1))) until a sample is
    certified K_{l+1}-free with l-independence <= ceil(n^(1-gamma)).

    Exhausting max_tries is a normal, reported outcome at desk scale, not an
    error.  l = 2 is rejected: sparse triangle-free graphs with small
    independence number live at the R(3,n) = Theta(n^2/log n) scale and this
    sampler's density regime does not apply.
    """
    if ell < 3:
        raise ValueError(
            "ell must be >= 3: for ell = 2 the triangle-free regime is governed "
            "by the Ramsey growth R(3,n) = Theta(n^2/log n); use an explicit "
            "triangle-free inner graph instead")
    limit = sparse_gamma_limit(ell)
    if not 0 < gamma < limit:
        raise ValueError(f"gamma={gamma} outside (0, {limit}) for ell={ell}")
    exponent = (2.0 - gamma) / (ell + 1)
    p = n ** (-exponent)
    alpha_target = math.ceil(n ** (1.0 - gamma))
    attempts: List[SparseAttempt] = []
    for i in range(1, max_tries + 1):
        attempt_seed = derive_seed(seed, "sparse-klfree", i)
        g = gr.random_gnp(n, p, attempt_seed)
        if has_clique(g, ell + 1):
            attempts.append(SparseAttempt(i, attempt_seed, "contains-clique"))
            continue
        a = alpha_ell_exact(g, ell)
        if a.value > alpha_target:
            attempts.append(SparseAttempt(i, attempt_seed, "alpha-too-large",
                                          alpha=a.value))
            continue
        attempts.append(SparseAttempt(i, attempt_seed, "accepted", alpha=a.value))
        return SparseSample(g, p, exponent, alpha_target, attempts)
    return SparseSample(None, p, exponent, alpha_target, attempts)


# -- helpers -------------------------------------------------------------------


def strip_cliques(g: Graph, k: int, seed: int = 0) -> Graph:
    """Delete one random edge from the first k-clique until none remain.
    Deterministic per seed; handy for manufacturing certified K_k-free
    inner graphs."""
    rng = SplitMix64(seed)
    current = g
    while True:
        clique = None
        for m in gr.iter_clique_masks(current, k):
            clique = m
            break
        if clique is None:
            return current
        verts = list(gr.iter_bits(clique))
        pairs = [(verts[i], verts[j]) for i in range(len(verts))
                 for j in range(i + 1, len(verts))]
        drop = pairs[rng.randrange(len(pairs))]
        edges = [e for e in current.edges() if e != drop]
        current = Graph(current.n, edges)


def graph_from_spec(spec: str, seed: int = 0) -> Graph:
    """Resolve a compact graph description.

    Accepted forms: ``c5`` / ``cycle:N``, ``petersen``, ``kneser:N,K``,
    ``complete:N``, ``empty:N``, ``path:N``, ``multipartite:A,B,...``,
    ``gnp:N,P[,SEED]``, ``gnp-min-degree:N,P,TARGET[,SEED]``.
    """
    s = spec.strip().lower()
    name, _, arg = s.partition(":")
    if name == "petersen":
        return gr.petersen_graph()
    if name in ("c5", "c_5"):
        return gr.cycle_graph(5)
    if name == "cycle":
        return gr.cycle_graph(int(arg))
    if name == "complete":
        return gr.complete_graph(int(arg))
    if name == "empty":
        return gr.empty_graph(int(arg))
    if name == "path":
        return gr.path_graph(int(arg))
    if name == "kneser":
        a, b = (int(t) for t in arg.split(","))
        return gr.kneser_graph(a, b)
    if name == "multipartite":
        return gr.complete_multipartite([int(t) for t in arg.split(",")])
    if name == "gnp":
        parts = arg.split(",")
        n, p = int(parts[0]), float(parts[1])
        s0 = int(parts[2]) if len(parts) > 2 else seed
        return gr.random_gnp(n, p, s0)
    if name == "gnp-min-degree":
        parts = arg.split(",")
        n, p, tgt = int(parts[0]), float(parts[1]), int(parts[2])
        s0 = int(parts[3]) if len(parts) > 3 else seed
        return gr.random_graph_with_min_degree(n, tgt, s0, p=p)
    raise ConstructionError(f"unknown graph spec {spec!r}")
