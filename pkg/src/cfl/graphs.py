"""Immutable simple graphs over dense integer vertices, with bitset adjacency.

Vertices are 0..n-1 and every neighborhood is a Python int used as a bitset,
so subset intersection (the inner loop of every solver in this package) is a
single ``&``.  Graphs are immutable after construction; vertex subsets are
lightweight (graph, mask) views.

Two wire formats are supported:

* edge list: first line ``n m``, then m lines ``u v`` with 0 <= u < v < n,
  LF line endings, no comments.  The serializer emits edges sorted
  lexicographically, so parse/serialize round-trips are bit-exact.
* graph6: the standard printable encoding, one graph per line, with the
  optional ``>>graph6<<`` header accepted on input.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .rng import SplitMix64, bulk_random


class GraphFormatError(ValueError):
    """Malformed graph payload. ``line`` is 1-based; ``offset`` a byte offset."""

    def __init__(self, message: str, line: Optional[int] = None,
                 offset: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
        self.line = line
        self.offset = offset


class HeaderError(GraphFormatError):
    pass


class EdgeSyntaxError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class LoopError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class Graph6Error(GraphFormatError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Immutable simple graph. ``adj[v]`` is the neighbor bitset of v."""

    __slots__ = ("n", "adj", "edge_count")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj = [0] * n
        m = 0
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if adj[u] >> v & 1:
                continue
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            m += 1
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", tuple(adj))
        object.__setattr__(self, "edge_count", m)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # -- basic queries -------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> List[int]:
        return [a.bit_count() for a in self.adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Edges as (u, v) with u < v, lexicographic order."""
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1)
            for off in iter_bits(rest):
                yield (u, u + 1 + off)

    def degree_in(self, v: int, mask: int) -> int:
        return (self.adj[v] & mask).bit_count()

    def is_clique(self, mask: int) -> bool:
        """True iff the vertices of ``mask`` are pairwise adjacent."""
        rest = mask
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if rest & ~self.adj[v]:
                return False
        return True

    def subgraph(self, mask: int) -> "Graph":
        """Materialize the induced subgraph, vertices relabeled by rank."""
        verts = list(iter_bits(mask))
        pos = {v: i for i, v in enumerate(verts)}
        edges = []
        for i, v in enumerate(verts):
            for u in iter_bits(self.adj[v] & mask):
                if u > v:
                    edges.append((i, pos[u]))
        return Graph(len(verts), edges)

    def complement(self) -> "Graph":
        full = self.full_mask()
        edges = []
        for u in range(self.n):
            non = full & ~self.adj[u] & ~(1 << u)
            for v in iter_bits(non >> (u + 1)):
                edges.append((u, u + 1 + v))
        return Graph(self.n, edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


class VertexSet:
    """A subset of the vertices of one fixed graph, stored as a bitset."""

    __slots__ = ("graph", "mask")

    def __init__(self, graph: Graph, mask: int):
        if mask < 0 or mask >> graph.n:
            raise ValueError("mask has bits outside the vertex range")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("VertexSet is immutable")

    @classmethod
    def of(cls, graph: Graph, vertices: Iterable[int]) -> "VertexSet":
        return cls(graph, mask_of(vertices))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, v: int) -> bool:
        return bool(self.mask >> v & 1)

    def vertices(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def _check_same_graph(self, other: "VertexSet") -> None:
        if self.graph is not other.graph and self.graph != other.graph:
            raise ValueError("vertex sets belong to different graphs")

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check_same_graph(other)
        return VertexSet(self.graph, self.mask & other.mask)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check_same_graph(other)
        return VertexSet(self.graph, self.mask | other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check_same_graph(other)
        return VertexSet(self.graph, self.mask & ~other.mask)

    def __eq__(self, other) -> bool:
        return (isinstance(other, VertexSet) and self.mask == other.mask
                and self.graph == other.graph)

    def __hash__(self) -> int:
        return hash((id(self.graph), self.mask))

    def __repr__(self) -> str:
        return f"VertexSet({sorted(self.vertices())})"


# -- parsing and serialization ------------------------------------------


def parse_edgelist(text: str) -> Graph:
    """Parse the edge-list wire format; errors carry line numbers."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise HeaderError("empty payload", line=1)
    head = lines[0].split(" ")
    if len(head) != 2 or not all(p.isdigit() for p in head):
        raise HeaderError(f"expected 'n m' header, got {lines[0]!r}", line=1)
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise HeaderError(
            f"header declares {m} edges but payload has {len(lines) - 1} edge lines",
            line=1)
    seen = set()
    edges = []
    for i, raw in enumerate(lines[1:], start=2):
        parts = raw.split(" ")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise EdgeSyntaxError(f"expected 'u v', got {raw!r}", line=i)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise LoopError(f"loop at vertex {u}", line=i)
        if u > v:
            raise EdgeSyntaxError(f"edge must satisfy u < v, got {raw!r}", line=i)
        if v >= n:
            raise VertexRangeError(f"vertex {v} out of range for n={n}", line=i)
        if (u, v) in seen:
            raise DuplicateEdgeError(f"duplicate edge {u} {v}", line=i)
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)


def format_edgelist(g: Graph) -> str:
    out = [f"{g.n} {g.edge_count}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


_G6_HEADER = ">>graph6<<"


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line (length up to 2^36 vertices per the format)."""
    s = text.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):]
    if not s:
        raise Graph6Error("empty graph6 payload", offset=0)
    data = [ord(c) - 63 for c in s]
    if any(b < 0 or b > 63 for b in data):
        bad = next(i for i, b in enumerate(data) if b < 0 or b > 63)
        raise Graph6Error(f"byte {s[bad]!r} outside graph6 alphabet", offset=bad)
    if data[0] <= 62:
        n, pos = data[0], 1
    elif len(data) >= 4 and data[1] <= 62:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4
    elif len(data) >= 8:
        n = 0
        for b in data[2:8]:
            n = (n << 6) | b
        pos = 8
    else:
        raise Graph6Error("truncated vertex count", offset=0)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - pos != need:
        raise Graph6Error(
            f"bit field has {len(data) - pos} sextets, expected {need}", offset=pos)
    bits = 0
    for b in data[pos:]:
        bits = (bits << 6) | b
    bits >>= (need * 6 - nbits)
    edges = []
    k = nbits - 1
    for v in range(1, n):
        for u in range(v):
            if bits >> k & 1:
                edges.append((u, v))
            k -= 1
    return Graph(n, edges)


def format_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        head = chr(n + 63)
    elif n <= 258047:
        head = "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    else:
        head = "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    bits = 0
    nbits = n * (n - 1) // 2
    k = nbits - 1
    for v in range(1, n):
        for u in range(v):
            if g.has_edge(u, v):
                bits |= 1 << k
            k -= 1
    need = (nbits + 5) // 6
    bits <<= need * 6 - nbits
    body = "".join(chr(((bits >> (6 * (need - 1 - i))) & 63) + 63) for i in range(need))
    return head + body


def parse_graph(payload) -> Graph:
    """Sniff edge-list vs graph6 and parse.

    Edge lists start with a decimal header line; anything else is treated as
    graph6.  Accepts str or bytes (UTF-8).
    """
    if isinstance(payload, bytes):
        payload = payload.decode("utf-8")
    first = payload.split("\n", 1)[0].strip()
    parts = first.split(" ")
    if len(parts) == 2 and all(p.isdigit() for p in parts):
        return parse_edgelist(payload)
    return parse_graph6(payload)


# -- generators ----------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges = [(min(u, v), max(u, v)) for u, v in outer + spokes + inner]
    return Graph(10, edges)


def kneser_graph(n: int, k: int) -> Graph:
    """Vertices are the k-subsets of [n]; edges join disjoint subsets."""
    from itertools import combinations

    subsets = list(combinations(range(n), k))
    masks = [mask_of(s) for s in subsets]
    edges = [(i, j) for i in range(len(subsets)) for j in range(i + 1, len(subsets))
             if not masks[i] & masks[j]]
    return Graph(len(subsets), edges)


def complete_multipartite(part_sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph; parts occupy consecutive vertex ranges."""
    if not part_sizes:
        raise ValueError("at least one part required")
    if any(s <= 0 for s in part_sizes):
        raise ValueError("part sizes must be positive")
    bounds = [0]
    for s in part_sizes:
        bounds.append(bounds[-1] + s)
    n = bounds[-1]
    edges = []
    for p in range(len(part_sizes)):
        for u in range(bounds[p], bounds[p + 1]):
            for v in range(bounds[p + 1], n):
                edges.append((u, v))
    return Graph(n, edges)


def random_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) under the package's SplitMix64 stream.

    Pair (u, v), u < v in lexicographic order consumes one uniform draw;
    the same seed always yields the identical graph.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    npairs = n * (n - 1) // 2
    if npairs == 0:
        return Graph(n)
    if p == 0.0:
        return Graph(n)
    if p == 1.0:
        return complete_graph(n)
    draws = bulk_random(seed, npairs)
    hit = draws < p
    edges = []
    k = 0
    for u in range(n):
        for v in range(u + 1, n):
            if hit[k]:
                edges.append((u, v))
            k += 1
    return Graph(n, edges)


def random_graph_with_min_degree(n: int, target: int, seed: int,
                                 p: float = 0.5, max_rounds: int = 1000) -> Graph:
    """Sample G(n,p), then raise the minimum degree to ``target`` by adding
    edges at the lowest-degree vertex toward low-degree non-neighbors."""
    g = random_gnp(n, p, seed)
    rng = SplitMix64(seed ^ 0xD06)
    adj = [a for a in g.adj]
    full = (1 << n) - 1
    for _ in range(max_rounds):
        degs = [a.bit_count() for a in adj]
        v = min(range(n), key=lambda i: degs[i])
        if degs[v] >= target:
            break
        candidates = [u for u in iter_bits(full & ~adj[v] & ~(1 << v))]
        if not candidates:
            break
        candidates.sort(key=lambda u: (degs[u], u))
        u = candidates[0] if rng.random() < 0.9 else rng.choice(candidates)
        adj[v] |= 1 << u
        adj[u] |= 1 << v
    edges = []
    for u in range(n):
        for v in iter_bits(adj[u] >> (u + 1)):
            edges.append((u, u + 1 + v))
    return Graph(n, edges)


# -- cliques and neighborhoods --------------------------------------------


def iter_clique_masks(g: Graph, k: int, within: Optional[int] = None) -> Iterator[int]:
    """Yield every k-clique inside ``within`` as a bitmask.

    Lexicographic in the sorted vertex tuple: the recursion extends the
    current clique only with higher-indexed common neighbors, so each clique
    is produced exactly once and the stream order is canonical.
    """
    if k < 1:
        raise ValueError("clique order must be >= 1")
    universe = g.full_mask() if within is None else within
    if k == 1:
        for v in iter_bits(universe):
            yield 1 << v
        return
    adj = g.adj

    def extend(clique_mask: int, cand: int, depth: int) -> Iterator[int]:
        if depth == k:
            yield clique_mask
            return
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if depth + 1 == k:
                yield clique_mask | low
            else:
                yield from extend(clique_mask | low, rest & adj[v], depth + 1)

    yield from extend(0, universe, 0)


class CliqueEnumeration:
    """Result of enumerate_cliques: canonical list plus a truncation flag."""

    __slots__ = ("cliques", "truncated")

    def __init__(self, cliques: List[VertexSet], truncated: bool):
        self.cliques = cliques
        self.truncated = truncated

    def __len__(self) -> int:
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)


def enumerate_cliques(g: Graph, k: int, cap: Optional[int] = None,
                      within: Optional[VertexSet] = None) -> CliqueEnumeration:
    """All k-cliques of g (inside ``within`` if given), canonically ordered.

    Exhaustive when the cap is not hit; hitting the cap sets ``truncated``
    rather than raising.
    """
    mask = within.mask if within is not None else None
    out: List[VertexSet] = []
    truncated = False
    for m in iter_clique_masks(g, k, mask):
        if cap is not None and len(out) >= cap:
            truncated = True
            break
        out.append(VertexSet(g, m))
    return CliqueEnumeration(out, truncated)


def has_clique(g: Graph, k: int, within: Optional[int] = None) -> bool:
    """True iff a k-clique exists (early exit)."""
    for _ in iter_clique_masks(g, k, within):
        return True
    return False


def common_neighborhood(g: Graph, s: VertexSet) -> VertexSet:
    """Vertices adjacent to every member of s; members of s excluded."""
    if len(s) == 0:
        raise ValueError("common neighborhood of an empty set is undefined")
    m = g.full_mask()
    for v in s:
        m &= g.adj[v]
    return VertexSet(g, m & ~s.mask)


def common_neighbors_mask(g: Graph, vertices_mask: int) -> int:
    m = -1
    for v in iter_bits(vertices_mask):
        m &= g.adj[v]
    return m & g.full_mask() & ~vertices_mask
