"""Bipartite incidence graphs, hypergraphs, and the structural property battery.

A bipartite graph here always has "left" vertices v_0..v_{n-1} (hypergraph
vertices) and "right" vertices e_0..e_{m-1} (hypergraph edges).  The graph is
stored column-wise: ``cols[i]`` is the bitmask of left neighbours of e_i,
i.e. column i of the 0-1 biadjacency matrix.  Graphs are immutable value
objects; every mutation-like operation returns a new graph.

The classification battery evaluates, for a graph conforming to a degree
sequence:

  (i)   no complete 3x2 bipartite subgraph (three left, two right vertices),
  (ii)  no complete 2x3 bipartite subgraph,
  (iii) no right vertex lies on two 4-cycles,
  (iv)  any three distinct 4-cycles involve at least five left vertices,
  (v)   the number of 4-cycles is at most the cap n2.

A conforming graph passing all five is "well-behaved"; the corresponding
hypergraph is then simple and has exactly one double link per 4-cycle.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .degree_model import DegreeSequence
from .errors import LoopPresent, NonConforming, WrongRightDegree

Vertex = tuple[str, int]  # ("v", j) for left vertices, ("e", i) for right


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class FourCycle:
    """An unordered copy of the complete 2x2 bipartite subgraph."""

    left_pair: tuple[int, int]
    right_pair: tuple[int, int]


@dataclass(frozen=True)
class Classification:
    """Verdict of the five-property battery for one conforming graph."""

    four_cycles: tuple[FourCycle, ...]
    d: int
    in_b0: bool
    in_bplus: bool
    failed_properties: frozenset[str]


@dataclass(frozen=True)
class HyperProperties:
    """Structural summary of a hypergraph.

    ``loops`` counts (vertex, edge) incidences where the vertex is repeated
    inside the edge.  ``double_links`` lists the vertex pairs contained in
    exactly two edges.
    """

    loops: int
    repeated_edges: int
    max_link_multiplicity: int
    double_links: tuple[tuple[int, int], ...]
    is_simple: bool
    is_linear: bool


class BipartiteGraph:
    """Labeled bipartite graph with bitmask columns."""

    def __init__(self, n_left: int, n_right: int, cols) -> None:
        cols = tuple(int(c) for c in cols)
        if len(cols) != n_right:
            raise ValueError(f"expected {n_right} columns, got {len(cols)}")
        if n_left < 0 or n_right < 0:
            raise ValueError("vertex counts must be nonnegative")
        for c in cols:
            if c < 0 or c >> n_left:
                raise ValueError("column mask references a vertex out of range")
        self.n_left = n_left
        self.n_right = n_right
        self.cols = cols

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges) -> "BipartiteGraph":
        """Build from (left, right) index pairs (0-based); duplicates rejected."""
        cols = [0] * n_right
        for j, i in edges:
            if not (0 <= j < n_left and 0 <= i < n_right):
                raise ValueError(f"edge ({j},{i}) out of range")
            if cols[i] >> j & 1:
                raise ValueError(f"duplicate edge ({j},{i})")
            cols[i] |= 1 << j
        return cls(n_left, n_right, cols)

    @cached_property
    def rows(self) -> tuple[int, ...]:
        """Bitmask of right neighbours per left vertex."""
        rows = [0] * self.n_left
        for i, c in enumerate(self.cols):
            bit = 1 << i
            for j in _bits(c):
                rows[j] |= bit
        return tuple(rows)

    def has_edge(self, j: int, i: int) -> bool:
        return bool(self.cols[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = [(j, i) for i, c in enumerate(self.cols) for j in _bits(c)]
        out.sort()
        return out

    def left_degrees(self) -> tuple[int, ...]:
        return tuple(r.bit_count() for r in self.rows)

    def right_degrees(self) -> tuple[int, ...]:
        return tuple(c.bit_count() for c in self.cols)

    def conforms(self, ds: DegreeSequence) -> bool:
        return (
            self.n_left == ds.n
            and self.left_degrees() == ds.k
            and all(c.bit_count() == ds.r for c in self.cols)
        )

    def replace_edges(self, remove, add) -> "BipartiteGraph":
        """New graph with ``remove`` edges deleted and ``add`` edges inserted.

        Every removed edge must be present and every added edge absent.
        """
        cols = list(self.cols)
        for j, i in remove:
            if not cols[i] >> j & 1:
                raise ValueError(f"edge ({j},{i}) not present")
            cols[i] ^= 1 << j
        for j, i in add:
            if cols[i] >> j & 1:
                raise ValueError(f"edge ({j},{i}) already present")
            cols[i] |= 1 << j
        return BipartiteGraph(self.n_left, self.n_right, cols)

    def four_cycles(self) -> tuple[FourCycle, ...]:
        """All copies of the complete 2x2 subgraph, in lexicographic order.

        Enumerated by bucketing right-vertex pairs over the wedges at each
        left vertex, which is linear in the wedge count rather than quadratic
        in the number of right vertices.
        """
        buckets: dict[tuple[int, int], list[int]] = {}
        for j, row in enumerate(self.rows):
            nbrs = list(_bits(row))
            for pair in combinations(nbrs, 2):
                buckets.setdefault(pair, []).append(j)
        cycles = []
        for (i1, i2), lefts in buckets.items():
            if len(lefts) >= 2:
                for j1, j2 in combinations(lefts, 2):
                    cycles.append(FourCycle((j1, j2), (i1, i2)))
        cycles.sort(key=lambda c: (c.left_pair, c.right_pair))
        return tuple(cycles)

    def has_four_cycle(self) -> bool:
        """Early-exit 4-cycle test used by the samplers."""
        seen = set()
        for row in self.rows:
            nbrs = list(_bits(row))
            for pair in combinations(nbrs, 2):
                if pair in seen:
                    return True
                seen.add(pair)
        return False

    def has_copy(self, a: int, b: int) -> bool:
        """True iff some a left and b right vertices induce a subgraph that
        contains the complete a-by-b bipartite graph.

        The definition is asymmetric: ``a`` counts left vertices.  Containment
        of all a*b edges is required, not induced equality.
        """
        if a < 1 or b < 1:
            raise ValueError("pattern sides must be >= 1")
        if b > self.n_right:
            return False
        for group in combinations(self.cols, b):
            common = group[0]
            for c in group[1:]:
                common &= c
            if common.bit_count() >= a:
                return True
        return False

    def distance(self, x: Vertex, y: Vertex) -> int | None:
        """BFS shortest-path length between two vertices; None if unreachable.

        Vertices are addressed as ("v", j) on the left and ("e", i) on the
        right.
        """
        sx, ix = self._check_vertex(x)
        sy, iy = self._check_vertex(y)
        if (sx, ix) == (sy, iy):
            return 0
        dist = {(sx, ix): 0}
        queue = deque([(sx, ix)])
        while queue:
            side, idx = queue.popleft()
            ndist = dist[(side, idx)] + 1
            if side == "v":
                nbrs = [("e", i) for i in _bits(self.rows[idx])]
            else:
                nbrs = [("v", j) for j in _bits(self.cols[idx])]
            for nxt in nbrs:
                if nxt in dist:
                    continue
                if nxt == (sy, iy):
                    return ndist
                dist[nxt] = ndist
                queue.append(nxt)
        return None

    def _check_vertex(self, v: Vertex) -> tuple[str, int]:
        side, idx = v
        if side == "v":
            if not 0 <= idx < self.n_left:
                raise ValueError(f"left vertex {idx} out of range")
        elif side == "e":
            if not 0 <= idx < self.n_right:
                raise ValueError(f"right vertex {idx} out of range")
        else:
            raise ValueError(f"vertex side must be 'v' or 'e', got {side!r}")
        return side, idx

    def to_json_dict(self) -> dict:
        """Interchange format with 1-based indices."""
        return {
            "n_left": self.n_left,
            "n_right": self.n_right,
            "edges": [[j + 1, i + 1] for j, i in self.edges()],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "BipartiteGraph":
        edges = [(j - 1, i - 1) for j, i in obj["edges"]]
        return cls.from_edges(obj["n_left"], obj["n_right"], edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BipartiteGraph)
            and self.n_left == other.n_left
            and self.cols == other.cols
        )

    def __hash__(self) -> int:
        return hash((self.n_left, self.cols))

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.n_left}x{self.n_right}, {len(self.edges())} edges)"


class Hypergraph:
    """Multiset of r-element vertex multisets on {0, ..., n-1}.

    Edges are stored as sorted tuples; repeats within an edge represent loops.
    Equality is multiset equality of edges.
    """

    def __init__(self, n: int, edges) -> None:
        self.n = n
        self.edges = tuple(tuple(sorted(int(v) for v in e)) for e in edges)
        for e in self.edges:
            for v in e:
                if not 0 <= v < n:
                    raise ValueError(f"vertex {v} out of range for n={n}")

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return tuple(deg)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [[v + 1 for v in e] for e in self.edges]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Hypergraph":
        return cls(obj["n"], [[v - 1 for v in e] for e in obj["edges"]])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Hypergraph)
            and self.n == other.n
            and sorted(self.edges) == sorted(other.edges)
        )

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self.edges))))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={len(self.edges)})"


def to_hypergraph(graph: BipartiteGraph, r: int) -> Hypergraph:
    """Read each right vertex's neighbourhood as one hypergraph edge.

    Requires every right degree to equal r; the result never has loops since
    columns are sets.
    """
    for i, c in enumerate(graph.cols):
        if c.bit_count() != r:
            raise WrongRightDegree(
                f"right vertex {i} has degree {c.bit_count()}, expected {r}"
            )
    return Hypergraph(graph.n_left, [tuple(_bits(c)) for c in graph.cols])


def from_hypergraph(hg: Hypergraph) -> BipartiteGraph:
    """Canonical incidence graph of a loop-free hypergraph.

    Columns are ordered lexicographically on the sorted edges, ties broken by
    input position, so equal hypergraphs get equal graphs.
    """
    for e in hg.edges:
        if len(set(e)) != len(e):
            raise LoopPresent(f"edge {e} repeats a vertex")
    order = sorted(range(len(hg.edges)), key=lambda i: (hg.edges[i], i))
    cols = []
    for i in order:
        mask = 0
        for v in hg.edges[i]:
            mask |= 1 << v
        cols.append(mask)
    return BipartiteGraph(hg.n, len(cols), cols)


def _structure_from_cols(n_left: int, cols: tuple[int, ...]):
    """One-pass structural scan: 4-cycles plus the 3x2 / 2x3 pattern flags.

    Returns (cycles, has_k32, has_k23) where cycles is the sorted list of
    (j1, j2, i1, i2) tuples.
    """
    rows: dict[int, list[int]] = {}
    for i, c in enumerate(cols):
        for j in _bits(c):
            rows.setdefault(j, []).append(i)

    right_pair_lefts: dict[tuple[int, int], list[int]] = {}
    for j, nbrs in rows.items():
        for pair in combinations(nbrs, 2):
            right_pair_lefts.setdefault(pair, []).append(j)

    left_pair_count: Counter = Counter()
    for c in cols:
        for pair in combinations(tuple(_bits(c)), 2):
            left_pair_count[pair] += 1

    has_k32 = any(len(ls) >= 3 for ls in right_pair_lefts.values())
    has_k23 = any(v >= 3 for v in left_pair_count.values())

    cycles = []
    for (i1, i2), lefts in right_pair_lefts.items():
        if len(lefts) >= 2:
            for j1, j2 in combinations(lefts, 2):
                cycles.append((j1, j2, i1, i2))
    cycles.sort()
    return cycles, has_k32, has_k23


def _battery_from_cols(n_left: int, cols: tuple[int, ...], n2: int):
    """Evaluate the property battery on raw columns.

    Returns (cycles, failed, in_b0).  This is the single implementation behind
    both the public classifier and the exhaustive oracle's hot loop.
    """
    cycles, has_k32, has_k23 = _structure_from_cols(n_left, cols)
    failed = set()
    if has_k32:
        failed.add("i")
    if has_k23:
        failed.add("ii")

    right_use: Counter = Counter()
    for _, _, i1, i2 in cycles:
        right_use[i1] += 1
        right_use[i2] += 1
    if any(v >= 2 for v in right_use.values()):
        failed.add("iii")

    if len(cycles) >= 3:
        for trio in combinations(cycles, 3):
            lefts = {trio[0][0], trio[0][1], trio[1][0], trio[1][1], trio[2][0], trio[2][1]}
            if len(lefts) < 5:
                failed.add("iv")
                break

    if len(cycles) > n2:
        failed.add("v")

    in_b0 = len(set(cols)) == len(cols)
    return cycles, failed, in_b0


def classify(graph: BipartiteGraph, ds: DegreeSequence) -> Classification:
    """Run the full five-property battery on a graph conforming to ds."""
    if not graph.conforms(ds):
        raise NonConforming(
            f"graph degrees {graph.left_degrees()}/{graph.right_degrees()} "
            f"do not conform to r={ds.r}, k={ds.k}"
        )
    n2 = ds.thresholds().n2 if ds.M >= 2 else 0
    cycles, failed, in_b0 = _battery_from_cols(graph.n_left, graph.cols, n2)
    four = tuple(FourCycle((j1, j2), (i1, i2)) for j1, j2, i1, i2 in cycles)
    return Classification(
        four_cycles=four,
        d=len(four),
        in_b0=in_b0,
        in_bplus=not failed,
        failed_properties=frozenset(failed),
    )


def hyper_properties(hg: Hypergraph) -> HyperProperties:
    """Loops, repeated edges, link multiplicities, simplicity and linearity."""
    loops = 0
    link_mult: Counter = Counter()
    for e in hg.edges:
        mult_in_edge = Counter(e)
        loops += sum(1 for v, c in mult_in_edge.items() if c >= 2)
        links = set()
        vals = sorted(mult_in_edge)
        for x, y in combinations(vals, 2):
            links.add((x, y))
        for v, c in mult_in_edge.items():
            if c >= 2:
                links.add((v, v))
        for link in links:
            link_mult[link] += 1

    repeated = len(hg.edges) - len(set(hg.edges))
    max_mult = max(link_mult.values(), default=0)
    doubles = tuple(sorted(link for link, c in link_mult.items() if c == 2))
    is_simple = loops == 0 and repeated == 0
    is_linear = loops == 0 and max_mult <= 1
    return HyperProperties(
        loops=loops,
        repeated_edges=repeated,
        max_link_multiplicity=max_mult,
        double_links=doubles,
        is_simple=is_simple,
        is_linear=is_linear,
    )


def dual_failed_properties(hg: Hypergraph, n2: int) -> set[str]:
    """Hypergraph-side analogues of the five-property battery.

    Input must be loop-free (which incidence graphs guarantee).  Returns the
    set of failed properties among {"i'", "ii'", "iii'", "iv'", "v'"}:

      i'    some two edges share three or more vertices,
      ii'   some link has multiplicity three or more,
      iii'  some edge contains two double links,
      iv'   some vertex lies in three double links, or lies in two whose other
            endpoints are themselves in more than one double link,
      v'    more than n2 double links.
    """
    props = hyper_properties(hg)
    if props.loops:
        raise LoopPresent("dual property battery requires a loop-free hypergraph")
    failed: set[str] = set()

    for e1, e2 in combinations(hg.edges, 2):
        if len(set(e1) & set(e2)) >= 3:
            failed.add("i'")
            break

    if props.max_link_multiplicity >= 3:
        failed.add("ii'")

    doubles = props.double_links
    double_set = set(doubles)
    for e in hg.edges:
        contained = sum(1 for link in double_set if link[0] in e and link[1] in e)
        if contained >= 2:
            failed.add("iii'")
            break

    per_vertex: Counter = Counter()
    for x, y in doubles:
        per_vertex[x] += 1
        per_vertex[y] += 1
    if any(c >= 3 for c in per_vertex.values()):
        failed.add("iv'")
    else:
        for v, c in per_vertex.items():
            if c == 2:
                others = [x if y == v else y for x, y in doubles if v in (x, y)]
                if any(per_vertex[o] != 1 for o in others):
                    failed.add("iv'")
                    break

    if len(doubles) > n2:
        failed.add("v'")
    return failed
