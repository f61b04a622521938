"""Independent reference oracles used by the tests.

Everything here recomputes quantities by a route different from the library
code it checks: naive all-pairs scans, margin-class dynamic programming,
column-multiset enumeration, and a transformation-based counter for the
2-regular scaling family.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from linhyper import DegreeSequence
from linhyper.bigraph_core import BipartiteGraph, _bits


def naive_four_cycles(graph: BipartiteGraph) -> list[tuple[int, int, int, int]]:
    """O(n^2 m^2) all-pairs 4-cycle scan."""
    out = []
    for j1, j2 in combinations(range(graph.n_left), 2):
        for i1, i2 in combinations(range(graph.n_right), 2):
            if (
                graph.has_edge(j1, i1)
                and graph.has_edge(j1, i2)
                and graph.has_edge(j2, i1)
                and graph.has_edge(j2, i2)
            ):
                out.append((j1, j2, i1, i2))
    return out


def all_pairs_distances(graph: BipartiteGraph) -> dict:
    """BFS from every vertex; keys are ("v", j) / ("e", i) vertex tags."""
    verts = [("v", j) for j in range(graph.n_left)] + [
        ("e", i) for i in range(graph.n_right)
    ]
    dist = {}
    for start in verts:
        d = {start: 0}
        queue = deque([start])
        while queue:
            side, idx = queue.popleft()
            nd = d[(side, idx)] + 1
            if side == "v":
                nbrs = [("e", i) for i in _bits(graph.rows[idx])]
            else:
                nbrs = [("v", j) for j in _bits(graph.cols[idx])]
            for nxt in nbrs:
                if nxt not in d:
                    d[nxt] = nd
                    queue.append(nxt)
        dist[start] = d
    return dist


def count_by_multiset(ds: DegreeSequence) -> int:
    """Conforming-graph count via unordered column multisets times the
    multinomial number of column orderings."""
    n, r = ds.n, ds.r
    m = ds.edge_count()
    cands = []
    for combo in combinations(range(n), r):
        mask = 0
        for v in combo:
            mask |= 1 << v
        cands.append(mask)
    total = 0
    for chosen in combinations_with_replacement(cands, m):
        deg = [0] * n
        for mask in chosen:
            for j in _bits(mask):
                deg[j] += 1
        if tuple(deg) == ds.k:
            mult = Counter(chosen)
            ways = math.factorial(m)
            for c in mult.values():
                ways //= math.factorial(c)
            total += ways
    return total


def count_matrices_by_classes(classes: Counter, r: int, m: int) -> int:
    """0-1 matrices with given row-sum classes (residual -> row count) and m
    columns of sum r, counted by dynamic programming over residual classes."""
    init = tuple(
        sorted((res, cnt) for res, cnt in classes.items() if res > 0 and cnt > 0)
    )

    @lru_cache(maxsize=None)
    def go(state, cols_left):
        total_residual = sum(res * cnt for res, cnt in state)
        if cols_left == 0:
            return 1 if total_residual == 0 else 0
        if total_residual != r * cols_left:
            return 0
        if max((res for res, _ in state), default=0) > cols_left:
            return 0
        out = 0
        state_list = list(state)

        def pick(idx, need, ways, taken_counts):
            nonlocal out
            if need == 0:
                taken_all = taken_counts + [0] * (len(state_list) - len(taken_counts))
                nxt = Counter()
                for (res, cnt), taken in zip(state_list, taken_all):
                    if cnt - taken > 0:
                        nxt[res] += cnt - taken
                    if taken and res - 1 > 0:
                        nxt[res - 1] += taken
                out += ways * go(tuple(sorted(nxt.items())), cols_left - 1)
                return
            if idx == len(state_list):
                return
            res, cnt = state_list[idx]
            for take in range(min(cnt, need) + 1):
                taken_counts.append(take)
                pick(idx + 1, need - take, ways * math.comb(cnt, take), taken_counts)
                taken_counts.pop()

        pick(0, r, 1, [])
        return out

    return go(init, m)


def count_b_dp(ds: DegreeSequence) -> int:
    return count_matrices_by_classes(
        Counter(v for v in ds.k if v > 0), ds.r, ds.edge_count()
    )


def k32_expectation_dp(ds: DegreeSequence) -> Fraction:
    """Exact expected number of complete 3x2 subgraph copies for r = 3.

    Works at degree sums far beyond the enumeration guard: for r = 3 a column
    containing a fixed left triple equals that triple, so both pattern columns
    are fully determined and the remaining columns are a plain margin count.
    """
    r, m = ds.r, ds.edge_count()
    if r != 3:
        raise ValueError("closed-form placement reduction implemented for r=3 only")
    total_b = count_b_dp(ds)
    if total_b == 0:
        raise ValueError("no conforming graphs")
    classes = Counter(v for v in ds.k if v > 0)
    total = Fraction(0)
    degs = sorted(set(v for v in ds.k if v >= 2))
    for trip in combinations_with_replacement(degs, 3):
        trip_mult = Counter(trip)
        ways = 1
        for deg, cnt in trip_mult.items():
            ways *= math.comb(classes[deg], cnt)
        if ways == 0:
            continue
        reduced = Counter(classes)
        for deg, cnt in trip_mult.items():
            reduced[deg] -= cnt
            if deg - 2 > 0:
                reduced[deg - 2] += cnt
        reduced = Counter({res: c for res, c in reduced.items() if c > 0 and res > 0})
        completions = count_matrices_by_classes(reduced, r, m - 2)
        total += Fraction(math.comb(m, 2) * ways * completions, total_b)
    return total


def regular_multigraph_counts(m: int, degree: int = 3, max_doubles: int = 1):
    """Vertex-labeled loopless multigraphs on m vertices, all degrees equal,
    multiplicities at most 2, counted by number of doubled pairs.

    For a 2-regular degree sequence, hypergraphs correspond to these
    multigraphs on the edge set (hypergraph vertices become multigraph edges,
    double links become doubled pairs), giving exact 4-cycle-class counts far
    beyond the enumeration guard:  |C_d| = n! * S_d / 2^d.
    """

    @lru_cache(maxsize=None)
    def count_from(residuals):
        if not residuals:
            return (1,) + (0,) * max_doubles
        need = residuals[0]
        rest = residuals[1:]
        if need == 0:
            return count_from(rest)
        if not rest:
            return (0,) * (max_doubles + 1)
        total = [0] * (max_doubles + 1)
        caps = list(rest)

        def assign(idx, left, doubles):
            if left == 0:
                sub = count_from(tuple(caps))
                for dd in range(max_doubles + 1 - doubles):
                    total[dd + doubles] += sub[dd]
                return
            if idx == len(caps):
                return
            cap = min(2, left, caps[idx])
            for mult in range(cap + 1):
                caps[idx] -= mult
                assign(idx + 1, left - mult, doubles + (1 if mult == 2 else 0))
                caps[idx] += mult

        assign(0, need, 0)
        return tuple(total)

    return count_from(tuple([degree] * m))


def count_simple_graphs_with_degrees(deg, forbidden=frozenset()) -> int:
    """Simple labeled graphs with the given degrees, avoiding forbidden pairs.

    Third, fully independent route used to validate the multigraph counter:
    a doubled pair plus a simple completion avoiding that pair realizes each
    one-double multigraph exactly once.
    """
    n = len(deg)
    residual = list(deg)
    count = 0

    def rec(v):
        nonlocal count
        if v == n:
            count += 1
            return
        need = residual[v]
        later = [
            w
            for w in range(v + 1, n)
            if residual[w] > 0 and (v, w) not in forbidden
        ]
        if need > len(later):
            return
        for chosen in combinations(later, need):
            for w in chosen:
                residual[w] -= 1
            residual[v] = 0
            rec(v + 1)
            residual[v] = need
            for w in chosen:
                residual[w] += 1

    rec(0)
    return count


def sweep_switchings(ds: DegreeSequence, spot_check_every: int = 211):
    """Exhaustive switching audit of one instance.

    Enumerates every conforming graph; for each well-behaved one, every
    suitable 8-tuple defining a forward switch (4-cycle present in all four
    orderings plus the two pendant edges) and every suitable 8-tuple defining
    a reverse switch (the six required edges present).  For each tuple it
    evaluates the explanatory illegality conditions from precomputed
    distances, establishes ground-truth legality by rewiring and
    reclassifying, and checks the round trip.  Every ``spot_check_every``-th
    tuple is also routed through the public check_forward / check_reverse
    for agreement.

    Returns (stats, legal_forward_by_d, legal_reverse_by_d); the two count
    the same legal (B, B', T) triples from both ends, so matching totals per
    d are a strong correctness check.
    """
    import linhyper as lh
    from linhyper import SwitchTuple, check_forward, check_reverse
    from linhyper.bigraph_core import _battery_from_cols

    n2 = ds.thresholds().n2
    graphs_by_d: dict[int, list] = {}

    def collect(graph):
        cycles, failed, _ = _battery_from_cols(graph.n_left, graph.cols, n2)
        if not failed:
            graphs_by_d.setdefault(len(cycles), []).append((graph, cycles))

    lh.enumerate_bigraphs(ds, visitor=collect)

    stats = Counter()
    legal_fwd: Counter = Counter()
    legal_rev: Counter = Counter()

    for d, items in sorted(graphs_by_d.items()):
        for graph, cycles in items:
            dist = all_pairs_distances(graph)
            edges = graph.edges()
            rights_on = {i for c in cycles for i in (c[2], c[3])}
            lefts_on = {j for c in cycles for j in (c[0], c[1])}

            def dist_le3(j, i):
                dd = dist[("v", j)].get(("e", i))
                return dd is not None and dd <= 3

            if d >= 1:
                for a, b, x, y in cycles:
                    for u1, u2, f1, f2 in (
                        (a, b, x, y),
                        (a, b, y, x),
                        (b, a, x, y),
                        (b, a, y, x),
                    ):
                        for w1, g1 in edges:
                            if w1 in (u1, u2) or g1 in (f1, f2):
                                continue
                            for w2, g2 in edges:
                                if w2 in (u1, u2, w1) or g2 in (f1, f2, g1):
                                    continue
                                stats["forward_tuples"] += 1
                                conds = set()
                                if g1 in rights_on or g2 in rights_on:
                                    conds.add("I")
                                if (
                                    dist_le3(u1, g1)
                                    or dist_le3(u2, g2)
                                    or dist_le3(w1, f1)
                                    or dist_le3(w2, f2)
                                ):
                                    conds.add("II")
                                if dist[("e", g1)].get(("e", g2)) == 2:
                                    conds.add("III")
                                applicable = not (
                                    graph.has_edge(u1, g1)
                                    or graph.has_edge(u2, g2)
                                    or graph.has_edge(w1, f1)
                                    or graph.has_edge(w2, f2)
                                )
                                legal = False
                                if applicable:
                                    switched = graph.replace_edges(
                                        remove=[(u1, f1), (u2, f2), (w1, g1), (w2, g2)],
                                        add=[(u1, g1), (u2, g2), (w1, f1), (w2, f2)],
                                    )
                                    c2, failed2, _ = _battery_from_cols(
                                        switched.n_left, switched.cols, n2
                                    )
                                    legal = (not failed2) and len(c2) == d - 1
                                    back = switched.replace_edges(
                                        remove=[(u1, g1), (u2, g2), (w1, f1), (w2, f2)],
                                        add=[(u1, f1), (u2, f2), (w1, g1), (w2, g2)],
                                    )
                                    if back != graph:
                                        stats["involution_failures"] += 1
                                if legal:
                                    legal_fwd[d] += 1
                                if not legal and not conds:
                                    stats["unexplained_illegal"] += 1
                                if applicable and stats["forward_tuples"] % spot_check_every == 0:
                                    t = SwitchTuple(u1, u2, w1, w2, f1, f2, g1, g2)
                                    verdict = check_forward(graph, t)
                                    if verdict.legal != legal:
                                        stats["api_mismatches"] += 1
            if d + 1 <= n2:
                row_nbrs = [tuple(_bits(r)) for r in graph.rows]
                col_nbrs = [tuple(_bits(c)) for c in graph.cols]
                for u1 in range(graph.n_left):
                    for gg1 in row_nbrs[u1]:
                        for f2 in row_nbrs[u1]:
                            if f2 == gg1:
                                continue
                            for u2 in range(graph.n_left):
                                if u2 == u1:
                                    continue
                                for gg2 in row_nbrs[u2]:
                                    if gg2 in (gg1, f2):
                                        continue
                                    for f1 in row_nbrs[u2]:
                                        if f1 in (gg1, gg2, f2):
                                            continue
                                        for w1 in col_nbrs[f1]:
                                            if w1 in (u1, u2):
                                                continue
                                            for w2 in col_nbrs[f2]:
                                                if w2 in (u1, u2, w1):
                                                    continue
                                                stats["reverse_tuples"] += 1
                                                conds = set()
                                                if (
                                                    u1 in lefts_on
                                                    or u2 in lefts_on
                                                    or f1 in rights_on
                                                    or f2 in rights_on
                                                    or gg1 in rights_on
                                                    or gg2 in rights_on
                                                ):
                                                    conds.add("I'")
                                                if (
                                                    dist_le3(u1, f1)
                                                    or dist_le3(u2, f2)
                                                    or dist_le3(w1, gg1)
                                                    or dist_le3(w2, gg2)
                                                ):
                                                    conds.add("II'")
                                                applicable = not (
                                                    graph.has_edge(u1, f1)
                                                    or graph.has_edge(u2, f2)
                                                    or graph.has_edge(w1, gg1)
                                                    or graph.has_edge(w2, gg2)
                                                )
                                                legal = False
                                                if applicable:
                                                    switched = graph.replace_edges(
                                                        remove=[
                                                            (u1, gg1),
                                                            (u2, gg2),
                                                            (w1, f1),
                                                            (w2, f2),
                                                        ],
                                                        add=[
                                                            (u1, f1),
                                                            (u2, f2),
                                                            (w1, gg1),
                                                            (w2, gg2),
                                                        ],
                                                    )
                                                    c3, failed3, _ = _battery_from_cols(
                                                        switched.n_left, switched.cols, n2
                                                    )
                                                    legal = (
                                                        not failed3
                                                    ) and len(c3) == d + 1
                                                    back = switched.replace_edges(
                                                        remove=[
                                                            (u1, f1),
                                                            (u2, f2),
                                                            (w1, gg1),
                                                            (w2, gg2),
                                                        ],
                                                        add=[
                                                            (u1, gg1),
                                                            (u2, gg2),
                                                            (w1, f1),
                                                            (w2, f2),
                                                        ],
                                                    )
                                                    if back != graph:
                                                        stats["involution_failures"] += 1
                                                if legal:
                                                    legal_rev[d + 1] += 1
                                                if not legal and not conds:
                                                    stats["unexplained_illegal"] += 1
                                                if (
                                                    applicable
                                                    and stats["reverse_tuples"]
                                                    % spot_check_every
                                                    == 0
                                                ):
                                                    t = SwitchTuple(
                                                        u1, u2, w1, w2, f1, f2, gg1, gg2
                                                    )
                                                    verdict = check_reverse(graph, t)
                                                    if verdict.legal != legal:
                                                        stats["api_mismatches"] += 1
    return stats, dict(legal_fwd), dict(legal_rev)


def scaling_family_ratio(n: int) -> Fraction | None:
    """Exact |C_1| / |C_0| for the 2-regular, edge-size-3 family, or None
    when |C_0| = 0."""
    if n % 3 != 0:
        raise ValueError("family needs 3 | n so that 3 | M = 2n")
    m = 2 * n // 3
    s0, s1 = regular_multigraph_counts(m)
    if s0 == 0:
        return None
    return Fraction(s1, 2 * s0)
