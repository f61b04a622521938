"""Brute-force enumeration of all conforming objects at desk scale.

This module is the ground truth everything else is tested against.  Two
independent search routes are implemented:

* column-by-column backtracking over ordered incidence columns (bipartite
  route), pruned on residual degree feasibility, and
* strictly-increasing backtracking over edge sets (hypergraph route).

The counting identities tying the two routes together are asserted inside
``full_report`` and raise InvariantViolation on any mismatch, which always
means an implementation bug rather than bad input.

Instances are admitted through a resource guard: by default degree sums up
to 16 and up to 10 vertices of positive degree.  Exceeding the guard is an
error, never a silent truncation.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .asymptotics import mckay_upper_bound
from .bigraph_core import (
    BipartiteGraph,
    _battery_from_cols,
    _bits,
    _structure_from_cols,
)
from .degree_model import DegreeSequence
from .errors import InvariantViolation, TooLarge

DEFAULT_MAX_SPACE = 16


class ClassFilter(Enum):
    ALL = "all"
    B0 = "b0"
    BPLUS = "bplus"
    NO_FOUR_CYCLE = "no_four_cycle"


class Pattern(Enum):
    K32 = "k32"
    K23 = "k23"
    TWO_FOUR_CYCLES_SHARED_RIGHT = "two_four_cycles_shared_right"
    THREE_FOUR_CYCLES_FOUR_LEFT = "three_four_cycles_four_left"


@dataclass(frozen=True)
class OracleReport:
    """All exact counts for one instance, with the 4-cycle profile."""

    count_b: int
    count_b0: int
    count_bplus: int
    count_h: int
    count_l: int
    cd_profile: tuple[int, ...]

    def to_json_dict(self) -> dict:
        # counts as decimal strings: they are exact and may exceed 2^53
        return {
            "count_b": str(self.count_b),
            "count_b0": str(self.count_b0),
            "count_bplus": str(self.count_bplus),
            "count_h": str(self.count_h),
            "count_l": str(self.count_l),
            "cd_profile": [str(c) for c in self.cd_profile],
        }


def check_guard(ds: DegreeSequence, max_space: int = DEFAULT_MAX_SPACE) -> None:
    """Reject instances whose exhaustive search space is out of budget.

    The budget is expressed through the degree sum: M <= max_space, plus a
    cap of max(10, max_space) vertices of positive degree.  Zero-degree
    vertices are free: they never enter a column.
    """
    n_pos = sum(1 for v in ds.k if v > 0)
    if ds.M > max_space:
        raise TooLarge(
            f"degree sum M={ds.M} exceeds the search guard ({max_space}); "
            f"raise --max-space to override"
        )
    if n_pos > max(10, max_space):
        raise TooLarge(
            f"{n_pos} vertices of positive degree exceed the search guard"
        )


def _subset_masks(n: int, r: int) -> list[int]:
    masks = []
    for combo in combinations(range(n), r):
        m = 0
        for v in combo:
            m |= 1 << v
        masks.append(m)
    return masks


def _column_sweep(k, r, m, leaf, prefix=(), b0_prune=False, no4_prune=False):
    """Visit every ordered column tuple conforming to (k, r).

    Columns are filled left to right, each chosen as an r-subset of the
    vertices with positive residual degree, in lexicographic order; pruning
    keeps max residual <= remaining columns and forces vertices whose
    residual equals the number of remaining columns into the current column.
    """
    n = len(k)
    cands = _subset_masks(n, r)
    residual = list(k)
    cols: list[int] = []
    seen: set[int] = set()

    for mask in prefix:
        for j in _bits(mask):
            residual[j] -= 1
            if residual[j] < 0:
                raise ValueError("infeasible sweep prefix")
        cols.append(mask)
        if b0_prune:
            seen.add(mask)

    def rec(depth: int) -> None:
        if depth == m:
            leaf(cols)
            return
        remaining = m - depth
        forced = 0
        zero = 0
        for j in range(n):
            v = residual[j]
            if v == remaining:
                forced |= 1 << j
            elif v == 0:
                zero |= 1 << j
        if forced.bit_count() > r:
            return
        for mask in cands:
            if mask & zero:
                continue
            if mask & forced != forced:
                continue
            if b0_prune and mask in seen:
                continue
            if no4_prune and any((mask & c).bit_count() >= 2 for c in cols):
                continue
            for j in _bits(mask):
                residual[j] -= 1
            if max(residual, default=0) <= remaining - 1:
                cols.append(mask)
                if b0_prune:
                    seen.add(mask)
                rec(depth + 1)
                if b0_prune:
                    seen.discard(mask)
                cols.pop()
            for j in _bits(mask):
                residual[j] += 1

    rec(len(prefix))


def _first_columns(k, r, m) -> list[int]:
    """Valid first-column choices, used to fan the sweep out across workers."""
    first: list[int] = []

    def leaf(cols):  # pragma: no cover - only reached when m == 0
        pass

    n = len(k)
    residual = list(k)
    forced = 0
    zero = 0
    for j in range(n):
        if residual[j] == m:
            forced |= 1 << j
        elif residual[j] == 0:
            zero |= 1 << j
    if forced.bit_count() > r:
        return []
    for mask in _subset_masks(n, r):
        if mask & zero or mask & forced != forced:
            continue
        rem = list(residual)
        for j in _bits(mask):
            rem[j] -= 1
        if max(rem, default=0) <= m - 1:
            first.append(mask)
    return first


class _ReportCounts:
    def __init__(self, n_left: int, n2: int):
        self.n_left = n_left
        self.n2 = n2
        self.b = 0
        self.b0 = 0
        self.bplus = 0
        self.cd = [0] * (n2 + 1)

    def leaf(self, cols) -> None:
        self.b += 1
        cycles, failed, in_b0 = _battery_from_cols(self.n_left, tuple(cols), self.n2)
        if in_b0:
            self.b0 += 1
        if not failed:
            self.bplus += 1
            self.cd[len(cycles)] += 1


def _report_branch(args):
    k, r, m, n_left, n2, first = args
    counts = _ReportCounts(n_left, n2)
    _column_sweep(k, r, m, counts.leaf, prefix=(first,))
    return counts.b, counts.b0, counts.bplus, counts.cd


def enumerate_bigraphs(
    ds: DegreeSequence,
    visitor=None,
    class_filter: ClassFilter = ClassFilter.ALL,
    *,
    max_space: int = DEFAULT_MAX_SPACE,
) -> int:
    """Visit every conforming labeled bipartite graph passing the filter.

    Columns are labeled (ordered), so two graphs differing only in column
    order are distinct.  Returns the number of graphs passing the filter;
    ``visitor`` (if given) is called with each passing BipartiteGraph.
    """
    m = ds.edge_count()
    check_guard(ds, max_space)
    n2 = ds.thresholds().n2 if ds.M >= 2 else 0
    n = ds.n
    count = 0

    b0_prune = class_filter is ClassFilter.B0
    no4_prune = class_filter is ClassFilter.NO_FOUR_CYCLE

    def leaf(cols) -> None:
        nonlocal count
        if class_filter is ClassFilter.BPLUS:
            _, failed, _ = _battery_from_cols(n, tuple(cols), n2)
            if failed:
                return
        count += 1
        if visitor is not None:
            visitor(BipartiteGraph(n, m, list(cols)))

    _column_sweep(ds.k, ds.r, m, leaf, b0_prune=b0_prune, no4_prune=no4_prune)
    return count


def _hyper_sweep(ds: DegreeSequence, leaf, linear_only: bool = False) -> None:
    """Visit sets of m distinct r-subsets with the given degree sum.

    Edges are generated in strictly increasing lexicographic order, so every
    simple hypergraph is reached exactly once.  ``leaf`` receives
    (edge_tuples, edge_masks, pair_count, violations) where ``violations``
    counts repeated vertex-pair usages (zero iff the hypergraph is linear).
    """
    n, r = ds.n, ds.r
    m = ds.edge_count()
    combos = list(combinations(range(n), r))
    masks = _subset_masks(n, r)
    ncand = len(combos)
    residual = list(ds.k)
    pair_count: Counter = Counter()
    edge_stack: list[tuple[int, ...]] = []
    mask_stack: list[int] = []

    def rec(depth: int, start: int, violations: int) -> None:
        if depth == m:
            leaf(edge_stack, mask_stack, pair_count, violations)
            return
        remaining = m - depth
        forced = 0
        zero = 0
        for j in range(n):
            v = residual[j]
            if v == remaining:
                forced |= 1 << j
            elif v == 0:
                zero |= 1 << j
        if forced.bit_count() > r:
            return
        for idx in range(start, ncand):
            mask = masks[idx]
            if mask & zero or mask & forced != forced:
                continue
            combo = combos[idx]
            for j in combo:
                residual[j] -= 1
            if max(residual, default=0) <= remaining - 1:
                viol_add = 0
                pairs = list(combinations(combo, 2))
                for p in pairs:
                    if pair_count[p]:
                        viol_add += 1
                    pair_count[p] += 1
                if not (linear_only and violations + viol_add > 0):
                    edge_stack.append(combo)
                    mask_stack.append(mask)
                    rec(depth + 1, idx + 1, violations + viol_add)
                    edge_stack.pop()
                    mask_stack.pop()
                for p in pairs:
                    pair_count[p] -= 1
            for j in combo:
                residual[j] += 1

    rec(0, 0, 0)


def count_hypergraphs(
    ds: DegreeSequence, *, max_space: int = DEFAULT_MAX_SPACE
) -> tuple[int, int]:
    """Exact (simple, linear) hypergraph counts by direct edge-set search.

    Entirely independent of the bipartite column sweep; the two routes are
    reconciled in ``full_report``.
    """
    ds.edge_count()
    check_guard(ds, max_space)
    count_h = 0
    count_l = 0

    def leaf(edges, masks, pair_count, violations):
        nonlocal count_h, count_l
        count_h += 1
        if violations == 0:
            count_l += 1

    _hyper_sweep(ds, leaf)
    return count_h, count_l


def count_linear_hypergraphs(
    ds: DegreeSequence, *, max_space: int = DEFAULT_MAX_SPACE
) -> int:
    """Linear-hypergraph count with linearity used as a pruning rule.

    Much faster than ``count_hypergraphs`` when the linear fraction is small;
    must agree with its second component.
    """
    ds.edge_count()
    check_guard(ds, max_space)
    count = 0

    def leaf(edges, masks, pair_count, violations):
        nonlocal count
        count += 1

    _hyper_sweep(ds, leaf, linear_only=True)
    return count


def hyper_class_profile(
    ds: DegreeSequence, *, max_space: int = DEFAULT_MAX_SPACE
) -> tuple[int, ...]:
    """Count well-behaved hypergraphs by their number of double links.

    Entry d is the number of simple hypergraphs with degree sequence k that
    pass the hypergraph-side property battery and have exactly d double
    links.  Multiplying entry d by (M/r)! must reproduce the bipartite
    4-cycle profile; that identity is exercised in the test-suite.
    """
    m = ds.edge_count()
    check_guard(ds, max_space)
    n2 = ds.thresholds().n2 if ds.M >= 2 else 0
    profile = [0] * (n2 + 1)

    def leaf(edges, masks, pair_count, violations):
        doubles = [p for p, c in pair_count.items() if c == 2]
        d = len(doubles)
        if d > n2:
            return
        if any(c >= 3 for c in pair_count.values()):
            return
        for ma, mb in combinations(masks, 2):
            if (ma & mb).bit_count() >= 3:
                return
        for mask in masks:
            contained = 0
            for x, y in doubles:
                if mask >> x & 1 and mask >> y & 1:
                    contained += 1
                    if contained >= 2:
                        return
        per_vertex: Counter = Counter()
        for x, y in doubles:
            per_vertex[x] += 1
            per_vertex[y] += 1
        if any(c >= 3 for c in per_vertex.values()):
            return
        for v, c in per_vertex.items():
            if c == 2:
                for x, y in doubles:
                    if v in (x, y) and per_vertex[x if y == v else y] != 1:
                        return
        profile[d] += 1

    _hyper_sweep(ds, leaf)
    return tuple(profile)


def full_report(
    ds: DegreeSequence,
    *,
    max_space: int = DEFAULT_MAX_SPACE,
    workers: int = 1,
) -> OracleReport:
    """All exact counts in one sweep, with every internal identity asserted.

    With ``workers > 1`` the bipartite sweep fans out over the choices of the
    first column; totals are merged by summation and do not depend on the
    worker count.
    """
    m = ds.edge_count()
    check_guard(ds, max_space)
    n2 = ds.thresholds().n2 if ds.M >= 2 else 0

    counts = _ReportCounts(ds.n, n2)
    if workers > 1 and m > 0:
        firsts = _first_columns(ds.k, ds.r, m)
        tasks = [(ds.k, ds.r, m, ds.n, n2, f) for f in firsts]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for b, b0, bplus, cd in pool.map(_report_branch, tasks):
                counts.b += b
                counts.b0 += b0
                counts.bplus += bplus
                for d, c in enumerate(cd):
                    counts.cd[d] += c
    else:
        _column_sweep(ds.k, ds.r, m, counts.leaf)

    count_h, count_l = count_hypergraphs(ds, max_space=max_space)

    report = OracleReport(
        count_b=counts.b,
        count_b0=counts.b0,
        count_bplus=counts.bplus,
        count_h=count_h,
        count_l=count_l,
        cd_profile=tuple(counts.cd),
    )
    _assert_report_invariants(report, m)
    return report


def _assert_report_invariants(report: OracleReport, m: int) -> None:
    fact = math.factorial(m)
    if report.count_b0 != fact * report.count_h:
        raise InvariantViolation(
            f"(M/r)! * |H| = {fact}*{report.count_h} != |B0| = {report.count_b0}"
        )
    if sum(report.cd_profile) != report.count_bplus:
        raise InvariantViolation("4-cycle profile does not sum to |B+|")
    if report.cd_profile[0] != fact * report.count_l:
        raise InvariantViolation(
            f"|C0| = {report.cd_profile[0]} != (M/r)! * |L| = {fact}*{report.count_l}"
        )
    if not report.count_l <= report.count_h:
        raise InvariantViolation("|L| > |H|")
    if not report.count_bplus <= report.count_b0 <= report.count_b:
        raise InvariantViolation("|B+| <= |B0| <= |B| violated")


def _occurrences_from_cols(n_left: int, cols: tuple[int, ...], pattern: Pattern) -> int:
    """Number of labeled occurrences of the pattern in one graph.

    The two composite patterns count configurations of 4-cycles: pairs of
    distinct 4-cycles sharing exactly one right vertex (and not riding on the
    same left pair), and triples of 4-cycles that are pairwise right-disjoint,
    have pairwise distinct left pairs, and involve at most four left vertices.
    """
    if pattern is Pattern.K32:
        total = 0
        for c1, c2 in combinations(cols, 2):
            t = (c1 & c2).bit_count()
            if t >= 3:
                total += math.comb(t, 3)
        return total
    if pattern is Pattern.K23:
        cnt: Counter = Counter()
        for c in cols:
            for p in combinations(tuple(_bits(c)), 2):
                cnt[p] += 1
        return sum(math.comb(v, 3) for v in cnt.values() if v >= 3)

    cycles, _, _ = _structure_from_cols(n_left, cols)
    if pattern is Pattern.TWO_FOUR_CYCLES_SHARED_RIGHT:
        total = 0
        for a, b in combinations(cycles, 2):
            shared_right = len({a[2], a[3]} & {b[2], b[3]})
            if shared_right == 1 and (a[0], a[1]) != (b[0], b[1]):
                total += 1
        return total
    if pattern is Pattern.THREE_FOUR_CYCLES_FOUR_LEFT:
        total = 0
        for a, b, c in combinations(cycles, 3):
            pairs = {(a[0], a[1]), (b[0], b[1]), (c[0], c[1])}
            if len(pairs) < 3:
                continue
            rights = {a[2], a[3], b[2], b[3], c[2], c[3]}
            if len(rights) < 6:
                continue
            lefts = {a[0], a[1], b[0], b[1], c[0], c[1]}
            if len(lefts) <= 4:
                total += 1
        return total
    raise ValueError(f"unknown pattern {pattern!r}")


def pattern_expectation(
    ds: DegreeSequence, pattern: Pattern, *, max_space: int = DEFAULT_MAX_SPACE
) -> Fraction:
    """Exact expected number of labeled occurrences of the pattern in a
    uniformly random conforming bipartite graph."""
    m = ds.edge_count()
    check_guard(ds, max_space)
    total = 0
    graphs = 0

    def leaf(cols):
        nonlocal total, graphs
        graphs += 1
        total += _occurrences_from_cols(ds.n, tuple(cols), pattern)

    _column_sweep(ds.k, ds.r, m, leaf)
    if graphs == 0:
        raise ValueError("no conforming graphs exist; expectation undefined")
    return Fraction(total, graphs)


def pattern_upper_bound(ds: DegreeSequence, pattern: Pattern) -> Fraction:
    """Sum of the per-placement containment bounds over all placements of
    the pattern.

    Placements are enumerated explicitly, so this is meant for desk-scale
    instances.  Raises PreconditionFailed when placements exist but the
    containment bound's hypothesis fails on this instance.
    """
    m = ds.edge_count()
    n, r, k = ds.n, ds.r, ds.k
    g_left = list(k)
    g_right = [r] * m
    total = Fraction(0)

    def bound(left_deg: dict[int, int], right_degs: list[int]) -> Fraction:
        l_left = [0] * n
        for j, v in left_deg.items():
            l_left[j] = v
        l_right = [0] * m
        for slot, v in enumerate(right_degs):
            l_right[slot] = v
        return mckay_upper_bound(g_left, g_right, l_left, l_right)

    if pattern is Pattern.K32:
        if m >= 2 and n >= 3:
            pairs = math.comb(m, 2)
            for trio in combinations(range(n), 3):
                total += pairs * bound({j: 2 for j in trio}, [3, 3])
        return total
    if pattern is Pattern.K23:
        if m >= 3 and n >= 2:
            rights = math.comb(m, 3)
            for duo in combinations(range(n), 2):
                total += rights * bound({j: 3 for j in duo}, [2, 2, 2])
        return total
    if pattern is Pattern.TWO_FOUR_CYCLES_SHARED_RIGHT:
        # shape sharing one left and one right: centers (jc, ic), outer
        # couples (ja, ia), (jb, ib); roles of ja < jb fix the orientation
        if m >= 3 and n >= 3:
            mult = m * (m - 1) * (m - 2)
            for jc in range(n):
                for ja, jb in combinations(range(n), 2):
                    if jc in (ja, jb):
                        continue
                    total += mult * bound({jc: 3, ja: 2, jb: 2}, [3, 2, 2])
        # shape sharing only a right vertex: center right of degree 4,
        # two disjoint left pairs; canonical order on the pairs kills the swap
        if m >= 3 and n >= 4:
            mult = m * (m - 1) * (m - 2)
            for p1 in combinations(range(n), 2):
                for p2 in combinations(range(n), 2):
                    if p1 >= p2 or set(p1) & set(p2):
                        continue
                    deg = {p1[0]: 2, p1[1]: 2, p2[0]: 2, p2[1]: 2}
                    total += mult * bound(deg, [4, 2, 2])
        return total
    if pattern is Pattern.THREE_FOUR_CYCLES_FOUR_LEFT:
        if m >= 6 and n >= 3:
            right_ways = (
                math.comb(m, 2) * math.comb(m - 2, 2) * math.comb(m - 4, 2)
            )
            all_pairs = list(combinations(range(n), 2))
            for trio in combinations(all_pairs, 3):
                lefts = set(trio[0]) | set(trio[1]) | set(trio[2])
                if len(lefts) > 4:
                    continue
                deg: Counter = Counter()
                for p in trio:
                    deg[p[0]] += 2
                    deg[p[1]] += 2
                total += right_ways * bound(dict(deg), [2] * 6)
        return total
    raise ValueError(f"unknown pattern {pattern!r}")


def canonical_battery(
    max_n: int = 6,
    rs=(3, 4),
    k_max: int = 3,
    max_space: int = DEFAULT_MAX_SPACE,
) -> list[DegreeSequence]:
    """Canonical small-instance battery: all non-increasing degree vectors
    with at most ``max_n`` entries in 1..k_max, degree sum divisible by r and
    inside the resource guard.

    Counts are invariant under permuting k, so non-increasing representatives
    cover all instances.
    """
    out: list[DegreeSequence] = []

    def vectors(prefix, max_part, length_left):
        if prefix:
            yield tuple(prefix)
        if length_left == 0:
            return
        for part in range(min(max_part, k_max), 0, -1):
            prefix.append(part)
            yield from vectors(prefix, part, length_left - 1)
            prefix.pop()

    for r in rs:
        for k in vectors([], k_max, max_n):
            m_sum = sum(k)
            if m_sum % r != 0 or m_sum < r or m_sum > max_space:
                continue
            out.append(DegreeSequence(r=r, k=k))
    return out


def random_guarded_instances(
    count: int,
    seed: int,
    max_n: int = 7,
    rs=(3, 4),
    k_max: int = 3,
    max_space: int = DEFAULT_MAX_SPACE,
) -> list[DegreeSequence]:
    """Seeded stream of random in-guard instances (r | M, at least one edge)."""
    rng = random.Random(seed)
    out: list[DegreeSequence] = []
    while len(out) < count:
        r = rng.choice(list(rs))
        n = rng.randint(1, max_n)
        k = tuple(rng.randint(0, k_max) for _ in range(n))
        m_sum = sum(k)
        if m_sum % r != 0 or m_sum < r or m_sum > max_space:
            continue
        out.append(DegreeSequence(r=r, k=k))
    return out
