"""Rewiring operations that remove or create one 4-cycle, plus samplers.

A forward switch is parameterized by an 8-tuple of distinct vertices
(u1, u2, w1, w2 on the left; f1, f2, g1, g2 on the right): it dissolves the
4-cycle on {u1,u2} x {f1,f2} by exchanging four edges.  The reverse switch is
the same exchange read backwards and creates that 4-cycle.  Legality of a
switch is *defined* by reclassifying the rewired graph: a legal forward switch
from a well-behaved graph with d 4-cycles must land on a well-behaved graph
with d-1.  The named illegality conditions are necessary conditions only and
are reported as explanations, never trusted as a characterization.

Condition II uses the j-indexed distances dist(u_j, g_j), dist(w_j, f_j); the
symmetric variant with u_1 throughout is not what is implemented.

Randomness flows through numpy Generators; Monte Carlo estimation splits the
seed into per-worker substreams so replays with a fixed (seed, workers) pair
are bit-identical.
"""
from __future__ import annotations

from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bigraph_core import BipartiteGraph, Classification, classify
from .degree_model import DegreeSequence
from .errors import (
    NoFourCycle,
    NonConforming,
    NotASwitching,
    PreconditionFailed,
    RetryLimitExceeded,
    StepLimit,
)
from .asymptotics import girth6_probability

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SwitchTuple:
    """Suitable 8-tuple: four distinct left and four distinct right vertices."""

    u1: int
    u2: int
    w1: int
    w2: int
    f1: int
    f2: int
    g1: int
    g2: int

    def __post_init__(self):
        lefts = (self.u1, self.u2, self.w1, self.w2)
        rights = (self.f1, self.f2, self.g1, self.g2)
        if len(set(lefts)) != 4 or len(set(rights)) != 4:
            raise ValueError(f"switch tuple vertices must be distinct: {self}")


@dataclass(frozen=True)
class LegalityVerdict:
    """Reclassification verdict plus the explanatory conditions that fired.

    ``legal`` always equals ``ground_truth``; both are kept because the
    conditions are explanations for illegality, not its definition.
    """

    legal: bool
    conditions: frozenset[str]
    ground_truth: bool


@dataclass(frozen=True)
class PairingResult:
    graph: BipartiteGraph
    rejections: int


@dataclass(frozen=True)
class SwitchSampleResult:
    graph: BipartiteGraph
    steps: int
    d_trajectory: tuple[int, ...]
    pairing_rejections: int
    bplus_rejections: int
    restarts: int


@dataclass(frozen=True)
class GirthEstimate:
    p_hat: float
    ci_halfwidth: float
    trials: int
    predicted: float
    seed: int
    rejections: int


def derive_degree_sequence(graph: BipartiteGraph) -> DegreeSequence:
    """Degree sequence a conforming graph realizes; right degrees must agree."""
    degs = graph.right_degrees()
    if not degs:
        raise NonConforming("cannot derive edge size from a graph with no right vertices")
    r = degs[0]
    if any(d != r for d in degs):
        raise NonConforming(f"right degrees {degs} are not uniform")
    return DegreeSequence(r=r, k=graph.left_degrees())


def apply_forward(graph: BipartiteGraph, t: SwitchTuple) -> BipartiteGraph:
    """Dissolve the 4-cycle on {u1,u2} x {f1,f2}; degrees are preserved.

    Requires the cycle and the edges w1-g1, w2-g2 to be present, and the four
    edges to be created to be absent, so the result stays simple.
    """
    for j, i, label in (
        (t.u1, t.f1, "u1f1"),
        (t.u1, t.f2, "u1f2"),
        (t.u2, t.f1, "u2f1"),
        (t.u2, t.f2, "u2f2"),
    ):
        if not graph.has_edge(j, i):
            raise NotASwitching(f"no 4-cycle on the u/f vertices: edge {label} missing")
    for j, i, label in ((t.w1, t.g1, "w1g1"), (t.w2, t.g2, "w2g2")):
        if not graph.has_edge(j, i):
            raise NotASwitching(f"required edge {label} missing")
    for j, i, label in (
        (t.u1, t.g1, "u1g1"),
        (t.u2, t.g2, "u2g2"),
        (t.w1, t.f1, "w1f1"),
        (t.w2, t.f2, "w2f2"),
    ):
        if graph.has_edge(j, i):
            raise NotASwitching(f"edge {label} to be created already present")
    return graph.replace_edges(
        remove=[(t.u1, t.f1), (t.u2, t.f2), (t.w1, t.g1), (t.w2, t.g2)],
        add=[(t.u1, t.g1), (t.u2, t.g2), (t.w1, t.f1), (t.w2, t.f2)],
    )


def apply_reverse(graph: BipartiteGraph, t: SwitchTuple) -> BipartiteGraph:
    """Create a 4-cycle on {u1,u2} x {f1,f2}; exact inverse of apply_forward."""
    for j, i, label in (
        (t.u1, t.g1, "u1g1"),
        (t.u2, t.g2, "u2g2"),
        (t.u1, t.f2, "u1f2"),
        (t.u2, t.f1, "u2f1"),
        (t.w1, t.f1, "w1f1"),
        (t.w2, t.f2, "w2f2"),
    ):
        if not graph.has_edge(j, i):
            raise NotASwitching(f"required edge {label} missing")
    for j, i, label in (
        (t.u1, t.f1, "u1f1"),
        (t.u2, t.f2, "u2f2"),
        (t.w1, t.g1, "w1g1"),
        (t.w2, t.g2, "w2g2"),
    ):
        if graph.has_edge(j, i):
            raise NotASwitching(f"edge {label} to be created already present")
    return graph.replace_edges(
        remove=[(t.u1, t.g1), (t.u2, t.g2), (t.w1, t.f1), (t.w2, t.f2)],
        add=[(t.u1, t.f1), (t.u2, t.f2), (t.w1, t.g1), (t.w2, t.g2)],
    )


def forward_candidates(graph: BipartiteGraph, cls: Classification):
    """Yield the forward 8-tuples considered by the counting argument.

    These are the suitable tuples with a 4-cycle on {u1,u2} x {f1,f2} (each
    cycle in all four vertex orderings), edges w1-g1 and w2-g2 present, and
    neither g1 nor g2 on any 4-cycle.  Order is deterministic.  A yielded
    tuple may still fail the apply_forward preconditions (an edge to be
    created may exist); callers deciding legality must handle that.
    """
    if cls.d == 0:
        raise NoFourCycle("graph has no 4-cycle to dissolve")
    rights_on_cycles = {i for c in cls.four_cycles for i in c.right_pair}
    edge_list = graph.edges()
    for cyc in cls.four_cycles:
        a, b = cyc.left_pair
        x, y = cyc.right_pair
        for u1, u2, f1, f2 in ((a, b, x, y), (a, b, y, x), (b, a, x, y), (b, a, y, x)):
            for w1, g1 in edge_list:
                if g1 in rights_on_cycles or w1 in (u1, u2):
                    continue
                for w2, g2 in edge_list:
                    if g2 in rights_on_cycles or g2 == g1 or w2 in (u1, u2, w1):
                        continue
                    yield SwitchTuple(u1, u2, w1, w2, f1, f2, g1, g2)


def _dist_le(graph: BipartiteGraph, x, y, limit: int) -> bool:
    d = graph.distance(x, y)
    return d is not None and d <= limit


def forward_conditions(graph: BipartiteGraph, t: SwitchTuple) -> frozenset[str]:
    """Necessary conditions for a forward switch from this graph to be illegal."""
    cycles = graph.four_cycles()
    rights_on = {i for c in cycles for i in c.right_pair}
    conds = set()
    if t.g1 in rights_on or t.g2 in rights_on:
        conds.add("I")
    if (
        _dist_le(graph, ("v", t.u1), ("e", t.g1), 3)
        or _dist_le(graph, ("v", t.u2), ("e", t.g2), 3)
        or _dist_le(graph, ("v", t.w1), ("e", t.f1), 3)
        or _dist_le(graph, ("v", t.w2), ("e", t.f2), 3)
    ):
        conds.add("II")
    if graph.distance(("e", t.g1), ("e", t.g2)) == 2:
        conds.add("III")
    return frozenset(conds)


def reverse_conditions(graph: BipartiteGraph, t: SwitchTuple) -> frozenset[str]:
    """Necessary conditions for a reverse switch from this graph to be illegal."""
    cycles = graph.four_cycles()
    lefts_on = {j for c in cycles for j in c.left_pair}
    rights_on = {i for c in cycles for i in c.right_pair}
    conds = set()
    if (
        t.u1 in lefts_on
        or t.u2 in lefts_on
        or t.f1 in rights_on
        or t.f2 in rights_on
        or t.g1 in rights_on
        or t.g2 in rights_on
    ):
        conds.add("I'")
    if (
        _dist_le(graph, ("v", t.u1), ("e", t.f1), 3)
        or _dist_le(graph, ("v", t.u2), ("e", t.f2), 3)
        or _dist_le(graph, ("v", t.w1), ("e", t.g1), 3)
        or _dist_le(graph, ("v", t.w2), ("e", t.g2), 3)
    ):
        conds.add("II'")
    return frozenset(conds)


def check_forward(graph: BipartiteGraph, t: SwitchTuple) -> LegalityVerdict:
    """Ground-truth legality of a forward switch, with explanations.

    The graph must be well-behaved with at least one 4-cycle and the tuple
    must pass the apply_forward preconditions.
    """
    ds = derive_degree_sequence(graph)
    cls = classify(graph, ds)
    if cls.d == 0:
        raise NoFourCycle("forward switch requires at least one 4-cycle")
    if not cls.in_bplus:
        raise PreconditionFailed("forward switch starts from a well-behaved graph")
    switched = apply_forward(graph, t)
    after = classify(switched, ds)
    legal = after.in_bplus and after.d == cls.d - 1
    return LegalityVerdict(
        legal=legal, conditions=forward_conditions(graph, t), ground_truth=legal
    )


def check_reverse(graph: BipartiteGraph, t: SwitchTuple) -> LegalityVerdict:
    """Ground-truth legality of a reverse switch, with explanations."""
    ds = derive_degree_sequence(graph)
    cls = classify(graph, ds)
    if not cls.in_bplus:
        raise PreconditionFailed("reverse switch starts from a well-behaved graph")
    switched = apply_reverse(graph, t)
    after = classify(switched, ds)
    legal = after.in_bplus and after.d == cls.d + 1
    return LegalityVerdict(
        legal=legal, conditions=reverse_conditions(graph, t), ground_truth=legal
    )


def _stub_arrays(ds: DegreeSequence, m: int):
    left_owner = np.repeat(np.arange(ds.n, dtype=np.int64), ds.k)
    right_owner = np.repeat(np.arange(m, dtype=np.int64), ds.r)
    return left_owner, right_owner


def pairing_sample(
    ds: DegreeSequence, rng: np.random.Generator, max_retries: int = 10_000
) -> PairingResult:
    """Uniform conforming bipartite graph via the pairing model.

    Matches degree-many half-edges on each side uniformly at random and
    rejects projections with a repeated edge; every simple outcome is hit by
    the same number of matchings, so accepted graphs are exactly uniform.
    The expected number of rejections per acceptance grows with the loop
    exponent (r-1) M_2 / (2M) of the instance.
    """
    m = ds.edge_count()
    if ds.M < 1:
        raise PreconditionFailed("pairing sample requires at least one half-edge")
    left_owner, right_owner = _stub_arrays(ds, m)
    rejections = 0
    for _ in range(max_retries + 1):
        perm = rng.permutation(right_owner)
        keys = left_owner * m + perm
        if np.unique(keys).size == ds.M:
            cols = [0] * m
            for j, i in zip(left_owner.tolist(), perm.tolist()):
                cols[i] |= 1 << j
            return PairingResult(BipartiteGraph(ds.n, m, cols), rejections)
        rejections += 1
    raise RetryLimitExceeded(
        f"no simple pairing found in {max_retries} retries"
    )


def sample_no4cycle(
    ds: DegreeSequence,
    rng: np.random.Generator,
    max_steps: int = 1000,
    max_retries: int = 10_000,
) -> SwitchSampleResult:
    """Sample a well-behaved graph, then rewire 4-cycles away one at a time.

    Draws pairing samples until one is well-behaved, then repeatedly applies
    a uniformly chosen legal forward switch until no 4-cycle remains.  The
    output is *approximately* uniform over the 4-cycle-free graphs: the
    switching walk is a generator here, not an exactly-uniform sampler, and
    the residual bias is not quantified.  Step counts and the 4-cycle-count
    trajectory are returned so callers can audit the walk.
    """
    steps = 0
    pairing_rejections = 0
    bplus_rejections = 0
    restarts = 0
    while True:
        res = pairing_sample(ds, rng, max_retries=max_retries)
        pairing_rejections += res.rejections
        graph = res.graph
        cls = classify(graph, ds)
        if not cls.in_bplus:
            bplus_rejections += 1
            if bplus_rejections > max_retries:
                raise RetryLimitExceeded("no well-behaved pairing sample found")
            continue
        trajectory = [cls.d]
        stuck = False
        while cls.d > 0:
            if steps >= max_steps:
                raise StepLimit(f"step budget {max_steps} exhausted")
            steps += 1
            candidates = list(forward_candidates(graph, cls))
            applied = False
            if candidates:
                for idx in rng.permutation(len(candidates)):
                    t = candidates[int(idx)]
                    try:
                        switched = apply_forward(graph, t)
                    except NotASwitching:
                        continue
                    after = classify(switched, ds)
                    if after.in_bplus and after.d == cls.d - 1:
                        graph, cls = switched, after
                        trajectory.append(cls.d)
                        applied = True
                        break
            if not applied:
                stuck = True
                break
        if stuck:
            restarts += 1
            if restarts > max_retries:
                raise RetryLimitExceeded("switching walk kept getting stuck")
            continue
        return SwitchSampleResult(
            graph=graph,
            steps=steps,
            d_trajectory=tuple(trajectory),
            pairing_rejections=pairing_rejections,
            bplus_rejections=bplus_rejections,
            restarts=restarts,
        )


def _girth_worker(args) -> tuple[int, int]:
    r, k, seed, worker_index, workers, trials, max_retries = args
    ds = DegreeSequence(r=r, k=k)
    m = ds.edge_count()
    child = np.random.SeedSequence(seed).spawn(workers)[worker_index]
    rng = np.random.default_rng(child)
    left_owner, right_owner = _stub_arrays(ds, m)
    offsets = np.concatenate(([0], np.cumsum(ds.k))).tolist()
    hits = 0
    rejections = 0
    for _ in range(trials):
        while True:
            perm = rng.permutation(right_owner)
            keys = left_owner * m + perm
            if np.unique(keys).size == ds.M:
                break
            rejections += 1
            if rejections > max_retries:
                raise RetryLimitExceeded(
                    f"no simple pairing found within {max_retries} rejections"
                )
        rights = perm.tolist()
        seen = set()
        cycle = False
        for j in range(ds.n):
            lo, hi = offsets[j], offsets[j + 1]
            if hi - lo < 2:
                continue
            nbrs = sorted(rights[lo:hi])
            for a in range(len(nbrs) - 1):
                for b in range(a + 1, len(nbrs)):
                    key = nbrs[a] * m + nbrs[b]
                    if key in seen:
                        cycle = True
                        break
                    seen.add(key)
                if cycle:
                    break
            if cycle:
                break
        if not cycle:
            hits += 1
    return hits, rejections


def monte_carlo_girth(
    ds: DegreeSequence,
    seed: int,
    trials: int,
    workers: int = 1,
    max_retries: int = 100_000,
) -> GirthEstimate:
    """Estimate the probability that a uniform conforming graph has no 4-cycle.

    Counts 4-cycle-free pairing samples; the normal-approximation 95% CI
    half-width and the closed-form prediction are included in the result.
    Replay with identical (seed, workers) is bit-identical; changing the
    worker count changes the substream split and hence the estimate.
    """
    if trials < 1:
        raise PreconditionFailed(f"trials must be >= 1, got {trials}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    predicted = girth6_probability(ds).value
    base = trials // workers
    extra = trials % workers
    tasks = [
        (ds.r, ds.k, seed, w, workers, base + (1 if w < extra else 0), max_retries)
        for w in range(workers)
        if base + (1 if w < extra else 0) > 0
    ]
    hits = 0
    rejections = 0
    if workers == 1:
        results = [_girth_worker(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_girth_worker, tasks))
    for h, rej in results:
        hits += h
        rejections += rej
    p_hat = hits / trials
    ci = _Z95 * (p_hat * (1.0 - p_hat) / trials) ** 0.5
    return GirthEstimate(
        p_hat=p_hat,
        ci_halfwidth=ci,
        trials=trials,
        predicted=predicted,
        seed=seed,
        rejections=rejections,
    )
