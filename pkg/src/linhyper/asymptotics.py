"""Numerically stable evaluators for the closed-form counting estimates.

All formulas are evaluated in log space through the log-gamma function, so
degree sums far beyond the reach of fixed-width floats are fine; the plain
``value`` is materialized on demand and becomes +inf on overflow.  Each
estimate also reports ``error_scale``, the magnitude of the relative-error
argument that governs how seriously the number should be taken on the given
instance.  It is purely a diagnostic: the asymptotic validity condition is a
statement about sequences and cannot be checked at a single instance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .degree_model import DegreeSequence
from .errors import InvariantViolation, PreconditionFailed


@dataclass(frozen=True)
class Estimate:
    """A counting estimate split into leading term and exponent corrections.

    ``log_value`` always equals ``leading_log`` plus the sum of the correction
    exponents, by construction.
    """

    log_value: float
    value: float
    leading_log: float
    corrections: dict[str, float]
    error_scale: float

    def to_json_dict(self) -> dict:
        return {
            "log_value": self.log_value,
            "value": self.value,
            "leading_log": self.leading_log,
            "corrections": dict(self.corrections),
            "error_scale": self.error_scale,
        }


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _falling(a: int, t: int) -> int:
    out = 1
    for i in range(t):
        out *= a - i
        if out == 0:
            return 0
    return out


def _loop_exponent(ds: DegreeSequence) -> float:
    if ds.M == 0:
        return 0.0
    return float(Fraction((ds.r - 1) * ds.moment(2), 2 * ds.M))


def _double_link_exponent(ds: DegreeSequence) -> float:
    if ds.M == 0:
        return 0.0
    return float(Fraction((ds.r - 1) ** 2 * ds.moment(2) ** 2, 4 * ds.M**2))


def _error_scale(ds: DegreeSequence, k_power: int, extra: bool) -> float:
    """r^4 k_max^p / M, optionally times (k_max + r)."""
    if ds.M == 0:
        return 0.0
    num = ds.r**4 * ds.k_max**k_power
    if extra:
        num *= ds.k_max + ds.r
    return float(Fraction(num, ds.M))


def log_leading_term(ds: DegreeSequence) -> float:
    """Natural log of M! / ((M/r)! (r!)^(M/r) prod k_i!)."""
    m = ds.edge_count()
    if ds.M == 0:
        return 0.0
    return (
        math.lgamma(ds.M + 1)
        - math.lgamma(m + 1)
        - m * math.lgamma(ds.r + 1)
        - sum(math.lgamma(v + 1) for v in ds.k)
    )


def estimate_linear(ds: DegreeSequence) -> Estimate:
    """Estimated number of linear uniform hypergraphs with degrees k.

    Exponent corrections account for the expected number of loops and of
    double links in the random pairing; both vanish when every degree is at
    most one, making the formula exact there.
    """
    lead = log_leading_term(ds)
    corrections = {
        "loop_term": -_loop_exponent(ds),
        "double_link_term": -_double_link_exponent(ds),
    }
    log_value = lead + corrections["loop_term"] + corrections["double_link_term"]
    return Estimate(
        log_value=log_value,
        value=_safe_exp(log_value),
        leading_log=lead,
        corrections=corrections,
        error_scale=_error_scale(ds, 4, extra=True),
    )


def estimate_simple(ds: DegreeSequence) -> Estimate:
    """Estimated number of simple uniform hypergraphs with degrees k."""
    lead = log_leading_term(ds)
    corrections = {"loop_term": -_loop_exponent(ds)}
    log_value = lead + corrections["loop_term"]
    return Estimate(
        log_value=log_value,
        value=_safe_exp(log_value),
        leading_log=lead,
        corrections=corrections,
        error_scale=_error_scale(ds, 3, extra=False),
    )


def estimate_bigraph(ds: DegreeSequence) -> Estimate:
    """Estimated number of conforming bipartite graphs.

    Differs from the simple-hypergraph estimate exactly by the (M/r)! column
    orderings, so the two share the same leading-term code path.
    """
    m = ds.edge_count()
    base = estimate_simple(ds)
    lead = base.leading_log + math.lgamma(m + 1)
    corrections = dict(base.corrections)
    log_value = lead + corrections["loop_term"]
    if ds.M == 0:
        err = 0.0
    else:
        err = float(Fraction(ds.r**2 * ds.k_max**2, ds.M))
    return Estimate(
        log_value=log_value,
        value=_safe_exp(log_value),
        leading_log=lead,
        corrections=corrections,
        error_scale=err,
    )


def girth6_probability(ds: DegreeSequence) -> Estimate:
    """Estimated probability that a uniform conforming bipartite graph has no
    4-cycle, i.e. girth at least six."""
    ds.edge_count()
    corrections = {"double_link_term": -_double_link_exponent(ds)}
    log_value = corrections["double_link_term"]
    return Estimate(
        log_value=log_value,
        value=_safe_exp(log_value),
        leading_log=0.0,
        corrections=corrections,
        error_scale=_error_scale(ds, 4, extra=True),
    )


def mckay_upper_bound(g_left, g_right, l_left, l_right) -> Fraction:
    """Upper bound on the probability that a uniform bipartite graph with
    degree sequence g contains the fixed subgraph with degree sequence l.

    Returns prod (g_i)_(l_i) * prod (g'_j)_(l'_j) / (E_g - Gamma)_(E_l) with
    Gamma = 2 g_max (g_max + l_max - 1) + 2, valid only when
    E_g - Gamma >= E_l; otherwise the bound is not asserted and
    PreconditionFailed is raised.
    """
    g_left = [int(v) for v in g_left]
    g_right = [int(v) for v in g_right]
    l_left = [int(v) for v in l_left]
    l_right = [int(v) for v in l_right]
    if len(l_left) != len(g_left) or len(l_right) != len(g_right):
        raise ValueError("subgraph degree vectors must match the host bipartition")
    e_g = sum(g_left)
    if sum(g_right) != e_g:
        raise ValueError("host left/right degree sums differ")
    e_l = sum(l_left)
    if sum(l_right) != e_l:
        raise ValueError("subgraph left/right degree sums differ")
    g_max = max(g_left + g_right, default=0)
    l_max = max(l_left + l_right, default=0)
    gamma = 2 * g_max * (g_max + l_max - 1) + 2
    if e_g - gamma < e_l:
        raise PreconditionFailed(
            f"bound requires E_g - Gamma >= E_l; got {e_g} - {gamma} < {e_l}"
        )
    num = 1
    for g, l in zip(g_left, l_left):
        num *= _falling(g, l)
    for g, l in zip(g_right, l_right):
        num *= _falling(g, l)
    return Fraction(num, _falling(e_g - gamma, e_l))


def switching_ratio(ds: DegreeSequence, d: int) -> float:
    """Leading factor (r-1)^2 M_2^2 / (4 d M^2) of the count ratio between
    graphs with d and with d-1 four-cycles."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if ds.M == 0:
        raise ValueError("degree sum must be positive")
    return float(Fraction((ds.r - 1) ** 2 * ds.moment(2) ** 2, 4 * d * ds.M**2))


def sum_bounds(A, C, c_hat: float):
    """Sandwich bounds for the recursively defined partial sum.

    Given A(i), C(i) for i = 1..N (passed as length-N sequences), defines
    n_0 = 1 and n_i = (A(i) - (i-1) C(i)) n_(i-1) / i, and returns
    (sigma1, sigma2, n_values) where sigma1 <= sum(n_i) <= sigma2 is
    asserted before returning.  Hypothesis failures raise
    PreconditionFailed naming each violated condition.
    """
    A = [float(x) for x in A]
    C = [float(x) for x in C]
    if len(A) != len(C):
        raise ValueError("A and C must have the same length")
    N = len(A)
    failures = []
    if N < 2:
        failures.append("N >= 2")
    for i in range(1, N + 1):
        if A[i - 1] < 0:
            failures.append(f"A({i}) >= 0")
        if A[i - 1] - (i - 1) * C[i - 1] < 0:
            failures.append(f"A({i}) - (i-1)C({i}) >= 0")
    if not 0 < c_hat < 1 / 3:
        failures.append("0 < c_hat < 1/3")
    if N >= 1:
        a1, a2 = min(A), max(A)
        c1, c2 = min(C), max(C)
        if N >= 2 and max(a2 / N, abs(c1), abs(c2)) > c_hat:
            failures.append("max{A2/N, |C1|, |C2|} <= c_hat")
    if failures:
        raise PreconditionFailed("; ".join(failures))

    n_values = [1.0]
    for i in range(1, N + 1):
        n_values.append((A[i - 1] - (i - 1) * C[i - 1]) / i * n_values[-1])
    total = math.fsum(n_values)
    tail = (2 * math.e * c_hat) ** N
    sigma1 = math.exp(a1 - 0.5 * a1 * c2) - tail
    sigma2 = math.exp(a2 - 0.5 * a2 * c1 + 0.5 * a2 * c1 * c1) + tail
    if not sigma1 <= total <= sigma2:
        raise InvariantViolation(
            f"sandwich violated: {sigma1} <= {total} <= {sigma2} fails"
        )
    return sigma1, sigma2, tuple(n_values)
