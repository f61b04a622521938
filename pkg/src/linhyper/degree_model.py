"""Degree sequences, falling-factorial moments, and threshold quantities.

A degree sequence is the pair (r, k): the uniform edge size r and the vector k
of per-vertex degrees.  All derived quantities are computed in exact integer
arithmetic; the values M_2^2 and M_2^2 * M_4 appearing in the thresholds can
exceed 64 bits for degree sums in the 10^9 range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import DegenerateM, InvalidR, NegativeDegree, NotDivisible


def _falling(a: int, t: int) -> int:
    out = 1
    for i in range(t):
        out *= a - i
        if out == 0:
            return 0
    return out


def _ceil_div(num: int, den: int) -> int:
    return -(-num // den)


@dataclass(frozen=True)
class Thresholds:
    """Structural caps derived from a degree sequence.

    n2 caps the number of 4-cycles a graph may have and still be considered
    well-behaved; q1 and q2 are the two intermediate maxima it is built from.
    sparsity_indicator is the scale of the relative error of the asymptotic
    formulas on this instance.  It is reported as a diagnostic only, never
    enforced as a gate.
    """

    n2: int
    q1: int
    q2: int
    sparsity_indicator: float


@dataclass(frozen=True)
class DegreeSequence:
    """Validated degree sequence: edge size ``r`` and degree vector ``k``."""

    r: int
    k: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.r < 2:
            raise InvalidR(f"edge size r must be >= 2, got {self.r}")
        k = tuple(int(v) for v in self.k)
        object.__setattr__(self, "k", k)
        for v in k:
            if v < 0:
                raise NegativeDegree(f"degree {v} is negative")

    @property
    def n(self) -> int:
        return len(self.k)

    @cached_property
    def M(self) -> int:
        return sum(self.k)

    @cached_property
    def k_max(self) -> int:
        return max(self.k, default=0)

    def moment(self, t: int) -> int:
        """t-th falling-factorial moment: sum of k_i (k_i - 1) ... (k_i - t + 1)."""
        if t < 1:
            raise ValueError(f"moment order must be >= 1, got {t}")
        return sum(_falling(v, t) for v in self.k)

    def edge_count(self) -> int:
        """Number of edges M/r; raises NotDivisible when r does not divide M."""
        if self.M % self.r != 0:
            raise NotDivisible(f"r={self.r} does not divide M={self.M}")
        return self.M // self.r

    def thresholds(self) -> Thresholds:
        """Compute the 4-cycle cap n2 = 3 * q1 and its companions q1, q2.

        The logarithm is the natural logarithm (the base is not forced by any
        identity here; natural log is the documented choice).  Requires M >= 2.
        """
        m_sum = self.M
        if m_sum < 2:
            raise DegenerateM(f"thresholds need M >= 2, got {m_sum}")
        r = self.r
        m2 = self.moment(2)
        m4 = self.moment(4)
        ceil_log = math.ceil(math.log(m_sum))
        q1 = max(ceil_log, _ceil_div(2 * (r - 1) ** 2 * m2 * m2, m_sum * m_sum))
        q2 = max(ceil_log, _ceil_div((r - 1) ** 4 * m2 * m2 * m4, m_sum**4))
        sparsity = float(
            Fraction(r**4 * self.k_max**4 * (self.k_max + r), m_sum)
        )
        return Thresholds(n2=3 * q1, q1=q1, q2=q2, sparsity_indicator=sparsity)

    def to_json_dict(self) -> dict:
        return {"r": self.r, "k": list(self.k)}


def new_degree_sequence(k, r: int) -> DegreeSequence:
    """Validate and build a degree sequence from any integer iterable."""
    return DegreeSequence(r=int(r), k=tuple(int(v) for v in k))


def degree_sequence_from_json(obj: dict) -> DegreeSequence:
    """Parse the ``{"r": int, "k": [int, ...]}`` input schema."""
    if not isinstance(obj, dict) or "r" not in obj or "k" not in obj:
        raise ValueError("degree sequence JSON must have keys 'r' and 'k'")
    return new_degree_sequence(obj["k"], obj["r"])
