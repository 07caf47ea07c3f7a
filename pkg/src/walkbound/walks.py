"""Random walks RW(G, p) on finitely generated abelian groups.

A walk is given by its jump law, a finitely supported probability ``p`` with
exact rational weights. For abelian ``G`` the Poisson and tail boundaries are
the translation actions on ``G / H_poisson`` and ``G / H_tail`` where
``H_poisson = <supp p>`` and ``H_tail = <supp p - supp p>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

from .errors import InputError, ResourceLimitError
from .groups import (
    GroupElement,
    GroupSpec,
    QuotientStructure,
    Subgroup,
    member,
    quotient,
    subgroup_generated,
)

DEFAULT_SUPPORT_CAP = 10**6
DEFAULT_APERIODICITY_BOUND = 64


@dataclass(frozen=True)
class JumpMeasure:
    """Finitely supported probability on ``group`` with exact weights."""

    group: GroupSpec
    support: Tuple[GroupElement, ...]
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        support = tuple(self.support)
        weights = tuple(Fraction(w) for w in self.weights)
        if not support:
            raise InputError("a jump measure needs a nonempty support")
        if len(support) != len(weights):
            raise InputError(f"{len(support)} support points but {len(weights)} weights")
        for s in support:
            if not isinstance(s, GroupElement) or s.group != self.group:
                raise InputError(f"support point {s!r} is not an element of {self.group}")
        if len({s.coords for s in support}) != len(support):
            raise InputError("support points must be distinct after torsion reduction")
        if any(w <= 0 for w in weights):
            raise InputError("weights must be strictly positive")
        total = sum(weights)
        if total != 1:
            raise InputError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_points(cls, group: GroupSpec, points: Iterable, weights=None) -> "JumpMeasure":
        """Build from coordinate tuples (or ints on a rank-one group)."""
        pts = []
        for pt in points:
            coords = (pt,) if isinstance(pt, int) else tuple(pt)
            pts.append(GroupElement(group, coords))
        if not pts:
            raise InputError("a jump measure needs a nonempty support")
        if weights is None:
            weights = [Fraction(1, len(pts))] * len(pts)
        return cls(group, tuple(pts), tuple(Fraction(w) for w in weights))

    @classmethod
    def dirac(cls, g: GroupElement) -> "JumpMeasure":
        return cls(g.group, (g,), (Fraction(1),))

    @classmethod
    def uniform_on_group(cls, group: GroupSpec) -> "JumpMeasure":
        pts = tuple(group.elements())
        return cls(group, pts, (Fraction(1, len(pts)),) * len(pts))

    def translate(self, g: GroupElement) -> "JumpMeasure":
        """The measure ``p * delta_g``."""
        return JumpMeasure(self.group, tuple(s + g for s in self.support), self.weights)

    def as_dict(self) -> Dict[Tuple[int, ...], Fraction]:
        return {s.coords: w for s, w in zip(self.support, self.weights)}

    @property
    def denominator(self) -> int:
        return math.lcm(*(w.denominator for w in self.weights))

    def integer_weights(self) -> Tuple[int, ...]:
        """Numerators over the common denominator ``self.denominator``."""
        d = self.denominator
        return tuple(int(w * d) for w in self.weights)


@dataclass(frozen=True)
class WalkAnalysis:
    h_poisson: Subgroup
    h_tail: Subgroup
    poisson_boundary: QuotientStructure
    tail_boundary: QuotientStructure
    adapted: bool
    steady: bool
    # None means no overlap was found within the search bound on an infinite group
    aperiodic: Optional[bool]
    aperiodic_witness: Optional[int]


def poisson_subgroup(p: JumpMeasure) -> Subgroup:
    return subgroup_generated(p.group, p.support)


def tail_subgroup(p: JumpMeasure) -> Subgroup:
    s1 = p.support[0]
    return subgroup_generated(p.group, [s - s1 for s in p.support[1:]])


def _sumset(a: Iterable[Tuple[int, ...]], b: Sequence[GroupElement], group: GroupSpec):
    return {group.reduce(tuple(x + y for x, y in zip(u, v.coords))) for u in a for v in b}


def _aperiodicity(p: JumpMeasure, h_tail: Subgroup, bound: int):
    """Search n <= bound with supp(p^n) meeting supp(p^(n+1)).

    An overlap at some n exists iff supp p lies inside H_tail: any overlap
    forces s_1 in H_tail, and conversely writing -s_1 as a sum of N support
    differences gives an overlap at n = N. So a negative answer is exact and
    only a positive answer with a large witness can be missed.
    """
    group = p.group
    possible = member(h_tail, p.support[0])
    if not possible:
        return False, None
    if group.is_finite:
        bound = max(bound, group.order + 1)
    cur = {s.coords for s in p.support}
    for n in range(1, bound + 1):
        nxt = _sumset(cur, p.support, group)
        if cur & nxt:
            return True, n
        cur = nxt
    if group.is_finite:  # pragma: no cover - unreachable by the argument above
        raise AssertionError("aperiodicity search failed on a finite group")
    return None, None


def analyze(p: JumpMeasure, aperiodicity_bound: int = DEFAULT_APERIODICITY_BOUND) -> WalkAnalysis:
    if aperiodicity_bound < 1:
        raise InputError("aperiodicity_bound must be >= 1")
    hp = poisson_subgroup(p)
    ht = tail_subgroup(p)
    aperiodic, witness = _aperiodicity(p, ht, aperiodicity_bound)
    return WalkAnalysis(
        h_poisson=hp,
        h_tail=ht,
        poisson_boundary=quotient(p.group, hp),
        tail_boundary=quotient(p.group, ht),
        adapted=hp.is_whole(),
        steady=hp == ht,
        aperiodic=aperiodic,
        aperiodic_witness=witness,
    )


def _convolve(dist: Dict[Tuple[int, ...], int], p: JumpMeasure, weights: Sequence[int]):
    group = p.group
    out: Dict[Tuple[int, ...], int] = {}
    # deterministic order: sorted keys, support in listed order
    for key in sorted(dist):
        a = dist[key]
        for s, w in zip(p.support, weights):
            y = group.reduce(tuple(x + c for x, c in zip(key, s.coords)))
            out[y] = out.get(y, 0) + a * w
    return out


def iter_convolution_powers(
    p: JumpMeasure, n_max: int, support_cap: int = DEFAULT_SUPPORT_CAP
) -> Iterator[Tuple[int, Dict[Tuple[int, ...], int], int]]:
    """Yield ``(n, numerators, denominator)`` for p^(n*), n = 1..n_max.

    Numerators are integers over the common denominator ``D**n``.
    """
    weights = p.integer_weights()
    D = p.denominator
    dist = {s.coords: w for s, w in zip(p.support, weights)}
    denom = D
    for n in range(1, n_max + 1):
        if n > 1:
            dist = _convolve(dist, p, weights)
            denom *= D
        if len(dist) > support_cap:
            raise ResourceLimitError(
                f"support of p^{n}* has {len(dist)} points, over the cap of {support_cap}"
            )
        yield n, dist, denom


def convolution_power(p: JumpMeasure, n: int, support_cap: int = DEFAULT_SUPPORT_CAP) -> JumpMeasure:
    """Exact n-fold convolution ``p^(n*)``."""
    if n < 1:
        raise InputError("convolution power needs n >= 1")
    for _, dist, denom in iter_convolution_powers(p, n, support_cap):
        pass
    keys = sorted(dist)
    return JumpMeasure(
        p.group,
        tuple(GroupElement(p.group, k) for k in keys),
        tuple(Fraction(dist[k], denom) for k in keys),
    )
