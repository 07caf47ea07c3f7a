"""Finitely generated abelian groups Z^r x Z/m_1 x ... x Z/m_k.

Subgroups are stored as the preimage lattice in Z^(r+k) in column Hermite
normal form. Torsion is handled by always adjoining the relation columns
m_i * e_(r+i), so a single lattice pipeline covers every group.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .errors import InputError
from .lattice import Column, hermite_columns, in_lattice, pivot_rows, smith_form


@dataclass(frozen=True)
class GroupSpec:
    """The group Z^free_rank x Z/torsion[0] x ... ."""

    free_rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if self.free_rank < 0:
            raise InputError("free_rank must be nonnegative")
        if any(m < 2 for m in self.torsion):
            raise InputError(f"torsion orders must be >= 2, got {self.torsion}")

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        """Number of elements, or ``None`` for an infinite group."""
        return math.prod(self.torsion) if self.is_finite else None

    def reduce(self, coords: Sequence[int]) -> Tuple[int, ...]:
        if len(coords) != self.dim:
            raise InputError(
                f"element has {len(coords)} coordinates, group {self} needs {self.dim}"
            )
        r = self.free_rank
        return tuple(int(c) for c in coords[:r]) + tuple(
            int(c) % m for c, m in zip(coords[r:], self.torsion)
        )

    def element(self, *coords) -> "GroupElement":
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return GroupElement(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.dim)

    def generators(self) -> Tuple["GroupElement", ...]:
        return tuple(
            GroupElement(self, tuple(int(i == j) for j in range(self.dim)))
            for i in range(self.dim)
        )

    def relation_columns(self) -> Tuple[Column, ...]:
        r, d = self.free_rank, self.dim
        return tuple(
            tuple(m if j == r + i else 0 for j in range(d)) for i, m in enumerate(self.torsion)
        )

    # Flat indexing of finite groups (mixed radix, last coordinate fastest).

    def index(self, x: "GroupElement") -> int:
        if not self.is_finite:
            raise InputError("flat indexing needs a finite group")
        idx = 0
        for c, m in zip(x.coords, self.torsion):
            idx = idx * m + c
        return idx

    def element_at(self, idx: int) -> "GroupElement":
        if not self.is_finite:
            raise InputError("flat indexing needs a finite group")
        coords = []
        for m in reversed(self.torsion):
            idx, c = divmod(idx, m)
            coords.append(c)
        return GroupElement(self, tuple(reversed(coords)))

    def elements(self) -> Iterator["GroupElement"]:
        if not self.is_finite:
            raise InputError(f"cannot enumerate the infinite group {self}")
        for coords in itertools.product(*(range(m) for m in self.torsion)):
            yield GroupElement(self, coords)

    def __str__(self) -> str:
        return _label(self.free_rank, self.torsion)


def _label(free_rank: int, factors: Sequence[int]) -> str:
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{d}" for d in factors)
    return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    group: GroupSpec
    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", self.group.reduce(self.coords))

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise InputError(f"cannot combine elements of {self.group} and {getattr(other, 'group', other)}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        return f"GroupElement({list(self.coords)} in {self.group})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup, stored as the canonical Hermite basis of its preimage lattice.

    Equality is structural, so two generating sets of the same subgroup
    compare equal.
    """

    group: GroupSpec
    basis: Tuple[Column, ...]

    @property
    def is_finite(self) -> bool:
        r = self.group.free_rank
        return all(i >= r for i in pivot_rows(self.basis))

    @property
    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        pivots = [c[i] for c, i in zip(self.basis, pivot_rows(self.basis))]
        return math.prod(self.group.torsion) // math.prod(pivots)

    def generators(self) -> Tuple[GroupElement, ...]:
        """Basis columns as group elements, torsion relations dropped."""
        gens = (GroupElement(self.group, c) for c in self.basis)
        return tuple(g for g in gens if not g.is_zero())

    def __contains__(self, x: GroupElement) -> bool:
        return member(self, x)

    def __le__(self, other: "Subgroup") -> bool:
        if other.group != self.group:
            raise InputError("subgroups of different groups")
        return all(in_lattice(other.basis, c) for c in self.basis)

    def is_whole(self) -> bool:
        return self == whole_group(self.group)

    def is_trivial(self) -> bool:
        return self == trivial_subgroup(self.group)

    def elements(self) -> Iterator[GroupElement]:
        if not self.group.is_finite:
            raise InputError("element enumeration needs a finite ambient group")
        return (x for x in self.group.elements() if member(self, x))

    def __str__(self) -> str:
        gens = [list(g.coords) for g in self.generators()]
        return f"<{', '.join(map(str, gens))}> <= {self.group}"


@dataclass(frozen=True)
class QuotientStructure:
    """Invariant-factor decomposition of ``group / subgroup``.

    ``project`` sends an element to its coordinates in
    Z/d_1 x ... x Z/d_j x Z^free_rank.
    """

    group: GroupSpec
    subgroup: Subgroup
    free_rank: int
    invariant_factors: Tuple[int, ...]
    _torsion_rows: Tuple[Tuple[int, ...], ...] = field(repr=False, compare=False)
    _free_rows: Tuple[Tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        return math.prod(self.invariant_factors) if self.is_finite else None

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def project(self, x: GroupElement) -> Tuple[int, ...]:
        if x.group != self.group:
            raise InputError(f"element of {x.group} projected into a quotient of {self.group}")
        tors = tuple(
            sum(a * b for a, b in zip(row, x.coords)) % d
            for row, d in zip(self._torsion_rows, self.invariant_factors)
        )
        free = tuple(sum(a * b for a, b in zip(row, x.coords)) for row in self._free_rows)
        return tors + free

    def as_group(self) -> GroupSpec:
        """The quotient as a group; ``project_into`` maps elements into it."""
        return GroupSpec(self.free_rank, self.invariant_factors)

    def project_into(self, x: GroupElement) -> GroupElement:
        c = self.project(x)
        k = len(self.invariant_factors)
        return GroupElement(self.as_group(), c[k:] + c[:k])

    def __str__(self) -> str:
        return _label(self.free_rank, self.invariant_factors)


def _check_member_of(group: GroupSpec, x: GroupElement) -> None:
    if not isinstance(x, GroupElement):
        raise InputError(f"expected a GroupElement, got {x!r}")
    if x.group != group:
        raise InputError(f"element of {x.group} used with group {group}")


def subgroup_generated(group: GroupSpec, gens: Iterable[GroupElement]) -> Subgroup:
    """The smallest subgroup of ``group`` containing ``gens``."""
    cols = []
    for g in gens:
        _check_member_of(group, g)
        cols.append(g.coords)
    cols.extend(group.relation_columns())
    return Subgroup(group, hermite_columns(cols, group.dim))


def trivial_subgroup(group: GroupSpec) -> Subgroup:
    return subgroup_generated(group, [])


def whole_group(group: GroupSpec) -> Subgroup:
    return subgroup_generated(group, group.generators())


def member(sub: Subgroup, x: GroupElement) -> bool:
    _check_member_of(sub.group, x)
    return in_lattice(sub.basis, x.coords)


def quotient(group: GroupSpec, sub: Subgroup) -> QuotientStructure:
    if sub.group != group:
        raise InputError(f"subgroup of {sub.group} is not a subgroup of {group}")
    n = group.dim
    rows = [[c[i] for c in sub.basis] for i in range(n)]
    diag, U = smith_form(rows, n, len(sub.basis))
    rank = len(diag)
    torsion_rows, factors = [], []
    for t, d in enumerate(diag):
        if d > 1:
            factors.append(d)
            torsion_rows.append(tuple(U[t]))
    free_rows = tuple(tuple(U[t]) for t in range(rank, n))
    return QuotientStructure(
        group=group,
        subgroup=sub,
        free_rank=n - rank,
        invariant_factors=tuple(factors),
        _torsion_rows=tuple(torsion_rows),
        _free_rows=free_rows,
    )


def is_finite(obj) -> bool:
    """Finiteness of a subgroup, quotient or group."""
    return obj.is_finite


def closure_by_enumeration(group: GroupSpec, gens: Iterable[GroupElement]) -> frozenset:
    """Brute-force subgroup closure in a finite group; returns coordinate tuples."""
    if not group.is_finite:
        raise InputError("closure by enumeration needs a finite group")
    gens = [g for g in gens]
    seen = {group.zero().coords}
    frontier = list(seen)
    while frontier:
        nxt = []
        for c in frontier:
            x = GroupElement(group, c)
            for g in gens:
                y = (x + g).coords
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)

