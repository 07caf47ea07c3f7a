"""Rokhlin skew products over the jump process of a random walk.

The base is the Bernoulli shift ``T`` on ``G^N`` with product measure
``p^N`` and the cocycle is ``f(x) = x_1``. The skew product is

    T~(x, y) = (T x, S_{f(x)} y)

for a translation action ``S_g y = y + phi(g)`` of ``G`` on
``Y = T^k x F`` (a torus times a finite abelian group).

T~ is ergodic iff G acts ergodically on ``G/H_poisson x Y``, and exact iff
it does on ``G/H_tail x Y``. For a translation action on the quotient the
stabilizer of a coset is ``H``, so both questions reduce to whether
``phi(H)`` is dense in ``Y``, which is decided exactly by characters.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Mapping, Optional, Sequence, Tuple

from .errors import InputError
from .groups import (
    GroupElement,
    GroupSpec,
    QuotientStructure,
    Subgroup,
    member,
    subgroup_generated,
)
from .lattice import integer_kernel
from .walks import JumpMeasure, poisson_subgroup, tail_subgroup

_SYMBOL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class SymbolRegistry:
    """Names of irrational torus angles.

    Every declared symbol is assumed irrational and rationally independent
    of 1 and of every other declared symbol. Decisions are only as true as
    this assumption.
    """

    def __init__(self):
        self._names: set = set()

    def declare(self, *names: str) -> None:
        for name in names:
            if not isinstance(name, str) or not _SYMBOL_RE.match(name):
                raise InputError(f"invalid irrational symbol name {name!r}")
            self._names.add(name)

    def __contains__(self, name: str) -> bool:
        return name in self._names

    def names(self) -> Tuple[str, ...]:
        return tuple(sorted(self._names))


SYMBOLS = SymbolRegistry()


def declare_irrational(*names: str) -> None:
    SYMBOLS.declare(*names)


@dataclass(frozen=True)
class Angle:
    """A torus coordinate ``rational + sum(coeff * symbol)`` modulo 1."""

    rational: Fraction = Fraction(0)
    symbols: Tuple[Tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational) % 1)
        items = dict(self.symbols) if not isinstance(self.symbols, dict) else self.symbols
        clean = []
        for name, c in sorted(items.items()):
            if name not in SYMBOLS:
                raise InputError(f"symbol {name!r} has not been declared irrational")
            c = Fraction(c)
            if c:
                clean.append((name, c))
        object.__setattr__(self, "symbols", tuple(clean))

    @classmethod
    def of(cls, rational=0, symbols: Optional[Mapping[str, object]] = None) -> "Angle":
        return cls(Fraction(rational), tuple((symbols or {}).items()))

    def __add__(self, other: "Angle") -> "Angle":
        coeffs = dict(self.symbols)
        for name, c in other.symbols:
            coeffs[name] = coeffs.get(name, 0) + c
        return Angle(self.rational + other.rational, tuple(coeffs.items()))

    def __rmul__(self, k: int) -> "Angle":
        return Angle(k * self.rational, tuple((n, k * c) for n, c in self.symbols))

    __mul__ = __rmul__

    def is_integral(self) -> bool:
        return self.rational == 0 and not self.symbols

    def coefficient(self, name: str) -> Fraction:
        return dict(self.symbols).get(name, Fraction(0))


ZERO_ANGLE = Angle()


@dataclass(frozen=True)
class TargetAction:
    """Translation action of ``acting`` on ``Y = T^torus_dim x finite``.

    ``images[i]`` is ``phi(e_i)`` for the i-th standard generator of the
    acting group: a tuple of ``torus_dim`` angles and an element of
    ``finite``.
    """

    acting: GroupSpec
    torus_dim: int
    finite: GroupSpec
    images: Tuple[Tuple[Tuple[Angle, ...], GroupElement], ...]

    def __post_init__(self):
        if self.finite.free_rank != 0:
            raise InputError("the finite part of Y must have free rank 0")
        if self.torus_dim < 0:
            raise InputError("torus_dim must be nonnegative")
        if len(self.images) != self.acting.dim:
            raise InputError(
                f"{len(self.images)} generator images for an acting group with {self.acting.dim} generators"
            )
        images = []
        for i, (angles, fin) in enumerate(self.images):
            angles = tuple(angles)
            if len(angles) != self.torus_dim:
                raise InputError(f"generator {i}: {len(angles)} angles, expected {self.torus_dim}")
            if not isinstance(fin, GroupElement) or fin.group != self.finite:
                raise InputError(f"generator {i}: finite image is not an element of {self.finite}")
            images.append((angles, fin))
        object.__setattr__(self, "images", tuple(images))
        r = self.acting.free_rank
        for j, m in enumerate(self.acting.torsion):
            angles, fin = self.images[r + j]
            if not all((m * a).is_integral() for a in angles) or not (m * fin).is_zero():
                raise InputError(
                    f"generator {r + j} has order {m} but its image does not: phi is not a homomorphism"
                )

    @classmethod
    def finite_rotation(cls, acting: GroupSpec, modulus: int, steps: Sequence[int]) -> "TargetAction":
        """``Z/modulus`` target with ``phi(e_i) = steps[i]``."""
        F = GroupSpec(0, (modulus,))
        return cls(acting, 0, F, tuple(((), F.element(s)) for s in steps))

    @classmethod
    def finite_translation(cls, acting: GroupSpec, finite: GroupSpec, images: Sequence[Sequence[int]]) -> "TargetAction":
        return cls(acting, 0, finite, tuple(((), finite.element(tuple(im))) for im in images))

    @property
    def is_finite_target(self) -> bool:
        return self.torus_dim == 0

    @property
    def target_order(self) -> Optional[int]:
        return self.finite.order if self.is_finite_target else None

    def is_trivial_target(self) -> bool:
        return self.torus_dim == 0 and self.finite.dim == 0

    def apply(self, g: GroupElement) -> Tuple[Tuple[Angle, ...], GroupElement]:
        """``phi(g)``."""
        if g.group != self.acting:
            raise InputError(f"element of {g.group} acting through an action of {self.acting}")
        angles = [ZERO_ANGLE] * self.torus_dim
        fin = self.finite.zero()
        for c, (ims, fim) in zip(g.coords, self.images):
            if c:
                angles = [a + c * b for a, b in zip(angles, ims)]
                fin = fin + c * fim
        return tuple(angles), fin

    def finite_image(self, g: GroupElement) -> GroupElement:
        return self.apply(g)[1]


@dataclass(frozen=True)
class RokhlinSystem:
    """Skew product driven by the jump process of ``p`` and the action."""

    p: JumpMeasure
    action: TargetAction

    def __post_init__(self):
        if self.p.group != self.action.acting:
            raise InputError(
                f"jump measure lives on {self.p.group} but the action is of {self.action.acting}"
            )


def cocycle_sum(path: Sequence[GroupElement], n: int) -> GroupElement:
    """``f_n(x) = x_n + ... + x_1`` for the one-coordinate cocycle."""
    if n > len(path):
        raise InputError(f"path of length {len(path)} is too short for f_{n}")
    total = path[0].group.zero()
    for x in path[:n]:
        total = total + x
    return total


def _annihilator_generators(action: TargetAction, gens: Sequence[GroupElement]) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Generators of the group of characters of Y killing ``phi(gens)``.

    A character is ``(n, c)`` with ``n`` in Z^k and ``c`` in Z^J (mod the
    finite orders), acting by ``y -> n.theta + sum c_j f_j / m_j``. The
    returned pairs generate the annihilator together with the trivial
    characters ``m_j e_j``.
    """
    k = action.torus_dim
    mods = action.finite.torsion
    images = [action.apply(u) for u in gens]

    # irrational parts must cancel identically: n lies in ker_Z of M
    names = sorted({name for angles, _ in images for a in angles for name, _ in a.symbols})
    M = []
    for angles, _ in images:
        for name in names:
            row = [a.coefficient(name) for a in angles]
            scale = math.lcm(*(x.denominator for x in row))
            M.append([int(x * scale) for x in row])
    if M:
        N = integer_kernel(M, k)
    else:
        N = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    r = len(N)

    # rational parts: sum_t z_t (N_t . a(u)) + sum_j c_j f_j(u)/m_j in Z for every u
    coeff_rows = []
    for angles, fin in images:
        row = [sum(N[t][l] * angles[l].rational for l in range(k)) for t in range(r)]
        row += [Fraction(fin.coords[j], m) for j, m in enumerate(mods)]
        coeff_rows.append(row)
    nvars = r + len(mods)
    if not coeff_rows:
        lam = [tuple(int(i == j) for i in range(nvars)) for j in range(nvars)]
    else:
        Q = math.lcm(1, *(x.denominator for row in coeff_rows for x in row))
        nu = len(coeff_rows)
        # A v + Q w = 0 over Z, projected onto v
        A = [[int(x * Q) for x in row] + [Q * int(i == u) for i in range(nu)] for u, row in enumerate(coeff_rows)]
        lam = [v[:nvars] for v in integer_kernel(A, nvars + nu)]

    out = []
    for v in lam:
        z, c = v[:r], v[r:]
        n = tuple(sum(N[t][l] * z[t] for t in range(r)) for l in range(k))
        out.append((n, tuple(cj % m for cj, m in zip(c, mods))))
    return out


def image_closure_is_full(action: TargetAction, sub: Subgroup) -> bool:
    """Whether ``phi(sub)`` is dense in Y.

    Dense iff no nontrivial character of Y annihilates ``phi(sub)``.
    """
    if sub.group != action.acting:
        raise InputError(f"subgroup of {sub.group} is not a subgroup of the acting group {action.acting}")
    gens = [GroupElement(sub.group, c) for c in sub.basis]
    for n, c in _annihilator_generators(action, gens):
        if any(n) or any(c):
            return False
    return True


def nontrivial_annihilating_character(action: TargetAction, sub: Subgroup):
    """A nontrivial character ``(n, c)`` killing ``phi(sub)``, or ``None``."""
    gens = [GroupElement(sub.group, c) for c in sub.basis]
    for n, c in _annihilator_generators(action, gens):
        if any(n) or any(c):
            return n, c
    return None


def decide_ergodic(sys: RokhlinSystem) -> bool:
    return image_closure_is_full(sys.action, poisson_subgroup(sys.p))


def decide_exact(sys: RokhlinSystem) -> bool:
    return image_closure_is_full(sys.action, tail_subgroup(sys.p))


@dataclass(frozen=True)
class MeilijsonResult:
    d: int
    exact: Optional[bool]
    s_d_ergodic: Optional[bool]
    degenerate: bool = False


def meilijson_check(p: JumpMeasure, action: TargetAction) -> MeilijsonResult:
    """On G = Z with H_tail = dZ, exactness is equivalent to ergodicity of S^d."""
    if p.group != GroupSpec(1) or action.acting != p.group:
        raise InputError("meilijson_check needs a jump measure and an action of Z")
    ht = tail_subgroup(p)
    if not ht.basis:
        return MeilijsonResult(d=0, exact=None, s_d_ergodic=None, degenerate=True)
    d = ht.basis[0][0]
    sys = RokhlinSystem(p, action)
    exact = decide_exact(sys)
    s_d = image_closure_is_full(action, subgroup_generated(p.group, [p.group.element(d)]))
    if exact != s_d:  # pragma: no cover - would be a defect in the decision rule
        raise AssertionError(f"exactness {exact} disagrees with ergodicity of S^{d} ({s_d})")
    return MeilijsonResult(d=d, exact=exact, s_d_ergodic=s_d)


class Branch(enum.Enum):
    COMPACTLY_REDUCIBLE = "CompactlyReducible"
    EXACT_FOR_MILDLY_MIXING = "ExactForMildlyMixing"


@dataclass(frozen=True)
class DichotomyResult:
    branch: Branch
    t: Optional[GroupElement] = None
    K: Optional[Subgroup] = None
    note: str = ""


def reducibility_dichotomy(p: JumpMeasure) -> DichotomyResult:
    """Split the jump cocycle into the two cases of the reducibility dichotomy.

    If ``H_tail`` is finite then ``f = t + fbar`` with ``t`` the first
    support point, ``fbar = f - t`` taking values in the finite group
    ``K = H_tail`` and transfer function ``g = 0``. Otherwise the skew
    product is exact for every mildly mixing action.
    """
    ht = tail_subgroup(p)
    if not ht.is_finite:
        return DichotomyResult(Branch.EXACT_FOR_MILDLY_MIXING)
    t = p.support[0]
    for s in p.support:
        if not member(ht, s - t):  # pragma: no cover - H_tail contains all differences
            raise AssertionError(f"witness check failed at support point {s}")
    return DichotomyResult(
        Branch.COMPACTLY_REDUCIBLE,
        t=t,
        K=ht,
        note="g = 0, fbar = f - t takes values in K",
    )


def is_weakly_mixing_quotient(q: QuotientStructure) -> bool:
    """Translation on G/H has a nonconstant eigenfunction unless G/H is trivial."""
    return q.is_trivial
