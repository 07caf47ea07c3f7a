"""Numerical oracles for Rokhlin systems with a finite target Y.

These are independent cross-checks of the algebraic decisions in
:mod:`walkbound.rokhlin`: the character spectrum of the Y-marginal Markov
operator, exact convolution mixing on finite groups, and a seeded Monte
Carlo sampler of the skew product.

Transfer operator convention: ``(P h)(y) = sum_g p(g) h(y - phi(g))``. For
a character ``psi`` this gives ``P psi = conj(lambda_psi) psi`` where
``lambda_psi = sum_g p(g) psi(phi(g))``; equivalently ``P conj(psi) =
lambda_psi conj(psi)``.

Sampler: paths are cut into fixed blocks of ``BLOCK_SIZE``. Block ``b``
draws from a Philox generator keyed by ``SeedSequence(seed,
spawn_key=(b,))``, so the stream used by path ``i`` depends only on
``(seed, i)`` and never on the number of worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, UnsupportedOracleError
from .groups import GroupSpec
from .rokhlin import RokhlinSystem, TargetAction
from .walks import (
    DEFAULT_SUPPORT_CAP,
    JumpMeasure,
    iter_convolution_powers,
    tail_subgroup,
)

BLOCK_SIZE = 1 << 16
THREADS_ENV = "WALKBOUND_THREADS"


@dataclass(frozen=True)
class CharacterEigenvalue:
    index: int
    character: Tuple[int, ...]
    value: complex
    # decided algebraically: psi o phi constant on supp p
    unit_modulus: bool
    # decided algebraically: psi o phi trivial on supp p
    is_one: bool


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: Tuple[CharacterEigenvalue, ...]
    gap: float

    def nontrivial(self) -> Tuple[CharacterEigenvalue, ...]:
        return tuple(e for e in self.eigenvalues if any(e.character))

    @property
    def unit_characters(self) -> Tuple[int, ...]:
        return tuple(e.index for e in self.nontrivial() if e.unit_modulus)

    @property
    def fixed_characters(self) -> Tuple[int, ...]:
        return tuple(e.index for e in self.nontrivial() if e.is_one)

    @property
    def contraction_rate(self) -> float:
        """Largest |lambda| among characters that are not of unit modulus."""
        mags = [abs(e.value) for e in self.eigenvalues if not e.unit_modulus]
        return max(mags, default=0.0)


class _FiniteTarget:
    """Index tables for the action of supp p on a finite Y."""

    def __init__(self, sys: RokhlinSystem):
        action = sys.action
        if not action.is_finite_target:
            raise UnsupportedOracleError(
                f"spectral oracles need a finite Y; this action has a {action.torus_dim}-torus"
            )
        self.Y: GroupSpec = action.finite
        self.size = self.Y.order
        self.p = sys.p
        mods = np.array(self.Y.torsion, dtype=np.int64)
        J = len(self.Y.torsion)
        # coordinates of every element of Y in flat-index order
        coords = np.zeros((self.size, J), dtype=np.int64)
        idx = np.arange(self.size, dtype=np.int64)
        for j in range(J - 1, -1, -1):
            idx, coords[:, j] = np.divmod(idx, mods[j])
        self.coords = coords
        self.mods = mods
        self.images = [action.finite_image(s).coords for s in sys.p.support]
        self.plus = np.stack([self._shift(im, +1) for im in self.images])
        self.minus = np.stack([self._shift(im, -1) for im in self.images])

    def _flat(self, c: np.ndarray) -> np.ndarray:
        out = np.zeros(c.shape[0], dtype=np.int64)
        for j, m in enumerate(self.mods):
            out = out * m + c[:, j]
        return out

    def _shift(self, im, sign: int) -> np.ndarray:
        if not len(im):
            return np.zeros(self.size, dtype=np.int64)
        c = (self.coords + sign * np.array(im, dtype=np.int64)) % self.mods
        return self._flat(c)


def _phase(character: Sequence[int], y: Sequence[int], mods: Sequence[int]) -> Fraction:
    return Fraction(sum(Fraction(c * v, m) for c, v, m in zip(character, y, mods))) % 1


def character_spectrum(sys: RokhlinSystem) -> SpectrumReport:
    """``lambda_psi = sum_g p(g) psi(phi(g))`` for every character of Y."""
    tgt = _FiniteTarget(sys)
    mods = tgt.Y.torsion
    weights = [float(w) for w in sys.p.weights]
    L = math.lcm(1, *mods)
    scale = [L // m for m in mods]
    eig = []
    for index in range(tgt.size):
        c = tgt.Y.element_at(index).coords
        # phases as exact integers mod L
        ph = [sum(ci * yi * s for ci, yi, s in zip(c, im, scale)) % L for im in tgt.images]
        value = sum(w * complex(math.cos(2 * math.pi * k / L), math.sin(2 * math.pi * k / L))
                    for w, k in zip(weights, ph))
        unit = all(k == ph[0] for k in ph)
        one = all(k == 0 for k in ph)
        if one:
            value = complex(1.0, 0.0)
        eig.append(CharacterEigenvalue(index, c, value, unit, one))
    nontriv = [e for e in eig if any(e.character)]
    if any(e.unit_modulus for e in nontriv):
        top = 1.0
    else:
        top = max((abs(e.value) for e in nontriv), default=0.0)
    return SpectrumReport(tuple(eig), 1.0 - top)


def character_vector(Y: GroupSpec, character: Sequence[int]) -> np.ndarray:
    """Values of the character ``y -> exp(2 pi i sum c_j y_j / m_j)`` on Y."""
    vals = np.empty(Y.order, dtype=complex)
    for i in range(Y.order):
        vals[i] = np.exp(2j * np.pi * float(_phase(character, Y.element_at(i).coords, Y.torsion)))
    return vals


def transfer_iterate(sys: RokhlinSystem, h, n: int) -> np.ndarray:
    """``P^n h`` with ``(P h)(y) = sum_g p(g) h(y - phi(g))``.

    ``h`` has shape ``(|Y|,)`` or ``(|Y|, m)`` for a batch of m functions.
    """
    if n < 0:
        raise InputError("n must be nonnegative")
    tgt = _FiniteTarget(sys)
    h = np.asarray(h)
    if h.ndim not in (1, 2) or h.shape[0] != tgt.size:
        raise InputError(f"h must have leading dimension {tgt.size}, got shape {h.shape}")
    w = np.array([float(x) for x in sys.p.weights])
    out = h.astype(complex if np.iscomplexobj(h) else float)
    for _ in range(n):
        out = np.tensordot(w, out[tgt.minus], axes=1)
    return out


def coset_tv_exact(p: JumpMeasure, n_max: int) -> List[Fraction]:
    """Exact TV distances behind ``mixing_profile``."""
    if not p.group.is_finite:
        raise InputError("mixing_profile needs a finite group")
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    ht = tail_subgroup(p)
    h = ht.order
    out = []
    for _, dist, denom in iter_convolution_powers(p, n_max, DEFAULT_SUPPORT_CAP):
        total = sum(abs(h * a - denom) for a in dist.values()) + (h - len(dist)) * denom
        out.append(Fraction(total, 2 * h * denom))
    return out


def mixing_profile(p: JumpMeasure, n_max: int) -> List[float]:
    """TV distance of ``p^(n*)`` to uniform on the coset ``n s_1 + H_tail``.

    Computed exactly and rounded to double, for ``n = 1..n_max``.
    """
    return [float(x) for x in coset_tv_exact(p, n_max)]


def walk_action(group: GroupSpec) -> TargetAction:
    """The action of a finite group on itself by translation."""
    if not group.is_finite:
        raise InputError("walk_action needs a finite group")
    return TargetAction.finite_translation(group, group, [g.coords for g in group.generators()])


def walk_spectrum(p: JumpMeasure) -> SpectrumReport:
    """Character spectrum of the walk itself (Y = G, phi = identity)."""
    return character_spectrum(RokhlinSystem(p, walk_action(p.group)))


def pushforward_law(sys: RokhlinSystem, n: int) -> Dict[int, Fraction]:
    """Exact law of ``phi(f_n)`` on Y, via ``convolution_power`` on G."""
    tgt = _FiniteTarget(sys)
    if n == 0:
        return {0: Fraction(1)}
    law: Dict[int, Fraction] = {}
    for _, dist, denom in iter_convolution_powers(sys.p, n):
        pass
    for coords, a in dist.items():
        g = sys.p.group.element(coords)
        k = tgt.Y.index(sys.action.finite_image(g))
        law[k] = law.get(k, 0) + a
    return {k: Fraction(v, denom) for k, v in sorted(law.items())}


def law_vector(law: Dict[int, Fraction], size: int) -> np.ndarray:
    v = np.zeros(size)
    for k, x in law.items():
        v[k] = float(x)
    return v


def tv_distance(a, b) -> float:
    return 0.5 * float(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)).sum())


@dataclass(frozen=True)
class TrajectorySample:
    seed: int
    n_steps: int
    n_paths: int
    empirical_marginal: Tuple[int, ...]
    jump_partial_products: Optional[Tuple[Tuple[int, ...], ...]] = None

    def frequencies(self) -> np.ndarray:
        return np.array(self.empirical_marginal, dtype=float) / self.n_paths


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InputError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return 1


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def simulate(
    sys: RokhlinSystem,
    seed: int,
    n_steps: int,
    n_paths: int,
    workers: Optional[int] = None,
    record_paths: int = 0,
) -> TrajectorySample:
    """Run ``n_paths`` independent copies of the Y-coordinate of T~ from y = 0.

    Each step draws a jump ``x`` from ``p`` and sets ``y <- S_x y``. The
    histogram of ``y`` after ``n_steps`` steps is returned; for the first
    ``record_paths`` paths the cocycle values ``f_n`` are kept too.
    """
    if n_paths < 1:
        raise InputError("n_paths must be >= 1")
    if n_steps < 0:
        raise InputError("n_steps must be >= 0")
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise InputError("seed must be an integer in [0, 2**64)")
    tgt = _FiniteTarget(sys)
    D = sys.p.denominator
    if D >= 2**62:
        raise UnsupportedOracleError("weight denominators too large for the integer sampler")
    cum = np.cumsum(np.array(sys.p.integer_weights(), dtype=np.int64))
    plus = tgt.plus
    record_paths = min(record_paths, n_paths)

    def run_block(b: int):
        start = b * BLOCK_SIZE
        m = min(BLOCK_SIZE, n_paths - start)
        rng = _block_rng(seed, b)
        y = np.zeros(m, dtype=np.int64)
        nrec = max(0, min(record_paths - start, m))
        counts = np.zeros((nrec, len(cum)), dtype=np.int64)
        for _ in range(n_steps):
            k = np.searchsorted(cum, rng.integers(0, D, size=m, dtype=np.int64), side="right")
            y = plus[k, y]
            if nrec:
                np.add.at(counts, (np.arange(nrec), k[:nrec]), 1)
        return np.bincount(y, minlength=tgt.size), counts

    n_blocks = -(-n_paths // BLOCK_SIZE)
    workers = workers or default_workers()
    if workers == 1:
        results = [run_block(b) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_block, range(n_blocks)))
    hist = np.zeros(tgt.size, dtype=np.int64)
    for h, _ in results:
        hist += h
    partial = None
    if record_paths:
        rows = np.concatenate([c for _, c in results if len(c)], axis=0)
        pts = [s.coords for s in sys.p.support]
        group = sys.p.group
        partial = tuple(
            group.reduce([sum(int(c) * pt[j] for c, pt in zip(row, pts)) for j in range(group.dim)])
            for row in rows
        )
    return TrajectorySample(
        seed=seed,
        n_steps=n_steps,
        n_paths=n_paths,
        empirical_marginal=tuple(int(v) for v in hist),
        jump_partial_products=partial,
    )
