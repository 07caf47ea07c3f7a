"""Seeded random instances and brute-force oracles shared by the unit and acceptance tests."""

import math
import random
from fractions import Fraction

from walkbound import GroupSpec, JumpMeasure, RokhlinSystem, TargetAction, member


def random_finite_group(rng: random.Random, max_order: int, max_factors: int = 3) -> GroupSpec:
    while True:
        torsion = tuple(rng.randint(2, 12) for _ in range(rng.randint(1, max_factors)))
        if math.prod(torsion) <= max_order:
            return GroupSpec(0, torsion)


def random_weights(rng: random.Random, k: int):
    raw = [rng.randint(1, 9) for _ in range(k)]
    total = sum(raw)
    return [Fraction(x, total) for x in raw]


def random_point(rng: random.Random, group: GroupSpec, spread: int = 4):
    return tuple(rng.randint(-spread, spread) for _ in range(group.free_rank)) + tuple(
        rng.randrange(m) for m in group.torsion
    )


def random_measure(rng: random.Random, group: GroupSpec, max_support: int = 6) -> JumpMeasure:
    cap = max_support if group.order is None else min(max_support, group.order)
    k = rng.randint(1, cap)
    pts = set()
    while len(pts) < k:
        pts.add(group.reduce(random_point(rng, group)))
    pts = sorted(pts)
    rng.shuffle(pts)
    return JumpMeasure.from_points(group, pts, random_weights(rng, k))


def random_homomorphism_images(rng: random.Random, G: GroupSpec, Y: GroupSpec):
    """Images of the generators of G in the finite group Y, respecting torsion."""
    images = []
    for i in range(G.dim):
        y = [rng.randrange(m) for m in Y.torsion]
        if i >= G.free_rank:
            order = G.torsion[i - G.free_rank]
            # force order(y) | order by multiplying into the order-torsion
            y = [(v * (m // math.gcd(m, order))) % m for v, m in zip(y, Y.torsion)]
        images.append(y)
    return images


def random_acting_group(rng: random.Random) -> GroupSpec:
    kind = rng.choice(["Z", "Z2", "Zm"])
    if kind == "Z":
        return GroupSpec(1)
    if kind == "Z2":
        return GroupSpec(2)
    return GroupSpec(0, (rng.randint(2, 12),))


def random_finite_system(rng: random.Random, max_y: int = 64, max_support: int = 6) -> RokhlinSystem:
    G = random_acting_group(rng)
    Y = random_finite_group(rng, max_y, max_factors=2)
    action = TargetAction.finite_translation(G, Y, random_homomorphism_images(rng, G, Y))
    return RokhlinSystem(random_measure(rng, G, max_support), action)


def invariant_factors_by_counting(group, sub):
    """Invariant factors of group/sub from k-torsion counts, by brute force."""
    elems = list(group.elements())
    h = sum(1 for x in elems if member(sub, x))
    order = len(elems) // h
    counts = {}
    for k in range(1, order + 1):
        if order % k == 0:
            counts[k] = sum(1 for x in elems if member(sub, k * x)) // h

    def chains(n, smallest):
        if n == 1:
            yield []
            return
        for d in range(max(2, smallest), n + 1):
            if n % d == 0:
                for rest in chains(n // d, d):
                    if not rest or rest[0] % d == 0:
                        yield [d] + rest

    matches = [
        c for c in chains(order, 2)
        if all(math.prod(math.gcd(k, d) for d in c) == v for k, v in counts.items())
    ]
    assert len(matches) == 1
    return matches[0]
