import itertools
import math
import random

import pytest

from walkbound import (
    GroupSpec,
    InputError,
    is_finite,
    member,
    quotient,
    subgroup_generated,
)
from walkbound.groups import closure_by_enumeration, trivial_subgroup, whole_group

from samplers import invariant_factors_by_counting, random_finite_group

Z = GroupSpec(1)
Z2 = GroupSpec(2)


class TestSubgroupGenerated:
    def test_gcd_in_z(self):
        assert subgroup_generated(Z, [Z.element(6), Z.element(10)]) == subgroup_generated(
            Z, [Z.element(math.gcd(6, 10))]
        )

    def test_empty_is_trivial(self):
        G = GroupSpec(1, (4,))
        h = subgroup_generated(G, [])
        assert h.is_trivial()
        assert h.order == 1

    def test_index_two_sublattice(self):
        h = subgroup_generated(Z2, [Z2.element(2, 0), Z2.element(1, 1)])
        assert member(h, Z2.element(1, 1)) and member(h, Z2.element(0, 2))
        # brute force: residues of the box mod the lattice
        box = list(itertools.product(range(-3, 4), repeat=2))
        assert sum(member(h, Z2.element(*x)) for x in box) == sum((a - b) % 2 == 0 for a, b in box)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            subgroup_generated(Z, [Z2.element(1, 0)])

    def test_canonical_for_random_generating_sets(self):
        rng = random.Random(11)
        G = GroupSpec(2, (6,))
        basis = [G.element(2, 1, 3), G.element(0, 4, 2)]
        target = subgroup_generated(G, basis)
        for _ in range(100):
            gens = []
            for _ in range(rng.randint(2, 5)):
                a, b = rng.randint(-5, 5), rng.randint(-5, 5)
                gens.append(a * basis[0] + b * basis[1])
            # make sure the set still generates: include a unimodular pair
            u = rng.randint(-3, 3)
            gens += [basis[0] + u * basis[1], basis[1]]
            rng.shuffle(gens)
            assert subgroup_generated(G, gens) == target


class TestMember:
    def test_examples(self):
        h = subgroup_generated(Z2, [Z2.element(2, 0), Z2.element(1, 1)])
        assert member(h, Z2.element(4, 2))
        assert member(trivial_subgroup(Z), Z.zero())
        assert not member(subgroup_generated(Z, [Z.element(2)]), Z.element(3))

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            member(trivial_subgroup(Z), Z2.zero())

    def test_torsion_reduction(self):
        G = GroupSpec(0, (6,))
        h = subgroup_generated(G, [G.element(4)])
        assert member(h, G.element(8)) and member(h, G.element(2))
        assert not member(h, G.element(3))


class TestQuotient:
    def test_cyclic(self):
        q = quotient(Z, subgroup_generated(Z, [Z.element(5)]))
        assert (q.free_rank, q.invariant_factors) == (0, (5,))

    def test_smith_example(self):
        q = quotient(Z2, subgroup_generated(Z2, [Z2.element(2, 0), Z2.element(0, 3)]))
        assert (q.free_rank, q.invariant_factors) == (0, (6,))
        assert str(q) == "Z/6"

    def test_mixed(self):
        h = subgroup_generated(Z2, [Z2.element(2, 0)])
        q = quotient(Z2, h)
        assert (q.free_rank, q.invariant_factors) == (1, (2,))
        for x in itertools.product(range(-4, 5), repeat=2):
            e = Z2.element(*x)
            assert (not any(q.project(e))) == member(h, e)

    def test_projection_is_homomorphism(self):
        rng = random.Random(3)
        G = GroupSpec(2, (4, 6))
        h = subgroup_generated(G, [G.element(2, 1, 1, 3), G.element(0, 3, 2, 0)])
        q = quotient(G, h)
        for _ in range(200):
            x = G.element(rng.randint(-9, 9), rng.randint(-9, 9), rng.randrange(4), rng.randrange(6))
            y = G.element(rng.randint(-9, 9), rng.randint(-9, 9), rng.randrange(4), rng.randrange(6))
            assert q.project_into(x + y) == q.project_into(x) + q.project_into(y)
            assert (not any(q.project(x))) == member(h, x)
        for g in h.generators():
            assert not any(q.project(g))


class TestFiniteness:
    def test_examples(self):
        assert not is_finite(subgroup_generated(Z, [Z.element(2)]))
        G = GroupSpec(0, (4, 6))
        assert is_finite(subgroup_generated(G, [G.element(1, 1)]))
        q = quotient(Z2, subgroup_generated(Z2, [Z2.element(2, 0), Z2.element(1, 1)]))
        assert is_finite(q) and q.order == 2

    def test_torsion_subgroup_of_infinite_group_is_finite(self):
        G = GroupSpec(1, (4,))
        assert subgroup_generated(G, [G.element(0, 2)]).order == 2
        assert not subgroup_generated(G, [G.element(1, 2)]).is_finite


def test_brute_force_closure_and_lagrange():
    rng = random.Random(5)
    for _ in range(40):
        G = random_finite_group(rng, 360)
        gens = [G.element_at(rng.randrange(G.order)) for _ in range(rng.randint(0, 3))]
        h = subgroup_generated(G, gens)
        closure = closure_by_enumeration(G, gens)
        assert {x.coords for x in h.elements()} == closure
        assert h.order == len(closure)
        q = quotient(G, h)
        assert h.order * q.order == G.order
        assert list(q.invariant_factors) == invariant_factors_by_counting(G, h)


def test_whole_group_and_labels():
    G = GroupSpec(2, (2, 6))
    assert whole_group(G).is_whole()
    assert str(quotient(G, trivial_subgroup(G))) == "Z^2 x Z/2 x Z/6"
    assert str(quotient(G, whole_group(G))) == "0"


def test_flat_index_roundtrip():
    G = GroupSpec(0, (3, 4, 5))
    assert [G.index(G.element_at(i)) for i in range(G.order)] == list(range(G.order))
