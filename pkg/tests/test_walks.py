import random
from fractions import Fraction

import pytest

from walkbound import (
    GroupSpec,
    InputError,
    JumpMeasure,
    ResourceLimitError,
    analyze,
    convolution_power,
    member,
    poisson_subgroup,
    subgroup_generated,
    tail_subgroup,
)
from walkbound.groups import trivial_subgroup, whole_group

from samplers import random_acting_group, random_finite_group, random_measure

Z = GroupSpec(1)
Z2 = GroupSpec(2)


def naive_power(p, n):
    """Dense convolution with Fractions, independent of the library path."""
    dist = {p.group.zero().coords: Fraction(1)}
    for _ in range(n):
        nxt = {}
        for x, a in dist.items():
            for s, w in zip(p.support, p.weights):
                y = p.group.reduce([u + v for u, v in zip(x, s.coords)])
                nxt[y] = nxt.get(y, 0) + a * w
        dist = nxt
    return dist


class TestJumpMeasure:
    def test_validation(self):
        with pytest.raises(InputError):
            JumpMeasure.from_points(Z, [0, 1], ["1/2", "1/3"])
        with pytest.raises(InputError):
            JumpMeasure.from_points(Z, [0, 1], ["3/2", "-1/2"])
        G = GroupSpec(0, (3,))
        with pytest.raises(InputError):
            JumpMeasure.from_points(G, [1, 4])
        with pytest.raises(InputError):
            JumpMeasure.from_points(Z, [])

    def test_integer_weights(self):
        p = JumpMeasure.from_points(Z, [0, 1, 2], ["1/2", "1/3", "1/6"])
        assert p.denominator == 6 and p.integer_weights() == (3, 2, 1)


class TestBoundarySubgroups:
    def test_poisson_examples(self):
        assert poisson_subgroup(JumpMeasure.from_points(Z, [1, 4])).is_whole()
        assert poisson_subgroup(JumpMeasure.dirac(Z.zero())).is_trivial()
        h = poisson_subgroup(JumpMeasure.from_points(Z2, [(2, 0), (0, 2)]))
        assert h == subgroup_generated(Z2, [Z2.element(2, 0), Z2.element(0, 2)])
        assert h.basis == ((2, 0), (0, 2))

    def test_tail_examples(self):
        assert tail_subgroup(JumpMeasure.from_points(Z, [1, 4])) == subgroup_generated(Z, [Z.element(3)])
        assert tail_subgroup(JumpMeasure.from_points(Z, [-1, 1])) == subgroup_generated(Z, [Z.element(2)])
        assert tail_subgroup(JumpMeasure.dirac(Z.element(7))).is_trivial()

    def test_differences_in_tail_and_translation_invariance(self):
        rng = random.Random(2)
        for _ in range(60):
            G = random_acting_group(rng)
            p = random_measure(rng, G)
            ht = tail_subgroup(p)
            assert ht <= poisson_subgroup(p)
            for s in p.support:
                for t in p.support:
                    assert member(ht, s - t)
            g = G.element(tuple(rng.randint(-5, 5) for _ in range(G.dim)))
            assert tail_subgroup(p.translate(g)) == ht

    def test_power_support_in_coset(self):
        rng = random.Random(8)
        for _ in range(15):
            G = random_acting_group(rng)
            p = random_measure(rng, G, max_support=4)
            ht = tail_subgroup(p)
            s1 = p.support[0]
            for n in range(1, 21):
                for x in convolution_power(p, n).support:
                    assert member(ht, x - n * s1)


class TestAnalyze:
    def test_lazy_walk_is_aperiodic(self):
        wa = analyze(JumpMeasure.from_points(Z, [0, 1]))
        assert wa.aperiodic is True and wa.aperiodic_witness == 1

    def test_rotation_on_z5(self):
        G = GroupSpec(0, (5,))
        wa = analyze(JumpMeasure.dirac(G.element(1)))
        assert wa.adapted and not wa.steady
        assert wa.h_poisson == whole_group(G) and wa.h_tail == trivial_subgroup(G)
        assert wa.aperiodic is False

    def test_one_four(self):
        wa = analyze(JumpMeasure.from_points(Z, [1, 4]))
        assert wa.adapted
        assert str(wa.tail_boundary) == "Z/3" and wa.poisson_boundary.is_trivial
        assert not wa.steady and wa.aperiodic is False

    def test_bound_validation(self):
        with pytest.raises(InputError):
            analyze(JumpMeasure.from_points(Z, [0, 1]), aperiodicity_bound=0)

    def test_unknown_when_witness_beyond_bound(self):
        p = JumpMeasure.from_points(Z, [100, 101])
        assert analyze(p, aperiodicity_bound=64).aperiodic is None
        wa = analyze(p, aperiodicity_bound=200)
        assert wa.aperiodic is True and wa.aperiodic_witness == 100

    def test_steady_iff_aperiodic_on_abelian_groups(self):
        rng = random.Random(13)
        for _ in range(80):
            G = random_acting_group(rng)
            wa = analyze(random_measure(rng, G), aperiodicity_bound=400)
            assert wa.aperiodic is not None
            assert wa.aperiodic == wa.steady

    def test_aperiodic_matches_return_probabilities_on_finite_groups(self):
        rng = random.Random(21)
        for _ in range(25):
            G = random_finite_group(rng, 24, max_factors=2)
            p = random_measure(rng, G, max_support=4)
            wa = analyze(p)
            N = 4 * G.order
            zero = G.zero().coords
            dist = {zero: Fraction(1)}
            returns = []
            for _ in range(N):
                nxt = {}
                for x, a in dist.items():
                    for s, w in zip(p.support, p.weights):
                        y = G.reduce([u + v for u, v in zip(x, s.coords)])
                        nxt[y] = nxt.get(y, 0) + a * w
                dist = nxt
                returns.append(dist.get(zero, 0) > 0)
            eventually_positive = all(returns[N // 2:])
            assert wa.aperiodic == eventually_positive


class TestConvolutionPower:
    def test_uniform_is_idempotent(self):
        G = GroupSpec(0, (2,))
        p = JumpMeasure.from_points(G, [0, 1])
        assert convolution_power(p, 2).as_dict() == {(0,): Fraction(1, 2), (1,): Fraction(1, 2)}

    def test_dirac(self):
        g = Z2.element(2, -1)
        assert convolution_power(JumpMeasure.dirac(g), 5).as_dict() == {(10, -5): 1}

    def test_binomial(self):
        p = JumpMeasure.from_points(Z, [0, 1])
        assert convolution_power(p, 2).as_dict() == {
            (0,): Fraction(1, 4), (1,): Fraction(1, 2), (2,): Fraction(1, 4)
        }

    def test_matches_naive(self):
        rng = random.Random(4)
        for _ in range(20):
            G = random_acting_group(rng)
            p = random_measure(rng, G, max_support=4)
            n = rng.randint(1, 6)
            q = convolution_power(p, n)
            assert q.as_dict() == naive_power(p, n)
            assert sum(q.weights) == 1

    def test_semigroup_support(self):
        p = JumpMeasure.from_points(Z2, [(0, 0), (1, 0), (0, 1)], ["1/3"] * 3)
        a, b = convolution_power(p, 2), convolution_power(p, 3)
        sumset = {tuple(x + y for x, y in zip(s.coords, t.coords)) for s in a.support for t in b.support}
        assert {s.coords for s in convolution_power(p, 5).support} == sumset

    def test_support_cap(self):
        p = JumpMeasure.from_points(Z2, [(0, 0), (1, 0), (0, 1), (7, 3)])
        with pytest.raises(ResourceLimitError):
            convolution_power(p, 30, support_cap=100)

    def test_bad_n(self):
        with pytest.raises(InputError):
            convolution_power(JumpMeasure.from_points(Z, [0, 1]), 0)
