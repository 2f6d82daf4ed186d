"""Test cases for the numerical kernels."""
import itertools
import math
from decimal import Decimal, localcontext

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.django import SimpleTestCase as HypothesisTestCase

from pacbayes.config.tests import EXACT, LOOSE, M_ETA_FAIR_COIN, SEED
from pacbayes.kernels import (DiscreteLossDistribution, LossRange,
                              log_sum_exp, m_eta, minimize_eta, phi,
                              second_moment)


def phi_oracle(x: float) -> float:
    """Evaluate (e^x - x - 1) / x^2 in 60-digit decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = 60
        value = Decimal(x)
        return float((value.exp() - value - 1) / (value * value))


def random_law(rng: np.random.Generator, points: int, low: float = 0.0, high: float = 1.0):
    """Draw a random finite-support law on [low, high]."""
    support = rng.uniform(low, high, points)
    probs = rng.dirichlet(np.ones(points))
    return DiscreteLossDistribution(tuple(support), tuple(probs))


class PhiTest(SimpleTestCase):

    def test_phi_at_zero(self):
        self.assertEqual(phi(0.0), 0.5)

    def test_phi_examples(self):
        self.assertAlmostEqual(phi(1.0), math.e - 2, places=14)
        self.assertAlmostEqual(phi(-1.0), math.exp(-1), places=14)

    def test_phi_matches_oracle(self):
        magnitudes = np.geomspace(1e-6, 30, 500)
        for x in itertools.chain(magnitudes, -magnitudes):
            expected = phi_oracle(float(x))
            self.assertLessEqual(abs(phi(float(x)) - expected), 1e-13 * max(1.0, expected), msg=x)

    def test_phi_continuous_across_switch(self):
        for switch in (1e-4, -1e-4, 1.0, -1.0):
            below = phi(math.nextafter(switch, 0.0))
            above = phi(switch)
            self.assertLessEqual(abs(below - above), 1e-14)

    def test_phi_nondecreasing(self):
        rng = np.random.default_rng(SEED)
        pairs = np.sort(rng.uniform(-50, 50, (10000, 2)), axis=1)
        for left, right in pairs:
            self.assertLessEqual(phi(left), phi(right) * (1 + EXACT) + EXACT)

    def test_phi_overflow_is_infinite(self):
        self.assertEqual(phi(2000.0), math.inf)


class DistributionTest(SimpleTestCase):

    def test_probabilities_must_sum_to_one(self):
        with self.assertRaises(ValidationError) as ctx:
            DiscreteLossDistribution((0.0, 1.0), (0.5, 0.6))
        self.assertEqual(ctx.exception.code, 'invalid_distribution')

    def test_lengths_must_match(self):
        with self.assertRaises(ValidationError):
            DiscreteLossDistribution((0.0, 1.0), (1.0,))

    def test_negative_probability(self):
        with self.assertRaises(ValidationError):
            DiscreteLossDistribution((0.0, 1.0), (1.5, -0.5))

    def test_second_moment_examples(self):
        self.assertEqual(second_moment(DiscreteLossDistribution.point_mass(0.0)), 0.0)
        self.assertAlmostEqual(second_moment(DiscreteLossDistribution.bernoulli(0.3)), 0.3, places=15)
        self.assertEqual(second_moment(DiscreteLossDistribution((-1.0, 1.0), (0.5, 0.5))), 1.0)

    def test_quantile(self):
        law = DiscreteLossDistribution((1.0, 0.0, 0.5), (0.2, 0.5, 0.3))
        uniforms = np.array([0.0, 0.49, 0.5, 0.79, 0.81, 0.999])
        np.testing.assert_array_equal(law.quantile(uniforms), [0.0, 0.0, 0.5, 0.5, 1.0, 1.0])

    def test_invalid_range(self):
        with self.assertRaises(ValidationError) as ctx:
            LossRange(1.0, 0.0)
        self.assertEqual(ctx.exception.code, 'invalid_range')


class MEtaTest(SimpleTestCase):

    def test_point_mass(self):
        for eta in (1e-8, 0.5, 1.0, 100.0):
            self.assertAlmostEqual(m_eta(DiscreteLossDistribution.point_mass(0.3), eta), 0.3, places=14)

    def test_fair_coin(self):
        self.assertAlmostEqual(m_eta(DiscreteLossDistribution.bernoulli(0.5), 1.0), M_ETA_FAIR_COIN, places=14)

    def test_small_eta_tends_to_mean(self):
        self.assertAlmostEqual(m_eta(DiscreteLossDistribution.bernoulli(0.5), 1e-6), 0.5, delta=1e-6)

    def test_zero_probability_points_are_dropped(self):
        law = DiscreteLossDistribution((0.2, 0.9, 5.0), (0.5, 0.5, 0.0))
        reduced = DiscreteLossDistribution((0.2, 0.9), (0.5, 0.5))
        self.assertEqual(m_eta(law, 3.0), m_eta(reduced, 3.0))

    def test_invalid_eta(self):
        with self.assertRaises(ValidationError) as ctx:
            m_eta(DiscreteLossDistribution.bernoulli(0.5), 0.0)
        self.assertEqual(ctx.exception.code, 'invalid_eta')

    def test_monotone_and_below_mean(self):
        rng = np.random.default_rng(SEED)
        etas = np.geomspace(1e-3, 50, 20)
        for _ in range(1000):
            law = random_law(rng, int(rng.integers(1, 6)), -1.0, 2.0)
            values = [m_eta(law, float(eta)) for eta in etas]
            self.assertLessEqual(max(values), law.mean() + LOOSE)
            for previous, following in zip(values, values[1:]):
                self.assertGreaterEqual(previous, following - LOOSE)

    def test_iid_product_identity(self):
        rng = np.random.default_rng(SEED)
        for _ in range(100):
            law = random_law(rng, int(rng.integers(1, 4)))
            eta = float(rng.uniform(0.1, 5))
            for n in (1, 2, 3):
                enumerated = math.fsum(
                    math.prod(law.probs[index] for index in rows)
                    * math.exp(-eta * math.fsum(law.support[index] for index in rows))
                    for rows in itertools.product(range(len(law.support)), repeat=n)
                )
                product = math.exp(-eta * n * m_eta(law, eta))
                self.assertAlmostEqual(enumerated, product, delta=EXACT)

    def test_hoeffding_lemma(self):
        for low, high in ((0.0, 1.0), (-1.0, 2.0)):
            for p in np.linspace(0, 1, 11):
                law = DiscreteLossDistribution.bernoulli(float(p), low, high)
                for eta in (0.01, 0.1, 1.0, 10.0):
                    slack = eta * (high - low) ** 2 / 8
                    self.assertLessEqual(law.mean(), m_eta(law, eta) + slack + EXACT)

    def test_variance_lemma(self):
        rng = np.random.default_rng(SEED)
        for _ in range(500):
            low = float(rng.uniform(-2, 0))
            law = random_law(rng, int(rng.integers(1, 5)), low, 1.0)
            v = float(rng.uniform(0.1, 5))
            eta = float(rng.uniform(0, v)) or v
            slack = eta * phi(-v * low) * second_moment(law)
            self.assertLessEqual(law.mean(), m_eta(law, eta) + slack + EXACT)


class LogSumExpTest(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(log_sum_exp([0.0]), 0.0)
        self.assertAlmostEqual(log_sum_exp([math.log(0.5), math.log(0.5)]), 0.0, places=15)
        self.assertAlmostEqual(log_sum_exp([1000.0, 1000.0]), 1000 + math.log(2), places=10)

    def test_negative_infinity_entries(self):
        self.assertEqual(log_sum_exp([-math.inf, 2.0]), 2.0)

    def test_empty(self):
        with self.assertRaises(ValidationError) as ctx:
            log_sum_exp([])
        self.assertEqual(ctx.exception.code, 'empty_input')


class MinimizeEtaTest(SimpleTestCase):

    def test_examples(self):
        eta, value = minimize_eta(lambda x: x + 1 / x, 0.1, 10)
        self.assertAlmostEqual(eta, 1.0, delta=1e-7)
        self.assertAlmostEqual(value, 2.0, places=10)
        eta, value = minimize_eta(lambda x: 2 * x + 8 / x, 0.5, 4)
        self.assertAlmostEqual(eta, 2.0, delta=1e-7)
        self.assertAlmostEqual(value, 8.0, places=10)

    def test_hoeffding_objective(self):
        log_term = math.log(20)
        eta, _ = minimize_eta(lambda x: x * 0.125 + log_term / (x * 100), 0.01, 10)
        self.assertAlmostEqual(eta, math.sqrt(8 * log_term / 100), delta=1e-7)

    def test_boundary_minimum(self):
        eta, _ = minimize_eta(lambda x: x + 100 / x, 0.5, 4)
        self.assertEqual(eta, 4)

    def test_invalid_interval(self):
        with self.assertRaises(ValidationError) as ctx:
            minimize_eta(lambda x: x, 2.0, 1.0)
        self.assertEqual(ctx.exception.code, 'invalid_interval')


class MEtaPropertyTest(HypothesisTestCase):

    @given(
        p=st.floats(min_value=0, max_value=1),
        eta=st.floats(min_value=1e-6, max_value=100),
        low=st.floats(min_value=-10, max_value=10),
        width=st.floats(min_value=0, max_value=10),
    )
    def test_between_minimum_and_mean(self, p, eta, low, width):
        law = DiscreteLossDistribution.bernoulli(p, low, low + width)
        value = m_eta(law, eta)
        self.assertGreaterEqual(value, min(law.support) - LOOSE * (1 + abs(low)))
        self.assertLessEqual(value, law.mean() + LOOSE * (1 + abs(low) + width))
