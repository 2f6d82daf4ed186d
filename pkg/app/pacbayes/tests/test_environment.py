"""Test cases for synthetic environments, datasets and seeding."""
import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from pacbayes.config.presets import ENVIRONMENT_PRESETS
from pacbayes.config.tests import EXACT, SEED
from pacbayes.kernels import DiscreteLossDistribution, LossRange
from pacbayes.sim.environment import (Dataset, Environment, empirical_risk,
                                      environment_from_preset,
                                      environment_from_spec, erm,
                                      hypothesis_labels, relative_loss_env,
                                      sample_dataset, true_risk)
from pacbayes.sim.trials import map_trials, resolve_threads, trial_seeds

UNIT = LossRange(0.0, 1.0)


def bernoulli_env(*means: float, coupling: str = 'shared') -> Environment:
    """Build an environment of Bernoulli losses on {0, 1}."""
    laws = tuple(DiscreteLossDistribution.bernoulli(p) for p in means)
    return Environment(hypotheses=laws, loss_range=UNIT, coupling=coupling)


class EnvironmentTest(SimpleTestCase):

    def test_presets_build(self):
        for name in ENVIRONMENT_PRESETS:
            env = environment_from_preset(name)
            self.assertGreaterEqual(env.size, 1)
            self.assertEqual(len(hypothesis_labels(env)), env.size)

    def test_unknown_preset(self):
        with self.assertRaises(ValidationError) as ctx:
            environment_from_preset('nonexistent')
        self.assertEqual(ctx.exception.code, 'unknown_preset')

    def test_support_outside_range(self):
        with self.assertRaises(ValidationError) as ctx:
            environment_from_spec({'laws': [{'support': [0.0, 2.0], 'probs': [0.5, 0.5]}], 'range': [0.0, 1.0]})
        self.assertEqual(ctx.exception.code, 'invalid_environment')

    def test_empty_environment(self):
        with self.assertRaises(ValidationError):
            Environment(hypotheses=(), loss_range=UNIT)

    def test_unknown_coupling(self):
        with self.assertRaises(ValidationError):
            bernoulli_env(0.5, coupling='antithetic')

    def test_true_risk_examples(self):
        env = Environment(
            hypotheses=(
                DiscreteLossDistribution.bernoulli(0.3),
                DiscreteLossDistribution.point_mass(0.7),
                DiscreteLossDistribution((-1.0, 0.0, 1.0), (1 / 3, 1 / 3, 1 / 3)),
            ),
            loss_range=LossRange(-1.0, 1.0),
        )
        self.assertAlmostEqual(true_risk(env, 0), 0.3, places=15)
        self.assertEqual(true_risk(env, 1), 0.7)
        self.assertAlmostEqual(true_risk(env, 2), 0.0, places=15)
        with self.assertRaises(ValidationError) as ctx:
            true_risk(env, 3)
        self.assertEqual(ctx.exception.code, 'index_out_of_range')

    def test_best_breaks_ties_low(self):
        self.assertEqual(bernoulli_env(0.4, 0.2, 0.2).best, 1)


class DatasetTest(SimpleTestCase):

    def test_point_masses(self):
        env = Environment(
            hypotheses=(DiscreteLossDistribution.point_mass(0.25), DiscreteLossDistribution.point_mass(0.75)),
            loss_range=UNIT,
        )
        data = sample_dataset(env, 20, SEED)
        np.testing.assert_array_equal(data.losses[:, 0], 0.25)
        np.testing.assert_array_equal(data.losses[:, 1], 0.75)

    def test_deterministic(self):
        env = environment_from_preset('asymmetric3')
        first = sample_dataset(env, 50, SEED)
        second = sample_dataset(env, 50, SEED)
        np.testing.assert_array_equal(first.losses, second.losses)
        third = sample_dataset(env, 50, SEED + 1)
        self.assertFalse(np.array_equal(first.losses, third.losses))

    def test_bernoulli_mean(self):
        data = sample_dataset(bernoulli_env(0.3), 100000, SEED)
        self.assertLessEqual(abs(empirical_risk(data, 0) - 0.3), 0.005)

    def test_independent_coupling_shape(self):
        data = sample_dataset(bernoulli_env(0.5, 0.5, coupling='independent'), 200, SEED)
        self.assertEqual(data.losses.shape, (200, 2))
        self.assertFalse(np.array_equal(data.losses[:, 0], data.losses[:, 1]))
        shared = sample_dataset(bernoulli_env(0.5, 0.5), 200, SEED)
        np.testing.assert_array_equal(shared.losses[:, 0], shared.losses[:, 1])

    def test_empirical_risk_examples(self):
        data = Dataset(np.array([[0.0, 0.0, 0.3], [0.0, 1.0, 0.3], [0.0, 1.0, 0.3], [0.0, 0.0, 0.3]]))
        self.assertEqual(empirical_risk(data, 0), 0.0)
        self.assertEqual(empirical_risk(data, 1), 0.5)
        self.assertEqual(empirical_risk(Dataset(np.array([[0.4, 0.9]])), 1), 0.9)
        with self.assertRaises(ValidationError):
            empirical_risk(data, 3)

    def test_erm_examples(self):
        self.assertEqual(erm(Dataset(np.array([[0.7]]))), 0)
        self.assertEqual(erm(Dataset(np.array([[0.4, 0.2, 0.2]]))), 1)
        self.assertEqual(erm(Dataset(np.array([[0.1, 0.3]]))), 0)

    def test_empty_dataset(self):
        with self.assertRaises(ValidationError) as ctx:
            Dataset(np.zeros((0, 2))).empirical_risks()
        self.assertEqual(ctx.exception.code, 'empty_input')

    def test_erm_consistency(self):
        env = environment_from_preset('bernoulli_grid10')
        near_best = env.true_risks <= env.true_risks.min() + 0.05 + EXACT
        fractions = []
        for n in (100, 10000):
            picks = [erm(sample_dataset(env, n, child)) for child in trial_seeds(SEED, 200)]
            fractions.append(np.mean(near_best[picks]))
        self.assertLessEqual(fractions[0], fractions[1])


class RelativeLossTest(SimpleTestCase):

    def test_reference_is_point_mass_at_zero(self):
        relative = relative_loss_env(environment_from_preset('asymmetric3'))
        best = environment_from_preset('asymmetric3').best
        self.assertEqual(relative.hypotheses[best].support, (0.0,))

    def test_independent_bernoulli_pair(self):
        p, q = 0.6, 0.2
        relative = relative_loss_env(bernoulli_env(q, p, coupling='independent'))
        law = dict(zip(relative.hypotheses[1].support, relative.hypotheses[1].probs))
        self.assertAlmostEqual(law[1.0], p * (1 - q), places=15)
        self.assertAlmostEqual(law[-1.0], q * (1 - p), places=15)
        self.assertAlmostEqual(law[0.0], p * q + (1 - p) * (1 - q), places=15)

    def test_shared_bernoulli_pair(self):
        relative = relative_loss_env(bernoulli_env(0.2, 0.6))
        law = dict(zip(relative.hypotheses[1].support, relative.hypotheses[1].probs))
        self.assertAlmostEqual(law[1.0], 0.4, places=15)
        self.assertNotIn(-1.0, law)

    def test_mean_identity(self):
        for name, spec in ENVIRONMENT_PRESETS.items():
            for coupling in ('shared', 'independent'):
                env = environment_from_spec({**spec, 'coupling': coupling})
                relative = relative_loss_env(env)
                np.testing.assert_allclose(
                    relative.true_risks, env.true_risks - env.true_risks[env.best], atol=EXACT, err_msg=name,
                )

    def test_range_is_symmetric(self):
        relative = relative_loss_env(environment_from_preset('bernoulli_pair'))
        self.assertEqual((relative.loss_range.a, relative.loss_range.b), (-1.0, 1.0))


class TrialsTest(SimpleTestCase):

    def test_seeds_are_reproducible(self):
        first = [child.generate_state(2).tolist() for child in trial_seeds(SEED, 5)]
        second = [child.generate_state(2).tolist() for child in trial_seeds(SEED, 5)]
        self.assertEqual(first, second)
        self.assertEqual(len({tuple(state) for state in first}), 5)

    def test_map_trials_keeps_order(self):
        seeds = trial_seeds(SEED, 40)

        def draw(child):
            return float(np.random.default_rng(child).random())

        self.assertEqual(map_trials(draw, seeds, 1), map_trials(draw, seeds, 8))

    def test_resolve_threads(self):
        self.assertGreaterEqual(resolve_threads(0), 1)
        self.assertEqual(resolve_threads(3), 3)

    def test_hypothesis_labels_default(self):
        self.assertEqual(tuple(hypothesis_labels(bernoulli_env(0.1, 0.2))), ('h0', 'h1'))
        self.assertTrue(math.isclose(bernoulli_env(0.1, 0.2).true_risks[1], 0.2))
