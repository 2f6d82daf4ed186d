"""Test cases for the experiment management command."""
import tempfile
from io import StringIO
from pathlib import Path

import yaml
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase

from pacbayes.config.tests import HOEFFDING_TOTAL, SEED
from pacbayes.reports import read_csv


class ExperimentCommandTest(SimpleTestCase):
    """Run the command end to end on temporary config files."""

    def setUp(self):
        """Create a scratch directory for configs and outputs."""
        self.scratch = tempfile.TemporaryDirectory()
        self.root = Path(self.scratch.name)

    def tearDown(self):
        """Remove the scratch directory."""
        self.scratch.cleanup()

    def write_config(self, config: dict, name: str = 'config.yaml') -> str:
        """Dump a config mapping to YAML and return its path."""
        path = self.root / name
        path.write_text(yaml.safe_dump(config), encoding='utf-8')
        return str(path)

    def run_command(self, config: dict, *flags: str) -> str:
        """Run the command and return what it printed."""
        stdout = StringIO()
        call_command('experiment', '--config', self.write_config(config), *flags, stdout=stdout)
        return stdout.getvalue()

    def hoeffding_config(self) -> dict:
        return {
            'command': 'bound',
            'n': 100,
            'delta': 0.05,
            'bound_kind': 'hoeffding',
            'bound': {'empirical_risk': 0.2, 'range': [0.0, 1.0]},
        }

    def test_bound_prints_and_writes(self):
        """Test the Hoeffding example through the command."""
        out = self.root / 'results' / 'hoeffding'
        printed = self.run_command(self.hoeffding_config(), '--out', str(out))
        self.assertIn('0.322387', printed)
        rows = read_csv(out.with_suffix('.csv'))
        self.assertEqual(len(rows), 1)
        self.assertAlmostEqual(float(rows[0]['total']), HOEFFDING_TOTAL, places=14)
        self.assertEqual(rows[0]['u'], '')
        summary = yaml.safe_load(out.with_suffix('.yaml').read_text(encoding='utf-8'))
        self.assertEqual(summary['command'], 'bound')
        self.assertAlmostEqual(summary['rows'][0]['total'], HOEFFDING_TOTAL, places=14)

    def test_text_format(self):
        """Test that --format text writes the aligned table."""
        out = self.root / 'table'
        self.run_command({**self.hoeffding_config(), 'output': {'summary': False}}, '--out', str(out),
                         '--format', 'text')
        self.assertIn('total', out.with_suffix('.txt').read_text(encoding='utf-8'))
        self.assertFalse(out.with_suffix('.yaml').exists())

    def test_trials_zero_exits_with_validation_status(self):
        """Test exit status 1 and a message naming trials."""
        config = {
            'command': 'coverage',
            'seed': SEED,
            'environment': {'preset': 'bernoulli_single'},
            'n': 100,
            'delta': 0.05,
            'bound_kind': 'chernoff',
            'trials': 0,
        }
        with self.assertRaises(CommandError) as ctx:
            self.run_command(config)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('trials', str(ctx.exception))

    def test_unknown_nested_key_is_named(self):
        """Test that nested errors carry their dotted path."""
        config = {**self.hoeffding_config(), 'bound': {'empirical_risk': 0.2, 'range': [0, 1], 'colour': 1}}
        with self.assertRaises(CommandError) as ctx:
            self.run_command(config)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('bound.colour', str(ctx.exception))

    def test_missing_config_file(self):
        """Test exit status 1 for an unreadable config."""
        with self.assertRaises(CommandError) as ctx:
            call_command('experiment', '--config', str(self.root / 'absent.yaml'), stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)

    def test_domain_error_exits_with_validation_status(self):
        """Test exit status 1 for inputs rejected by the bound itself."""
        config = {**self.hoeffding_config(), 'delta': 1.5}
        with self.assertRaises(CommandError) as ctx:
            self.run_command(config)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_non_finite_prior_exits_with_validation_status(self):
        """Test that a NaN prior weight is rejected before any bound runs."""
        config = {
            'command': 'bound',
            'n': 100,
            'delta': 0.05,
            'bound_kind': 'union',
            'prior': [float('nan'), 0.5],
            'bound': {'empirical_risks': [0.2, 0.3], 'selected': 0, 'eta': 1.0},
        }
        with self.assertRaises(CommandError) as ctx:
            self.run_command(config)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_prior_longer_than_risks_exits_with_validation_status(self):
        """Test exit status 1 when the prior and the risk list differ in length."""
        config = {
            'command': 'bound',
            'n': 100,
            'delta': 0.05,
            'bound_kind': 'union',
            'prior': [0.25, 0.25, 0.25, 0.25],
            'bound': {'empirical_risks': [0.2, 0.3], 'selected': 3, 'eta': 1.0},
        }
        with self.assertRaises(CommandError) as ctx:
            self.run_command(config)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('Dimension mismatch', str(ctx.exception))

    def test_unwritable_output_exits_with_validation_status(self):
        """Test exit status 1 when the output directory cannot be created."""
        blocker = self.root / 'blocker'
        blocker.write_text('', encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            self.run_command(self.hoeffding_config(), '--out', str(blocker / 'hoeffding'))
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('Cannot write results', str(ctx.exception))

    def test_numerical_failure_exits_with_status_two(self):
        """Test exit status 2 when the bound total overflows."""
        config = {
            'command': 'bound',
            'n': 100,
            'delta': 0.05,
            'bound_kind': 'chernoff',
            'bound': {'empirical_risk': 0.2, 'eta': 1e-320},
        }
        with self.assertRaises(CommandError) as ctx:
            self.run_command(config)
        self.assertEqual(ctx.exception.returncode, 2)

    def test_fixpoint_single_hypothesis(self):
        """Test one iteration with zero total variation."""
        config = {
            'command': 'fixpoint',
            'seed': SEED,
            'environment': {'preset': 'bernoulli_single'},
            'n': 50,
            'delta': 0.05,
            'trials': 20,
            'fixpoint': {'max_iters': 5},
        }
        out = self.root / 'fixpoint'
        self.run_command(config, '--out', str(out))
        rows = read_csv(out.with_suffix('.csv'))
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]['iteration'], '1')
        self.assertEqual(float(rows[0]['tv_distance']), 0.0)
        self.assertEqual(float(rows[0]['prior_0']), 1.0)
        summary = yaml.safe_load(out.with_suffix('.yaml').read_text(encoding='utf-8'))
        self.assertTrue(summary['summary']['converged'])

    def test_reruns_are_byte_identical(self):
        """Test identical files for equal seeds and any thread count."""
        config = {
            'command': 'sweep',
            'seed': SEED,
            'environment': {'preset': 'asymmetric3'},
            'n_list': [20, 80],
            'delta': 0.05,
            'bound_kinds': ['hoeffding', 'pac_variance'],
            'trials': 30,
            'estimator': {'rule': 'gibbs', 'eta': 1.0},
        }
        outputs = []
        for index, threads in enumerate(('1', '1', '4')):
            out = self.root / f'sweep{index}'
            self.run_command(config, '--out', str(out), '--threads', threads)
            outputs.append((out.with_suffix('.csv').read_bytes(), out.with_suffix('.yaml').read_bytes()))
        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(outputs[0], outputs[2])

    def test_seed_flag_overrides_config(self):
        """Test that --seed replaces the seed of the config."""
        config = {
            'command': 'coverage',
            'environment': {'preset': 'asymmetric3'},
            'n': 30,
            'delta': 0.1,
            'bound_kind': 'hoeffding',
            'trials': 100,
        }
        out = self.root / 'coverage'
        self.run_command(config, '--out', str(out), '--seed', str(SEED))
        rows = read_csv(out.with_suffix('.csv'))
        self.assertEqual(rows[0]['kind'], 'hoeffding')
        self.assertEqual(rows[0]['trials'], '100')
