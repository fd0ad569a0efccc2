"""
A test fixture for hyp4tubes verification suites.
"""
import json
import unittest

from hyp4tubes import conf, verify, world


class BaseSuiteTest(unittest.TestCase):
    suite_id = None
    trials = 4
    seed = 7
    # Extra SuiteConfig.from_conf() arguments (mu, nu, family...)
    overrides = {}

    def setUp(self):
        if not self.suite_id:
            raise RuntimeError("Must set target suite id in suite_id")
        world.testing = True
        conf.reset()
        verify.load_suites()
        self.suite = world.suites[self.suite_id]

    def tearDown(self):
        conf.reset()

    def run_suite(self, **kwargs):
        """
        Runs the suite with the test's trial count and seed.
        """
        options = {'trials': self.trials, 'seed': self.seed}
        options.update(self.overrides)
        options.update(kwargs)
        return verify.run_suite(verify.SuiteConfig.from_conf(self.suite_id, **options))

    ### GENERIC SUITE BEHAVIOUR

    def test_passes(self):
        report = self.run_suite()
        self.assertTrue(report.passed, report.violations)
        self.assertGreater(report.checks, 0)
        self.assertGreaterEqual(report.worst_margin, 0)

    def test_deterministic(self):
        first = self.run_suite()
        second = self.run_suite()
        self.assertEqual(first.to_json(with_timing=False), second.to_json(with_timing=False))

    def test_report_layout(self):
        report = self.run_suite()
        data = json.loads(report.to_json())
        self.assertEqual(data['suite_id'], self.suite_id)
        self.assertEqual(data['config']['seed'], self.seed)
        self.assertEqual(data['notes']['anchor'], self.suite.anchor)
        self.assertIn('wall_time', data['timing'])
        self.assertNotIn('timing', report.to_dict(with_timing=False))

        if not self.suite.sweep:
            expected = self.trials if self.suite.max_trials is None else min(self.trials, self.suite.max_trials)
            self.assertEqual(report.trials, expected)
            self.assertIn('rejected', report.notes)
