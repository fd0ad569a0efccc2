"""
Test cases for verify.py
"""

import math
import unittest

import numpy as np

from hyp4tubes import conf, utils, verify, world
from hyp4tubes.structures import Check

ALL_SUITES = ['lemma1', 'lemma2', 'lemma3', 'lemma4', 'prop4', 'lemma5', 'cor5', 'displacement', 'lemma6',
              'prop7', 'lemma9', 'ruled_films', 'thm4', 'thm5', 'prop6', 'lemma11', 'curve_bound']


class VerifyTestCase(unittest.TestCase):

    def setUp(self):
        world.testing = True
        conf.reset()
        verify.load_suites()
        self.temporary = []

    def tearDown(self):
        for suite_id in self.temporary:
            del world.suites[suite_id]
        conf.reset()

    def _register(self, suite_id, func, **kwargs):
        utils.add_suite(suite_id, 'test anchor', **kwargs)(func)
        self.temporary.append(suite_id)

    def test_trial_rng(self):
        a = verify.trial_rng(42, 'lemma1', 3, 0).random(5)
        np.testing.assert_array_equal(a, verify.trial_rng(42, 'lemma1', 3, 0).random(5))
        for other in (verify.trial_rng(42, 'lemma1', 3, 1), verify.trial_rng(42, 'lemma1', 4, 0),
                      verify.trial_rng(42, 'lemma2', 3, 0), verify.trial_rng(43, 'lemma1', 3, 0)):
            self.assertFalse(np.array_equal(a, other.random(5)))

    def test_suite_config(self):
        cfg = verify.SuiteConfig.from_conf('lemma1', trials=10, seed=5)
        self.assertEqual((cfg.trials, cfg.seed, cfg.mu, cfg.family), (10, 5, 0.1, 'mixed'))
        self.assertNotIn('workers', cfg.to_dict())

        with self.assertRaises(ValueError):
            verify.SuiteConfig.from_conf('lemma1', trials=0)
        with self.assertRaises(ValueError):
            verify.SuiteConfig.from_conf('lemma1', family='elliptic')
        conf.conf['tolerances']['seam'] = -1.0
        with self.assertRaises(ValueError):
            verify.SuiteConfig.from_conf('lemma1')

    def test_sampler(self):
        cfg = verify.SuiteConfig.from_conf('lemma1')
        sampler = verify.Sampler(verify.trial_rng(1, 'lemma1', 0, 0), cfg)
        for _ in range(50):
            self.assertTrue(0.1 < sampler.draw('height') <= 10.0)
            self.assertTrue(2 <= sampler.integer(2, 4) <= 4)
            p = sampler.sphere_point()
            self.assertAlmostEqual(np.linalg.norm(p.coords), 1.0, places=12)
            self.assertGreater(p.x4, 0.0)
            g = sampler.loxodromic()
            self.assertEqual(g.kind, 'loxodromic')
            self.assertTrue(0.0 < math.log(g.lam) <= 2.0)
            self.assertEqual(sampler.element('parabolic').kind, 'parabolic')

    def test_suite_ids(self):
        self.assertEqual(verify.load_suites()[:len(ALL_SUITES)], ALL_SUITES)
        self.assertEqual(verify.suite_ids()[:len(ALL_SUITES)], ALL_SUITES)
        conf.conf['verify']['suites'] = ['lemma2', 'prop6']
        self.assertEqual(verify.suite_ids(), ['lemma2', 'prop6'])

    def test_unknown_suite(self):
        with self.assertRaises(utils.UnknownSuiteError):
            verify.run_suite(verify.SuiteConfig.from_conf('lemma99', trials=1))

    def test_sampling_starvation(self):
        def always_rejects(sampler, cfg):
            raise utils.HypothesisRejected("never satisfiable")
        self._register('always_rejects', always_rejects)
        conf.conf['verify']['max_attempts'] = 3

        report = verify.run_suite(verify.SuiteConfig.from_conf('always_rejects', trials=2))
        self.assertFalse(report.passed)
        self.assertEqual([v['label'] for v in report.violations], ['sampling_starvation'] * 2)
        self.assertEqual(report.trials, 0)
        self.assertEqual(report.notes['rejected'], 6)

    def test_trial_cap(self):
        def trivial(sampler, cfg):
            return [Check.upper('trivial', {}, 0.0, 1.0)]
        self._register('capped', trivial, max_trials=2)

        report = verify.run_suite(verify.SuiteConfig.from_conf('capped', trials=5))
        self.assertEqual(report.trials, 2)
        self.assertEqual(report.checks, 2)
        self.assertEqual(report.notes['trial_cap'], 2)

    def test_finalizer(self):
        def trivial(sampler, cfg):
            return [Check.upper('trivial', {}, sampler.uniform(0.0, 1.0), 1.0)]
        self._register('finalized', trivial)

        @trivial.finalizer
        def finalize(checks, cfg):
            return [Check.lower('seen_all', {}, len(checks), cfg.trials)], {'seen': len(checks)}

        report = verify.run_suite(verify.SuiteConfig.from_conf('finalized', trials=3))
        self.assertEqual(report.checks, 4)
        self.assertEqual(report.notes['seen'], 3)
        self.assertTrue(report.passed)

    def test_workers_do_not_change_reports(self):
        serial = verify.run_suite(verify.SuiteConfig.from_conf('lemma1', trials=6, seed=11, workers=1))
        threaded = verify.run_suite(verify.SuiteConfig.from_conf('lemma1', trials=6, seed=11, workers=3))
        self.assertEqual(serial.to_json(with_timing=False), threaded.to_json(with_timing=False))

    def test_run_suites(self):
        reports = verify.run_suites(['lemma1', 'prop6'], trials=2, seed=3)
        self.assertEqual([r.suite_id for r in reports], ['lemma1', 'prop6'])

if __name__ == '__main__':
    unittest.main()
