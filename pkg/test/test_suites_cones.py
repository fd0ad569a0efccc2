import unittest

import suite_test_fixture as stf


class DisplacementSuiteTest(stf.BaseSuiteTest):
    suite_id = 'displacement'

    def test_parabolic_ratio(self):
        report = self.run_suite(family='parabolic')
        self.assertTrue(report.passed, report.violations)
        ratio = report.notes['parabolic_ratio']
        self.assertAlmostEqual(ratio['min'], 2.0, places=9)
        self.assertAlmostEqual(ratio['max'], 2.0, places=9)

    def test_loxodromic_discrepancy_noted(self):
        report = self.run_suite(family='loxodromic')
        self.assertIn('loxodromic_euclidean_discrepancy', report.notes)
        self.assertNotIn('parabolic_ratio', report.notes)

class Lemma6SuiteTest(stf.BaseSuiteTest):
    suite_id = 'lemma6'

    def test_screw_parabolics(self):
        report = self.run_suite(family='parabolic', trials=6)
        self.assertTrue(report.passed, report.violations)

    def test_sparse_lattices(self):
        # Lattices whose shortest vector outruns 2 sinh(ν/2) leave many points outside every cone.
        report = self.run_suite(family='translation', trials=30)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(report.trials, 30)

class Prop7SuiteTest(stf.BaseSuiteTest):
    suite_id = 'prop7'

    def test_printed_bound_is_only_noted(self):
        report = self.run_suite(family='parabolic', trials=6)
        self.assertTrue(report.passed, report.violations)
        self.assertIn('outside_cone_trials', report.notes)
        self.assertLessEqual(report.notes['printed_bound_exceeded'], report.notes['outside_cone_trials'])

class Lemma9SuiteTest(stf.BaseSuiteTest):
    suite_id = 'lemma9'

if __name__ == '__main__':
    unittest.main()
