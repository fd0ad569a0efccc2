import unittest

import suite_test_fixture as stf


class Lemma1SuiteTest(stf.BaseSuiteTest):
    suite_id = 'lemma1'

    def test_every_family(self):
        for family in ('loxodromic', 'parabolic', 'translation'):
            report = self.run_suite(family=family)
            self.assertTrue(report.passed, (family, report.violations))
            self.assertEqual(report.config['family'], family)

    def test_triple_compose_reading(self):
        from hyp4tubes import conf
        conf.conf['hyp4tubes']['exp3_reading'] = 'triple_compose'
        report = self.run_suite()
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(report.config['exp3_reading'], 'triple_compose')

class Lemma2SuiteTest(stf.BaseSuiteTest):
    suite_id = 'lemma2'

class Lemma3SuiteTest(stf.BaseSuiteTest):
    suite_id = 'lemma3'

    def test_seed_changes_report(self):
        first = self.run_suite(seed=1)
        second = self.run_suite(seed=2)
        self.assertNotEqual(first.worst_margin, second.worst_margin)

if __name__ == '__main__':
    unittest.main()
