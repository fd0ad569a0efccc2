import unittest

import suite_test_fixture as stf


class Lemma4SuiteTest(stf.BaseSuiteTest):
    suite_id = 'lemma4'

class Prop4SuiteTest(stf.BaseSuiteTest):
    suite_id = 'prop4'

class Lemma5SuiteTest(stf.BaseSuiteTest):
    suite_id = 'lemma5'

class Cor5SuiteTest(stf.BaseSuiteTest):
    suite_id = 'cor5'

    def test_alternative_notes(self):
        report = self.run_suite()
        self.assertIn('parabolic_alternative', report.notes)
        self.assertIn('hyperbolic_alternative', report.notes)
        # Every scored trial satisfies at least one alternative.
        self.assertGreaterEqual(report.notes['parabolic_alternative'] + report.notes['hyperbolic_alternative'],
                                report.trials)

if __name__ == '__main__':
    unittest.main()
