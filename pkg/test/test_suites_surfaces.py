import unittest

import suite_test_fixture as stf

from hyp4tubes import conf
from hyp4tubes.surface2d import primitive_classes


class Prop6SuiteTest(stf.BaseSuiteTest):
    suite_id = 'prop6'

    def test_grid_size(self):
        report = self.run_suite()
        # Two checks per grid point and one near r = 1 per value of t.
        self.assertEqual(report.checks, 100 * 100 * 2 + 100)

class Lemma11SuiteTest(stf.BaseSuiteTest):
    suite_id = 'lemma11'

    def test_class_pairs(self):
        conf.conf['verify']['max_pq'] = 4
        report = self.run_suite()
        n = len(primitive_classes(4))
        self.assertEqual(report.notes['class_pairs'], n * (n - 1) // 2)
        self.assertGreater(report.notes['intersecting_pairs'], 0)
        self.assertEqual(report.config['max_pq'], 4)

class CurveBoundSuiteTest(stf.BaseSuiteTest):
    suite_id = 'curve_bound'

if __name__ == '__main__':
    unittest.main()
