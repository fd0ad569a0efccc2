import unittest

import suite_test_fixture as stf


class RuledFilmsSuiteTest(stf.BaseSuiteTest):
    suite_id = 'ruled_films'
    trials = 2

    def test_plane_count_histogram(self):
        report = self.run_suite()
        histogram = report.notes['plane_count_histogram']
        self.assertEqual(sum(histogram.values()), report.trials)
        self.assertTrue(all(int(hits) <= 8 for hits in histogram))

class Theorem4SuiteTest(stf.BaseSuiteTest):
    suite_id = 'thm4'
    trials = 2

    def test_trial_cap(self):
        self.assertEqual(self.suite.max_trials, 50)

class Theorem5SuiteTest(stf.BaseSuiteTest):
    suite_id = 'thm5'
    trials = 2

    def test_boundary_offset_note(self):
        report = self.run_suite()
        offset = report.notes['boundary_offset']
        # log(sinh(ν/2)/sinh(ν/24)) is close to log 12, above ν/2 + 1 for small ν.
        self.assertTrue(offset['exceeded'])
        self.assertGreater(offset['value'], offset['printed_bound'])

if __name__ == '__main__':
    unittest.main()
