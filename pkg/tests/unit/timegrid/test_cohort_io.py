import os
import shutil
import tempfile
from unittest import TestCase

import mock
import numpy as np

from contregime.dgp import cens3, simulate_observed
from contregime.timegrid import cohort_io


class TestCohortIO(TestCase):

    def setUp(self):
        self.dir = tempfile.mkdtemp()
        spec = cens3()
        self.cohort = simulate_observed(spec, spec.fine_grid, 50, seed=3)

    def tearDown(self):
        shutil.rmtree(self.dir)

    def test_round_trip_preserves_cohort(self):
        path = os.path.join(self.dir, "cohort.csv")
        cohort_io.write_cohort_csv(self.cohort, path)
        back = cohort_io.read_cohort_csv(path)
        np.testing.assert_array_equal(self.cohort.covariate, back.covariate)
        np.testing.assert_array_equal(self.cohort.treatment, back.treatment)
        np.testing.assert_array_equal(self.cohort.censor_time,
                                      back.censor_time)
        np.testing.assert_array_equal(np.isnan(self.cohort.outcome),
                                      np.isnan(back.outcome))
        self.assertEqual(self.cohort.grid, back.grid)

    def test_table_layout(self):
        table = cohort_io.cohort_to_table(self.cohort)
        self.assertEqual(50 * 4, len(table))
        self.assertEqual(["subject_id", "t", "a_1", "l_1", "event_time",
                          "censor_time", "outcome"], table.colnames)

    def test_write_uses_full_precision(self):
        with mock.patch.object(cohort_io.Table, "write") as mocked_write:
            cohort_io.write_cohort_csv(self.cohort, "ignored.csv")
        kwargs = mocked_write.call_args[1]
        self.assertEqual("ascii.csv", kwargs["format"])
        self.assertEqual(".17g", kwargs["formats"]["t"])
        self.assertNotIn("subject_id", kwargs["formats"])
