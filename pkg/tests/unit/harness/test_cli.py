import io
import json
import os
import shutil
import tempfile
from unittest import TestCase

import mock

from contregime.harness import cli
from contregime.harness.experiment import ReportBundle, rows_to_table
from contregime.timegrid.cohort_io import read_cohort_csv
from tests.unit.harness.test_config import bin3_config


class TestCli(TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.config = os.path.join(self.tmp, "exp.json")
        self.write_config(bin3_config(n=300))

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def write_config(self, raw):
        with open(self.config, "w") as handle:
            json.dump(raw, handle)

    def main(self, *argv):
        out = os.path.join(self.tmp, "out")
        with mock.patch("sys.stdout", new_callable=io.StringIO) as stdout, \
                mock.patch("sys.stderr", new_callable=io.StringIO) as stderr:
            code = cli.main(list(argv) + ["--config", self.config,
                                          "--out", out])
        return code, stdout.getvalue(), stderr.getvalue()

    def test_simulate(self):
        code, _, _ = self.main("simulate")
        self.assertEqual(cli.EXIT_PASS, code)
        cohort = read_cohort_csv(os.path.join(self.tmp, "out", "cohort.csv"))
        self.assertEqual(300, len(cohort))

    def test_estimate(self):
        code, stdout, _ = self.main("estimate", "--estimator", "gcomp")
        self.assertEqual(cli.EXIT_PASS, code)
        result = json.loads(stdout)
        self.assertAlmostEqual(0.7085, result["point"], places=12)
        with open(os.path.join(self.tmp, "out", "estimate.json")) as handle:
            self.assertEqual(result, json.load(handle))

    def test_estimate_from_cohort_file(self):
        self.main("simulate")
        cohort = os.path.join(self.tmp, "out", "cohort.csv")
        code, stdout, _ = self.main("estimate", "--estimator", "ipw",
                                    "--regime", "never_treat", "--input",
                                    cohort)
        self.assertEqual(cli.EXIT_PASS, code)
        self.assertEqual(300, json.loads(stdout)["n"])

    def test_estimate_bad_regime(self):
        code, _, stderr = self.main("estimate", "--regime", "shift(delta=1)")
        self.assertEqual(cli.EXIT_ERROR, code)
        self.assertIn("continuous", stderr)

    def test_config_error(self):
        self.write_config(bin3_config(n=0))
        code, _, stderr = self.main("run")
        self.assertEqual(cli.EXIT_ERROR, code)
        self.assertIn("n: must be an integer", stderr)

    def test_report_exit_codes(self):
        table = rows_to_table([], ("a",))
        for passed, expected in ((True, cli.EXIT_PASS),
                                 (False, cli.EXIT_FAILED)):
            bundle = ReportBundle("diagnose", table, table, passed=passed)
            run = mock.Mock(return_value=bundle)
            with mock.patch.dict(cli.COMMANDS,
                                 {"diagnose": cli._report(run)}):
                code, stdout, _ = self.main("diagnose")
            self.assertEqual(expected, code)
            self.assertEqual({"kind": "diagnose", "passed": passed},
                             json.loads(stdout))
            run.assert_called_once()

    def test_converge(self):
        self.write_config(bin3_config(n=300, k_schedule=[1, 3]))
        code, _, _ = self.main("converge")
        self.assertIn(code, (cli.EXIT_PASS, cli.EXIT_FAILED))
        self.assertTrue(os.path.exists(os.path.join(self.tmp, "out",
                                                    "converge.csv")))

    def test_command_required(self):
        with mock.patch("sys.stderr", new_callable=io.StringIO):
            self.assertRaises(SystemExit, cli.main, [])
