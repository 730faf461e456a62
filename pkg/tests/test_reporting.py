#!/usr/bin/env python3
"""
Tests for configuration validation, command dispatch, reports and the CLI
"""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

import json
import logging
import tempfile
import unittest
from unittest.mock import patch

from config.settings import Settings
from src.errors import ConfigValidationError, UsageError
import pandas as pd

from src.reporting import COMMANDS, ReportDocument, emit_report, main, parse_config, parse_report, run_command
from src.spectrum import Verdict
from src.utils.logger import bind_run, command_logger, setup_logger

CONFIGS = Path(__file__).parent.parent / "configs"

# command: (config, depth override)
ROUND_TRIPS = {
    "lengths": ("fuchsian_222.json", None),
    "orthospectrum": ("diagonal_n2.json", 1),
    "verify-a1": ("product_n2.json", 1),
    "verify-a2": ("twisted_diagonal_n2.json", 1),
    "verify-b": ("diagonal_n2.json", 2),
    "double-check": ("fuchsian_222.json", 2),
    "gap": ("gap_n2.json", 2),
    "width": ("width_n2.json", None),
}

# shipped config: command it is meant for
SHIPPED_RUNS = {
    "fuchsian_222.json": "orthospectrum",
    "diagonal_n2.json": "verify-b",
    "twisted_diagonal_n2.json": "verify-a1",
    "product_n2.json": "verify-a2",
    "gap_n2.json": "gap",
    "explicit_n1.json": "orthospectrum",
    "width_n2.json": "width",
}


def load(name: str):
    return parse_config((CONFIGS / name).read_text(encoding="utf-8"))


def codes(text: str):
    try:
        parse_config(text)
    except ConfigValidationError as e:
        return e.codes
    return []


class TestConfigSchema(unittest.TestCase):
    """JSON validation into RunConfig"""

    def test_shipped_configs(self):
        """Every config in configs/ validates"""
        paths = sorted(CONFIGS.glob("*.json"))
        self.assertGreaterEqual(len(paths), 7)
        for path in paths:
            config = parse_config(path.read_text(encoding="utf-8"))
            self.assertGreaterEqual(config.n, 1, path.name)

    def test_defaults(self):
        """Missing keys fall back to the settings defaults"""
        config = parse_config('{"n": 1, "representation": {"kind": "fuchsian", "cuffs": [2, 2, 2]}}')
        self.assertEqual(config.depth, 6)
        self.assertEqual(config.boundary, "gamma0")
        self.assertEqual(config.output_format, "json")
        self.assertIsNone(config.output_path)
        self.assertFalse(config.include_timings)
        self.assertEqual(config.representation.cuffs, (2.0, 2.0, 2.0))

    def test_issue_codes(self):
        """Each kind of problem gets its own code"""
        cases = {
            "invalid_json": '{"n": 1',
            "missing": '{}',
            "unknown_key": '{"n": 1, "colour": "blue"}',
            "out_of_range": '{"n": 1, "depth": 99}',
            "rank_mismatch": '{"n": 2, "representation": {"kind": "fuchsian", "cuffs": [2, 2, 2]}}',
            "arity": '{"n": 1, "representation": {"kind": "fuchsian", "cuffs": [2, 2]}}',
            "not_orthogonal": '{"n": 2, "representation": {"kind": "twisted_diagonal", "cuffs": [2, 2, 2],'
                              ' "twists": {"g1": [[1, 1], [0, 1]]}}}',
            "not_symplectic": '{"n": 1, "representation": {"kind": "explicit",'
                              ' "generators": {"g1": [[2, 0], [0, 1]], "g2": [[1, 0], [0, 1]]}}}',
            "invalid_word": '{"n": 1, "width_words": ["h1"]}',
            "type": '{"n": "two"}',
            "unsupported": '{"n": 1, "surface": "torus"}',
            "invalid_value": '{"n": 1, "boundary": "gamma7"}',
        }
        for code, text in cases.items():
            self.assertIn(code, codes(text), code)

    def test_collects_every_issue(self):
        """All problems are reported at once, with their paths"""
        with self.assertRaises(ConfigValidationError) as context:
            parse_config('{"n": 1, "depth": -1, "boundary": "gamma7", "output": {"format": "xml"}}')
        paths = [issue.path for issue in context.exception.issues]
        self.assertEqual(paths, ["$.depth", "$.boundary", "$.output.format"])

    def test_product_factor_count(self):
        """A product needs exactly n factors"""
        text = '{"n": 2, "representation": {"kind": "product", "factors": [{"cuffs": [2, 2, 2]}]}}'
        self.assertEqual(codes(text), ["arity"])

    def test_with_overrides(self):
        """Flags override the file; invalid flags are config errors"""
        config = load("fuchsian_222.json")
        overridden = config.with_overrides(depth=2, boundary="gamma1", output_format="csv")
        self.assertEqual((overridden.depth, overridden.boundary, overridden.output_format), (2, "gamma1", "csv"))
        self.assertEqual(config.depth, 10)
        with self.assertRaises(ConfigValidationError) as context:
            config.with_overrides(depth=99)
        self.assertEqual(context.exception.codes, ["out_of_range"])

    def test_echo_order(self):
        """Resolved configuration echoes in a fixed key order"""
        echo = load("twisted_diagonal_n2.json").echo()
        self.assertEqual(list(echo), ["n", "surface", "representation", "depth", "boundary", "tolerances",
                                      "output", "gap", "width_words", "report"])
        self.assertEqual(list(echo["representation"]), ["kind", "cuffs", "twists"])


class TestSettings(unittest.TestCase):
    """Environment-backed defaults"""

    def test_defaults_validate(self):
        """Shipped defaults pass validation"""
        self.assertTrue(Settings.validate())

    def test_invalid_settings(self):
        """Every invalid setting is listed in one ValueError"""
        with patch.object(Settings, "DEFAULT_FORMAT", "xml"), patch.object(Settings, "TOL_PD_MARGIN", 0.0):
            with self.assertRaises(ValueError) as context:
                Settings.validate()
        self.assertIn("DEFAULT_FORMAT", str(context.exception))
        self.assertIn("TOL_PD_MARGIN", str(context.exception))

    def test_max_depth_bounded_by_word_keys(self):
        """MAX_DEPTH above 20 is rejected; configs never exceed 20 either way"""
        with patch.object(Settings, "MAX_DEPTH", 25):
            with self.assertRaises(ValueError) as context:
                Settings.validate()
            self.assertIn("MAX_DEPTH", str(context.exception))
            self.assertEqual(codes('{"n": 1, "depth": 21}'), ["out_of_range"])
            config = parse_config('{"n": 1, "depth": 20}')
        self.assertEqual(config.max_depth, 20)


class TestCommands(unittest.TestCase):
    """run_command and report encodings"""

    def test_unknown_command(self):
        """Unknown commands are usage errors"""
        with self.assertRaises(UsageError):
            run_command("frobnicate", load("fuchsian_222.json"))

    def test_lengths(self):
        """n = 1: ℓ^F = L/2 and ℓ^R = L per boundary"""
        document = run_command("lengths", load("fuchsian_222.json"))
        self.assertTrue(document.passed)
        for entry in document.values["boundaries"]:
            self.assertAlmostEqual(entry["ell_F"], 1.0, places=8)
            self.assertAlmostEqual(entry["ell_R"], 2.0, places=8)

    def test_json_deterministic(self):
        """Same config, byte-identical JSON with a trailing newline"""
        config = load("diagonal_n2.json").with_overrides(depth=1)
        first = emit_report(run_command("orthospectrum", config))
        second = emit_report(run_command("orthospectrum", config))
        self.assertEqual(first, second)
        self.assertTrue(first.endswith(b"}\n"))
        document = json.loads(first)
        self.assertEqual(document["command"], "orthospectrum")
        self.assertNotIn("timings", document)
        self.assertEqual(document["spectra"][0]["record_count"], len(document["spectra"][0]["records"]))

    def test_csv_header(self):
        """One ell_vect column per rank"""
        config = load("diagonal_n2.json").with_overrides(depth=1)
        payload = emit_report(run_command("orthospectrum", config), "csv").decode("utf-8")
        header = payload.splitlines()[0]
        self.assertEqual(header, "delta_word,theta_plus,theta_minus,ell_F,ell_R,ell_vect_1,ell_vect_2,"
                                 "dF_term,lower_term,upper_term")
        self.assertGreater(len(payload.splitlines()), 1)

    def test_empty_csv(self):
        """Commands without spectra still emit the header"""
        payload = emit_report(run_command("lengths", load("fuchsian_222.json")), "csv").decode("utf-8")
        self.assertEqual(payload.splitlines(), ["delta_word,theta_plus,theta_minus,ell_F,ell_R,ell_vect_1,"
                                                "dF_term,lower_term,upper_term"])

    def test_unknown_format(self):
        """Only json and csv"""
        with self.assertRaises(ValueError):
            emit_report(ReportDocument(command="lengths", config={}), "xml")

    def test_width(self):
        """Width words from the config, one entry each"""
        document = run_command("width", load("width_n2.json"))
        widths = document.values["widths"]
        self.assertEqual([entry["word"] for entry in widths], ["g1", "g2^-1 g1^-1", "g1 g2^-1"])
        self.assertTrue(all(entry["width"] > 0 for entry in widths))

    def test_every_command_is_dispatched(self):
        """The command list matches the CLI choices"""
        self.assertEqual(COMMANDS, ("lengths", "orthospectrum", "verify-a1", "verify-a2", "verify-b",
                                    "double-check", "gap", "width"))


class TestReportParsing(unittest.TestCase):
    """parse_report inverts emit_report"""

    @classmethod
    def setUpClass(cls):
        cls.documents = {}
        for command, (name, depth) in ROUND_TRIPS.items():
            config = load(name) if depth is None else load(name).with_overrides(depth=depth)
            cls.documents[command] = run_command(command, config)

    def test_json_round_trip(self):
        """Every command: parse(emit(doc)) emits the same bytes"""
        self.assertEqual(sorted(self.documents), sorted(COMMANDS))
        for command, document in self.documents.items():
            payload = emit_report(document)
            parsed = parse_report(payload)
            with self.subTest(command=command):
                self.assertIsInstance(parsed, ReportDocument)
                self.assertEqual(parsed.to_dict(), document.to_dict())
                self.assertEqual(emit_report(parsed), payload)
                self.assertEqual(parsed.passed, document.passed)
                self.assertEqual([verdict.name for verdict in parsed.verdicts],
                                 [verdict.name for verdict in document.verdicts])

    def test_csv_round_trip(self):
        """Every command: the parsed CSV is the records frame"""
        for command, document in self.documents.items():
            parsed = parse_report(emit_report(document, "csv"), "csv")
            with self.subTest(command=command):
                pd.testing.assert_frame_equal(parsed, document.records_frame(), check_dtype=False,
                                              check_index_type=False)

    def test_parsed_document_keeps_csv(self):
        """A parsed JSON report still emits the CSV of its first spectrum"""
        document = self.documents["orthospectrum"]
        parsed = parse_report(emit_report(document))
        self.assertEqual(emit_report(parsed, "csv"), emit_report(document, "csv"))

    def test_rejects_foreign_documents(self):
        """Other tools' JSON and truncated reports are rejected"""
        with self.assertRaises(ValueError):
            parse_report(b'{"tool": "other"}')
        with self.assertRaises(ValueError):
            parse_report('{"tool": "symportho", "command": "lengths"}')
        with self.assertRaises(ValueError):
            parse_report(b"", "xml")


class TestLogging(unittest.TestCase):
    """Run labels and per-command loggers"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "run.log"
        self.logger = setup_logger("symportho_log_test", str(self.path), "INFO")

    def tearDown(self):
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)
        bind_run()
        self.tmp.cleanup()

    def test_run_label(self):
        """Each line carries the command, boundary, rank and depth of the run"""
        self.assertEqual(bind_run("verify-b", "gamma0", 2, 8), "verify-b/gamma0 n=2 depth=8")
        logging.getLogger("symportho_log_test.enumeration").debug("level 8 done")
        bind_run()
        logging.getLogger("symportho_log_test").info("idle")
        lines = self.path.read_text(encoding="utf-8").splitlines()
        self.assertIn("[verify-b/gamma0 n=2 depth=8] symportho_log_test.enumeration - DEBUG", lines[0])
        self.assertIn("[-] symportho_log_test - INFO", lines[1])

    def test_command_logger(self):
        """Command loggers live under src.commands"""
        self.assertEqual(command_logger("double-check").name, "src.commands.double-check")
        self.assertTrue(command_logger("gap").name.startswith("src."))


class TestCli(unittest.TestCase):
    """Exit codes and report files"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = str(Path(self.tmp.name) / "report.json")

    def tearDown(self):
        self.tmp.cleanup()

    def test_success(self):
        """Exit 0 and a JSON report at --out"""
        code = main(["lengths", "--config", str(CONFIGS / "fuchsian_222.json"), "--out", self.out])
        self.assertEqual(code, 0)
        document = json.loads(Path(self.out).read_text(encoding="utf-8"))
        self.assertTrue(document["passed"])
        self.assertEqual(document["config"]["output"]["path"], self.out)

    def test_missing_config(self):
        """Exit 1 when the config file does not exist"""
        missing = str(Path(self.tmp.name) / "missing.json")
        self.assertEqual(main(["lengths", "--config", missing]), 1)

    def test_bad_arguments(self):
        """Exit 1 on usage errors"""
        self.assertEqual(main(["frobnicate", "--config", str(CONFIGS / "fuchsian_222.json")]), 1)
        self.assertEqual(main(["lengths"]), 1)
        self.assertEqual(main(["lengths", "--config", str(CONFIGS / "fuchsian_222.json"), "--depth", "99"]), 1)

    def test_invalid_config(self):
        """Exit 1 on validation errors"""
        path = Path(self.tmp.name) / "bad.json"
        path.write_text('{"n": 0}', encoding="utf-8")
        self.assertEqual(main(["lengths", "--config", str(path)]), 1)

    def test_failed_verdict(self):
        """Exit 2 when a verdict fails; the report is still written"""
        document = ReportDocument(command="lengths", config={},
                                  verdicts=[Verdict("whole_surface", False, -1.0)])
        with patch("src.reporting.cli.run_command", return_value=document):
            code = main(["lengths", "--config", str(CONFIGS / "fuchsian_222.json"), "--out", self.out])
        self.assertEqual(code, 2)
        self.assertFalse(json.loads(Path(self.out).read_text(encoding="utf-8"))["passed"])

    def test_shipped_configs_run(self):
        """Each shipped config runs its command at full depth with exit 0"""
        self.assertEqual(sorted(SHIPPED_RUNS), sorted(path.name for path in CONFIGS.glob("*.json")))
        for name, command in SHIPPED_RUNS.items():
            out = str(Path(self.tmp.name) / f"{name}.out")
            with self.subTest(config=name, command=command):
                self.assertEqual(main([command, "--config", str(CONFIGS / name), "--out", out]), 0)
                document = parse_report(Path(out).read_bytes(), load(name).output_format)
                if isinstance(document, ReportDocument):
                    self.assertTrue(document.passed)
                    self.assertEqual(document.command, command)

    def test_lengths_on_every_config(self):
        """lengths succeeds on every shipped config"""
        for name in SHIPPED_RUNS:
            with self.subTest(config=name):
                self.assertEqual(main(["lengths", "--config", str(CONFIGS / name), "--out", self.out]), 0)


def run_tests():
    """Run all tests"""
    print("=" * 60)
    print("🧪 Running configuration and report tests")
    print("=" * 60)
    print()

    suite = unittest.TestLoader().loadTestsFromModule(sys.modules[__name__])
    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    print()
    print("=" * 60)
    if result.wasSuccessful():
        print("✅ ALL TESTS PASSED!")
        print(f"   {result.testsRun} tests run, 0 failures")
        return 0
    else:
        print("❌ SOME TESTS FAILED!")
        print(f"   {result.testsRun} tests run")
        print(f"   {len(result.failures)} failures")
        print(f"   {len(result.errors)} errors")
        return 1


if __name__ == '__main__':
    exit(run_tests())
