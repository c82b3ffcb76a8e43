"""Tests for argument parsing and exit-code mapping."""

import argparse
import json

import pytest

from main import build_parser, k_list, run


@pytest.fixture(autouse=True)
def _env(clean_env):
    return clean_env


class TestParser:
    """Tests for build_parser."""

    def test_simulate_flags(self):
        """Repeated --adversary flags accumulate."""
        argv = ["simulate", "s.json", "--adversary", "c1=honest"]
        args = build_parser().parse_args(argv + ["--adversary", "h1=withhold-signature"])
        assert args.command == "simulate"
        assert args.adversary == ["c1=honest", "h1=withhold-signature"]

    def test_bench_defaults(self):
        """Bench runs three sizes over five seeds by default."""
        args = build_parser().parse_args(["bench"])
        assert (args.hubs, args.delta, args.seeds) == (3, 5, 5)
        assert args.k_list == [1000, 2000, 4000]

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["solve"],
            ["solve", "s.json", "--solver", "simplex"],
            ["bench", "--k-list", "a,b"],
            ["bench", "--k-list", "-1"],
            ["launch"],
        ],
    )
    def test_usage_errors_exit_invalid(self, argv):
        """Usage errors exit with the invalid-input code."""
        with pytest.raises(SystemExit) as exc_info:
            run(argv)
        assert exc_info.value.code == 3


class TestKList:
    """Tests for the --k-list type."""

    def test_parses(self):
        """Comma-separated sizes, blanks ignored."""
        assert k_list("0, 10,,20") == [0, 10, 20]

    def test_empty(self):
        """At least one size is needed."""
        with pytest.raises(argparse.ArgumentTypeError):
            k_list(",")


class TestExitCodes:
    """Tests for run's mapping of failures to exit codes."""

    def test_missing_scenario(self, tmp_path):
        """An unreadable scenario is invalid input."""
        assert run(["solve", str(tmp_path / "absent.json")]) == 3

    def test_bad_env_setting(self, crossing_path, clean_env):
        """A bad environment setting is invalid input."""
        clean_env.setenv("WISER_SOLVER", "simplex")
        assert run(["solve", str(crossing_path)]) == 3

    def test_env_file(self, crossing_path, env_file, tmp_path):
        """Defaults load from --env-file when the scenario leaves them out."""
        doc = json.loads(crossing_path.read_text())
        del doc["config"]["solver"]
        scenario = tmp_path / "scenario.json"
        scenario.write_text(json.dumps(doc))
        out = tmp_path / "report.json"
        path = env_file(WISER_SOLVER="greedy")
        assert run(["--env-file", path, "solve", str(scenario), "--output", str(out)]) == 0
        assert json.loads(out.read_text())["solver_stats"]["solver"] == "greedy"

    def test_log_level_flag(self, crossing_path, tmp_path):
        """--log-level is accepted ahead of the subcommand."""
        out = tmp_path / "report.json"
        assert run(["--log-level", "DEBUG", "solve", str(crossing_path), "--output", str(out)]) == 0
