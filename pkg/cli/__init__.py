"""Command-line surface: scenario and report documents, generators and subcommands."""

from .commands import (
    EXIT_ABORTED,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_VERIFY_FAILED,
    apply_flags,
    cmd_bench,
    cmd_reduce_subset_sum,
    cmd_simulate,
    cmd_solve,
    cmd_verify,
)
from .config import CliConfig
from .generate import bench_instance, random_instance, random_scenario, random_topology
from .report import Baseline, ExecutionSummary, Report, build_report, parse_report
from .scenario import Scenario, dump_scenario, load_scenario, parse_scenario, to_json
from .verify import VerifyResult, verify_report

__all__ = [
    "EXIT_ABORTED",
    "EXIT_INVALID",
    "EXIT_OK",
    "EXIT_VERIFY_FAILED",
    "apply_flags",
    "cmd_bench",
    "cmd_reduce_subset_sum",
    "cmd_simulate",
    "cmd_solve",
    "cmd_verify",
    "CliConfig",
    "bench_instance",
    "random_instance",
    "random_scenario",
    "random_topology",
    "Baseline",
    "ExecutionSummary",
    "Report",
    "build_report",
    "parse_report",
    "Scenario",
    "dump_scenario",
    "load_scenario",
    "parse_scenario",
    "to_json",
    "VerifyResult",
    "verify_report",
]
