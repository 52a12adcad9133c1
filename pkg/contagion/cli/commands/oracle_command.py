"""Batch run of the brute-force equivalence suites."""
import argparse

import pandas as pd

from contagion.cli.commands.base_command import BaseCommand
from contagion.cli.oracle_suites import SUITES, OracleSettings, run_suites
from contagion.core.errors import AcceptanceError

SHOWN_FAILURES = 5


class OracleCommand(BaseCommand):
    """Runs every suite and fails with exit code 3 if any comparison failed."""

    COMMAND_NAME = "oracle-check"
    LOG_NAME = "Oracle"
    HELP = "brute-force equivalence suites on small random instances"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--suite", action="append", choices=sorted(SUITES), help="run only these suites")
        parser.add_argument("--max-n", type=int, help="largest instance size overriding oracle.max_n")
        parser.add_argument(
            "--perturb", action="store_true", help="push LT column sums past 1 to exercise validation"
        )

    def run(self, args: argparse.Namespace) -> int:
        settings = OracleSettings(
            max_n=args.max_n or self.config.get("oracle.max_n"),
            instances=self.config.get("oracle.instances"),
            perturb=args.perturb or self.config.get("oracle.perturb"),
        )
        self.log("Started: max_n=%d, %d instance(s) per suite", settings.max_n, settings.instances)
        results = run_suites(settings, self.seed, args.suite, self.create_run("suites"))
        self.write_table(pd.DataFrame([r.to_row() for r in results]), "oracle_summary")

        failed = [r for r in results if not r.passed]
        for result in results:
            if result.passed:
                self.log("%s: %d checks passed (%d skipped)", result.name, result.checked, result.skipped)
        for result in failed:
            for message in result.failures[:SHOWN_FAILURES]:
                self.log_error("%s: %s", result.name, message)
        if failed:
            raise AcceptanceError(
                "suites failed: " + ", ".join(f"{r.name} ({len(r.failures)})" for r in failed)
            )
        self.log_success("Finished: all %d suite(s) passed", len(results))
        return 0
