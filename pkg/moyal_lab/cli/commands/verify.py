"""verify — run the acceptance suite and print a pass/fail summary."""

from __future__ import annotations

import logging

from pydantic import Field

from moyal_lab.cli.acceptance import run_check, select_checks
from moyal_lab.cli.export import CommandResult, Table
from moyal_lab.cli.run_config import Parameters, RunConfig
from moyal_lab.errors import DomainError

logger = logging.getLogger(__name__)


class VerifyParameters(Parameters):
    only: str | None = Field(None, description="Comma list of check numbers or keys, e.g. '3,gauge-4d'.")


class VerifyCommand:
    name = "verify"
    help = "Acceptance checks: closed forms, oracles and algebraic identities"
    parameters = VerifyParameters

    def run(self, params: VerifyParameters, run: RunConfig) -> CommandResult:
        try:
            checks = select_checks(params.only)
        except ValueError as e:
            raise DomainError(str(e)) from e

        print("=" * 60)
        print("  moyal-lab — Acceptance Verification")
        print(f"  Checks: {len(checks)}  Seed: {run.seed if run.seed is not None else 'default'}")
        print("=" * 60)

        outcomes = []
        for check in checks:
            print(f"\n{'─' * 60}")
            print(f"[{check.number:2d}] {check.title}")
            outcome = run_check(check)
            print(f"  {outcome.detail}")
            print(f"  {outcome.seconds:.2f}s (budget {outcome.budget:.0f}s)")
            outcomes.append(outcome)

        print(f"\n{'═' * 60}")
        print("  Results:")
        for o in outcomes:
            status = "✓ PASS" if o.passed else "✗ FAIL"
            print(f"    {o.number:2d} {o.key:20s} {status}  {o.seconds:7.2f}s")
        failed = [o.key for o in outcomes if not o.passed]
        print(f"{'═' * 60}")
        if failed:
            print(f"  {len(failed)} check(s) failed: {', '.join(failed)}")
            logger.error("acceptance checks failed: %s", failed)
        else:
            print("  All checks passed!")

        rows = [[o.number, o.key, o.passed, o.detail] for o in outcomes]
        return CommandResult(
            payload={
                "passed": not failed,
                "checks": [o.model_dump(exclude={"seconds"}) for o in outcomes],
            },
            table=Table(["number", "key", "passed", "detail"], rows),
            exit_code=2 if failed else 0,
        )
