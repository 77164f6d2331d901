"""mdcf.commands.verify
========================
Mini-README: ``verify`` produces one ``FamilyReport`` per family instance of a
parameter sweep. With ``--jobs N`` the instances run in a process pool; reports are
always emitted in input order. Exit 0 iff every report is ok (Strict rows, period
claims and oracle cross-checks), 4 otherwise.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Optional, TextIO

from ..logger import get_logger
from ..models import ExitCode, FamilyReport, Strategy
from ..schemas import FamilySpec, RunConfig
from ..services import verify_family
from .output import render_reports

LOGGER = get_logger(__name__)


def _verify_one(
    spec: FamilySpec,
    *,
    strategy: Optional[Strategy],
    max_steps: int,
    oracle: bool,
    oracle_steps: Optional[int],
    fixtures_dir: Optional[Path],
) -> FamilyReport:
    return verify_family(
        spec,
        strategy,
        max_steps,
        oracle=oracle,
        oracle_steps=oracle_steps,
        fixtures_dir=fixtures_dir,
    )


def cmd_verify(config: RunConfig, out: TextIO) -> ExitCode:
    task = partial(
        _verify_one,
        strategy=config.strategy,
        max_steps=config.max_steps,
        oracle=config.oracle,
        oracle_steps=config.oracle_steps,
        fixtures_dir=config.fixtures_dir,
    )
    if config.jobs > 1 and len(config.families) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(task, config.families))
    else:
        reports = [task(spec) for spec in config.families]
    out.write(render_reports(reports, config.output_format))
    failed = [r.label for r in reports if not r.ok]
    if failed:
        LOGGER.warning("verification failed for %s", ", ".join(failed))
        return ExitCode.VERIFICATION_FAILED
    return ExitCode.OK
