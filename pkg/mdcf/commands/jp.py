"""mdcf.commands.jp
====================
Mini-README: ``jp`` streams the first ``--steps`` digit rows of the classical
Jacobi-Perron expansion of the (1/alpha, alpha - k) example.
"""

from __future__ import annotations

from typing import TextIO

from ..models import ExitCode
from ..schemas import RunConfig
from ..services import family_build, jp_expand
from .expand import STATUS_EXIT_CODES
from .output import render_stream


def cmd_jp(config: RunConfig, out: TextIO) -> ExitCode:
    spec = config.families[0]
    built = family_build(spec)
    result = jp_expand(built.state, config.steps)
    out.write(render_stream(result, spec.label, config.steps, config.output_format))
    return STATUS_EXIT_CODES[result.status]
