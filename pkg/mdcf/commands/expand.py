"""mdcf.commands.expand
========================
Mini-README: ``expand`` runs one expansion, either of a catalogued family or of a raw
(minimal polynomial, window, state) triple validated before the first step, and maps
the terminal status onto the exit-code contract.
"""

from __future__ import annotations

from typing import TextIO

from ..algebra import as_rational
from ..logger import get_logger
from ..models import ExitCode, ExpansionState, ExpansionStatus, Strategy
from ..numberfield import NumberField
from ..realembed import select_root
from ..schemas import RawInput, RunConfig
from ..services import cf_expand, cross_check, family_build, jp_expand, make_state, oracle_expand
from .output import render_expansion

LOGGER = get_logger(__name__)

STATUS_EXIT_CODES = {
    ExpansionStatus.PERIODIC: ExitCode.OK,
    ExpansionStatus.BUDGET_EXHAUSTED: ExitCode.BUDGET_EXHAUSTED,
    ExpansionStatus.LEFT_DOMAIN: ExitCode.LEFT_DOMAIN,
}


def build_raw_state(raw: RawInput) -> ExpansionState:
    field = NumberField.from_highest(raw.minpoly)
    lo, hi = (as_rational(v) for v in raw.window)
    embedding = select_root(field, (lo, hi))
    return make_state(embedding, [field.element(component) for component in raw.state])


def cmd_expand(config: RunConfig, out: TextIO) -> ExitCode:
    spec = None
    label = None
    if config.raw is not None:
        state = build_raw_state(config.raw)
        strategy = config.strategy or Strategy.MAX_NORMALIZED
    else:
        spec = config.families[0]
        built = family_build(spec, config.strategy)
        state, strategy, label = built.state, built.strategy, spec.label

    if strategy is Strategy.CLASSICAL_JP:
        result = jp_expand(state, config.max_steps)
    else:
        result = cf_expand(state, strategy, config.max_steps)

    if config.oracle:
        if spec is None:
            LOGGER.warning("--oracle needs a catalogued family; skipped for raw input")
        else:
            run = oracle_expand(spec, strategy, config.oracle_steps)
            result.discrepancies.extend(cross_check(result, run.certified_rows))

    out.write(render_expansion(result, label, config.output_format))
    LOGGER.info("expand %s: %s", label or "raw input", result.status.value)
    return STATUS_EXIT_CODES[result.status]
