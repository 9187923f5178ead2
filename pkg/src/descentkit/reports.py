"""JSON payloads shared by the CLI and the acceptance suite."""

from __future__ import annotations

from typing import Any

from .descent import STEPS, Certificate, ExtensionContext, Failure, descend, descent_criterion, verify_certificate
from .config import Config
from .gallery import OracleResult, decide_extended_oracle
from .io import module_to_json
from .errors import BudgetExceeded
from .module import Module

STEP_KEYS = ("S2", "S3", "S4", "S5", "S6", "S7")


def step_checks(outcome: Certificate | Failure) -> dict[str, bool]:
    if isinstance(outcome, Certificate):
        return {k: True for k in STEP_KEYS}
    failed = int(outcome.step[1])
    return {k: int(k[1]) < failed for k in STEP_KEYS}


def discrepancy(criterion_free: bool, outcome_ok: bool, oracle: str) -> list[str]:
    """Disagreements between the criterion, the construction and the oracle."""
    out = []
    if oracle in ("yes", "no"):
        ext = oracle == "yes"
        if criterion_free and not ext:
            out.append("criterion_free_but_not_extended")
        if not criterion_free and ext:
            out.append("extended_but_criterion_fails")
        if outcome_ok and not ext:
            out.append("certificate_but_not_extended")
        if not outcome_ok and ext:
            out.append("extended_but_descent_failed")
    return out


def descent_report(
    ctx: ExtensionContext,
    n: Module,
    config: Config,
    algebra_a_ref: str = "A.json",
    oracle: bool = True,
) -> tuple[dict[str, Any], Certificate | Failure, OracleResult | None]:
    f = ctx.field
    verdict = descent_criterion(ctx, n)
    outcome = descend(ctx, n, config)
    crit: dict[str, Any] = {"free": verdict.criterion_free}
    if verdict.criterion_free:
        crit["rank"] = verdict.witness.rank
    rep: dict[str, Any] = {
        "criterion": crit,
        "outcome": "certificate" if isinstance(outcome, Certificate) else "failure",
        "checks": step_checks(outcome),
        "retries_used": outcome.retries_used if isinstance(outcome, Certificate) else max(len(outcome.attempts) - 1, 0),
        "attempts": [{"attempt": i, "result": s} for i, s in outcome.attempts],
    }
    if isinstance(outcome, Certificate):
        rep["M"] = module_to_json(outcome.M, algebra_a_ref)
        rep["rank"] = outcome.rank
        rep["verified"] = verify_certificate(ctx, n, outcome).ok
        if outcome.shifts is not None:
            rep["shifts"] = [list(s) for s in outcome.shifts]
    else:
        rep["failed_step"] = outcome.step[:2]
        rep["failed_step_name"] = outcome.step
        rep["message"] = outcome.message
        if outcome.witness is not None:
            rep["witness"] = f.to_strings(outcome.witness)
    orc = None
    if oracle and f.is_finite:
        try:
            orc = decide_extended_oracle(ctx, n, config)
            rep["oracle"] = orc.status
        except BudgetExceeded:
            rep["oracle"] = "budget_exceeded"
    else:
        rep["oracle"] = "skipped"
    rep["discrepancy"] = discrepancy(verdict.criterion_free, isinstance(outcome, Certificate), rep["oracle"])
    return rep, outcome, orc


__all__ = ["descent_report", "discrepancy", "step_checks", "STEPS"]
