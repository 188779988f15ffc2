from __future__ import annotations

from src.propagation.models import CrosscheckReport, StepperReport
from src.scenarios.checks import CheckResult


def _num(value: float) -> str:
    # 17 significant digits round-trip a float64
    return format(float(value), ".17g")


def format_check(result: CheckResult) -> str:
    if result.threshold is None:
        return f"[INFO] {result.name}: {_num(result.value)}"
    status = "PASS" if result.passed else "FAIL"
    return f"[{status}] {result.name}: {_num(result.value)} (limit {_num(result.threshold)})"


def format_stepper(report: StepperReport) -> list[str]:
    return [
        f"  method: {report.method.value}",
        f"  steps: {report.steps}",
        f"  energy_drift: {_num(report.energy_drift)}",
        f"  divergence_drift: {_num(report.divergence_drift)}",
        f"  l2_discrepancy_vs_reference: {_num(report.l2_discrepancy_vs_reference)}",
    ]


def format_crosscheck(report: CrosscheckReport) -> list[str]:
    lines = ["crosscheck:"]
    lines.append(" spectral")
    lines.extend(format_stepper(report.spectral))
    lines.append(" finite-difference")
    lines.extend(format_stepper(report.finite_difference))
    return lines


def format_report(
    title: str,
    results: list[CheckResult],
    details: list[str] | None = None,
) -> str:
    """Plain-text report; byte-identical for identical inputs."""
    failed = [r for r in results if not r.passed]
    lines = [f"# {title}", ""]
    lines.extend(format_check(r) for r in results)
    if details:
        lines.append("")
        lines.extend(details)
    lines.append("")
    if failed:
        lines.append(f"RESULT: FAIL ({len(failed)} of {len(results)} checks failed)")
        lines.extend(f"  failed: {r.name}" for r in failed)
    else:
        lines.append(f"RESULT: PASS ({len(results)} checks)")
    return "\n".join(lines) + "\n"
