from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from src.fields.models import RSField, UnitsConfig
from src.fields.rs import divergence_residual, energy_norm, transverse_project
from src.fields.sources import plane_wave_values, random_transverse_field, synth_plane_waves
from src.propagation.crosscheck import crosscheck_report
from src.propagation.fdtd import evolve_fd_maxwell
from src.propagation.models import Method
from src.propagation.spectral import evolve_spectral
from src.scenarios.checks import CheckResult, action_suite, bound, covariance_suite, measured
from src.scenarios.config import ScenarioConfig, SourceKind, Subcommand, load_scenario
from src.scenarios.formatters import format_crosscheck, format_report
from src.spin.helicity import helicity_decompose
from src.storage.csv_writers import write_spectrum_csv, write_vortex_csv
from src.storage.field_file import read_field, write_field
from src.vortex.beams import counter_propagating_probe, lg_vortex_sampler, synth_lg_beam
from src.vortex.models import LGBeamParams, VortexLineSet
from src.vortex.tracing import Sampler, trace_vortex_lines, vortex_scalar

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2


@dataclass
class ScenarioOutcome:
    results: list[CheckResult]
    details: list[str] = field(default_factory=list)
    artifacts: list[Path] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _lg_beams(cfg: ScenarioConfig) -> list[LGBeamParams]:
    params = cfg.source.lg_params()  # type: ignore[union-attr]
    beams = [params]
    if cfg.vortex.perturbation > 0:
        beams.append(counter_propagating_probe(params, cfg.vortex.perturbation))
    return beams


def build_source(cfg: ScenarioConfig, units: UnitsConfig) -> RSField:
    source = cfg.source
    if source is None:
        raise ValueError("scenario has no [source] section")
    if source.kind is SourceKind.FILE:
        return read_field(cfg.resolve_path(source.path or ""))

    grid = cfg.grid.to_grid()  # type: ignore[union-attr]
    if source.kind is SourceKind.PLANE_WAVES:
        return synth_plane_waves(source.plane_waves(), grid, 0.0, source.sign, units)
    if source.kind is SourceKind.RANDOM_TRANSVERSE:
        return random_transverse_field(grid, source.seed, source.max_mode, source.sign)
    primary, *extra = _lg_beams(cfg)
    return synth_lg_beam(primary, grid, 0.0, source.sign, units, extra=extra)


def vortex_sampler(cfg: ScenarioConfig, units: UnitsConfig) -> Sampler | None:
    """Exact F.F for analytic sources; None falls back to grid interpolation."""
    source = cfg.source
    if source is None or source.kind in (SourceKind.FILE, SourceKind.RANDOM_TRANSVERSE):
        return None
    grid = cfg.grid.to_grid()  # type: ignore[union-attr]
    if source.kind is SourceKind.LG_BEAM:
        return lg_vortex_sampler(_lg_beams(cfg), grid, 0.0, source.sign, units)
    waves = source.plane_waves()

    def sample(points: np.ndarray) -> np.ndarray:
        F = plane_wave_values(waves, grid, points, 0.0, source.sign, units)
        return np.sum(F * F, axis=-1)

    return sample


# ── Subcommands ───────────────────────────────────────────────────────


def _propagate(cfg: ScenarioConfig, units: UnitsConfig, out: Path) -> ScenarioOutcome:
    f0 = build_source(cfg, units)
    prop = cfg.propagation.to_config()  # type: ignore[union-attr]
    checks = cfg.checks
    artifacts = []
    if cfg.source.kind is not SourceKind.FILE:  # type: ignore[union-attr]
        write_field(f0, out / "initial.rsf")
        artifacts.append(out / "initial.rsf")

    logger.info("Propagating to t=%g with the %s method", prop.t_final, prop.method.value)
    if prop.method is Method.SPECTRAL:
        f1 = evolve_spectral(f0, prop, units)
    else:
        f1 = evolve_fd_maxwell(f0, prop, units)
    write_field(f1, out / "final.rsf")
    artifacts.append(out / "final.rsf")

    e0, e1 = energy_norm(f0), energy_norm(f1)
    drift = abs(e1 - e0) / e0 if e0 > 0 else abs(e1)
    _, d0 = divergence_residual(f0)
    _, d1 = divergence_residual(f1)
    results = [measured("initial energy", e0), measured("initial divergence", d0)]
    if prop.method is Method.SPECTRAL:
        results.append(bound("spectral energy drift", drift, checks.energy_drift_tol))
        results.append(bound("spectral divergence drift", abs(d1 - d0), checks.divergence_drift_tol))
    else:
        results.append(measured("finite-difference energy drift", drift))
        results.append(measured("finite-difference divergence drift", abs(d1 - d0)))

    details: list[str] = []
    if cfg.propagation.crosscheck:  # type: ignore[union-attr]
        report = crosscheck_report(f0, prop, units)
        results.append(measured("crosscheck discrepancy", report.discrepancy))
        details = format_crosscheck(report)
    return ScenarioOutcome(results, details, artifacts)


def _spectrum(cfg: ScenarioConfig, units: UnitsConfig, out: Path) -> ScenarioOutcome:
    f = build_source(cfg, units)
    spectrum = helicity_decompose(f)
    path = out / "spectrum.csv"
    rows = write_spectrum_csv(spectrum, path)
    energy = energy_norm(f)
    parseval = abs(spectrum.total_energy() - energy) / energy if energy > 0 else spectrum.total_energy()
    transverse = transverse_project(f)
    longitudinal = float(np.sum(np.abs(spectrum.a_zero) ** 2))
    results = [
        measured("modes", rows),
        bound("parseval", parseval, cfg.checks.parseval_tol),
        measured("positive helicity energy", float(np.sum(np.abs(spectrum.a_plus) ** 2))),
        measured("negative helicity energy", float(np.sum(np.abs(spectrum.a_minus) ** 2))),
        measured("longitudinal energy", longitudinal),
        measured("transverse energy", energy_norm(transverse)),
    ]
    return ScenarioOutcome(results, artifacts=[path])


def _vortex(cfg: ScenarioConfig, units: UnitsConfig, out: Path) -> ScenarioOutcome:
    f = build_source(cfg, units)
    w = vortex_scalar(f)
    path = out / "vortex_lines.csv"
    if w.degenerate:
        write_vortex_csv(VortexLineSet(grid=f.grid), path)
        results = [
            measured("null field", 1.0),
            measured("max |W| / mean |F|^2", float(np.max(np.abs(w.W))) / w.scale if w.scale else 0.0),
        ]
        return ScenarioOutcome(results, ["F.F vanishes identically; no isolated vortex lines"], [path])

    lines = trace_vortex_lines(w, vortex_sampler(cfg, units), refine=cfg.vortex.refine)
    rows = write_vortex_csv(lines, path)
    results = [
        measured("vortex lines", lines.num_lines),
        measured("vertices", rows),
        bound("max vertex |W| / mean |F|^2", lines.max_relative_residual(), cfg.vortex.residual_tol),
    ]
    return ScenarioOutcome(results, artifacts=[path])


def _check_covariance(cfg: ScenarioConfig, units: UnitsConfig, out: Path) -> ScenarioOutcome:
    return ScenarioOutcome(covariance_suite(cfg.checks, units))


def _check_action(cfg: ScenarioConfig, units: UnitsConfig, out: Path) -> ScenarioOutcome:
    return ScenarioOutcome(action_suite(cfg.action, cfg.checks))


_DISPATCH = {
    Subcommand.PROPAGATE: _propagate,
    Subcommand.SPECTRUM: _spectrum,
    Subcommand.VORTEX: _vortex,
    Subcommand.CHECK_COVARIANCE: _check_covariance,
    Subcommand.CHECK_ACTION: _check_action,
}


def run_scenario(
    config_path: str | Path,
    subcommand: Subcommand | str,
    out_dir: str | Path | None = None,
) -> int:
    """Run one subcommand and write its artifacts plus ``report.txt``.

    Returns the process exit status. Configuration errors propagate as
    ConfigError so the caller can print them.
    """
    sub = Subcommand(subcommand)
    cfg = load_scenario(config_path, sub)
    out = Path(out_dir) if out_dir is not None else cfg.resolve_path(cfg.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    units = cfg.units.to_units()

    logger.info("Running %s from %s into %s", sub.value, config_path, out)
    outcome = _DISPATCH[sub](cfg, units, out)
    report = format_report(sub.value, outcome.results, outcome.details)
    (out / "report.txt").write_text(report)

    for result in outcome.results:
        if not result.passed:
            logger.error("Check failed: %s = %.17g", result.name, result.value)
    return EXIT_OK if outcome.passed else EXIT_CHECK_FAILED
