from __future__ import annotations

import configparser
import re
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.fields.models import Grid3, UnitsConfig
from src.fields.sources import PlaneWave
from src.lattice.models import ActionConfig, Lattice4
from src.propagation.models import Method, PropagationConfig
from src.vortex.models import LGBeamParams


class ConfigError(ValueError):
    """Scenario configuration problem, located by file line where possible."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None) -> None:
        self.path = path
        self.line = line
        where = path or "<config>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


class Subcommand(str, Enum):
    PROPAGATE = "propagate"
    SPECTRUM = "spectrum"
    VORTEX = "vortex"
    CHECK_COVARIANCE = "check-covariance"
    CHECK_ACTION = "check-action"


class SourceKind(str, Enum):
    PLANE_WAVES = "plane-waves"
    LG_BEAM = "lg-beam"
    RANDOM_TRANSVERSE = "random-transverse"
    FILE = "file"


def _sign(value: int) -> int:
    if value not in (1, -1):
        raise ValueError("must be +1 or -1")
    return value


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ── Sections ──────────────────────────────────────────────────────────


class GridSection(_Section):
    nx: int = Field(ge=2)
    ny: int = Field(ge=2)
    nz: int = Field(ge=2)
    dx: float = Field(default=1.0, gt=0)
    dy: float = Field(default=1.0, gt=0)
    dz: float = Field(default=1.0, gt=0)
    origin_x: float = 0.0
    origin_y: float = 0.0
    origin_z: float = 0.0

    def to_grid(self) -> Grid3:
        return Grid3(
            nx=self.nx, ny=self.ny, nz=self.nz,
            dx=self.dx, dy=self.dy, dz=self.dz,
            origin=(self.origin_x, self.origin_y, self.origin_z),
        )


class UnitsSection(_Section):
    c: float = Field(default=1.0, gt=0)
    hbar: float = Field(default=1.0, gt=0)

    def to_units(self) -> UnitsConfig:
        return UnitsConfig(c=self.c, hbar=self.hbar)


_WAVE_RE = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*([+-]?1)\s*(?:,\s*(\S+)\s*)?$")


def parse_waves(text: str) -> list[PlaneWave]:
    """``mx,my,mz,helicity[,amplitude]; ...`` in integer grid-mode units."""
    waves: list[PlaneWave] = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        m = _WAVE_RE.match(chunk)
        if not m:
            raise ValueError(f"cannot parse wave {chunk!r}; expected mx,my,mz,helicity[,amplitude]")
        mx, my, mz, h, amp = m.groups()
        waves.append(
            PlaneWave(
                mode=(int(mx), int(my), int(mz)),
                helicity=int(h),
                amplitude=float(amp) if amp is not None else 1.0,
            )
        )
    if not waves:
        raise ValueError("wave list is empty")
    return waves


class SourceSection(_Section):
    kind: SourceKind
    sign: int = 1
    # plane-waves
    waves: str | None = None
    # random-transverse
    seed: int = 0
    max_mode: int = Field(default=2, ge=1)
    # file
    path: str | None = None
    # lg-beam
    w0: float | None = Field(default=None, gt=0)
    wavelength: float | None = Field(default=None, gt=0)
    l: int = 0
    p: int = Field(default=0, ge=0)
    polarization: int = 1
    direction: int = 1
    axis_x: float | None = None
    axis_y: float | None = None

    check_signs = field_validator("sign", "polarization", "direction")(_sign)

    @field_validator("waves")
    @classmethod
    def check_waves(cls, value: str | None) -> str | None:
        if value is not None:
            parse_waves(value)
        return value

    @model_validator(mode="after")
    def check_kind(self) -> SourceSection:
        required = {
            SourceKind.PLANE_WAVES: ("waves",),
            SourceKind.LG_BEAM: ("w0", "wavelength"),
            SourceKind.FILE: ("path",),
            SourceKind.RANDOM_TRANSVERSE: (),
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"source kind {self.kind.value} needs {', '.join(missing)}")
        return self

    def plane_waves(self) -> list[PlaneWave]:
        return parse_waves(self.waves or "")

    def lg_params(self) -> LGBeamParams:
        axis = None
        if self.axis_x is not None or self.axis_y is not None:
            axis = (self.axis_x or 0.0, self.axis_y or 0.0)
        return LGBeamParams(
            w0=self.w0,
            wavelength=self.wavelength,
            l=self.l,
            p=self.p,
            polarization=self.polarization,
            direction=self.direction,
            axis=axis,
        )


class PropagationSection(_Section):
    t_final: float = Field(ge=0)
    dt: float | None = Field(default=None, gt=0)
    method: Method = Method.SPECTRAL
    sign: int = 1
    crosscheck: bool = False

    check_sign = field_validator("sign")(_sign)

    def to_config(self) -> PropagationConfig:
        return PropagationConfig(t_final=self.t_final, dt=self.dt, method=self.method, sign=self.sign)


class ChecksSection(_Section):
    trials: int = Field(default=100, ge=1)
    seed: int = 7
    homomorphism_tol: float = Field(default=1e-10, gt=0)
    covariance_tol: float = Field(default=1e-9, gt=0)
    duality_tol: float = Field(default=1e-12, gt=0)
    wave_tol: float = Field(default=1e-10, gt=0)
    energy_drift_tol: float = Field(default=1e-11, gt=0)
    divergence_drift_tol: float = Field(default=1e-10, gt=0)
    parseval_tol: float = Field(default=1e-12, gt=0)
    stationarity_tol: float = Field(default=1e-12, gt=0)
    gauge_tol: float = Field(default=1e-10, gt=0)
    agreement_tol: float = Field(default=1e-11, gt=0)
    gradient_tol: float = Field(default=1e-6, gt=0)
    b_gradient_tol: float = Field(default=1e-11, gt=0)


class ActionSection(_Section):
    n0: int = Field(default=8, ge=2)
    n1: int = Field(default=8, ge=2)
    n2: int = Field(default=8, ge=2)
    n3: int = Field(default=8, ge=2)
    spacing: float = Field(default=1.0, gt=0)
    a_norm: float = 0.75
    include_l0: bool = True
    seed: int = 0

    def to_lattice(self) -> Lattice4:
        return Lattice4(n0=self.n0, n1=self.n1, n2=self.n2, n3=self.n3, a=self.spacing)

    def to_config(self) -> ActionConfig:
        return ActionConfig(a_norm=self.a_norm, include_l0=self.include_l0)


class VortexSection(_Section):
    # strength of the counter-propagating probe added to LG beams
    perturbation: float = Field(default=0.0, ge=0)
    refine: bool = False
    residual_tol: float = Field(default=1e-2, gt=0)


class OutputSection(_Section):
    directory: str = "out"


_SECTIONS: dict[str, type[_Section]] = {
    "grid": GridSection,
    "units": UnitsSection,
    "source": SourceSection,
    "propagation": PropagationSection,
    "checks": ChecksSection,
    "action": ActionSection,
    "vortex": VortexSection,
    "output": OutputSection,
}

_REQUIRED: dict[Subcommand, tuple[str, ...]] = {
    Subcommand.PROPAGATE: ("source", "propagation"),
    Subcommand.SPECTRUM: ("source",),
    Subcommand.VORTEX: ("source",),
    Subcommand.CHECK_COVARIANCE: (),
    Subcommand.CHECK_ACTION: (),
}


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    path: str
    grid: GridSection | None = None
    units: UnitsSection = UnitsSection()
    source: SourceSection | None = None
    propagation: PropagationSection | None = None
    checks: ChecksSection = ChecksSection()
    action: ActionSection = ActionSection()
    vortex: VortexSection = VortexSection()
    output: OutputSection = OutputSection()

    def resolve_path(self, value: str) -> Path:
        """Paths inside the config are relative to the config file."""
        p = Path(value)
        return p if p.is_absolute() else Path(self.path).resolve().parent / p


# ── Loading ───────────────────────────────────────────────────────────


def _line_index(text: str) -> tuple[dict[str, int], dict[tuple[str, str], int]]:
    sections: dict[str, int] = {}
    keys: dict[tuple[str, str], int] = {}
    current: str | None = None
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, number)
        elif current is not None and not raw[:1].isspace():
            key = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
            keys.setdefault((current, key), number)
    return sections, keys


def load_scenario(path: str | Path, subcommand: Subcommand | str | None = None) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from exc

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside of any section", str(path), exc.lineno) from exc
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("malformed line", str(path), lineno) from exc
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], str(path), getattr(exc, "lineno", None)) from exc

    section_lines, key_lines = _line_index(text)
    values: dict[str, _Section] = {}
    for name in parser.sections():
        model = _SECTIONS.get(name)
        if model is None:
            raise ConfigError(f"unknown section [{name}]", str(path), section_lines.get(name))
        raw = dict(parser.items(name))
        try:
            values[name] = model(**raw)
        except ValidationError as exc:
            err = exc.errors()[0]
            key = str(err["loc"][0]) if err["loc"] else None
            line = key_lines.get((name, key), section_lines.get(name)) if key else section_lines.get(name)
            label = f"{name}.{key}" if key else f"[{name}]"
            raise ConfigError(f"{label}: {err['msg']}", str(path), line) from exc

    if subcommand is not None:
        sub = Subcommand(subcommand)
        for name in _REQUIRED[sub]:
            if name not in values:
                raise ConfigError(f"subcommand {sub.value} needs a [{name}] section", str(path))
        source = values.get("source")
        needs_grid = sub in (Subcommand.PROPAGATE, Subcommand.SPECTRUM, Subcommand.VORTEX)
        if needs_grid and source is not None and source.kind is not SourceKind.FILE and "grid" not in values:
            raise ConfigError(
                f"source kind {source.kind.value} needs a [grid] section",
                str(path),
                section_lines.get("source"),
            )

    return ScenarioConfig(path=str(path), **values)
