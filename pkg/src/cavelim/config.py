"""Experiment configuration: a single TOML file describing the system,
the elimination methods to run, simulation settings, outputs, and an
optional sweep axis.  Parsing and serialization round-trip exactly.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .elimination import METHODS
from .errors import ConfigError
from .model import EMISSION, DriveEnvelope, SystemSpec

PRESET_DIR = Path(__file__).parent / "presets"
PRESETS = ("lambda_2photon", "fourlevel_3photon")


@dataclass(frozen=True)
class SimulateSettings:
    t_final: float | None = None  # None: one-and-a-third effective periods
    dt: float | None = None  # None: half the stability-guard limit
    initial_level: int = 0
    initial_photons: int = 1
    stride: int | None = None
    norm_tolerance: float = 1e-6


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "out"
    json: bool = False


@dataclass(frozen=True)
class SweepSettings:
    axis: str = "detuning_scale"
    values: tuple[float, ...] = ()


@dataclass(frozen=True)
class ExperimentConfig:
    system: SystemSpec
    methods: tuple[str, ...]
    simulate: SimulateSettings = field(default_factory=SimulateSettings)
    outputs: OutputSettings = field(default_factory=OutputSettings)
    sweep: SweepSettings | None = None


def _complex_from(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{where}: amplitude must be a number or [re, im]")


def _drive_from(table: dict, index: int) -> DriveEnvelope:
    where = f"system.drive[{index}]"
    kind = table.get("kind", "constant")
    amplitude = _complex_from(table.get("amplitude", 0.0), where)
    try:
        if kind == "constant":
            return DriveEnvelope(kind="constant", amplitude=amplitude)
        if kind == "gaussian":
            return DriveEnvelope(
                kind="gaussian",
                amplitude=amplitude,
                center=float(table.get("center", 0.0)),
                width=float(table.get("width", 1.0)),
            )
        if kind == "pwl":
            points = tuple(
                (float(t), float(v)) for t, v in table.get("breakpoints", ())
            )
            return DriveEnvelope(kind="pwl", amplitude=amplitude, breakpoints=points)
    except Exception as exc:  # envelope invariant violations
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: unknown envelope kind {kind!r}")


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config does not parse: {exc}") from exc

    sysraw = raw.get("system")
    if not isinstance(sysraw, dict):
        raise ConfigError("missing [system] section")
    try:
        n = int(sysraw["n"])
        detunings = tuple(float(d) for d in sysraw["detunings"])
    except KeyError as exc:
        raise ConfigError(f"system: missing field {exc}") from exc
    drives = tuple(
        _drive_from(d, k) for k, d in enumerate(sysraw.get("drive", ()))
    )
    cavity_form = sysraw.get("cavity_form", EMISSION)
    spec = SystemSpec(
        n=n,
        detunings=detunings,
        drives=drives,
        eta=float(sysraw.get("eta", 0.0)),
        fock_cutoff=int(sysraw.get("fock_cutoff", 1)),
        cavity_form=cavity_form,
    )
    problems = spec.violations()
    if problems:
        raise ConfigError("system: " + "; ".join(problems))

    methods = tuple(raw.get("methods", ("markov",)))
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"methods: unknown method {m!r}")
        if m in ("amplitude", "paulisch") and spec.n != 2:
            raise ConfigError(f"methods: {m} applies only to the two-photon system")
        if m == "gjames3" and spec.n < 3:
            raise ConfigError("methods: gjames3 needs at least three coupled terms")

    simraw = raw.get("simulate", {})
    sim = SimulateSettings(
        t_final=None if simraw.get("t_final") is None else float(simraw["t_final"]),
        dt=None if simraw.get("dt") is None else float(simraw["dt"]),
        initial_level=int(simraw.get("initial_level", 0)),
        initial_photons=int(simraw.get("initial_photons", 1)),
        stride=None if simraw.get("stride") is None else int(simraw["stride"]),
        norm_tolerance=float(simraw.get("norm_tolerance", 1e-6)),
    )
    if not (0 <= sim.initial_level <= spec.n):
        raise ConfigError("simulate: initial_level outside the ladder")
    if not (0 <= sim.initial_photons <= spec.fock_cutoff):
        raise ConfigError("simulate: initial_photons beyond the Fock cutoff")

    outraw = raw.get("outputs", {})
    outputs = OutputSettings(
        directory=str(outraw.get("directory", "out")),
        json=bool(outraw.get("json", False)),
    )

    sweep = None
    if "sweep" in raw:
        swraw = raw["sweep"]
        axis = swraw.get("axis", "detuning_scale")
        if axis != "detuning_scale":
            raise ConfigError(f"sweep: unsupported axis {axis!r}")
        values = tuple(float(v) for v in swraw.get("values", ()))
        if not values:
            raise ConfigError("sweep: values must be a nonempty list")
        for v in values:
            scaled = spec.scaled_detunings(v)
            bad = scaled.violations()
            if bad:
                raise ConfigError(f"sweep: value {v} yields invalid system: {'; '.join(bad)}")
        sweep = SweepSettings(axis=axis, values=values)

    return ExperimentConfig(spec, methods, sim, outputs, sweep)


def load_config(path_or_preset: str) -> ExperimentConfig:
    return parse_config(resolve_config_path(path_or_preset).read_text())


def resolve_config_path(path_or_preset: str) -> Path:
    p = Path(path_or_preset)
    if p.is_file():
        return p
    preset = PRESET_DIR / f"{path_or_preset}.toml"
    if preset.is_file():
        return preset
    raise ConfigError(f"no such config file or preset: {path_or_preset}")


# ---------------------------------------------------------------------------
# canonical serializer (sufficient for round-tripping our own schema)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, complex):
        if value.imag == 0:
            return repr(value.real)
        return f"[{value.real!r}, {value.imag!r}]"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize {value!r}")


def serialize_config(cfg: ExperimentConfig) -> str:
    lines = [f"methods = {_fmt(list(cfg.methods))}", ""]
    spec = cfg.system
    lines += [
        "[system]",
        f"n = {spec.n}",
        f"detunings = {_fmt(list(spec.detunings))}",
        f"eta = {_fmt(float(spec.eta))}",
        f"fock_cutoff = {spec.fock_cutoff}",
        f'cavity_form = "{spec.cavity_form}"',
        "",
    ]
    for d in spec.drives:
        lines += ["[[system.drive]]", f'kind = "{d.kind}"', f"amplitude = {_fmt(d.amplitude)}"]
        if d.kind == "gaussian":
            lines += [f"center = {_fmt(float(d.center))}", f"width = {_fmt(float(d.width))}"]
        if d.kind == "pwl":
            lines += [f"breakpoints = {_fmt([list(p) for p in d.breakpoints])}"]
        lines.append("")
    sim = cfg.simulate
    lines.append("[simulate]")
    if sim.t_final is not None:
        lines.append(f"t_final = {_fmt(float(sim.t_final))}")
    if sim.dt is not None:
        lines.append(f"dt = {_fmt(float(sim.dt))}")
    lines += [
        f"initial_level = {sim.initial_level}",
        f"initial_photons = {sim.initial_photons}",
    ]
    if sim.stride is not None:
        lines.append(f"stride = {sim.stride}")
    lines += [f"norm_tolerance = {_fmt(float(sim.norm_tolerance))}", ""]
    lines += [
        "[outputs]",
        f'directory = "{cfg.outputs.directory}"',
        f"json = {_fmt(cfg.outputs.json)}",
        "",
    ]
    if cfg.sweep is not None:
        lines += [
            "[sweep]",
            f'axis = "{cfg.sweep.axis}"',
            f"values = {_fmt(list(cfg.sweep.values))}",
            "",
        ]
    return "\n".join(lines)
