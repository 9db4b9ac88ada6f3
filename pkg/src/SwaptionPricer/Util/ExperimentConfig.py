"""JSON experiment description, validated section by section.

Values are layered: file < command-line overrides < SWAPTION_* environment
variables (SWAPTION_TRAINING__EPOCHS=8 sets training.epochs). Every section
rejects unknown keys and every error names the dotted field.
"""

import dataclasses
import hashlib
import json
import math
import os
from dataclasses import dataclass
from dataclasses import field
from typing import Any, Callable, Mapping

from SwaptionPricer.Curve.DiscountCurve import DiscountCurve
from SwaptionPricer.Model.Cheyette import CheyetteParams
from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.Model.Swaption import SwaptionSpec
from SwaptionPricer.NN.Network import ArchSpec
from SwaptionPricer.Pricers.LongstaffSchwartz import LsConfig
from SwaptionPricer.Pricers.PricerManager import METHODS
from SwaptionPricer.Pricers.Training import TrainConfig
from SwaptionPricer.Simulation.TimeGrid import TimeGrid
from SwaptionPricer.Util.PathInfo import PathInfo

################################################################################


ENV_PREFIX = "SWAPTION_"


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name
        self.message = message

    def __reduce__(self):
        return ConfigError, (self.field, self.message)


Check = Callable[[Any, str], Any]


def _ruled(check: Check, rule: str) -> Check:
    check.rule = rule
    return check


def _integer(minimum: int | None = None) -> Check:
    def check(value, name):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(name, f"expected an integer, got {value!r}")
        if minimum is not None and value < minimum:
            raise ConfigError(name, f"must be >= {minimum}, got {value}")
        return value

    bound = "" if minimum is None else f" >= {minimum}"
    return _ruled(check, f"integer{bound}")


def _number(minimum: float | None = None, strict: bool = False) -> Check:
    def check(value, name):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(name, f"expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(name, f"must be finite, got {value}")
        if minimum is not None and (
            value < minimum or (strict and value == minimum)
        ):
            bound = ">" if strict else ">="
            raise ConfigError(name, f"must be {bound} {minimum}, got {value}")
        return value

    if minimum is None:
        return _ruled(check, "number")
    return _ruled(check, f"number {'>' if strict else '>='} {minimum}")


def _flag(value, name):
    if not isinstance(value, bool):
        raise ConfigError(name, f"expected true or false, got {value!r}")
    return value


_ruled(_flag, "true or false")


def _choice(*options: str) -> Check:
    def check(value, name):
        if value not in options:
            raise ConfigError(name, f"expected one of {options}, got {value!r}")
        return value

    return _ruled(check, "one of " + ", ".join(map(str, options)))


def _text(value, name):
    if not isinstance(value, str) or not value:
        raise ConfigError(name, f"expected a non-empty string, got {value!r}")
    return value


_ruled(_text, "non-empty string")


def _optional(check: Check) -> Check:
    return _ruled(
        lambda value, name: None if value is None else check(value, name),
        f"{check.rule} or null",
    )


def _list_of(check: Check) -> Check:
    def check_list(value, name):
        if not isinstance(value, list) or not value:
            raise ConfigError(name, f"expected a non-empty list, got {value!r}")
        return [check(v, f"{name}[{i}]") for i, v in enumerate(value)]

    return _ruled(check_list, f"non-empty list of {check.rule}")


def _scalar_or_list(check: Check) -> Check:
    def check_either(value, name):
        if isinstance(value, list):
            return _list_of(check)(value, name)
        return check(value, name)

    return _ruled(check_either, f"{check.rule}, or a list with one per factor")


def _param(default, check: Check, factory: bool = False):
    if factory:
        return field(default_factory=default, metadata={"check": check})
    return field(default=default, metadata={"check": check})


################################################################################


@dataclass(frozen=True)
class ModelSection:
    factors: int = _param(3, _integer(1))
    kappa: float | list[float] = _param(-0.02, _scalar_or_list(_number()))
    eta: float | list[float] = _param(0.0065, _scalar_or_list(_number(0.0)))
    curve_file: str | None = _param(None, _optional(_text))


@dataclass(frozen=True)
class GridSection:
    t_end: float = _param(5.0, _number(0.0, strict=True))
    n_steps: int = _param(500, _integer(1))


@dataclass(frozen=True)
class InstrumentSection:
    tenor: list[float] = _param(
        lambda: [1.0, 2.0, 3.0, 4.0, 5.0], _list_of(_number()), factory=True
    )
    fixed_rate: float = _param(0.0, _number(0.0))
    style: str = _param("european", _choice(*(s.value for s in ExerciseStyle)))


@dataclass(frozen=True)
class ArchSection:
    widths: list[int] = _param(
        lambda: [64, 64], _list_of(_integer(1)), factory=True
    )
    chi: int = _param(2, _integer(1))


@dataclass(frozen=True)
class TrainingSection:
    epochs: int = _param(400, _integer(4))
    batch_size: int = _param(100, _integer(1))
    seed: int = _param(0, _integer(0))
    runs: int = _param(1, _integer(1))
    fresh_paths: bool = _param(True, _flag)
    network_epochs: int | None = _param(None, _optional(_integer(4)))
    warm_start: bool = _param(False, _flag)
    log_every: int = _param(50, _integer(0))
    save_networks: bool = _param(False, _flag)


@dataclass(frozen=True)
class McSection:
    n_paths: int = _param(100_000, _integer(2))
    block_size: int = _param(2048, _integer(1))


@dataclass(frozen=True)
class LsSection:
    degree: int = _param(1, _choice(1, 2))
    itm_only: bool = _param(True, _flag)
    n_paths: int = _param(100_000, _integer(2))


_SECTIONS = {
    "model": ModelSection,
    "grid": GridSection,
    "instrument": InstrumentSection,
    "arch": ArchSection,
    "training": TrainingSection,
    "mc": McSection,
    "ls": LsSection,
}


def _build_section(cls, raw, name: str):
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(name, f"expected an object, got {raw!r}")
    known = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}", "unknown key")
    values = {
        key: f.metadata["check"](raw[key], f"{name}.{key}")
        for key, f in known.items()
        if key in raw
    }
    return cls(**values)


def config_schema() -> list[tuple[str, Any, str]]:
    """(dotted key, default, accepted values) of every key a config may hold.

    The section dataclasses above are the schema; README.md lists the same
    table.
    """
    rows: list[tuple[str, Any, str]] = [
        ("method", None, _choice(*METHODS).rule)
    ]
    for section, cls in _SECTIONS.items():
        for f in dataclasses.fields(cls):
            default = (
                f.default_factory()
                if f.default is dataclasses.MISSING
                else f.default
            )
            rows.append((f"{section}.{f.name}", default, f.metadata["check"].rule))
    return rows


################################################################################


@dataclass(frozen=True)
class ExperimentConfig:
    method: str
    model: ModelSection = field(default_factory=ModelSection)
    grid: GridSection = field(default_factory=GridSection)
    instrument: InstrumentSection = field(default_factory=InstrumentSection)
    arch: ArchSection = field(default_factory=ArchSection)
    training: TrainingSection = field(default_factory=TrainingSection)
    mc: McSection = field(default_factory=McSection)
    ls: LsSection = field(default_factory=LsSection)
    name: str = field(default="", compare=False)

    Invalid = ConfigError

    def __post_init__(self):
        self._validate()

    # Construction
    @classmethod
    def from_dict(cls, raw: Mapping, name: str = "") -> "ExperimentConfig":
        if not isinstance(raw, Mapping):
            raise ConfigError("config", "top level must be an object")
        unknown = sorted(set(raw) - set(_SECTIONS) - {"method"})
        if unknown:
            raise ConfigError(unknown[0], "unknown key")
        if "method" not in raw:
            raise ConfigError("method", f"missing, expected one of {METHODS}")
        method = _choice(*METHODS)(raw["method"], "method")
        sections = {
            key: _build_section(section, raw.get(key), key)
            for key, section in _SECTIONS.items()
        }
        return cls(method=method, name=name, **sections)

    @classmethod
    def load(
        cls,
        source: str,
        path_info: PathInfo,
        overrides: Mapping[str, Any] | None = None,
        environ: Mapping[str, str] | None = None,
    ) -> "ExperimentConfig":
        """Reads a config file or bundled name and applies the override layers."""
        try:
            path = path_info.resolve_config(source)
        except PathInfo.NotFound as e:
            raise ConfigError("config", str(e)) from e
        try:
            with open(path, "r") as f:
                raw = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError("config", f"'{path}' is not valid JSON: {e}") from e
        name = os.path.splitext(os.path.basename(path))[0]
        return cls.from_dict(layered(raw, overrides, environ), name)

    # Views
    def to_dict(self) -> dict:
        result = {"method": self.method}
        for key in _SECTIONS:
            result[key] = dataclasses.asdict(getattr(self, key))
        return result

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def with_overrides(self, overrides: Mapping[str, Any]) -> "ExperimentConfig":
        return ExperimentConfig.from_dict(
            layered(self.to_dict(), overrides, {}), self.name
        )

    # Domain objects
    def curve(self) -> DiscountCurve:
        path = PathInfo().resolve_curve(self.model.curve_file)
        return DiscountCurve.from_csv(path)

    def model_params(self) -> CheyetteParams:
        d = self.model.factors
        return CheyetteParams(
            _broadcast(self.model.kappa, d),
            _broadcast(self.model.eta, d),
            self.curve(),
        )

    def time_grid(self) -> TimeGrid:
        return TimeGrid(self.grid.t_end, self.grid.n_steps)

    def swaption(self) -> SwaptionSpec:
        return SwaptionSpec(
            tuple(self.instrument.tenor),
            self.instrument.fixed_rate,
            ExerciseStyle(self.instrument.style),
        )

    def arch_spec(self, kind: str) -> ArchSpec:
        return ArchSpec(
            kind,
            tuple(self.arch.widths),
            self.arch.chi,
            input_width=2 * self.model.factors + 1,
        )

    def train_config(self) -> TrainConfig:
        t = self.training
        return TrainConfig(
            epochs=t.epochs,
            batch_size=t.batch_size,
            seed=t.seed,
            fresh_paths=t.fresh_paths,
            network_epochs=t.network_epochs,
            warm_start=t.warm_start,
            log_every=t.log_every,
        )

    def ls_config(self) -> LsConfig:
        return LsConfig(self.ls.degree, self.ls.itm_only, self.ls.n_paths)

    @property
    def block_size(self) -> int:
        return self.mc.block_size

    # Internals
    def _validate(self) -> None:
        d = self.model.factors
        for key in ("kappa", "eta"):
            value = getattr(self.model, key)
            if isinstance(value, list) and len(value) != d:
                raise ConfigError(
                    f"model.{key}", f"has {len(value)} entries for {d} factors"
                )
        if 0.0 in _broadcast(self.model.kappa, d):
            raise ConfigError("model.kappa", "kappa = 0 is not supported")

        try:
            spec = self.swaption()
        except SwaptionSpec.Invalid as e:
            raise ConfigError("instrument.tenor", str(e)) from e
        try:
            spec.exercise_indices(self.time_grid())
        except TimeGrid.OffGrid as e:
            raise ConfigError("instrument.tenor", str(e)) from e

        try:
            curve = self.curve()
        except (PathInfo.NotFound, DiscountCurve.Invalid, ValueError) as e:
            raise ConfigError("model.curve_file", str(e)) from e
        if curve.last_maturity < spec.tenor[-1]:
            raise ConfigError(
                "model.curve_file",
                f"curve ends at {curve.last_maturity:g}, before T_n = "
                f"{spec.tenor[-1]:g}",
            )

        if self.method == "mc" and spec.style is not ExerciseStyle.EUROPEAN:
            raise ConfigError("instrument.style", "method 'mc' needs 'european'")
        if self.method == "ls" and spec.style is not ExerciseStyle.BERMUDAN:
            raise ConfigError("instrument.style", "method 'ls' needs 'bermudan'")
        if self.method.startswith("bsde"):
            self._validate_training(spec)

    def _validate_training(self, spec: SwaptionSpec) -> None:
        kind = "tnn" if self.method == "bsde-tnn" else "dnn"
        try:
            self.arch_spec(kind)
        except ValueError as e:
            raise ConfigError("arch.widths", str(e)) from e

        t = self.training
        if spec.style is ExerciseStyle.EUROPEAN or t.network_epochs is not None:
            epochs, field_name = (
                (t.epochs, "training.epochs")
                if spec.style is ExerciseStyle.EUROPEAN
                else (t.network_epochs, "training.network_epochs")
            )
            if epochs % 4 != 0:
                raise ConfigError(field_name, f"must be divisible by 4: {epochs}")
            return
        networks = spec.n + 1
        if t.epochs % networks != 0 or (t.epochs // networks) % 4 != 0:
            raise ConfigError(
                "training.epochs",
                f"{t.epochs} epochs do not split into {networks} networks "
                "with a multiple of 4 each",
            )


################################################################################


def layered(
    raw: Mapping,
    overrides: Mapping[str, Any] | None,
    environ: Mapping[str, str] | None,
) -> dict:
    """File values, then dotted overrides, then SWAPTION_* variables."""
    merged = json.loads(json.dumps(raw))
    for dotted, value in (overrides or {}).items():
        _set_dotted(merged, dotted, value)
    environ = os.environ if environ is None else environ
    for key in sorted(environ):
        if not key.startswith(ENV_PREFIX):
            continue
        dotted = key[len(ENV_PREFIX) :].lower().replace("__", ".")
        _set_dotted(merged, dotted, _parse_env_value(environ[key]))
    return merged


def _set_dotted(raw: dict, dotted: str, value) -> None:
    *parents, leaf = dotted.split(".")
    node = raw
    for part in parents:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(dotted, f"'{part}' is not a section")
        node = child
    node[leaf] = value


def _parse_env_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _broadcast(value, d: int) -> list[float]:
    return list(value) if isinstance(value, list) else [value] * d
