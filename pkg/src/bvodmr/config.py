"""Run configuration: a strict flat ``key = value`` document.

Full-line ``#`` comments and blank lines are ignored; every other line
must be ``key = value``.  Unknown keys, duplicate keys and malformed
values are rejected with the offending key and line number.  Numeric
quantities are converted to internal units (MHz, Gauss) according to
the declared unit system; see :mod:`bvodmr.units`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any

from .params import SpinParams
from .units import UNIT_SYSTEMS, to_internal

MODES = (
    "simulate-spectrum",
    "simulate-rabi",
    "sweep-field",
    "sweep-angle",
    "fit-angle",
    "fit-rabi",
    "fit-coherence-batch",
)


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class _Key:
    kind: str              # frequency|field|gyromagnetic|float|int|bool|str|path
    required: bool = False
    default: Any = None


_SPIN_KEYS = {
    "d_zfs": _Key("frequency", default=SpinParams().d_zfs),
    "e_strain": _Key("frequency", default=SpinParams().e_strain),
    "gamma_e": _Key("gyromagnetic", default=SpinParams().gamma_e),
}

_COMMON_KEYS = {
    "mode": _Key("str"),
    "units": _Key("str"),
    "seed": _Key("int", default=0),
    **_SPIN_KEYS,
}

_MODE_KEYS: dict[str, dict[str, _Key]] = {
    "simulate-spectrum": {
        "b": _Key("field", required=True),
        "theta_deg": _Key("float", default=0.0),
        "phi_deg": _Key("float", default=0.0),
        "freq_start": _Key("frequency", required=True),
        "freq_stop": _Key("frequency", required=True),
        "freq_step": _Key("frequency", required=True),
        "contrast_minus": _Key("float", default=0.02),
        "contrast_plus": _Key("float", default=0.02),
        "linewidth_minus": _Key("frequency", default=120.0),
        "linewidth_plus": _Key("frequency", default=120.0),
        "baseline": _Key("float", default=1.0),
        "noise_sigma": _Key("float", default=0.0),
    },
    "simulate-rabi": {
        "tau_start_ns": _Key("float", default=0.0),
        "tau_stop_ns": _Key("float", required=True),
        "tau_step_ns": _Key("float", required=True),
        "rabi_a": _Key("float", required=True),
        "rabi_t_a_ns": _Key("float", required=True),
        "rabi_f": _Key("frequency", required=True),
        "rabi_phi_rad": _Key("float", default=0.0),
        "rabi_b": _Key("float", default=0.0),
        "rabi_t_b_ns": _Key("float", default=1000.0),
        "rabi_c": _Key("float", default=0.0),
        "noise_sigma": _Key("float", default=0.0),
    },
    "sweep-field": {
        "theta_deg": _Key("float", default=0.0),
        "phi_deg": _Key("float", default=0.0),
        "b_start": _Key("field", default=0.0),
        "b_stop": _Key("field", required=True),
        "b_step": _Key("field", required=True),
    },
    "sweep-angle": {
        "b": _Key("field", required=True),
        "phi_deg": _Key("float", default=0.0),
        "theta_start_deg": _Key("float", default=0.0),
        "theta_stop_deg": _Key("float", default=90.0),
        "theta_step_deg": _Key("float", default=1.0),
    },
    "fit-angle": {
        "input": _Key("path", required=True),
        "phi_deg": _Key("float", default=0.0),
        "free_d": _Key("bool", default=False),
        "free_gamma": _Key("bool", default=False),
    },
    "fit-rabi": {
        "input": _Key("path", required=True),
    },
    "fit-coherence-batch": {
        "inputs": _Key("str", required=True),
    },
}

_BOOL_WORDS = {
    "true": True, "yes": True, "1": True,
    "false": False, "no": False, "0": False,
}


@dataclass(frozen=True)
class RunConfig:
    """A fully validated run: mode, spin constants and mode values.

    ``values`` holds the mode-specific settings already converted to
    internal units; ``base_dir`` anchors relative input paths.
    """

    mode: str
    params: SpinParams
    seed: int
    units: str
    values: dict[str, Any]
    base_dir: Path = dc_field(default_factory=Path)


def _scan(text: str) -> dict[str, tuple[str, int]]:
    """Raw key -> (value, line number) with duplicate detection."""
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"line {lineno}: expected 'key = value', got {stripped!r}"
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if not value:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        if key in raw:
            raise ConfigError(
                f"line {lineno}: duplicate key {key!r} "
                f"(first declared on line {raw[key][1]})"
            )
        raw[key] = (value, lineno)
    return raw


def _convert(key: str, spec: _Key, value: str, lineno: int, units: str):
    if spec.kind == "str" or spec.kind == "path":
        return value
    if spec.kind == "bool":
        word = value.lower()
        if word not in _BOOL_WORDS:
            raise ConfigError(
                f"line {lineno}: key {key!r} expects true/false, got {value!r}"
            )
        return _BOOL_WORDS[word]
    if spec.kind == "int":
        try:
            return int(value)
        except ValueError:
            raise ConfigError(
                f"line {lineno}: key {key!r} expects an integer, got {value!r}"
            ) from None
    try:
        num = float(value)
    except ValueError:
        raise ConfigError(
            f"line {lineno}: key {key!r} expects a number, got {value!r}"
        ) from None
    if spec.kind == "float":
        return num
    return to_internal(num, spec.kind, units)


def _post_validate(mode: str, values: dict[str, Any]) -> None:
    def positive(name):
        if values[name] <= 0.0:
            raise ConfigError(f"key {name!r} must be positive, got {values[name]}")

    if mode == "simulate-spectrum":
        positive("freq_step")
        positive("baseline")
        if values["freq_stop"] < values["freq_start"]:
            raise ConfigError("freq_stop must be >= freq_start")
        if values["b"] < 0:
            raise ConfigError("b must be non-negative")
        for name in ("contrast_minus", "contrast_plus"):
            if not 0.0 < values[name] < 1.0:
                raise ConfigError(f"key {name!r} must be in (0, 1)")
        for name in ("linewidth_minus", "linewidth_plus"):
            positive(name)
        if values["noise_sigma"] < 0:
            raise ConfigError("noise_sigma must be non-negative")
    elif mode == "simulate-rabi":
        positive("tau_step_ns")
        positive("rabi_t_a_ns")
        positive("rabi_t_b_ns")
        if values["tau_start_ns"] < 0:
            raise ConfigError("tau_start_ns must be non-negative")
        if values["tau_stop_ns"] < values["tau_start_ns"]:
            raise ConfigError("tau_stop_ns must be >= tau_start_ns")
        if values["rabi_f"] < 0:
            raise ConfigError("rabi_f must be non-negative")
        if values["noise_sigma"] < 0:
            raise ConfigError("noise_sigma must be non-negative")
    elif mode == "sweep-field":
        positive("b_step")
        if values["b_start"] < 0:
            raise ConfigError("b_start must be non-negative")
        if values["b_stop"] < values["b_start"]:
            raise ConfigError("b_stop must be >= b_start")
    elif mode == "sweep-angle":
        positive("theta_step_deg")
        if values["b"] < 0:
            raise ConfigError("b must be non-negative")
        if values["theta_stop_deg"] < values["theta_start_deg"]:
            raise ConfigError("theta_stop_deg must be >= theta_start_deg")


def parse_config(
    text: str,
    mode: str | None = None,
    cli_units: str | None = None,
    base_dir: str | Path = ".",
) -> RunConfig:
    """Parse and validate a configuration document.

    ``mode`` is the CLI subcommand when invoked from the command line;
    a ``mode`` key in the document is then optional but must agree.
    ``cli_units`` likewise cross-checks a --units flag against a
    ``units`` key; disagreement is a conflicting declaration.
    """
    raw = _scan(text)

    if "mode" in raw:
        doc_mode, lineno = raw.pop("mode")
        if doc_mode not in MODES:
            raise ConfigError(
                f"line {lineno}: unknown mode {doc_mode!r}; "
                f"expected one of {', '.join(MODES)}"
            )
        if mode is not None and doc_mode != mode:
            raise ConfigError(
                f"line {lineno}: config declares mode {doc_mode!r} but "
                f"{mode!r} was requested"
            )
        mode = doc_mode
    if mode is None:
        raise ConfigError("missing mode: not in the config and not requested")
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")

    units = "lab"
    if "units" in raw:
        doc_units, lineno = raw.pop("units")
        if doc_units not in UNIT_SYSTEMS:
            raise ConfigError(
                f"line {lineno}: units must be one of {', '.join(UNIT_SYSTEMS)}, "
                f"got {doc_units!r}"
            )
        if cli_units is not None and cli_units != doc_units:
            raise ConfigError(
                f"line {lineno}: conflicting unit declarations "
                f"({doc_units!r} in config, {cli_units!r} on the command line)"
            )
        units = doc_units
    elif cli_units is not None:
        if cli_units not in UNIT_SYSTEMS:
            raise ConfigError(
                f"units must be one of {', '.join(UNIT_SYSTEMS)}, got {cli_units!r}"
            )
        units = cli_units

    schema = {**_COMMON_KEYS, **_MODE_KEYS[mode]}
    schema.pop("mode")
    schema.pop("units")

    values: dict[str, Any] = {}
    for key, (value, lineno) in raw.items():
        if key not in schema:
            raise ConfigError(
                f"line {lineno}: unknown key {key!r} for mode {mode!r}"
            )
        values[key] = _convert(key, schema[key], value, lineno, units)
    for key, spec in schema.items():
        if key in values:
            continue
        if spec.required:
            raise ConfigError(f"missing required key {key!r} for mode {mode!r}")
        values[key] = spec.default

    try:
        params = SpinParams(
            d_zfs=values.pop("d_zfs"),
            e_strain=values.pop("e_strain"),
            gamma_e=values.pop("gamma_e"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    seed = values.pop("seed")
    _post_validate(mode, values)

    return RunConfig(
        mode=mode,
        params=params,
        seed=seed,
        units=units,
        values=values,
        base_dir=Path(base_dir),
    )
