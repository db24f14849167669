"""Experiment configuration files and tabular result output.

The config format is flat ``key = value`` text.  Bracketed section headers
are allowed for organization and otherwise ignored, ``#`` starts a comment,
and every key is optional; missing keys fall back to the built-in defaults.
Unknown keys are a hard error so typos cannot silently revert a parameter.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, fields

import numpy as np

from .exceptions import ParseError, UnknownKeyError, ValidationError
from .otto import CycleConfig


@dataclass(frozen=True)
class ExperimentConfig:
    """Full parameter set for the command-line pipelines.

    Frequencies and temperatures in kHz (``j_hz`` in Hz), ``tau1_us`` in
    microseconds, ``tau_bar_ms`` in ms; ``populations`` are the weights of
    the two x eigenstates in the base state.
    """

    nu0_khz: float = 1.0
    nu1_khz: float = 2.0
    j_hz: float = 215.1
    t_hot_khz: float = 4.77
    t_cold_khz: float = 2.38
    tau1_us: float = 100.0
    tau_bar_ms: float = 4.65
    populations: tuple = (0.3, 0.7)
    theta_steps: int = 73
    tau_steps: int = 64
    epsilon_equilibrium_khz: float = 0.01
    use_mpemba: bool = True
    output_precision: int = 12

    def __post_init__(self):
        object.__setattr__(self, "populations", tuple(self.populations))
        if not 0.0 < self.nu0_khz < self.nu1_khz:
            raise ValidationError(
                f"nu1_khz must exceed nu0_khz > 0, got {self.nu0_khz}, {self.nu1_khz}"
            )
        if self.t_hot_khz <= 0.0 or self.t_cold_khz <= 0.0:
            raise ValidationError("t_hot_khz and t_cold_khz must be positive")
        if min(self.j_hz, self.tau1_us, self.tau_bar_ms) <= 0.0:
            raise ValidationError("j_hz, tau1_us and tau_bar_ms must be positive")
        if len(self.populations) != 2 or not all(
            0.0 < p < 1.0 for p in self.populations
        ):
            raise ValidationError("populations must be two weights inside (0, 1)")
        if abs(sum(self.populations) - 1.0) > 1e-12:
            raise ValidationError(
                f"populations sum to {sum(self.populations)!r}, expected 1"
            )
        if self.theta_steps < 2 or self.tau_steps < 2:
            raise ValidationError("theta_steps and tau_steps must be at least 2")
        if self.epsilon_equilibrium_khz <= 0.0:
            raise ValidationError("epsilon_equilibrium_khz must be positive")
        if self.output_precision < 1:
            raise ValidationError("output_precision must be at least 1")

    def cycle_config(self) -> CycleConfig:
        """The refrigerator-cycle view of this configuration."""
        return CycleConfig(
            nu0=self.nu0_khz,
            nu1=self.nu1_khz,
            j_hz=self.j_hz,
            t_hot=self.t_hot_khz,
            t_cold=self.t_cold_khz,
            tau1=self.tau1_us / 1000.0,
            tau_bar=self.tau_bar_ms,
            use_mpemba=self.use_mpemba,
        )


def _parse_float(key: str, text: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(
            f"line {lineno}: value {text!r} for {key} is not a number"
        ) from None


def _parse_int(key: str, text: str, lineno: int) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise ParseError(
            f"line {lineno}: value {text!r} for {key} is not an integer"
        ) from None


def _parse_bool(key: str, text: str, lineno: int) -> bool:
    lowered = text.lower()
    if lowered not in ("true", "false"):
        raise ParseError(
            f"line {lineno}: value {text!r} for {key} is not true/false"
        )
    return lowered == "true"


def _parse_pair(key: str, text: str, lineno: int) -> tuple:
    parts = [piece.strip() for piece in text.split(",")]
    if len(parts) != 2:
        raise ParseError(
            f"line {lineno}: {key} needs two comma-separated values, got {text!r}"
        )
    return tuple(_parse_float(key, piece, lineno) for piece in parts)


_PARSERS = {
    "nu0_khz": _parse_float,
    "nu1_khz": _parse_float,
    "j_hz": _parse_float,
    "t_hot_khz": _parse_float,
    "t_cold_khz": _parse_float,
    "tau1_us": _parse_float,
    "tau_bar_ms": _parse_float,
    "populations": _parse_pair,
    "theta_steps": _parse_int,
    "tau_steps": _parse_int,
    "epsilon_equilibrium_khz": _parse_float,
    "use_mpemba": _parse_bool,
    "output_precision": _parse_int,
}


def load_config(path: str) -> ExperimentConfig:
    """Parse and validate a config file; missing keys take the defaults."""
    with open(path, "r", encoding="utf-8") as handle:
        raw_lines = handle.read().splitlines()

    values = {}
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        column = raw.index(line[0]) + 1
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(
                    f"line {lineno}, column {column}: unterminated section header"
                )
            continue
        if "=" not in line:
            raise ParseError(
                f"line {lineno}, column {column}: expected 'key = value'"
            )
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise UnknownKeyError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _PARSERS[key](key, value, lineno)
    return ExperimentConfig(**values)


def _format_value(value, precision: int) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{precision}g")
    return str(value)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".partial-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def save_config(config: ExperimentConfig, path: str) -> None:
    """Write the config in the same format load_config reads (round trips)."""
    lines = ["[experiment]"]
    for field in fields(config):
        value = getattr(config, field.name)
        if field.name == "populations":
            rendered = ", ".join(repr(float(p)) for p in value)
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        elif isinstance(value, float):
            # repr is the shortest decimal that parses back to the same float
            rendered = repr(value)
        else:
            rendered = str(value)
        lines.append(f"{field.name} = {rendered}")
    _atomic_write(path, "\n".join(lines) + "\n")


def write_table(
    rows: list, schema: list, path: str, fmt: str = "csv", precision: int = 12
) -> None:
    """Serialize homogeneous records as CSV or a JSON array of objects.

    Numeric cells are printed with ``precision`` significant digits, '.'
    decimal separator and LF line endings; the write is atomic (temp file
    plus rename in the target directory).
    """
    schema = list(schema)
    for row in rows:
        if set(row.keys()) != set(schema):
            raise ValueError(
                f"row keys {sorted(row)} do not match schema {sorted(schema)}"
            )

    fmt = fmt.lower()
    if fmt == "csv":
        lines = [",".join(schema)]
        for row in rows:
            lines.append(
                ",".join(_format_value(row[name], precision) for name in schema)
            )
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = []
        for row in rows:
            rendered = {}
            for name in schema:
                value = row[name]
                if isinstance(value, (float, np.floating)):
                    value = float(format(float(value), f".{precision}g"))
                elif isinstance(value, (int, np.integer)):
                    value = int(value)
                rendered[name] = value
            payload.append(rendered)
        text = json.dumps(payload, indent=2) + "\n"
    else:
        raise ValueError(f"unknown table format {fmt!r}")
    _atomic_write(path, text)
