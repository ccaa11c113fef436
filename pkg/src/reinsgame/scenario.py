"""Scenario files: the flat key-value text configs driving the CLI.

Grammar (one setting per line; see README for the frozen description):

    # comment lines and blank lines are ignored
    key = value

Keys: ``family``, ``dist``, ``gamma1``, ``gamma2``, ``delta`` (required) and
``grid_n``, ``outputs``, ``output_dir`` (optional). Numeric values accept
decimals or simple fractions like ``2/3``. ``outputs`` is a comma-separated
subset of ``table``, ``csv``, ``svg``. Unknown or duplicate keys are rejected
with their line number; relative file arguments inside ``family`` / ``dist``
resolve against the scenario file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .bargaining import GameSpec
from .distributions import LossDistribution, parse_distribution
from .errors import GrammarError, ScenarioError
from .riskmeasure import DistortionFamily, parse_family

_REQUIRED = ("family", "dist", "gamma1", "gamma2", "delta")
_OPTIONAL = ("grid_n", "outputs", "output_dir")
_OUTPUT_KINDS = frozenset({"table", "csv", "svg"})


def parse_number(text: str) -> float:
    """Float from a decimal or a simple fraction such as ``2/3``."""
    t = text.strip()
    if "/" in t:
        num, _, den = t.partition("/")
        try:
            d = float(den)
            if d == 0.0:
                raise ValueError
            return float(num) / d
        except ValueError:
            raise ValueError(f"malformed fraction {text!r}") from None
    try:
        return float(t)
    except ValueError:
        raise ValueError(f"malformed number {text!r}") from None


@dataclass(frozen=True)
class Scenario:
    """A fully validated analysis configuration."""

    spec: GameSpec
    grid_n: int = 101
    outputs: frozenset = field(default_factory=lambda: frozenset({"table"}))
    output_dir: Path = Path(".")


def parse_scenario(path) -> Scenario:
    """Read and validate a scenario file; every failure names key and line."""
    path = Path(path)
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ScenarioError("expected 'key = value'", line=lineno)
        key = key.strip()
        value = value.strip()
        if key not in _REQUIRED and key not in _OPTIONAL:
            raise ScenarioError("unknown key", line=lineno, key=key)
        if key in entries:
            raise ScenarioError("duplicate key", line=lineno, key=key)
        if not value:
            raise ScenarioError("empty value", line=lineno, key=key)
        entries[key] = (value, lineno)

    for key in _REQUIRED:
        if key not in entries:
            raise ScenarioError(f"missing required key '{key}'")

    base_dir = path.parent

    def take(key: str) -> tuple[str, int]:
        return entries[key]

    family = _parse_with_context(take("family"), "family", lambda v: parse_family(v, base_dir))
    dist = _parse_with_context(take("dist"), "dist", lambda v: parse_distribution(v, base_dir))
    gamma1 = _unit_number(take("gamma1"), "gamma1", closed=True)
    gamma2 = _unit_number(take("gamma2"), "gamma2", closed=True)
    delta = _unit_number(take("delta"), "delta", closed=False)
    spec = GameSpec(family=family, dist=dist, gamma1=gamma1, gamma2=gamma2, delta=delta)

    grid_n = 101
    if "grid_n" in entries:
        value, lineno = entries["grid_n"]
        try:
            grid_n = int(value)
        except ValueError:
            raise ScenarioError("grid_n must be an integer", line=lineno, key="grid_n") from None
        if grid_n < 11:
            raise ScenarioError("grid_n must be at least 11", line=lineno, key="grid_n")

    outputs = frozenset({"table"})
    if "outputs" in entries:
        value, lineno = entries["outputs"]
        kinds = frozenset(part.strip() for part in value.split(",") if part.strip())
        unknown = kinds - _OUTPUT_KINDS
        if unknown or not kinds:
            raise ScenarioError(
                f"outputs must be a subset of {sorted(_OUTPUT_KINDS)}", line=lineno, key="outputs"
            )
        outputs = kinds

    output_dir = Path(".")
    if "output_dir" in entries:
        output_dir = Path(entries["output_dir"][0])

    return Scenario(spec=spec, grid_n=grid_n, outputs=outputs, output_dir=output_dir)


def _parse_with_context(entry: tuple[str, int], key: str, parser):
    value, lineno = entry
    try:
        return parser(value)
    except (GrammarError, ValueError) as exc:
        raise ScenarioError(str(exc), line=lineno, key=key) from exc


def _unit_number(entry: tuple[str, int], key: str, closed: bool) -> float:
    value, lineno = entry
    try:
        number = parse_number(value)
    except ValueError as exc:
        raise ScenarioError(str(exc), line=lineno, key=key) from exc
    if closed and not (0.0 <= number <= 1.0):
        raise ScenarioError("must lie in [0, 1]", line=lineno, key=key)
    if not closed and not (0.0 < number < 1.0):
        raise ScenarioError("must lie strictly inside (0, 1)", line=lineno, key=key)
    return number
