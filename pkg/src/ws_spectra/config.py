"""Run configuration: ``key = value`` files, built-in presets and validation."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .closed_form import Branch, QuantumState, states_up_to
from .errors import ConfigError
from .oracle import RadialGrid, default_grid
from .potential import UNIT_SYSTEMS, UnitSystem, WoodsSaxonParams

EQUATIONS = ("SE", "KG")
METHODS = ("closed", "exact", "pekeris")


@dataclass(frozen=True)
class RunConfig:
    V0: float
    r0: float
    a: float
    mass: float = 1.0
    units: str = "dimensionless"
    equation: str = "SE"
    branch: str = "particle"
    methods: tuple[str, ...] = METHODS
    nmax: int = 6
    l_values: tuple[int, ...] | None = None
    out_dir: str = "."
    grid_count: int = 20001
    grid_r_min: float = 1e-6
    grid_r_max: float | None = None
    name: str = "custom"

    def __post_init__(self):
        for key in ("V0", "r0", "a", "mass", "grid_r_min"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be positive, got {getattr(self, key)}")
        if self.grid_r_max is not None and not self.grid_r_max > self.grid_r_min:
            raise ConfigError("grid_r_max must exceed grid_r_min")
        if self.units not in UNIT_SYSTEMS:
            raise ConfigError(f"units must be one of {sorted(UNIT_SYSTEMS)}")
        if self.equation not in EQUATIONS:
            raise ConfigError(f"equation must be one of {EQUATIONS}")
        if self.branch not in {b.value for b in Branch}:
            raise ConfigError("branch must be particle or antiparticle")
        bad = set(self.methods) - set(METHODS)
        if bad or not self.methods:
            raise ConfigError(f"methods must be a non-empty subset of {METHODS}")
        if self.nmax < 1:
            raise ConfigError("nmax must be >= 1")
        if self.l_values is not None and any(l < 0 for l in self.l_values):
            raise ConfigError("l_values must be non-negative")
        if self.grid_count < 1000:
            raise ConfigError("grid_count must be >= 1000")

    @property
    def params(self) -> WoodsSaxonParams:
        return WoodsSaxonParams(self.V0, self.r0, self.a)

    @property
    def unit_system(self) -> UnitSystem:
        return UNIT_SYSTEMS[self.units]

    @property
    def grid(self) -> RadialGrid:
        if self.grid_r_max is None:
            base = default_grid(self.params, self.grid_count)
            return RadialGrid(self.grid_r_min, base.r_max, self.grid_count)
        return RadialGrid(self.grid_r_min, self.grid_r_max, self.grid_count)

    def states(self) -> list[QuantumState]:
        states = states_up_to(self.nmax)
        if self.l_values is None:
            return states
        keep = set(self.l_values)
        return sorted((s for s in states if s.l in keep), key=lambda s: (s.l, s.N))

    def updated(self, **changes) -> "RunConfig":
        return replace(self, **changes)


PRESETS: dict[str, RunConfig] = {
    "table1": RunConfig(50.0, 7.0, 0.6, name="table1"),
    "fig3": RunConfig(
        43.1, 3.44731, 0.67, 1.007825, "nuclear", "KG", "particle",
        nmax=14, l_values=(1, 2, 3, 4), name="fig3",
    ),
    "fig4": RunConfig(
        43.1, 3.44731, 0.55, 1.00866, "nuclear", "KG", "antiparticle",
        methods=("closed",), nmax=14, l_values=(1, 2, 3, 4), name="fig4",
    ),
    "fig5": RunConfig(
        43.1, 3.44731, 0.67, 1.007825, "nuclear", "SE", nmax=16, l_values=(0,), name="fig5",
    ),
    "fig6": RunConfig(
        43.1, 3.44731, 0.67, 1.007825, "nuclear", "SE", nmax=16, l_values=(1, 2), name="fig6",
    ),
}


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _int_list(value: str) -> tuple[int, ...]:
    out = []
    for item in _split(value):
        if "-" in item:
            lo, hi = item.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(item))
    return tuple(out)


_CONVERTERS = {
    "V0": float, "r0": float, "a": float, "mass": float,
    "units": str.lower, "equation": str.upper, "branch": str.lower,
    "methods": lambda v: tuple(_split(v.lower())),
    "nmax": int, "l_values": _int_list, "out_dir": str,
    "grid_count": int, "grid_r_min": float, "grid_r_max": float, "name": str,
}
assert set(_CONVERTERS) == {f.name for f in fields(RunConfig)}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, object]:
    """Parse ``key = value`` lines; ``#`` starts a comment, ``preset`` picks a base."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "preset":
            values[key] = value
            continue
        if key not in _CONVERTERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from None
    return values


def build_config(preset: str | None = None, path: str | Path | None = None,
                 **overrides) -> RunConfig:
    """Preset, then file, then explicit overrides (``None`` overrides are ignored)."""
    values: dict[str, object] = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {p}: {exc}") from None
        values = parse_config_text(text, str(p))
    base_name = preset or values.pop("preset", None) or "table1"
    values.pop("preset", None)
    if base_name not in PRESETS:
        raise ConfigError(f"unknown preset {base_name!r}; choose from {sorted(PRESETS)}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return PRESETS[base_name].updated(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
