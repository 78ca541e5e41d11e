"""Run configuration and built-in presets for the command-line tool.

A RunConfig is a flat record of every knob a scenario can use; scenarios
ignore fields that do not apply to them.  Configs round-trip exactly
through JSON (shortest-repr floats), and command-line flags override
config-file fields, which override preset defaults.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

__all__ = ["RunConfig", "SCENARIOS", "builtin_presets", "preset_by_name"]

SCENARIOS = (
    "current-map",
    "left-prob",
    "two-particle",
    "fidelity-scan",
    "fidelity-backflow",
    "validate",
)

_PI = math.pi


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters of one tool invocation."""

    scenario: str
    # environment (atomic units by default)
    gamma_values: tuple[float, ...] = (0.0,)
    mass: float = 1.0
    hbar: float = 1.0
    # shared packet construction
    sigma_p: float = 0.05
    x0: float = 0.0
    p0a: float = 1.4
    p0b: float = 0.3
    eta: float = 0.0
    eta_values: tuple[float, ...] = (0.0,)
    alpha: float = 1.9
    theta: float = _PI
    # two-particle construction
    theta_chi: float = _PI
    theta_phi: float = 1.01 * _PI
    # fidelity scans
    alpha_chi: float = 1.9
    alpha_phi_values: tuple[float, ...] = (1.0, 1.9, 3.5)
    alpha_phi_min: float = 0.0
    alpha_phi_max: float = 5.0
    n_alpha_phi: int = 501
    # grids
    n_theta: int = 512
    n_time: int = 512
    t_max: float = 10.0
    # output
    out: str = "backflow-out"
    format: str = "csv"
    raw: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}"
            )
        object.__setattr__(self, "gamma_values", tuple(float(v) for v in self.gamma_values))
        object.__setattr__(self, "eta_values", tuple(float(v) for v in self.eta_values))
        object.__setattr__(
            self, "alpha_phi_values", tuple(float(v) for v in self.alpha_phi_values)
        )
        for name in (
            "mass", "hbar", "sigma_p", "x0", "p0a", "p0b", "eta", "alpha",
            "theta", "theta_chi", "theta_phi", "alpha_chi", "alpha_phi_min",
            "alpha_phi_max", "t_max",
        ):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"RunConfig.{name} must be finite")
        for seq_name in ("gamma_values", "eta_values", "alpha_phi_values"):
            seq = getattr(self, seq_name)
            if len(seq) == 0:
                raise ValueError(f"RunConfig.{seq_name} must be nonempty")
            if not all(math.isfinite(v) for v in seq):
                raise ValueError(f"RunConfig.{seq_name} must be finite")
        if any(v < 0.0 for v in self.gamma_values):
            raise ValueError("gamma values must be >= 0")
        if self.sigma_p <= 0.0 or self.mass <= 0.0 or self.hbar <= 0.0:
            raise ValueError("sigma_p, mass and hbar must be > 0")
        if self.t_max <= 0.0:
            raise ValueError("t_max must be > 0")
        for name in ("n_theta", "n_time", "n_alpha_phi", "threads"):
            if getattr(self, name) < 1:
                raise ValueError(f"RunConfig.{name} must be >= 1")
        if self.format not in ("csv", "ndjson"):
            raise ValueError("format must be 'csv' or 'ndjson'")

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))


def builtin_presets() -> list[RunConfig]:
    """The five built-in scans, in stable order.

    All share the standard parameter set: sigma_p = 0.05 (equivalently
    sigma_0 = 10 in atomic units), common center x0 = 0, kick momenta
    1.4 and 0.3, alpha = 1.9, theta = pi, pair phases pi and 1.01 pi,
    damping sets {0, 0.1, 0.2, 0.3}, stretching set {0, 0.5, 1, 2} and
    amplitude-ratio set {1, 1.9, 3.5}.
    """
    return [
        RunConfig(
            scenario="current-map",
            gamma_values=(0.0, 0.1, 0.2, 0.3),
            eta=0.0,
            n_theta=512,
            n_time=512,
            out="fig1",
        ),
        RunConfig(
            scenario="left-prob",
            gamma_values=(0.0, 0.3),
            eta_values=(0.0, 0.5, 1.0, 2.0),
            theta=_PI,
            n_time=1001,
            out="fig2",
        ),
        RunConfig(
            scenario="two-particle",
            gamma_values=(0.0, 0.1, 0.2),
            theta_chi=_PI,
            theta_phi=1.01 * _PI,
            n_time=1001,
            out="fig3",
        ),
        RunConfig(
            scenario="fidelity-scan",
            alpha_chi=1.9,
            theta=_PI,
            alpha_phi_min=0.0,
            alpha_phi_max=5.0,
            n_alpha_phi=501,
            out="fig4",
        ),
        RunConfig(
            scenario="fidelity-backflow",
            gamma_values=(0.0,),
            alpha_chi=1.9,
            theta=_PI,
            alpha_phi_values=(1.0, 1.9, 3.5),
            n_time=1001,
            out="fig5",
        ),
    ]


_PRESET_NAMES = ("fig1", "fig2", "fig3", "fig4", "fig5")


def preset_by_name(name: str) -> RunConfig | None:
    """Look up a preset; None when the name is not a preset."""
    presets = dict(zip(_PRESET_NAMES, builtin_presets()))
    return presets.get(name)
