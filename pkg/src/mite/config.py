"""Run and sweep configuration: defaults, file loading, validation.

Configs are flat JSON documents; command-line flags override file keys.
Unknown keys are ignored so a previous run's ``run.json`` (which carries
extra result fields) can be fed straight back as a config.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .measurement import VALIDITY_BOUND
from .models import ModelBundle, build_bundle

MODELS = ("single_qubit", "tfim", "search")
BACKENDS = ("kraus", "pointer")
SWEEP_VARIABLES = ("epsilon", "dimension")

DEFAULT_EPSILON = 0.1
DEFAULT_TRAJECTORIES = 100
DEFAULT_SEED = 1234
DEFAULT_THRESHOLD = 0.90
SWEEP_TRAJECTORIES = 50

# keys recognized in config files; everything else is ignored on load
_RUN_KEYS = {
    "model": "model",
    "num_qubits": "num_qubits",
    "qubits": "num_qubits",
    "lambda": "lam",
    "omega": "omega",
    "dimension": "dimension",
    "solution_index": "solution_index",
    "epsilon": "epsilon",
    "steps": "steps",
    "trajectories": "trajectories",
    "seed": "seed",
    "correction": "correction",
    "backend": "backend",
    "out": "out",
}


@dataclass(frozen=True)
class RunConfig:
    model: str = "single_qubit"
    num_qubits: int | None = None
    lam: float = 1.0
    omega: float = 1.0
    dimension: int | None = None
    solution_index: int | str | None = None
    epsilon: float = DEFAULT_EPSILON
    steps: int | None = None
    trajectories: int = DEFAULT_TRAJECTORIES
    seed: int = DEFAULT_SEED
    correction: bool = True
    backend: str = "kraus"
    out: str | None = None

    @staticmethod
    def from_dict(raw: dict) -> "RunConfig":
        kwargs = {}
        for key, value in raw.items():
            name = _RUN_KEYS.get(key)
            if name is None or value is None:
                continue
            if name == "correction":
                value = _parse_correction(value)
            kwargs[name] = value
        return RunConfig(**kwargs)

    def resolved_steps(self) -> int:
        """Explicit step count, or the default horizon ceil(20/epsilon)."""
        if self.steps is not None:
            return int(self.steps)
        return int(math.ceil(20.0 / self.epsilon))

    def resolve_solution(self) -> int | None:
        """Solution index for search; ``random`` draws from the base seed."""
        if self.model != "search":
            return None
        dim = self._search_dimension()
        value = self.solution_index
        if value is None or value == "random":
            rng = np.random.Generator(np.random.Philox(self.seed))
            return int(rng.integers(0, dim))
        return int(value)

    def _search_dimension(self) -> int:
        if self.dimension is not None:
            return int(self.dimension)
        if self.num_qubits is not None:
            return 2 ** int(self.num_qubits)
        raise ConfigError("search requires --dim or a qubit count")

    def build(self) -> ModelBundle:
        """Validate and construct the model this config describes."""
        self.validate()
        return build_bundle(
            self.model,
            num_qubits=self.num_qubits,
            lam=self.lam,
            omega=self.omega,
            dimension=self.dimension if self.model == "search" else None,
            solution_index=self.resolve_solution(),
        )

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}; choose from {BACKENDS}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.steps is not None and self.steps < 1:
            raise ConfigError("steps must be at least 1")
        if self.trajectories < 1:
            raise ConfigError("trajectories must be at least 1")
        if self.model == "tfim":
            if self.num_qubits is None:
                raise ConfigError("tfim requires a qubit count (-L)")
            if self.num_qubits < 2:
                raise ConfigError("tfim requires at least 2 qubits")
            if self.lam < 0 or self.omega < 0:
                raise ConfigError("lambda and omega must be non-negative")
        if self.model == "search":
            dim = self._search_dimension()
            if dim < 2 or dim & (dim - 1):
                raise ConfigError(f"search dimension must be a power of two, got {dim}")
            sol = self.solution_index
            if sol is not None and sol != "random" and not 0 <= int(sol) < dim:
                raise ConfigError(f"solution index {sol!r} outside [0, {dim})")
        self._validate_epsilon_bound()

    def _validate_epsilon_bound(self) -> None:
        """Weak-measurement validity: epsilon * spectral max <= 0.5 per term.

        Stricter than the library's hard positivity bound; enforced only at
        the configuration boundary so library-level studies can push closer
        to the positivity limit deliberately.
        """
        try:
            bundle = build_bundle(
                self.model,
                num_qubits=self.num_qubits,
                lam=self.lam,
                omega=self.omega,
                dimension=self.dimension if self.model == "search" else None,
                solution_index=self.resolve_solution(),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        for term in bundle.hamiltonian.terms:
            product = self.epsilon * term.spectral_max
            if product > VALIDITY_BOUND + 1e-12:
                raise ConfigError(
                    f"epsilon {self.epsilon!r} violates the weak-measurement bound "
                    f"for term {term.label!r}: epsilon * {term.spectral_max!r} = "
                    f"{product!r} > {VALIDITY_BOUND}"
                )

    def to_dict(self) -> dict:
        """Flat, JSON-ready view with the resolved solution index."""
        return {
            "model": self.model,
            "num_qubits": self.num_qubits,
            "lambda": self.lam,
            "omega": self.omega,
            "dimension": self.dimension,
            "solution_index": self.resolve_solution(),
            "epsilon": self.epsilon,
            "steps": self.resolved_steps(),
            "trajectories": self.trajectories,
            "seed": self.seed,
            "correction": "on" if self.correction else "off",
            "backend": self.backend,
            "out": self.out,
        }


@dataclass(frozen=True)
class SweepConfig:
    variable: str
    values: tuple
    threshold: float = DEFAULT_THRESHOLD
    template: RunConfig = field(default_factory=RunConfig)

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"unknown sweep variable {self.variable!r}; choose from {SWEEP_VARIABLES}"
            )
        if not self.values:
            raise ConfigError("sweep needs a non-empty value list")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("sweep values must be strictly increasing")
        if not 0 < self.threshold < 1:
            raise ConfigError("threshold must lie in (0, 1)")
        if self.variable == "dimension":
            for v in self.values:
                iv = int(v)
                if iv < 2 or iv & (iv - 1):
                    raise ConfigError(f"dimension values must be powers of two, got {v}")


def _parse_correction(value) -> bool:
    if isinstance(value, bool):
        return value
    if value in ("on", "true", "True", 1):
        return True
    if value in ("off", "false", "False", 0):
        return False
    raise ConfigError(f"correction must be 'on' or 'off', got {value!r}")


def load_config_file(path: str | Path) -> dict:
    """Read a flat JSON config; non-object documents are rejected."""
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return raw


def merge_config(
    file_values: dict | None, flag_values: dict
) -> RunConfig:
    """defaults < config file < explicit flags."""
    merged: dict = {}
    if file_values:
        merged.update(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    return RunConfig.from_dict(merged)


def default_sweep_steps(epsilon: float) -> int:
    """Horizon for threshold-crossing sweeps; deep enough that the mean
    first-passage step sits well inside the window for quadratic-cost runs."""
    return int(math.ceil(25.0 / epsilon**2))
