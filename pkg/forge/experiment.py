"""
Experiment configuration.

An ExperimentConfig holds every parameter of one run and serializes to a
canonical JSON text (sorted keys, two-space indent, trailing newline, unset
fields omitted), so loading and dumping a config file is byte-identical.
"""

import json
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

from arithmetic.errors import ConfigError

from .family import LocalCondition

SUBCOMMANDS = ("zeta", "certify", "census", "haar", "equidist", "forge", "sequence", "selftest")

REQUIRED = {
    "zeta": ("g", "q", "n", "t"),
    "certify": ("h", "q", "n"),
    "census": ("h", "bound"),
    "haar": ("g", "l", "gamma"),
    "equidist": ("q", "g", "l", "n_list"),
    "forge": ("q", "n", "g"),
    "sequence": ("q", "g", "n_list"),
    "selftest": (),
}

INTEGER_FIELDS = (
    "g",
    "q",
    "n",
    "l",
    "gamma",
    "bound",
    "samples",
    "walk_length",
    "prime_budget",
    "stride",
    "census_bound",
    "census_cap",
    "enumeration_budget",
    "prime_cap",
    "master_seed",
)
POSITIVE_FIELDS = (
    "g",
    "n",
    "bound",
    "samples",
    "walk_length",
    "prime_budget",
    "stride",
    "census_bound",
    "census_cap",
    "enumeration_budget",
    "prime_cap",
)


@dataclass
class ExperimentConfig:
    subcommand: str
    master_seed: int | None = None

    # Curve and field
    g: int | None = None
    q: int | None = None
    n: int | None = None
    t: int | list[int] | None = None
    n_list: list[int] | None = None

    # Polynomial input (little-endian integer coefficients)
    h: list[int] | None = None

    # Censuses and certification
    bound: int | None = None
    checkpoints: list[int] | None = None
    prime_budget: int | None = None
    use_oracle: bool | None = None

    # Group side
    l: int | None = None
    gamma: int | None = None
    mode: str | None = None
    samples: int | None = None
    walk_length: int | None = None
    alternative_representative: bool | None = None

    # Family scans and sequences
    constraints: list[str] | None = None
    certify: bool | None = None
    census_bound: int | None = None
    stride: int | None = None
    preset: str | None = None
    ramify_exponent: str | None = None
    c_g: float | None = None
    c1: str | None = None
    c2: str | None = None
    census_cap: int | None = None

    # Budgets
    enumeration_budget: int | None = None
    prime_cap: int | None = None

    # Output paths
    output: str | None = None
    csv: str | None = None
    curve_csv: str | None = None

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = sorted(set(data) - set(cls.field_names()))
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        if "subcommand" not in data:
            raise ConfigError("configuration has no subcommand")
        config = cls(**data)
        config.validate()
        return config

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"malformed configuration: {e}") from e
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read configuration {path}: {e}") from e
        return cls.from_json(text)

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def validate(self):
        """Check the subcommand, its required fields and the field types."""
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand: {self.subcommand}")
        missing = [name for name in REQUIRED[self.subcommand] if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"{self.subcommand} needs {', '.join(missing)}")

        for name in INTEGER_FIELDS:
            value = getattr(self, name)
            if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
        for name in POSITIVE_FIELDS:
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"{name} must be positive, got {value}")
        for name in ("h", "n_list", "checkpoints"):
            value = getattr(self, name)
            if value is not None and not (isinstance(value, list) and all(isinstance(v, int) for v in value)):
                raise ConfigError(f"{name} must be a list of integers")
        if self.n_list is not None and (self.n_list != sorted(self.n_list) or any(n < 1 for n in self.n_list)):
            raise ConfigError("n_list must be ascending and positive")
        self._validate_t()
        if self.mode is not None and self.mode not in ("exact", "montecarlo"):
            raise ConfigError(f"mode must be exact or montecarlo, got {self.mode}")
        if self.preset is not None and self.preset not in ("asymptotic", "desk"):
            raise ConfigError(f"preset must be asymptotic or desk, got {self.preset}")
        if self.c_g is not None and (isinstance(self.c_g, bool) or not isinstance(self.c_g, int | float) or self.c_g <= 0):
            raise ConfigError(f"c_g must be a positive number, got {self.c_g!r}")
        for name in ("ramify_exponent", "c1", "c2"):
            self.fraction(name)
        if self.constraints is not None:
            if not isinstance(self.constraints, list):
                raise ConfigError("constraints must be a list of strings")
            for text in self.constraints:
                if not isinstance(text, str):
                    raise ConfigError(f"constraint must be a string, got {text!r}")
                LocalCondition.parse(text)
        if self.master_seed is not None and not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must fit in 64 bits")
        return self

    def _validate_t(self):
        if self.t is None:
            return
        if isinstance(self.t, bool) or not isinstance(self.t, int | list):
            raise ConfigError("t must be an index or a coefficient list")
        if isinstance(self.t, list) and not all(isinstance(c, int) and not isinstance(c, bool) for c in self.t):
            raise ConfigError("t coefficients must be integers")
        if isinstance(self.t, int) and self.q is not None and self.n is not None:
            size = self.q**self.n if self.q > 1 and self.n > 0 else 0
            if not 0 <= self.t < size:
                raise ConfigError(f"t index {self.t} is outside F_{{{self.q}^{self.n}}}")

    @property
    def seed(self) -> int:
        return self.master_seed or 0

    def fraction(self, name: str) -> Fraction | None:
        """A positive rational field given as "a/b", an integer or a decimal string."""
        value = getattr(self, name)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int | str):
            raise ConfigError(f"{name} must be a rational number, got {value!r}")
        try:
            result = Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"{name} must be a rational number, got {value!r}") from e
        if result <= 0:
            raise ConfigError(f"{name} must be positive, got {value}")
        return result
