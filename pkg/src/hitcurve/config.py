"""Configuration management for hitcurve."""

from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from hitcurve.metrics import SEMethod

OutputFormat = Literal["json", "csv"]

# command-line spellings of the standard error methods
SE_METHOD_NAMES: dict[str, SEMethod] = {
    "asymptotic": SEMethod.ASYMPTOTIC,
    "pboot": SEMethod.PARAMETRIC,
    "npboot": SEMethod.NONPARAMETRIC,
}

BOOTSTRAP_METHODS = {SEMethod.PARAMETRIC, SEMethod.NONPARAMETRIC}


def parse_se_methods(names: list[str] | str) -> list[SEMethod]:
    """Parse method names (``asymptotic``, ``pboot``, ``npboot`` or full tags)."""
    if isinstance(names, str):
        names = [part for part in names.split(",") if part.strip()]
    methods = []
    for name in names:
        key = name.strip().lower()
        if key in SE_METHOD_NAMES:
            method = SE_METHOD_NAMES[key]
        else:
            try:
                method = SEMethod(key)
            except ValueError:
                valid = ", ".join(SE_METHOD_NAMES)
                raise ValueError(f"unknown SE method {name!r} (choose from {valid})")
        if method not in methods:
            methods.append(method)
    return methods


class EvalSettings(BaseSettings):
    """Defaults shared by all commands.

    Read from ``HITCURVE_*`` environment variables and optionally a YAML file;
    command-line flags override both.
    """

    model_config = SettingsConfigDict(env_prefix="HITCURVE_")

    label_col: str = "label"
    bootstrap: int = 5000  # replicates per bootstrap SE
    seed: int = 0
    se_methods: list[str] = Field(default_factory=lambda: ["asymptotic"])
    output_format: OutputFormat = "json"

    @field_validator("se_methods", mode="before")
    @classmethod
    def _split_methods(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @classmethod
    def load(cls, config_path: Path) -> "EvalSettings":
        """Load settings from a YAML file (defaults if the file is absent)."""
        if not config_path.exists():
            return cls()

        with open(config_path, "r") as f:
            data = yaml.safe_load(f)

        if data is None:
            return cls()

        return cls(**data)

    def save(self, config_path: Path) -> None:
        """Save settings to a YAML file."""
        data = self.model_dump()
        with open(config_path, "w") as f:
            yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False)

    def merge_overrides(self, **overrides: Any) -> "EvalSettings":
        """Create new settings with every non-None override applied."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return EvalSettings(**data)


class RunConfig(BaseModel):
    """Everything one CLI command needs."""

    command: str
    input: Path | None = None
    score_cols: list[str] | None = None
    label_col: str = "label"
    bootstrap: int = 5000
    se_methods: list[SEMethod] = Field(default_factory=lambda: [SEMethod.ASYMPTOTIC])
    seed: int = Field(default=0, ge=0)
    inflate: list[int] = Field(default_factory=lambda: [1])
    output_format: OutputFormat = "json"
    output: Path | None = None

    @field_validator("se_methods", mode="before")
    @classmethod
    def _parse_methods(cls, value: Any) -> Any:
        if isinstance(value, (str, list)):
            return parse_se_methods(value)
        return value

    @field_validator("inflate")
    @classmethod
    def _check_inflate(cls, value: list[int]) -> list[int]:
        if not value or any(m < 1 for m in value):
            raise ValueError("inflation factors must be >= 1")
        return value

    @model_validator(mode="after")
    def _check_bootstrap(self) -> "RunConfig":
        if self.bootstrap < 2 and BOOTSTRAP_METHODS.intersection(self.se_methods):
            raise ValueError(f"bootstrap needs B >= 2, got {self.bootstrap}")
        return self

    @classmethod
    def from_settings(cls, command: str, settings: EvalSettings, **flags: Any) -> "RunConfig":
        """Combine settings with explicit flags (flags win when not None)."""
        shared = EvalSettings.model_fields
        merged = settings.merge_overrides(**{k: v for k, v in flags.items() if k in shared})
        data: dict[str, Any] = {"command": command, **merged.model_dump()}
        data.update({k: v for k, v in flags.items() if k not in shared and v is not None})
        return cls(**data)
