"""
Run configuration for lab operations.

Values come from Django settings (which read them from the environment via
python-decouple), optionally overlaid by a JSON config file and by command
line flags.
"""
import json
import logging
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "dot", "text")

# setting name -> LabConfig field
SETTING_NAMES = {
    "LATTICELAB_MAX_ELEMENTS": "max_elements",
    "LATTICELAB_MAX_DOWNSETS": "max_downsets",
    "LATTICELAB_TUPLE_BOUND": "tuple_bound",
    "LATTICELAB_SEED": "seed",
    "LATTICELAB_FORMAT": "output_format",
    "LATTICELAB_MAX_POWERSET_K": "max_powerset_k",
    "LATTICELAB_OBSTRUCTION_BUDGET": "obstruction_budget",
    "LATTICELAB_FAMILY_BUDGET": "family_budget",
    "LATTICELAB_DIMENSION_BUDGET": "dimension_budget",
    "LATTICELAB_MAX_DIMENSION_ELEMENTS": "max_dimension_elements",
    "LATTICELAB_WORKERS": "workers",
}


@dataclass(frozen=True)
class LabConfig:
    max_elements: int = 64
    max_downsets: int = 2**20
    tuple_bound: int = 3
    seed: int = 0
    output_format: str = "json"
    max_powerset_k: int = 6
    obstruction_budget: int = 5
    family_budget: int = 8
    dimension_budget: int = 4
    max_dimension_elements: int = 10
    workers: int = 1

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "output_format":
                if value not in OUTPUT_FORMATS:
                    raise ConfigError(
                        f"output_format must be one of {OUTPUT_FORMATS}, got {value!r}"
                    )
            elif f.name == "seed":
                if not 0 <= value < 2**64:
                    raise ConfigError(f"seed must be a 64-bit unsigned integer, got {value}")
            elif value < 1:
                raise ConfigError(f"{f.name} must be positive, got {value}")

    @classmethod
    def from_settings(cls) -> "LabConfig":
        """Build the config from Django settings, falling back to defaults."""
        values = {}
        try:
            for setting, field_name in SETTING_NAMES.items():
                if hasattr(settings, setting):
                    values[field_name] = getattr(settings, setting)
        except ImproperlyConfigured:
            logger.debug("Django settings not configured, using LabConfig defaults")
            return cls()
        return cls(**values)

    def with_overrides(self, **overrides) -> "LabConfig":
        overrides = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(sorted(unknown))}")
        return replace(self, **overrides)

    def with_file(self, path: str | Path) -> "LabConfig":
        """Overlay values from a JSON config file."""
        from .serializers import ConfigSerializer

        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read config file {path}: {e}") from e

        serializer = ConfigSerializer(data=data)
        if not serializer.is_valid():
            raise ConfigError(f"Invalid config file {path}: {dict(serializer.errors)}")
        return self.with_overrides(**serializer.validated_data)

    def as_dict(self) -> dict:
        return asdict(self)


def get_config(config: LabConfig | None = None) -> LabConfig:
    return config if config is not None else LabConfig.from_settings()
