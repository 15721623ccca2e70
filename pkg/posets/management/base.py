"""
Shared plumbing for the lab's management commands.

Exit codes: 0 on success, 1 when the command's answer is a definitive "no"
(after the report has been written), 2 on any lab error.
"""
import logging
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from posets.config import OUTPUT_FORMATS, LabConfig
from posets.core import Poset
from posets.exceptions import ConfigError, LatticeLabError
from posets.metrics import dump_metrics
from posets.render import dump_json, render_text, to_dot

logger = logging.getLogger(__name__)


class LabCommand(BaseCommand):
    """Base class: builds the LabConfig, runs ``run`` and maps errors to exit codes."""

    def add_arguments(self, parser):
        parser.add_argument("--config", help="JSON file overlaying the configured bounds")
        parser.add_argument("--seed", type=int, default=None, help="Seed recorded in reports")
        parser.add_argument(
            "--format", choices=OUTPUT_FORMATS, default=None, help="Output format"
        )
        parser.add_argument("--output", help="Write the result to this file instead of stdout")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def check_counts(self, options, names: tuple[str, ...], minimum: int = 0) -> None:
        """Reject integer options below ``minimum`` before they reach a constructor."""
        for name in names:
            value = options.get(name)
            if value is not None and value < minimum:
                raise ConfigError(f"--{name} must be >= {minimum}, got {value}")

    def build_config(self, options) -> LabConfig:
        config = LabConfig.from_settings()
        if options.get("config"):
            config = config.with_file(options["config"])
        return config.with_overrides(seed=options.get("seed"), output_format=options.get("format"))

    def handle(self, *args, **options):
        try:
            config = self.build_config(options)
            definitive_no = self.run(config, options) is False
        except LatticeLabError as e:
            logger.warning(f"{self.__module__.rsplit('.', 1)[-1]} failed: {e}")
            raise CommandError(str(e), returncode=2) from e
        finally:
            dump_metrics()
        if definitive_no:
            sys.exit(1)

    def run(self, config: LabConfig, options) -> bool | None:
        """Do the work; return False for a definitive negative answer."""
        raise NotImplementedError

    # ------------------------------------------------------------------
    # output

    def render(self, data: dict, config: LabConfig, poset: Poset | None = None) -> str:
        if config.output_format == "dot" and poset is not None:
            return to_dot(poset)
        if config.output_format == "text":
            return render_text(data)
        return dump_json(data)

    def write_file(self, path, text: str) -> None:
        try:
            Path(path).write_text(text)
        except OSError as e:
            raise ConfigError(f"Cannot write {path}: {e.strerror or e}") from e

    def emit(self, text: str, options) -> None:
        path = options.get("output")
        if path:
            self.write_file(path, text)
            self.stderr.write(self.style.SUCCESS(f"Wrote {path}"))
        else:
            self.stdout.write(text, ending="")
