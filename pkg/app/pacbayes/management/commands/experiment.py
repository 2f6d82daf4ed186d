"""Run a bound, coverage, sweep or fixpoint experiment from a YAML config."""
from pathlib import Path

from django.core.exceptions import ValidationError as DjangoValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from pacbayes.config.messages import ERROR_OUTPUT_UNWRITABLE
from pacbayes.config.strings import FORMAT_CHOICES
from pacbayes.exceptions import NumericalError
from pacbayes.experiments import build_config, load_config, run_experiment
from pacbayes.reports import render_text, write_outputs

EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def flatten_errors(detail, prefix: str = '') -> list[str]:
    """Flatten nested serializer errors into 'dotted.path: message' lines."""
    if isinstance(detail, dict):
        lines = []
        for key, value in detail.items():
            lines.extend(flatten_errors(value, f'{prefix}.{key}' if prefix else str(key)))
        return lines
    if isinstance(detail, list):
        if all(isinstance(item, str) for item in detail):
            return [f'{prefix}: {item}' if prefix else str(item) for item in detail]
        lines = []
        for index, item in enumerate(detail):
            if item:
                lines.extend(flatten_errors(item, f'{prefix}.{index}' if prefix else str(index)))
        return lines
    return [f'{prefix}: {detail}' if prefix else str(detail)]


class Command(BaseCommand):
    """Run an experiment described by a config file."""

    help = 'Run a bound, coverage, sweep or fixpoint experiment from a YAML config'

    def add_arguments(self, parser):
        """Declare the command-line flags.

        Args:
            parser: The argument parser.
        """
        parser.add_argument('--config', required=True, type=Path, help='Path to the experiment config')
        parser.add_argument('--out', type=Path, help='Output path stem; overrides output.path')
        parser.add_argument('--format', choices=FORMAT_CHOICES, help='Output format; overrides output.format')
        parser.add_argument('--seed', type=int, help='Root seed; overrides seed')
        parser.add_argument('--threads', type=int, help='Worker threads, 0 for one per CPU; overrides threads')

    def handle(self, *args, **options):  # noqa: WPS110
        """Validate the config, run it and write the results.

        Args:
            args: Not used.
            options: Parsed command-line flags.

        Raises:
            CommandError: Exit status 1 on invalid input or unwritable output, 2 on numerical failure.
        """
        try:
            raw = load_config(options['config'])
            config = build_config(self._apply_overrides(raw, options))
            result = run_experiment(config)
        except ValidationError as exc:
            raise CommandError('\n'.join(flatten_errors(exc.detail)), returncode=EXIT_VALIDATION)
        except DjangoValidationError as exc:
            raise CommandError('\n'.join(exc.messages), returncode=EXIT_VALIDATION)
        except NumericalError as exc:
            raise CommandError(str(exc), returncode=EXIT_NUMERICAL)
        self.stdout.write(render_text(result), ending='')
        try:
            written = write_outputs(result, config.output)
        except OSError as exc:
            raise CommandError(
                ERROR_OUTPUT_UNWRITABLE.format(path=config.output.path, reason=exc), returncode=EXIT_VALIDATION,
            )
        for path in written:
            self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))

    def _apply_overrides(self, raw: dict, options: dict) -> dict:
        merged = dict(raw)
        for key in ('seed', 'threads'):
            if options.get(key) is not None:
                merged[key] = options[key]
        output = dict(merged.get('output') or {})
        if options.get('out') is not None:
            output['path'] = str(options['out'])
        if options.get('format') is not None:
            output['format'] = options['format']
        if output:
            merged['output'] = output
        return merged
