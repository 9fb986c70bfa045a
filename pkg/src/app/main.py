# ────────────── src/app/main.py ──────────────
import argparse
import logging
import sys
from typing import Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler

from src.api.commands import EXIT_ERROR, register_commands
from src.app.config import load_settings
from src.core.errors import ConfigError, CoverageError, UsageError


class _ArgumentParser(argparse.ArgumentParser):
    # usage errors exit with 1 like every other failure, not argparse's 2
    def error(self, message: str) -> None:
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="mcdc", description="Masking MC/DC coverage from decision BDDs")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    register_commands(subparsers)
    return parser


def setup_logging(level: str, console: Console) -> None:
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False, show_time=False)],
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    errors = Console(stderr=True, highlight=False, markup=False, emoji=False)
    try:
        settings = load_settings()
    except ConfigError as exc:
        errors.print(f"error: {exc}")
        return EXIT_ERROR
    setup_logging(settings.log_level, errors)

    out = Console(
        file=sys.stdout,
        width=settings.console_width,
        highlight=False,
        markup=False,
        emoji=False,
        soft_wrap=True,
    )
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args, settings, out)
    except SystemExit as exc:
        # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    except (CoverageError, OSError, ValueError) as exc:
        errors.print(f"error: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
