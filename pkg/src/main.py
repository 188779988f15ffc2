from __future__ import annotations

import argparse
import logging
import sys

from src.config import get_settings
from src.scenarios.config import ConfigError, Subcommand
from src.scenarios.runner import EXIT_CONFIG_ERROR, run_scenario
from src.storage.field_file import FieldFileError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rswave",
        description="Riemann-Silberstein field propagation, spectra, vortex lines and consistency checks",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for command in Subcommand:
        p = sub.add_parser(command.value)
        p.add_argument("--config", required=True, help="Scenario INI file")
        p.add_argument("--out", default=None, help="Output directory (overrides [output] directory)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stdout,
    )

    try:
        return run_scenario(args.config, args.subcommand, args.out)
    except (ConfigError, FieldFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ValueError as exc:
        # Bad inputs caught below the config layer: grid mismatch, CFL, null fields
        logger.debug("Input rejected", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
