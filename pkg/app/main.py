"""
Command line entry point
"""
import logging
import sys
from typing import List, Optional, TextIO

from pydantic import ValidationError

from app.cli.models import RunConfig, load_map
from app.cli.output import Emitter
from app.cli.router import cli_router
from app.config import settings
from app.core.errors import ComputationError, InvalidInputError
from app.core.realctx import RealCtx

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_INPUT = 2


def configure_logging() -> None:
    """Log to stderr, and to LOG_FILE when set; stdout carries results only"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.LOG_FILE:
        handlers.append(logging.FileHandler(settings.LOG_FILE))
    logging.basicConfig(
        level="DEBUG" if settings.DEBUG else settings.LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )


def _run_config(args) -> RunConfig:
    overrides = {
        name: getattr(args, name)
        for name in ("map_path", "precision", "tol", "kmax", "exact_degree_cap", "output")
        if getattr(args, name, None) is not None
    }
    return RunConfig(**overrides)


def run(argv: List[str], stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Parse argv, dispatch one subcommand and write its result

    Returns:
        0 on success, 1 for a computational failure, 2 for invalid input
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = cli_router().build_parser().parse_args(argv)
        config = _run_config(args)
        ctx = RealCtx(config.precision)
        phi = load_map(config.map_path) if args.needs_map else None
        logger.info(f"Running {args.command} at {config.precision} bits")
        out = Emitter(stdout, config.output, ctx, config.tol)
        args.handler(args, config, phi, ctx, out)
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except ComputationError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_COMPUTATION
    except ValidationError as e:
        first = e.errors()[0]
        stderr.write(f"error: {first['loc'][0] if first['loc'] else 'input'}: {first['msg']}\n")
        return EXIT_INPUT
    except InvalidInputError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    configure_logging()
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
