"""
CLI Router
"""
import argparse
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

from app.core.errors import InvalidInputError

# Flag table shared by the subcommands
FLAGS: Dict[str, dict] = {
    "map": dict(dest="map_path", help="Map JSON file {\"d\", \"P\", \"Q\"}"),
    "poly": dict(help="Polynomial coefficients, lowest degree first, e.g. -1,-1,1"),
    "point": dict(help="Rational point a/b or inf"),
    "alpha": dict(help="Target point a/b or inf for preimage averages"),
    "place": dict(default="inf", help="inf or a prime"),
    "k": dict(type=int, help="Single level k"),
    "kmin": dict(type=int, default=1, help="First level of a series"),
    "kmax": dict(type=int, help="Last level of a series / iteration budget"),
    "mode": dict(choices=["exact", "numeric"], default="exact", help="Average evaluation mode"),
    "norm": dict(choices=["max", "fs"], default="max", help="Archimedean norm for local heights"),
    "nmax": dict(type=int, default=3, help="Largest tower index"),
}

NEGATIVE_VALUE = re.compile(r"^-[\d/,. ]+$")


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting on bad arguments"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # values such as -2,1 or -3/2 are arguments, not flags
        self._negative_number_matcher = NEGATIVE_VALUE

    def error(self, message):
        raise InvalidInputError(message)


@dataclass
class Command:
    name: str
    handler: Callable
    flags: List[str]
    help: str


@dataclass
class CommandRouter:
    """Collects subcommands the way endpoint modules collect routes"""

    commands: List[Command] = field(default_factory=list)

    def command(self, name: str, flags: Sequence[str] = (), help: str = ""):
        def decorator(handler: Callable) -> Callable:
            self.commands.append(Command(name, handler, list(flags), help or (handler.__doc__ or "").strip()))
            return handler

        return decorator

    def include_router(self, other: "CommandRouter") -> None:
        self.commands.extend(other.commands)

    def build_parser(self) -> ArgumentParser:
        parser = ArgumentParser(prog="dynheight", description="Canonical heights and dynamical Mahler measures")
        sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
        for cmd in self.commands:
            p = sub.add_parser(cmd.name, help=cmd.help, description=cmd.help)
            for flag in cmd.flags:
                p.add_argument(f"--{flag}", **FLAGS[flag])
            p.add_argument("--precision", type=int, help="Working precision in bits (>= 64)")
            p.add_argument("--tol", type=float, help="Convergence tolerance")
            p.add_argument("--output", choices=["json", "csv"], default="json")
            p.add_argument("--exact-degree-cap", dest="exact_degree_cap", type=int)
            p.set_defaults(handler=cmd.handler, needs_map="map" in cmd.flags)
        return parser


def cli_router() -> CommandRouter:
    """All subcommands"""
    from app.cli.commands import (
        averages,
        classify,
        counterexample,
        heights,
        identity,
        lyapunov,
        mahler,
    )

    router = CommandRouter()
    router.include_router(heights.router)
    router.include_router(mahler.router)
    router.include_router(averages.router)
    router.include_router(identity.router)
    router.include_router(lyapunov.router)
    router.include_router(classify.router)
    router.include_router(counterexample.router)
    return router
