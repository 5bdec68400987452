"""
Subcommand handlers and the argument helpers they share
"""
from app.cli.models import parse_poly
from app.core.dynamics.rational_map import ProjPointQ
from app.core.errors import InvalidInputError
from app.core.heights.places import Place


def required(args, name: str):
    value = getattr(args, name, None)
    if value is None:
        raise InvalidInputError(f"--{name} is required")
    return value


def point_arg(args, name: str = "point") -> ProjPointQ:
    return ProjPointQ.parse(required(args, name))


def poly_arg(args):
    return parse_poly(required(args, "poly"))


def place_arg(args) -> Place:
    return Place.parse(args.place)
