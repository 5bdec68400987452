"""
Height commands
"""
from app.cli.commands import place_arg, point_arg
from app.cli.models import parse_poly
from app.cli.router import CommandRouter
from app.core.heights.canonical import canonical_height, canonical_height_algebraic
from app.core.heights.local import (
    conjugate_archimedean_height,
    conjugate_local_height,
    local_canonical_height,
)

router = CommandRouter()


@router.command("height", flags=["map", "point", "poly", "kmax", "norm"])
def height(args, config, phi, ctx, out):
    """Canonical height of a rational point, or of a root of --poly"""
    if args.poly is not None:
        result = canonical_height_algebraic(phi, parse_poly(args.poly), config.tol, config.height_kmax, ctx)
    else:
        result = canonical_height(phi, point_arg(args), config.tol, config.height_kmax, ctx, args.norm)
    out.emit(result)


@router.command("local-height", flags=["map", "point", "poly", "place", "kmax", "norm"])
def local_height(args, config, phi, ctx, out):
    """Local canonical height at one place; --poly sums over the roots of the polynomial"""
    place = place_arg(args)
    if args.poly is None:
        result = local_canonical_height(
            phi, point_arg(args), place, config.tol, config.height_kmax, ctx, args.norm
        )
    elif place.is_archimedean:
        result = conjugate_archimedean_height(phi, parse_poly(args.poly), config.tol, config.height_kmax, ctx)
    else:
        result = conjugate_local_height(phi, parse_poly(args.poly), place.p, config.height_kmax)
    out.emit(result)
