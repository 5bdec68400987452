"""
Mahler measure command
"""
from app.cli.commands import place_arg, poly_arg
from app.cli.router import CommandRouter
from app.core.equidist.mahler import mahler_measure

router = CommandRouter()


@router.command("mahler", flags=["map", "poly", "place", "kmax"])
def mahler(args, config, phi, ctx, out):
    """Mahler measure of F relative to the map at one place"""
    out.emit(mahler_measure(phi, poly_arg(args), place_arg(args), config.tol, config.height_kmax, ctx))
