"""
Periodic and preimage average commands
"""
from app.cli.commands import place_arg, point_arg, poly_arg
from app.cli.router import CommandRouter
from app.core.equidist.averages import AverageSpec, average_series

router = CommandRouter()


def _run(args, config, phi, ctx, out, target):
    spec = AverageSpec(phi, poly_arg(args), place_arg(args), args.mode, target, config.exact_degree_cap)
    if args.k is not None:
        kmin = kmax = args.k
    else:
        kmin, kmax = args.kmin, config.series_kmax
    series = average_series(spec, kmin, kmax, config.tol, ctx, out.series_row())
    out.series(series)


@router.command("periodic-avg", flags=["map", "poly", "place", "k", "kmin", "kmax", "mode"])
def periodic_avg(args, config, phi, ctx, out):
    """Averages of log|F|_v over periodic points of period dividing k"""
    _run(args, config, phi, ctx, out, None)


@router.command("preimage-avg", flags=["map", "poly", "alpha", "place", "k", "kmin", "kmax", "mode"])
def preimage_avg(args, config, phi, ctx, out):
    """Averages of log|F|_v over the k-th preimages of --alpha"""
    _run(args, config, phi, ctx, out, point_arg(args, "alpha"))
