"""
Lyapunov exponent command
"""
from app.cli.commands import point_arg
from app.cli.router import CommandRouter
from app.core.equidist.lyapunov import lyapunov

router = CommandRouter()


@router.command("lyapunov", flags=["map", "alpha", "kmin", "kmax", "mode"])
def lyapunov_series(args, config, phi, ctx, out):
    """Lyapunov exponent from derivative averages over periodic points or preimages"""
    alpha = point_arg(args, "alpha") if args.alpha is not None else None
    series = lyapunov(
        phi, config.series_kmax, config.tol, args.mode, ctx,
        kmin=args.kmin, alpha=alpha, on_row=out.series_row(), degree_cap=config.exact_degree_cap,
    )
    out.series(series)
