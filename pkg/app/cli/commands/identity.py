"""
Global identity command
"""
from app.cli.commands import point_arg, poly_arg, required
from app.cli.router import CommandRouter
from app.core.equidist.identities import global_periodic_identity, global_preimage_identity

router = CommandRouter()


@router.command("global-identity", flags=["map", "poly", "alpha", "k"])
def global_identity(args, config, phi, ctx, out):
    """Place sum of averages at level k against deg F (h(beta) - h(infinity))"""
    f = poly_arg(args)
    k = required(args, "k")
    if args.alpha is None:
        result = global_periodic_identity(phi, f, k, config.tol, ctx, config.exact_degree_cap)
    else:
        result = global_preimage_identity(
            phi, f, point_arg(args, "alpha"), k, config.tol, ctx, config.exact_degree_cap
        )
    out.emit(result)
