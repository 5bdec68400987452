"""
Divergence counterexample command
"""
from app.cli.router import CommandRouter
from app.core.divergence import divergence_table

router = CommandRouter()


@router.command("counterexample", flags=["nmax"])
def counterexample(args, config, phi, ctx, out):
    """Root-of-unity averages around a transcendental point that tend to -infinity"""
    out.emit(divergence_table(args.nmax, ctx))
