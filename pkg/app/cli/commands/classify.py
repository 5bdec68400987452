"""
Orbit classification command
"""
from app.cli.commands import point_arg
from app.cli.router import CommandRouter
from app.core.dynamics.orbits import classify_point

router = CommandRouter()


@router.command("classify", flags=["map", "point"])
def classify(args, config, phi, ctx, out):
    """Periodic, preperiodic or wandering, and whether the point is exceptional"""
    out.emit(classify_point(phi, point_arg(args)))
