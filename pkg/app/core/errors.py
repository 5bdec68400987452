"""
Error contracts shared by the engines and the command line
"""


class InvalidInputError(ValueError):
    """Malformed or inadmissible input (CLI exit code 2)"""


class ComputationError(ValueError):
    """A well-formed request that cannot be honoured (CLI exit code 1)"""
