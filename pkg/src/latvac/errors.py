class LatvacError(ValueError):
    """A domain or precondition failure (CLI exit code 1)."""
