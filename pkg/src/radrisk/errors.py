"""Shared exception base so the CLI can map library errors to exit codes."""


class RadriskError(Exception):
    """Base class for all data and contract errors raised by this package."""
