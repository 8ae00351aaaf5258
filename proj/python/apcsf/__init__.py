"""Area-preserving curve shortening flow with a free boundary on a support curve."""

from ._core import (
    ApcsfError,
    Support,
    check_criterion,
    enclosed_area,
    example,
    example_names,
    example_support,
    reflected_index,
    signed_area,
    simulate,
)

__all__ = [
    "ApcsfError",
    "Support",
    "check_criterion",
    "enclosed_area",
    "example",
    "example_names",
    "example_support",
    "reflected_index",
    "signed_area",
    "simulate",
]
