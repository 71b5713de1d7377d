"""Mobile edge cloud provisioning optimizer."""

from ._core import (
    compare_fixed,
    generate,
    min_dc_cover,
    solve,
    sweep,
    validate,
)

__all__ = [
    "compare_fixed",
    "generate",
    "min_dc_cover",
    "solve",
    "sweep",
    "validate",
]
