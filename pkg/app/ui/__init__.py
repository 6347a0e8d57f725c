"""Report rendering for the command-line front end.

- Aligned plain-text tables with an "approx" decimal column
- Stable JSON documents
"""

from .render import (
    approx,
    format_table,
    render_json,
    render_prob,
    render_rows,
    render_sweep,
    render_transform,
    render_verify,
)

__all__ = [
    "approx",
    "format_table",
    "render_json",
    "render_prob",
    "render_rows",
    "render_sweep",
    "render_transform",
    "render_verify",
]
