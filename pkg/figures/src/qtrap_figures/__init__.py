"""Render publication figures from qtrap CSV tables."""

from .figures import RENDERERS, render_fig1, render_fig2a, render_fig2b, render_fig3a, render_fig3b
from .io import Table, TableError, merge_tables, read_table

__version__ = "0.1.0"

__all__ = [
    "RENDERERS",
    "Table",
    "TableError",
    "merge_tables",
    "read_table",
    "render_fig1",
    "render_fig2a",
    "render_fig2b",
    "render_fig3a",
    "render_fig3b",
]
