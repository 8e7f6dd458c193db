from .helpers import (
    line_col,
    format_diagnostic,
    format_error_message,
    format_stat
)

__all__ = [
    "line_col",
    "format_diagnostic",
    "format_error_message",
    "format_stat"
]
