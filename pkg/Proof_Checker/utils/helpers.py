"""
Helper utilities for reporting checker results
"""
from typing import Optional

from Proof_Checker.kernel.errors import KernelError, Span


def line_col(source: bytes, offset: int) -> tuple[int, int]:
    """
    Convert a byte offset into a 1-based line and column

    Args:
        source: Input buffer the offset points into
        offset: Byte offset, clamped to the buffer

    Returns:
        Tuple of (line, column)
    """
    offset = max(0, min(offset, len(source)))
    line = source.count(b"\n", 0, offset) + 1
    start = source.rfind(b"\n", 0, offset) + 1
    return line, offset - start + 1


def format_diagnostic(path: str, source: bytes, span: Optional[Span],
                      command_index: Optional[int], message: str) -> str:
    """
    Format a one-line diagnostic as ``FILE:LINE:COL: command #K: message``

    Args:
        path: File name shown to the user
        source: Contents of that file
        span: Location of the problem, if known
        command_index: 1-based command index within the file, if known
        message: Error text

    Returns:
        Diagnostic line without trailing newline
    """
    line, col = line_col(source, span.start) if span is not None else (1, 1)
    where = f"{path}:{line}:{col}"
    if command_index is not None:
        return f"{where}: command #{command_index}: {message}"
    return f"{where}: {message}"


def format_error_message(error: Exception) -> str:
    """
    Render an exception as a single line

    Args:
        error: Exception object

    Returns:
        Message text, with the notes attached while it propagated
    """
    text = error.message if isinstance(error, KernelError) else str(error) or type(error).__name__
    notes = getattr(error, "__notes__", None)
    if notes:
        text = f"{text} ({'; '.join(notes)})"
    return " ".join(text.split())


def format_stat(name: str, value: int) -> str:
    """Format one machine-readable ``name=value`` stats field"""
    return f"{name}={value}"
