"""
Proof checker for the lambda-Pi calculus modulo rewriting.
"""
from . import kernel, parse, pipeline

__all__ = ["kernel", "parse", "pipeline"]
