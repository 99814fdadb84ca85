"""Command-line front end; the only part of k3stab that touches files."""

from .main import build_parser, main, parse_word

__all__ = ["build_parser", "main", "parse_word"]
