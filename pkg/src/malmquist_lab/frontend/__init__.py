"""Parser, command dispatch and report emission."""

from .cli import COMMANDS, SCHEMA, Flags, Report, build_parser, main, run
from .parser import ParseError, Script, Span, parse, parse_const, parse_expoly, parse_ratfun, parse_value, parse_wrational

__all__ = [
    "COMMANDS",
    "SCHEMA",
    "Flags",
    "ParseError",
    "Report",
    "Script",
    "Span",
    "build_parser",
    "main",
    "parse",
    "parse_const",
    "parse_expoly",
    "parse_ratfun",
    "parse_value",
    "parse_wrational",
    "run",
]
