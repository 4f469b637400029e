"""The λ_par,callcc language: syntax, parser, denotation and corpus."""

from .denote import LANG_EFFECT, denote, explore_program, run_program
from .parser import ParseError, parse
from .syntax import show_expr, show_value, subst

__all__ = [
    "LANG_EFFECT",
    "ParseError",
    "denote",
    "explore_program",
    "parse",
    "run_program",
    "show_expr",
    "show_value",
    "subst",
]
