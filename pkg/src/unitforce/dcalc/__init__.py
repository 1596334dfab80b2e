"""Symbolic derivations of constructible distances."""
from .derive import (
    RULES,
    CheckReport,
    Derivation,
    SizeAccount,
    check,
    derive,
    render,
    size_account,
)
from .expr import Bin, Expr, Num, Sqrt, exact_value, format_expr, parse_expr
from .interval import Interval, eval_interval

__all__ = [
    "RULES", "CheckReport", "Derivation", "SizeAccount", "check", "derive", "render",
    "size_account", "Bin", "Expr", "Num", "Sqrt", "exact_value", "format_expr",
    "parse_expr", "Interval", "eval_interval",
]
