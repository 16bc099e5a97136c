"""
Expression language: parsing, printing, jets and symbolic calculus.
"""
from src.expr.calculus import differentiate, nth_derivative, rename, substitute
from src.expr.evaluate import constant_value, eval_jet, eval_value, evaluate, partials
from src.expr.jet3 import Jet3
from src.expr.nodes import Expr, Var, free_variables, to_source
from src.expr.parser import parse

__all__ = [
    "Expr",
    "Jet3",
    "Var",
    "constant_value",
    "differentiate",
    "eval_jet",
    "eval_value",
    "evaluate",
    "free_variables",
    "nth_derivative",
    "parse",
    "partials",
    "rename",
    "substitute",
    "to_source",
]
