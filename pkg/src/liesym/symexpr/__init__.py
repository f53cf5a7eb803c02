"""Exact-arithmetic expression kernel.

Expressions are immutable values, safe to share between threads; a Context
is read-only after declaration, so every operation here is a pure function.
"""
from .context import Atom, Context, UnknownFunction
from .expr import (
    Add,
    Cos,
    Deriv,
    Expr,
    MINUS_ONE,
    Mul,
    ONE,
    Pow,
    Rat,
    Sin,
    Sym,
    ZERO,
    atom,
    add,
    atoms_of,
    contains_atom,
    cos_,
    deriv,
    diff,
    func,
    functions_of,
    max_jet_order,
    mul,
    pow_,
    rational,
    sin_,
    substitute,
    walk,
)
from .normal import (
    CanonicalForm,
    canonical_constraint,
    collect,
    equivalent,
    is_zero,
    normalize,
)
from .numeric import default_rng, evaluate, sample_env
from .parser import parse
from .printer import from_json, latex, plain, to_json

__all__ = [
    "Atom",
    "Context",
    "UnknownFunction",
    "Expr",
    "Rat",
    "Sym",
    "Add",
    "Mul",
    "Pow",
    "Sin",
    "Cos",
    "Deriv",
    "ZERO",
    "ONE",
    "MINUS_ONE",
    "rational",
    "atom",
    "func",
    "deriv",
    "add",
    "mul",
    "pow_",
    "sin_",
    "cos_",
    "diff",
    "substitute",
    "walk",
    "atoms_of",
    "functions_of",
    "contains_atom",
    "max_jet_order",
    "CanonicalForm",
    "normalize",
    "canonical_constraint",
    "is_zero",
    "equivalent",
    "collect",
    "parse",
    "plain",
    "latex",
    "to_json",
    "from_json",
    "evaluate",
    "sample_env",
    "default_rng",
]
