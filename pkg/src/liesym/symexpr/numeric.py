"""Floating-point evaluation oracle.

This is the only place floats appear; the symbolic kernel itself is exact.
Unknown-function derivatives are treated as independent sample values keyed
by their printed name (e.g. ``xi_s_theta``), which is sound for zero
testing because distinct formal derivatives are functionally independent.
The sampling RNG honours the LIESYM_SEED environment variable.
"""
from __future__ import annotations

import math
import os
import random

from .expr import Add, Cos, Deriv, Expr, Mul, Pow, Rat, Sin, Sym, walk
from .printer import _deriv_name

SEED_ENV = "LIESYM_SEED"
_DEFAULT_SEED = 271828


def default_rng() -> random.Random:
    return random.Random(int(os.environ.get(SEED_ENV, _DEFAULT_SEED)))


def evaluate(e: Expr, env: dict) -> float:
    """Evaluate at a point; `env` maps atom / derivative names to floats."""
    t = type(e)
    if t is Rat:
        return float(e.value)
    if t is Sym:
        name = e.atom.name
        if name == "pi":
            return math.pi
        try:
            return env[name]
        except KeyError:
            raise KeyError(f"no value for atom {name}") from None
    if t is Add:
        return sum(evaluate(x, env) for x in e.terms)
    if t is Mul:
        out = 1.0
        for f in e.factors:
            out *= evaluate(f, env)
        return out
    if t is Pow:
        return evaluate(e.base, env) ** e.exp
    if t is Sin:
        return math.sin(evaluate(e.arg, env))
    if t is Cos:
        return math.cos(evaluate(e.arg, env))
    if t is Deriv:
        name = _deriv_name(e)
        try:
            return env[name]
        except KeyError:
            raise KeyError(f"no value for derivative {name}") from None
    raise TypeError(f"cannot evaluate {type(e).__name__}")


def sample_env(exprs, rng: random.Random) -> dict:
    """Draw one safe-domain point for every symbol in `exprs`.

    Angular atoms land in (0.2, pi - 0.2) so denominators built from sin
    stay away from zero; jet coordinates in (-1, 1); everything else in
    (-2, 2) except parameters, which use (-1, 1).
    """
    env: dict[str, float] = {}
    for e in exprs:
        for node in walk(e):
            t = type(node)
            if t is Sym:
                a = node.atom
                if a.name in env or a.name == "pi":
                    continue
                if a.angular:
                    env[a.name] = rng.uniform(0.2, math.pi - 0.2)
                elif a.kind == "jet":
                    env[a.name] = rng.uniform(-1.0, 1.0)
                elif a.kind == "parameter":
                    env[a.name] = rng.uniform(-1.0, 1.0)
                else:
                    env[a.name] = rng.uniform(-2.0, 2.0)
            elif t is Deriv:
                name = _deriv_name(node)
                if name not in env:
                    env[name] = rng.uniform(-1.0, 1.0)
    return env
