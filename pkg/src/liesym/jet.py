"""Jet-space bookkeeping: ODE systems in solved form, the total derivative
operator, and on-shell reduction.

Everything operates on immutable inputs and returns new expressions, so all
functions here are safe to call from multiple threads.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DerivativeOrderError
from .symexpr import (
    Context,
    Expr,
    add,
    atom,
    contains_atom,
    diff,
    is_zero,
    max_jet_order,
    mul,
    substitute,
    walk,
)
from .symexpr.context import EPSILON
from .symexpr.expr import Sym


@dataclass(frozen=True)
class OdeSystem:
    """A pair of second-order ODEs solved for the highest derivatives.

    ``rhs[i]`` is the expression the i-th second derivative equals on
    solutions; ``perturbation[i]``, when present, is the order-one term
    added to the i-th equation (multiplied by the small parameter, which
    itself never appears inside the stored expressions).
    """

    ctx: Context
    rhs: tuple[Expr, ...]
    perturbation: tuple[Expr, ...] | None = None

    def __post_init__(self):
        deps = self.ctx.dependents
        if len(self.rhs) != len(deps):
            raise ValueError("one right-hand side per dependent variable")
        for e in self.rhs:
            if max_jet_order(e) > 1:
                raise ValueError("solved form must be free of second-order jets")
        if self.perturbation is not None:
            if len(self.perturbation) != len(deps):
                raise ValueError("one perturbation per equation")
            for e in self.perturbation:
                if max_jet_order(e) > 1:
                    raise ValueError("perturbations must be free of second-order jets")
                if any(
                    type(n) is Sym and n.atom.name == EPSILON for n in walk(e)
                ):
                    raise ValueError("perturbations must not contain eps")

    @property
    def dependents(self):
        return self.ctx.dependents

    @property
    def independent(self):
        return self.ctx.independent_atom

    def equation_exprs(self, with_perturbation: bool = False) -> tuple[Expr, ...]:
        """Left-hand sides in `expression = 0` form."""
        eps = atom(self.ctx.epsilon)
        out = []
        for i, dep in enumerate(self.dependents):
            e = atom(self.ctx.jet(dep, 2)) - self.rhs[i]
            if with_perturbation and self.perturbation is not None:
                e = e + mul(eps, self.perturbation[i])
            out.append(e)
        return tuple(out)

    def without_perturbation(self) -> "OdeSystem":
        return OdeSystem(self.ctx, self.rhs, None)

    def with_perturbation(self, perturbation) -> "OdeSystem":
        return OdeSystem(self.ctx, self.rhs, tuple(perturbation))


def total_derivative(e: Expr, sys: OdeSystem) -> Expr:
    """Apply D = d/ds with second derivatives kept as formal jet atoms.

    The input may depend on jets of order <= 1 only; depending on an
    order-2 atom would require order-3 output, which the jet space does
    not contain.
    """
    if max_jet_order(e) > 1:
        for dep in sys.dependents:
            j2 = sys.ctx.jet(dep, 2)
            if contains_atom(e, j2) and not is_zero(diff(e, j2)):
                raise DerivativeOrderError(
                    f"total derivative of an expression depending on {j2.name} "
                    f"would need an order-3 coordinate"
                )
    terms = [diff(e, sys.independent)]
    for dep in sys.dependents:
        j1 = sys.ctx.jet(dep, 1)
        j2 = sys.ctx.jet(dep, 2)
        terms.append(mul(atom(j1), diff(e, dep)))
        terms.append(mul(atom(j2), diff(e, j1)))
    return add(*terms)


def reduce_on_shell(e: Expr, sys: OdeSystem, with_perturbation: bool = False) -> Expr:
    """Replace second-order jets by the solved right-hand sides.

    When `with_perturbation` is set and the system carries one, each
    second derivative is replaced by rhs - eps*perturbation, matching the
    perturbed equations rearranged into solved form.
    """
    eps = atom(sys.ctx.epsilon)
    bindings = {}
    for i, dep in enumerate(sys.dependents):
        value = sys.rhs[i]
        if with_perturbation and sys.perturbation is not None:
            value = value - mul(eps, sys.perturbation[i])
        bindings[sys.ctx.jet(dep, 2)] = value
    return substitute(e, bindings)
