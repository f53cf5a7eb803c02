"""Point-symmetry generators, second prolongations, and Lie brackets.

The prolongation coefficients are computed from the recursive definition
(first-order coefficient = D eta - x' D xi, second-order = D of that minus
x'' D xi); the fully expanded textbook formulas live in the test suite as
an independent cross-check, not here.
"""
from __future__ import annotations

from dataclasses import dataclass

from .jet import OdeSystem, total_derivative
from .symexpr import (
    Context,
    Expr,
    add,
    atom,
    diff,
    max_jet_order,
    mul,
    plain,
    rational,
    walk,
)
from .symexpr.context import EPSILON
from .symexpr.expr import Sym


def _component_ok(e: Expr) -> bool:
    for n in walk(e):
        if type(n) is Sym:
            if n.atom.kind == "jet":
                return False
            if n.atom.name == EPSILON:
                return False
    return True


@dataclass(frozen=True)
class Generator:
    """Vector field xi d/ds + eta1 d/dtheta + eta2 d/dphi on base space."""

    ctx: Context
    xi: Expr
    eta: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.eta) != len(self.ctx.dependents):
            raise ValueError("one eta component per dependent variable")
        for comp in (self.xi, *self.eta):
            if not _component_ok(comp):
                raise ValueError(
                    "generator components must be free of jets and eps"
                )

    def components(self) -> tuple[Expr, ...]:
        return (self.xi, *self.eta)

    def apply_to(self, e: Expr) -> Expr:
        """First-order derivation action on a base-space expression."""
        vars_ = (self.ctx.independent_atom, *self.ctx.dependents)
        return add(*[mul(c, diff(e, v)) for c, v in zip(self.components(), vars_)])

    def scale(self, c) -> "Generator":
        return Generator(
            self.ctx, mul(c, self.xi), tuple(mul(c, y) for y in self.eta)
        )

    def plus(self, other: "Generator") -> "Generator":
        return Generator(
            self.ctx,
            add(self.xi, other.xi),
            tuple(add(a, b) for a, b in zip(self.eta, other.eta)),
        )

    def describe(self) -> str:
        parts = [f"xi={plain(self.xi)}"]
        for i, e in enumerate(self.eta, start=1):
            parts.append(f"eta{i}={plain(e)}")
        return ", ".join(parts)


@dataclass(frozen=True)
class ApproxGenerator:
    """First-order pair (exact part, order-one correction)."""

    exact: Generator
    correction: Generator


@dataclass(frozen=True)
class ProlongedGenerator:
    """Second prolongation: base components plus the four jet coefficients.

    `eta_s[i]` extends the action to the i-th first-derivative coordinate
    and contains jets of order <= 1; `eta_ss[i]` extends it to the i-th
    second-derivative coordinate and is affine in the order-2 jet atoms.
    """

    base: Generator
    eta_s: tuple[Expr, ...]
    eta_ss: tuple[Expr, ...]


def prolong2(g: Generator, sys: OdeSystem) -> ProlongedGenerator:
    """Second prolongation of g over the jet space of sys."""
    dxi = total_derivative(g.xi, sys)
    eta_s = []
    for i, dep in enumerate(sys.dependents):
        j1 = atom(sys.ctx.jet(dep, 1))
        eta_s.append(add(total_derivative(g.eta[i], sys), mul(rational(-1), j1, dxi)))
    eta_ss = []
    for i, dep in enumerate(sys.dependents):
        j2 = atom(sys.ctx.jet(dep, 2))
        eta_ss.append(
            add(total_derivative(eta_s[i], sys), mul(rational(-1), j2, dxi))
        )
    return ProlongedGenerator(g, tuple(eta_s), tuple(eta_ss))


def apply(pg: ProlongedGenerator, e: Expr) -> Expr:
    """Prolonged action on an expression with jets of order <= 2."""
    if max_jet_order(e) > 2:
        raise ValueError("expression exceeds second-order jet space")
    g = pg.base
    ctx = g.ctx
    terms = [mul(g.xi, diff(e, ctx.independent_atom))]
    for i, dep in enumerate(ctx.dependents):
        terms.append(mul(g.eta[i], diff(e, dep)))
        terms.append(mul(pg.eta_s[i], diff(e, ctx.jet(dep, 1))))
        terms.append(mul(pg.eta_ss[i], diff(e, ctx.jet(dep, 2))))
    return add(*terms)


def lie_bracket(g: Generator, h: Generator) -> Generator:
    """Commutator [g, h] acting as first-order derivations on base space."""
    xi = add(g.apply_to(h.xi), mul(rational(-1), h.apply_to(g.xi)))
    eta = tuple(
        add(g.apply_to(h.eta[i]), mul(rational(-1), h.apply_to(g.eta[i])))
        for i in range(len(g.eta))
    )
    return Generator(g.ctx, xi, eta)
