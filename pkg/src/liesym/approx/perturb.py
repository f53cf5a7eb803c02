"""Perturbation models, auxiliary functions, and the order-separated
determining systems for approximate symmetries.

Three perturbation modes are supported: `first` adds unknown functions of
one coordinate each to the two equations, `second` adds fixed quadratic
velocity polynomials with 14 undetermined constants, and `explicit` adds
caller-supplied concrete expressions.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..determine import (
    DeterminingSystem,
    generator_functions,
    generic_generator,
    split_residuals,
)
from ..errors import NotExactSymmetryError
from ..jet import OdeSystem, reduce_on_shell
from ..prolong import ApproxGenerator, Generator, apply, prolong2
from ..symexpr import (
    Context,
    Expr,
    ZERO,
    add,
    atom,
    canonical_constraint,
    collect,
    cos_,
    diff,
    func,
    is_zero,
    mul,
    plain,
    sin_,
    substitute,
)

FIRST = "first"
SECOND = "second"
EXPLICIT = "explicit"

#: Unknown-function names used for the exact part of an approximate pair.
X0_NAMES = ("xi0", "eta01", "eta02")
#: Unknown-function names used for the order-one correction.
X1_NAMES = ("xi1", "eta11", "eta21")


@dataclass(frozen=True)
class PerturbationSpec:
    """Declarative description of the order-one terms added per equation."""

    mode: str
    exprs: tuple[Expr, ...]
    constants: tuple = ()
    functions: tuple = ()

    @classmethod
    def first_approach(cls, ctx: Context) -> "PerturbationSpec":
        """Unknown f of the first coordinate and g of the second."""
        dep1, dep2 = ctx.dependents
        f = ctx.function("f") if ctx.has_function("f") else ctx.unknown("f", (dep1.name,))
        g = ctx.function("g") if ctx.has_function("g") else ctx.unknown("g", (dep2.name,))
        return cls(FIRST, (func(f), func(g)), (), (f, g))

    @classmethod
    def second_approach(cls, ctx: Context) -> "PerturbationSpec":
        """Velocity-quadratic forms with constants k1..k7 and h1..h7."""
        dep1, dep2 = ctx.dependents
        j1 = atom(ctx.jet(dep1, 1))
        j2 = atom(ctx.jet(dep2, 1))
        coords = (atom(dep1), atom(dep2))
        ks = tuple(_constant(ctx, f"k{i}") for i in range(1, 8))
        hs = tuple(_constant(ctx, f"h{i}") for i in range(1, 8))

        def form(c):
            return add(
                atom(c[0]),
                mul(atom(c[1]), coords[0]),
                mul(atom(c[2]), coords[1]),
                mul(atom(c[3]), j1),
                mul(atom(c[4]), j2),
                mul(atom(c[5]), j1, j1),
                mul(atom(c[6]), j2, j2),
            )

        return cls(SECOND, (form(ks), form(hs)), ks + hs, ())

    @classmethod
    def explicit(cls, exprs) -> "PerturbationSpec":
        return cls(EXPLICIT, tuple(exprs))

    def attach(self, sys: OdeSystem) -> OdeSystem:
        return sys.with_perturbation(self.exprs)


def _constant(ctx: Context, name: str):
    return ctx.atom(name) if ctx.has_atom(name) else ctx.parameter(name)


# ---------------------------------------------------------------------------
# auxiliary functions


def auxiliary_H(X0: Generator, sys: OdeSystem) -> tuple[Expr, ...]:
    """Inhomogeneity of the order-one determining equation.

    Acts with the prolonged exact symmetry on each perturbed equation,
    reduces on the perturbed shell, and peels off the linear term in the
    small parameter; the constant term must vanish (that is exactly the
    statement that X0 is an exact symmetry) and no higher powers arise.
    """
    if sys.perturbation is None:
        raise ValueError("auxiliary_H needs a perturbed system")
    eps = sys.ctx.epsilon
    pg = prolong2(X0, sys)
    out = []
    for i, E in enumerate(sys.equation_exprs(with_perturbation=True), start=1):
        res = reduce_on_shell(apply(pg, E), sys, with_perturbation=True)
        orders = collect(res, [eps])
        zeroth = orders.get((0,), ZERO)
        if not is_zero(zeroth):
            raise NotExactSymmetryError(
                f"seed is not an exact symmetry: equation {i} leaves "
                f"residual {plain(zeroth)}"
            )
        for key in orders:
            if key[0] >= 2 and not is_zero(orders[key]):
                raise NotExactSymmetryError(
                    "perturbation produced quadratic small-parameter terms"
                )
        out.append(orders.get((1,), ZERO))
    return tuple(out)


def approx_determining_system(
    X0: Generator, sys: OdeSystem, H=None, funcs=None
) -> DeterminingSystem:
    """Non-homogeneous determining system for the order-one correction.

    The correction's unknown functions satisfy the exact determining
    system except that each auxiliary function is added to its equation's
    residual, which shifts the jet-free slots.
    """
    ctx = sys.ctx
    if H is None:
        H = auxiliary_H(X0, sys)
    if funcs is None:
        funcs = generator_functions(ctx, X1_NAMES)
    g1 = generic_generator(ctx, funcs)
    pg1 = prolong2(g1, sys)
    unperturbed = sys.without_perturbation()
    residuals = []
    for E, h in zip(unperturbed.equation_exprs(), H):
        residuals.append(add(reduce_on_shell(apply(pg1, E), sys), h))
    return DeterminingSystem(split_residuals(residuals, sys), tuple(funcs))


# ---------------------------------------------------------------------------
# order separation for the general (second-approach style) pairing


def generic_approx_generator(ctx: Context) -> ApproxGenerator:
    g0 = generic_generator(ctx, generator_functions(ctx, X0_NAMES))
    g1 = generic_generator(ctx, generator_functions(ctx, X1_NAMES))
    return ApproxGenerator(g0, g1)


def epsilon_separate(
    sys: OdeSystem, pair: ApproxGenerator
) -> tuple[DeterminingSystem, DeterminingSystem]:
    """Order-zero and order-one determining systems of a perturbed system.

    The pair's prolonged action is linear in the generator components, so
    the combined action is the exact part's action plus eps times the
    correction's.  After on-shell reduction the residual is expanded in
    eps, the quadratic tail is discarded, and each retained order is split
    by derivative monomials.
    """
    if sys.perturbation is None:
        raise ValueError("epsilon_separate needs a perturbed system")
    ctx = sys.ctx
    eps_atom = ctx.epsilon
    eps = atom(eps_atom)
    pg0 = prolong2(pair.exact, sys)
    pg1 = prolong2(pair.correction, sys)
    res0, res1 = [], []
    for E in sys.equation_exprs(with_perturbation=True):
        combined = add(apply(pg0, E), mul(eps, apply(pg1, E)))
        shell = reduce_on_shell(combined, sys, with_perturbation=True)
        orders = collect(shell, [eps_atom])
        res0.append(orders.get((0,), ZERO))
        res1.append(orders.get((1,), ZERO))
    funcs0 = tuple(ctx.function(n) for n in X0_NAMES)
    funcs1 = tuple(ctx.function(n) for n in X1_NAMES)
    s0 = DeterminingSystem(split_residuals(res0, sys), funcs0)
    s1 = DeterminingSystem(split_residuals(res1, sys), funcs0 + funcs1)
    return s0, s1


def substitute_into_system(
    ds: DeterminingSystem, bindings: dict, unknowns=None
) -> DeterminingSystem:
    """Apply bindings to every constraint, dropping ones that vanish."""
    from ..determine import Constraint

    rebuilt = []
    for c in ds.constraints:
        e = substitute(c.coefficient, bindings)
        key, canon = canonical_constraint(e)
        if not key:
            continue
        rebuilt.append(Constraint(c.slot, c.eq, canon, key))
    seen: dict[tuple, tuple] = {}
    out = []
    for c in rebuilt:
        first = seen.get(c.key)
        if first is None:
            seen[c.key] = (c.slot, c.eq)
            out.append(c)
        else:
            out.append(Constraint(c.slot, c.eq, c.coefficient, c.key, first))
    if unknowns is None:
        bound = {k.name for k in bindings if hasattr(k, "name")}
        unknowns = tuple(f for f in ds.unknowns if f.name not in bound)
    return DeterminingSystem(tuple(out), tuple(unknowns))


# ---------------------------------------------------------------------------
# denoted zeroth-order quantities


@dataclass(frozen=True)
class ZerothOrderSeed:
    """Exact-symmetry data entering the order-one system.

    Holds the s-derivative of the time component, both angle components,
    and their relevant angle-derivatives, which is all the order-one
    system sees of the exact seed.
    """

    generator: Generator
    xi_s: Expr
    eta1: Expr
    eta2: Expr
    eta1_phi: Expr
    eta2_phi: Expr
    eta2_theta: Expr

    @classmethod
    def from_generator(cls, g: Generator) -> "ZerothOrderSeed":
        ctx = g.ctx
        s = ctx.independent_atom
        dep1, dep2 = ctx.dependents
        return cls(
            generator=g,
            xi_s=diff(g.xi, s),
            eta1=g.eta[0],
            eta2=g.eta[1],
            eta1_phi=diff(g.eta[0], dep2),
            eta2_phi=diff(g.eta[1], dep2),
            eta2_theta=diff(g.eta[1], dep1),
        )

    def bindings(self, funcs0) -> dict:
        xi0, eta01, eta02 = funcs0
        g = self.generator
        return {xi0: g.xi, eta01: g.eta[0], eta02: g.eta[1]}


def generic_seed(ctx: Context):
    """Five-parameter general exact symmetry of the sphere system.

    Using symbolic coefficients keeps every forced-zero conclusion drawn
    from the order-one system valid for all seeds at once.
    """
    cs = tuple(_constant(ctx, f"c{i}") for i in range(5))
    s = atom(ctx.independent_atom)
    dep1, dep2 = ctx.dependents
    th, ph = atom(dep1), atom(dep2)
    cot = mul(cos_(th), pow_sin_inv(th))
    xi = add(mul(atom(cs[1]), s), atom(cs[0]))
    eta1 = add(mul(atom(cs[3]), cos_(ph)), mul(atom(cs[4]), sin_(ph)))
    eta2 = add(
        mul(cot, add(mul(atom(cs[4]), cos_(ph)), mul(-1, atom(cs[3]), sin_(ph)))),
        atom(cs[2]),
    )
    g = Generator(ctx, xi, (eta1, eta2))
    return ZerothOrderSeed.from_generator(g), cs


def pow_sin_inv(x):
    from ..symexpr import pow_

    return pow_(sin_(x), -1)
