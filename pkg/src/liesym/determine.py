"""Assembly, monomial splitting, and verification of determining systems.

A determining system is the set of coefficient conditions obtained by
acting with a prolonged generic generator on each equation, reducing on
shell, and comparing coefficients of the first-derivative monomials.  The
complete nonzero slot set is kept; slots whose condition repeats an
earlier slot's condition carry a `redundant_with` reference so listings
can reproduce the usual hand-derived presentation, which folds some of
the repeats.  Constraint coefficients are stored in a representation-
stable normal form: denominators cleared, rational content one, leading
sign positive.

Constraint generation is a pure function of immutable inputs; the two
equations and the per-monomial splits could be processed in parallel, the
final ordering being the only join point.
"""
from __future__ import annotations

from dataclasses import dataclass

from .jet import OdeSystem, reduce_on_shell
from .prolong import Generator, ProlongedGenerator, apply, prolong2
from .symexpr import (
    Context,
    Expr,
    UnknownFunction,
    canonical_constraint,
    collect,
    func,
    is_zero,
    plain,
    substitute,
)

#: Listing order for split slots: pure derivative powers by degree, then
#: the mixed monomials.  Anything beyond cubic falls back after these.
SLOT_ORDER = (
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (0, 2),
    (3, 0),
    (0, 3),
    (1, 1),
    (1, 2),
    (2, 1),
)


def _slot_rank(slot):
    try:
        return (0, SLOT_ORDER.index(slot))
    except ValueError:
        return (1, sum(slot), slot)


@dataclass(frozen=True)
class Constraint:
    """One vanishing condition, keyed by derivative monomial and equation."""

    slot: tuple[int, ...]
    eq: int
    coefficient: Expr
    key: tuple
    redundant_with: tuple | None = None

    def describe(self) -> str:
        powers = " ".join(str(p) for p in self.slot)
        line = f"eq{self.eq} [{powers}] : {plain(self.coefficient)} = 0"
        if self.redundant_with is not None:
            slot, eq = self.redundant_with
            rp = " ".join(str(p) for p in slot)
            line += f"  # duplicate of eq{eq} [{rp}]"
        return line


@dataclass(frozen=True)
class DeterminingSystem:
    """Ordered constraints plus the unknown functions they restrict."""

    constraints: tuple[Constraint, ...]
    unknowns: tuple[UnknownFunction, ...]

    def primary(self) -> tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.redundant_with is None)

    def at(self, slot, eq) -> Constraint:
        for c in self.constraints:
            if c.slot == tuple(slot) and c.eq == eq:
                return c
        raise KeyError(f"no constraint at eq{eq} {slot}")

    def describe(self) -> str:
        return "\n".join(c.describe() for c in self.constraints)


def generator_functions(ctx: Context, names=("xi", "eta1", "eta2")):
    """Fetch-or-declare the unknown generator components on ctx."""
    argnames = (ctx.independent_atom.name, *[d.name for d in ctx.dependents])
    out = []
    for name in names:
        if ctx.has_function(name):
            f = ctx.function(name)
            if tuple(a.name for a in f.args) != argnames:
                raise ValueError(f"{name} already declared with other arguments")
            out.append(f)
        else:
            out.append(ctx.unknown(name, argnames))
    return tuple(out)


def generic_generator(ctx: Context, funcs=None) -> Generator:
    if funcs is None:
        funcs = generator_functions(ctx)
    xi, *etas = funcs
    return Generator(ctx, func(xi), tuple(func(h) for h in etas))


def invariance_residuals(
    pg: ProlongedGenerator, sys: OdeSystem, with_perturbation: bool = False
) -> tuple[Expr, ...]:
    """On-shell action of a prolonged generator on each equation."""
    return tuple(
        reduce_on_shell(apply(pg, E), sys, with_perturbation)
        for E in sys.equation_exprs(with_perturbation)
    )


def split_residuals(residuals, sys: OdeSystem) -> tuple[Constraint, ...]:
    """Compare coefficients of the first-derivative monomials."""
    jets = [sys.ctx.jet(d, 1) for d in sys.dependents]
    raw = []
    for eq, residual in enumerate(residuals, start=1):
        for slot, coeff in collect(residual, jets).items():
            key, canon = canonical_constraint(coeff)
            if not key:
                continue
            raw.append(Constraint(slot, eq, canon, key))
    raw.sort(key=lambda c: (_slot_rank(c.slot), c.eq))
    seen: dict[tuple, tuple] = {}
    out = []
    for c in raw:
        first = seen.get(c.key)
        if first is None:
            seen[c.key] = (c.slot, c.eq)
            out.append(c)
        else:
            out.append(Constraint(c.slot, c.eq, c.coefficient, c.key, first))
    return tuple(out)


def determining_system(sys: OdeSystem, funcs=None) -> DeterminingSystem:
    """Determining system of the unperturbed sys for a generic generator."""
    if sys.perturbation is not None:
        raise ValueError("determining_system expects an unperturbed system")
    ctx = sys.ctx
    if funcs is None:
        funcs = generator_functions(ctx)
    g = generic_generator(ctx, funcs)
    pg = prolong2(g, sys)
    residuals = invariance_residuals(pg, sys)
    return DeterminingSystem(split_residuals(residuals, sys), tuple(funcs))


@dataclass(frozen=True)
class ConstraintResidual:
    slot: tuple[int, ...]
    eq: int
    residual: Expr
    ok: bool

    def describe(self) -> str:
        powers = " ".join(str(p) for p in self.slot)
        status = "ok" if self.ok else f"FAIL residual {plain(self.residual)}"
        return f"eq{self.eq} [{powers}] : {status}"


@dataclass(frozen=True)
class VerificationReport:
    generator: Generator
    entries: tuple[ConstraintResidual, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> tuple[ConstraintResidual, ...]:
        return tuple(e for e in self.entries if not e.ok)

    def describe(self) -> str:
        lines = [e.describe() for e in self.entries]
        lines.append("PASS" if self.ok else "FAIL")
        return "\n".join(lines)


def verify_generator(
    g: Generator, sys: OdeSystem, ds: DeterminingSystem | None = None
) -> VerificationReport:
    """Check a concrete generator against every determining constraint."""
    if ds is None:
        ds = determining_system(sys)
    comps = g.components()
    if len(comps) != len(ds.unknowns):
        raise ValueError("generator does not match the system's unknowns")
    bindings = dict(zip(ds.unknowns, comps))
    entries = []
    for c in ds.constraints:
        residual = substitute(c.coefficient, bindings)
        entries.append(ConstraintResidual(c.slot, c.eq, residual, is_zero(residual)))
    return VerificationReport(g, tuple(entries))
