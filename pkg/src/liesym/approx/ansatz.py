"""Finite-dimensional ansatz solving for determining systems.

Each unknown function is replaced by a linear combination of fixed basis
expressions with undetermined rational constants; every constraint then
expands over the monomial basis of the supported function class into exact
linear conditions on those constants.  The resulting affine solution set
is solved exactly, and constants that vanish across the entire set are
reported as forced to zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..determine import DeterminingSystem
from ..errors import NonlinearAnsatzError
from ..symexpr import (
    Atom,
    Context,
    Expr,
    UnknownFunction,
    add,
    atom,
    cos_,
    mul,
    pow_,
    rational,
    sin_,
    substitute,
)
from ..symexpr.normal import fraction_parts
from .linsolve import LinearSolution, solve

#: group labels for solve-for constants
GROUP_EXACT = "exact"
GROUP_CORRECTION = "correction"
GROUP_PERTURBATION = "perturbation"


@dataclass(frozen=True)
class Ansatz:
    """Parametric replacements for unknown functions.

    `replacements` maps each UnknownFunction to an expression linear in
    the constants listed in `constants`; `groups` labels each constant
    with the role it plays in a pipeline.
    """

    replacements: dict
    constants: tuple[Atom, ...]
    groups: dict

    def merged_with(self, other: "Ansatz") -> "Ansatz":
        repl = dict(self.replacements)
        repl.update(other.replacements)
        groups = dict(self.groups)
        groups.update(other.groups)
        return Ansatz(repl, self.constants + other.constants, groups)


def _fresh_constant(ctx: Context, name: str) -> Atom:
    return ctx.atom(name) if ctx.has_atom(name) else ctx.parameter(name)


def basis_ansatz(ctx, funcs, bases, prefix, group) -> Ansatz:
    """Attach one undetermined constant to every basis element."""
    replacements = {}
    constants = []
    groups = {}
    for f, basis in zip(funcs, bases):
        terms = []
        for i, b in enumerate(basis):
            c = _fresh_constant(ctx, f"{prefix}{f.name}_{i}")
            constants.append(c)
            groups[c] = group
            terms.append(mul(atom(c), b))
        replacements[f] = add(*terms) if terms else rational(0)
    return Ansatz(replacements, tuple(constants), groups)


def log_sin_atom(ctx: Context) -> Atom:
    """Opaque basis atom for log(sin(theta)).

    Carries its theta-derivative cos/sin as a formal rule; it takes part
    in linear independence but never in trig reduction.
    """
    dep1 = ctx.dependents[0]
    name = f"lnsin_{dep1.name}"
    if ctx.has_atom(name):
        return ctx.atom(name)
    th = atom(dep1)
    rule = mul(cos_(th), pow_(sin_(th), -1))
    return ctx.parameter(name, rules=((dep1.name, rule),))


def sphere_generator_bases(ctx: Context):
    """Basis vocabulary rich enough for every hand-integrated form.

    The time component is cubic in s with coefficients linear in the first
    angle; the angle components span products of low-degree polynomials in
    (s, theta, phi) with first-harmonic trig in phi, plus the cot-family
    and the log-sin atom.
    """
    s = atom(ctx.independent_atom)
    dep1, dep2 = ctx.dependents
    th, ph = atom(dep1), atom(dep2)
    cot = mul(cos_(th), pow_(sin_(th), -1))
    lnsin = atom(log_sin_atom(ctx))
    one = rational(1)
    s2 = mul(s, s)
    xi_basis = []
    for i in range(4):
        p = pow_(s, i) if i else one
        xi_basis.append(p)
        xi_basis.append(mul(th, p))
    polys = (
        one, s, s2,
        th, mul(th, s), mul(th, s2),
        ph, mul(ph, s), mul(ph, s2),
        mul(th, ph),
    )
    trigs = (one, sin_(ph), cos_(ph))
    eta_basis = [mul(p, t) for p in polys for t in trigs]
    eta_basis.extend(
        (cot, mul(cot, sin_(ph)), mul(cot, cos_(ph)), mul(cot, ph), mul(cot, th), lnsin)
    )
    return (tuple(xi_basis), tuple(eta_basis), tuple(eta_basis))


def polynomial_generator_bases(ctx: Context, degree: int = 2):
    """All coordinate monomials up to total degree for flat-space work."""
    names = [atom(ctx.independent_atom)] + [atom(d) for d in ctx.dependents]
    basis = []

    def rec(i, left, cur):
        if i == len(names):
            basis.append(mul(*cur) if cur else rational(1))
            return
        for e in range(left + 1):
            rec(i + 1, left - e, cur + [pow_(names[i], e)] if e else cur)

    rec(0, degree, [])
    basis_t = tuple(basis)
    return (basis_t, basis_t, basis_t)


def linear_forms_ansatz(ctx: Context, funcs, prefix="p_") -> Ansatz:
    """Perturbation ansatz: each single-argument function becomes an
    affine form in its argument with two undetermined constants."""
    replacements = {}
    constants = []
    groups = {}
    for f in funcs:
        arg = atom(f.args[0])
        slope = _fresh_constant(ctx, f"{prefix}{f.name}_lin")
        inter = _fresh_constant(ctx, f"{prefix}{f.name}_const")
        constants.extend([slope, inter])
        groups[slope] = GROUP_PERTURBATION
        groups[inter] = GROUP_PERTURBATION
        replacements[f] = add(mul(atom(slope), arg), atom(inter))
    return Ansatz(replacements, tuple(constants), groups)


# ---------------------------------------------------------------------------
# row extraction


def linear_rows(exprs, unknowns) -> tuple[list, list]:
    """Expand expressions over the monomial basis into rows over unknowns.

    Every expression is required to vanish identically; each distinct
    residual monomial therefore contributes one row of `sum_j a_j x_j =
    rhs`.  Raises NonlinearAnsatzError on unknown-degree >= 2 or on
    monomials still containing unknown functions.
    """
    index = {a.name: i for i, a in enumerate(unknowns)}
    rows, rhs = [], []
    for e in exprs:
        num, _den, _reg = fraction_parts(e)
        groups: dict[tuple, dict] = {}
        for mono, coeff in num.items():
            rest = []
            col = None
            for gk, exp in mono:
                if gk[0] == "a" and gk[1] in index:
                    if col is not None or exp > 1:
                        raise NonlinearAnsatzError(
                            "constraint is nonlinear in the unknown constants"
                        )
                    col = index[gk[1]]
                elif gk[0] == "f":
                    raise NonlinearAnsatzError(
                        f"unknown function {gk[1]} left unsubstituted"
                    )
                else:
                    rest.append((gk, exp))
            bucket = groups.setdefault(tuple(rest), {})
            bucket[col] = bucket.get(col, Fraction(0)) + coeff
        for bucket in groups.values():
            row = [Fraction(0)] * len(unknowns)
            b = Fraction(0)
            for col, coeff in bucket.items():
                if col is None:
                    b -= coeff
                else:
                    row[col] = coeff
            rows.append(row)
            rhs.append(b)
    return rows, rhs


@dataclass
class AnsatzSolution:
    """Exact affine solution set of a determining system under an ansatz."""

    system: DeterminingSystem
    ansatz: Ansatz
    unknowns: tuple[Atom, ...]
    solution: LinearSolution
    groups: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.solution.consistent

    @property
    def dimension(self) -> int:
        return self.solution.nullity

    def forced_zero(self) -> tuple[Atom, ...]:
        flags = self.solution.forced_zero()
        return tuple(a for a, z in zip(self.unknowns, flags) if z)

    def free_constants(self) -> tuple[Atom, ...]:
        flags = self.solution.forced_zero()
        return tuple(a for a, z in zip(self.unknowns, flags) if not z)

    def vector_bindings(self, vector) -> dict:
        return {a: rational(v) for a, v in zip(self.unknowns, vector)}

    def instantiate(self, f: UnknownFunction, vector) -> Expr:
        """Value of one ansatz replacement at a solution vector."""
        return substitute(self.ansatz.replacements[f], self.vector_bindings(vector))

    def particular_vector(self):
        return self.solution.particular

    def basis_vectors(self):
        return self.solution.basis


def solve_ansatz(
    ds: DeterminingSystem, ansatz: Ansatz, extra_unknowns=()
) -> AnsatzSolution:
    """Substitute the ansatz into every constraint and solve exactly.

    `extra_unknowns` adds constants that appear in the constraints
    themselves (not in the ansatz), such as perturbation coefficients.
    """
    unknowns = tuple(ansatz.constants) + tuple(extra_unknowns)
    groups = dict(ansatz.groups)
    for a in extra_unknowns:
        groups.setdefault(a, GROUP_PERTURBATION)
    exprs = [
        substitute(c.coefficient, ansatz.replacements) for c in ds.constraints
    ]
    rows, rhs = linear_rows(exprs, unknowns)
    sol = solve(rows, rhs)
    return AnsatzSolution(ds, ansatz, unknowns, sol, groups)
