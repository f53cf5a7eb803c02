"""Two-dimensional metrics, Christoffel symbols, and geodesic systems."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import SingularMetricError
from .jet import OdeSystem
from .symexpr import Context, Expr, add, atom, diff, equivalent, is_zero, mul, pow_, rational


@dataclass(frozen=True)
class Metric2:
    """Symmetric 2x2 metric over the context's two dependent coordinates."""

    ctx: Context
    components: tuple[tuple[Expr, Expr], tuple[Expr, Expr]]

    def __post_init__(self):
        if len(self.ctx.dependents) != 2:
            raise ValueError("Metric2 needs exactly two coordinates")
        g = self.components
        if not equivalent(g[0][1], g[1][0]):
            raise ValueError("metric must be symmetric")

    @property
    def coords(self):
        return self.ctx.dependents

    def determinant(self) -> Expr:
        g = self.components
        return g[0][0] * g[1][1] - g[0][1] * g[1][0]

    def inverse(self) -> tuple[tuple[Expr, Expr], tuple[Expr, Expr]]:
        """Exact inverse via adjugate over determinant (2x2 only)."""
        det = self.determinant()
        if is_zero(det):
            raise SingularMetricError("metric determinant is identically zero")
        inv_det = pow_(det, -1)
        g = self.components
        return (
            (mul(g[1][1], inv_det), mul(rational(-1), g[0][1], inv_det)),
            (mul(rational(-1), g[1][0], inv_det), mul(g[0][0], inv_det)),
        )


@dataclass(frozen=True)
class Christoffel:
    """Connection coefficients indexed [upper][lower][lower]."""

    metric: Metric2
    gamma: tuple

    def __getitem__(self, abc):
        a, b, c = abc
        return self.gamma[a][b][c]


def christoffel(m: Metric2) -> Christoffel:
    """Levi-Civita connection of the metric.

    gamma^a_{bc} = (1/2) g^{ad} (g_{db,c} + g_{dc,b} - g_{bc,d}); symmetric
    in the lower pair by construction.
    """
    coords = m.coords
    g = m.components
    ginv = m.inverse()
    half = rational(1, 2)
    out = []
    for a in range(2):
        plane = []
        for b in range(2):
            row = []
            for c in range(2):
                terms = []
                for d in range(2):
                    bracket = add(
                        diff(g[d][b], coords[c]),
                        diff(g[d][c], coords[b]),
                        mul(rational(-1), diff(g[b][c], coords[d])),
                    )
                    terms.append(mul(ginv[a][d], bracket))
                row.append(mul(half, add(*terms)))
            plane.append(tuple(row))
        out.append(tuple(plane))
    return Christoffel(m, tuple(out))


def geodesic_system(m: Metric2) -> OdeSystem:
    """Geodesic equations in solved form: x''^a = -gamma^a_{bc} x'^b x'^c."""
    gamma = christoffel(m)
    ctx = m.ctx
    coords = m.coords
    jets = [atom(ctx.jet(x, 1)) for x in coords]
    rhs = []
    for a in range(2):
        terms = []
        for b in range(2):
            for c in range(2):
                terms.append(mul(rational(-1), gamma[a, b, c], jets[b], jets[c]))
        rhs.append(add(*terms))
    return OdeSystem(ctx, tuple(rhs))


def arc_length_density(m: Metric2) -> Expr:
    """g_{ab} x'^a x'^b; conserved along geodesics."""
    ctx = m.ctx
    jets = [atom(ctx.jet(x, 1)) for x in m.coords]
    terms = []
    for a in range(2):
        for b in range(2):
            terms.append(mul(m.components[a][b], jets[a], jets[b]))
    return add(*terms)
