"""Canonical trig-polynomial normal form and the exact zero test.

An expression is rewritten as a fraction of multivariate polynomials whose
indeterminates are atoms, sin/cos applications, and formal derivatives of
unknown functions.  For every angular atom the cosine degree of each
monomial is brought below 2 via cos^2 = 1 - sin^2 (never the reverse), the
numerator and denominator are stripped of shared monomial factors, and the
denominator is scaled monic.  Monomials in the resulting indeterminates are
linearly independent as functions, so a zero numerator is equivalent to the
expression vanishing identically, which makes `is_zero` a decision
procedure on the supported class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from ..errors import NotPolynomialError, ZeroDenominatorError
from .context import Atom
from .expr import (
    Add,
    Cos,
    Deriv,
    Expr,
    Mul,
    Pow,
    Rat,
    Sin,
    Sym,
    ZERO,
    add,
    mul,
    pow_,
    rational,
)

# A monomial is a sorted tuple of (gkey, positive exponent); a polynomial
# maps monomials to nonzero Fractions.  gkeys:
#   ('a', name)            plain atom
#   ('s', argrepr)         sin applied to argrepr
#   ('c', argrepr)         cos applied to argrepr
#   ('f', name, counts)    formal derivative of an unknown function

_EMPTY = ()


def _p_const(c: Fraction) -> dict:
    return {_EMPTY: c} if c else {}

_P_ONE = {_EMPTY: Fraction(1)}


def _p_add_into(acc: dict, p: dict, scale: Fraction = Fraction(1)) -> None:
    for m, c in p.items():
        v = acc.get(m, Fraction(0)) + c * scale
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def _m_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for k, e in m2:
        d[k] = d.get(k, 0) + e
    return tuple(sorted(d.items()))


def _p_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _m_mul(m1, m2)
            v = out.get(m, Fraction(0)) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _p_pow(a: dict, n: int) -> dict:
    out = dict(_P_ONE)
    base = a
    while n:
        if n & 1:
            out = _p_mul(out, base)
        base = _p_mul(base, base) if n > 1 else base
        n >>= 1
    return out


def _common_monomial(p: dict) -> dict:
    """Largest monomial dividing every monomial of p, as a key->exp dict."""
    it = iter(p)
    try:
        first = dict(next(it))
    except StopIteration:
        return {}
    for m in it:
        if not first:
            break
        md = dict(m)
        for k in list(first):
            e = md.get(k, 0)
            if e <= 0:
                del first[k]
            else:
                first[k] = min(first[k], e)
    return first


def _m_divide_all(p: dict, g: dict) -> dict:
    if not g:
        return p
    out = {}
    for m, c in p.items():
        d = dict(m)
        for k, e in g.items():
            left = d[k] - e
            if left:
                d[k] = left
            else:
                del d[k]
        out[tuple(sorted(d.items()))] = c
    return out


def _mono_key(m: tuple):
    return tuple((k, e) for k, e in m)


def _leading(p: dict) -> tuple:
    return max(p, key=_mono_key)


# ---------------------------------------------------------------------------
# conversion


class _Builder:
    def __init__(self):
        self.registry: dict = {}

    def key_of(self, e: Expr):
        t = type(e)
        if t is Sym:
            k = ("a", e.atom.name)
        elif t is Sin:
            k = ("s", _argrepr(e.arg))
        elif t is Cos:
            k = ("c", _argrepr(e.arg))
        elif t is Deriv:
            k = ("f", e.func.name, e.counts)
        else:
            raise TypeError(f"not an indeterminate: {e!r}")
        self.registry.setdefault(k, e)
        return k

    def frac(self, e: Expr):
        """Return (num, den) polynomial pair for e."""
        t = type(e)
        if t is Rat:
            return _p_const(e.value), dict(_P_ONE)
        if t in (Sym, Sin, Cos, Deriv):
            return {((self.key_of(e), 1),): Fraction(1)}, dict(_P_ONE)
        if t is Pow:
            bn, bd = self.frac(e.base)
            n = e.exp
            if n < 0:
                if not _reduce(bn, self.registry):
                    raise ZeroDenominatorError(
                        "division by identically-zero expression"
                    )
                bn, bd = bd, bn
                n = -n
            return _p_pow(bn, n), _p_pow(bd, n)
        if t is Mul:
            num, den = dict(_P_ONE), dict(_P_ONE)
            for f in e.factors:
                fn, fd = self.frac(f)
                num = _p_mul(num, fn)
                den = _p_mul(den, fd)
            return num, den
        if t is Add:
            num, den = {}, dict(_P_ONE)
            for term in e.terms:
                tn, td = self.frac(term)
                g = _common_between(_common_monomial(den), _common_monomial(td))
                den_r = _m_divide_all(den, g)
                td_r = _m_divide_all(td, g)
                new_num = _p_mul(num, td_r)
                _p_add_into(new_num, _p_mul(tn, den_r))
                num = new_num
                den = _p_mul(den_r, td)
            return num, den
        raise TypeError(f"cannot normalize {type(e).__name__}")


def _common_between(a: dict, b: dict) -> dict:
    return {k: min(e, b[k]) for k, e in a.items() if b.get(k, 0) > 0}


def _argrepr(arg: Expr) -> str:
    from .printer import plain

    return plain(arg)


def _is_angular(key, registry) -> bool:
    node = registry[key]
    arg = node.arg
    return type(arg) is Sym and arg.atom.angular


def _reduce(p: dict, registry) -> dict:
    """Eliminate cos powers >= 2 of angular atoms via cos^2 = 1 - sin^2."""
    out: dict = {}
    for m, c in p.items():
        pieces = [(dict(m), c)]
        for k, e in m:
            if k[0] != "c" or e < 2 or not _is_angular(k, registry):
                continue
            sk = ("s", k[1])
            registry.setdefault(sk, Sin(registry[k].arg))
            half, rem = divmod(e, 2)
            expanded = []
            for md, mc in pieces:
                base = dict(md)
                if rem:
                    base[k] = rem
                else:
                    del base[k]
                # (1 - sin^2)^half
                for j in range(half + 1):
                    nd = dict(base)
                    if j:
                        nd[sk] = nd.get(sk, 0) + 2 * j
                    expanded.append((nd, mc * comb(half, j) * (-1) ** j))
            pieces = expanded
        for md, mc in pieces:
            key = tuple(sorted(md.items()))
            v = out.get(key, Fraction(0)) + mc
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# public surface


@dataclass
class CanonicalForm:
    """Reduced fraction of trig polynomials; equality ignores the registry."""

    num: dict
    den: dict
    registry: dict = field(repr=False)

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other):
        return (
            isinstance(other, CanonicalForm)
            and self.num == other.num
            and self.den == other.den
        )

    def as_expr(self) -> Expr:
        num = _poly_expr(self.num, self.registry)
        if self.den == _P_ONE:
            return num
        if len(self.den) == 1:
            (m, c), = self.den.items()
            inv = mul(
                rational(c.denominator, c.numerator),
                *[pow_(self.registry[k], -e) for k, e in m],
            )
            return mul(num, inv)
        return mul(num, pow_(_poly_expr(self.den, self.registry), -1))


def _poly_expr(p: dict, registry) -> Expr:
    terms = []
    for m, c in sorted(p.items(), key=lambda kv: _mono_key(kv[0])):
        terms.append(mul(Rat(c), *[pow_(registry[k], e) for k, e in m]))
    return add(*terms) if terms else ZERO


def _build(e: Expr):
    b = _Builder()
    num, den = b.frac(e)
    num = _reduce(num, b.registry)
    den = _reduce(den, b.registry)
    if not den:
        raise ZeroDenominatorError("denominator reduces to zero")
    return num, den, b.registry


def fraction_parts(e: Expr):
    """Reduced (numerator, denominator, registry) triple for e.

    The numerator vanishing identically is equivalent to e == 0; callers
    that build linear systems work on the numerator monomials directly.
    """
    return _build(e)


def normalize(e: Expr) -> CanonicalForm:
    """Canonical fraction form; `normalize(e).is_zero()` decides e == 0."""
    num, den, registry = _build(e)
    if not num:
        return CanonicalForm({}, dict(_P_ONE), registry)
    g = _common_between(_common_monomial(num), _common_monomial(den))
    num = _m_divide_all(num, g)
    den = _m_divide_all(den, g)
    lead = den[_leading(den)]
    if lead != 1:
        num = {m: c / lead for m, c in num.items()}
        den = {m: c / lead for m, c in den.items()}
    return CanonicalForm(num, den, registry)


def is_zero(e: Expr) -> bool:
    """True iff e is identically zero on the supported expression class."""
    return normalize(e).is_zero()


def canonical_constraint(e: Expr):
    """Representation-stable form of the constraint `e = 0`.

    Denominators are cleared (multiplying by a nonzero trig monomial keeps
    the vanishing set), rational content is divided out, and the sign is
    fixed so the leading monomial has a positive coefficient.  Returns a
    hashable key plus an equal printable expression, so two constraints
    are the same condition iff their keys match.
    """
    from math import gcd, lcm

    num, den, registry = _build(e)
    if not num:
        return ((), ZERO)
    # only sin/cos factors may be cancelled: they never vanish identically,
    # while cancelling unknowns or coordinates would change the condition
    trig_common = {
        k: v for k, v in _common_monomial(num).items() if k[0] in ("s", "c")
    }
    num = _m_divide_all(num, trig_common)
    g = 0
    l = 1
    for c in num.values():
        g = gcd(g, abs(c.numerator))
        l = lcm(l, c.denominator)
    content = Fraction(g, l)
    if num[_leading(num)] < 0:
        content = -content
    poly = {m: c / content for m, c in num.items()}
    key = tuple(sorted(poly.items(), key=lambda kv: _mono_key(kv[0])))
    return key, _poly_expr(poly, registry)


def equivalent(a: Expr, b: Expr) -> bool:
    """True iff a - b is identically zero."""
    return is_zero(add(a, mul(rational(-1), b)))


def collect(e: Expr, keys) -> dict:
    """Split e as a polynomial in the key atoms.

    Returns a map from exponent tuples (aligned with `keys`) to coefficient
    expressions free of the key atoms.  Raises NotPolynomialError when a key
    occurs in a denominator or inside sin/cos.
    """
    keys = [k.atom if isinstance(k, Sym) else k for k in keys]
    if not all(isinstance(k, Atom) for k in keys):
        raise TypeError("collect keys must be atoms")
    kset = {("a", k.name): i for i, k in enumerate(keys)}
    knames = {k.name for k in keys}
    num, den, registry = _build(e)
    for p, where in ((den, "denominator"), (num, "numerator")):
        for m in p:
            for gk, _ in m:
                if gk[0] in ("s", "c") and gk[1] in knames:
                    raise NotPolynomialError(
                        f"key {gk[1]} appears inside a trig function"
                    )
                if where == "denominator" and gk in kset:
                    raise NotPolynomialError(
                        f"key {gk[1]} appears in a denominator"
                    )
    groups: dict[tuple, dict] = {}
    for m, c in num.items():
        expo = [0] * len(keys)
        rest = []
        for gk, exp in m:
            if gk in kset:
                expo[kset[gk]] = exp
            else:
                rest.append((gk, exp))
        groups.setdefault(tuple(expo), {})[tuple(rest)] = c
    den_expr = CanonicalForm(dict(_P_ONE), den, registry).as_expr()
    out = {}
    for expo, poly in groups.items():
        out[expo] = mul(_poly_expr(poly, registry), den_expr)
    return out
