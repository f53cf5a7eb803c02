"""Immutable expression trees over exact rationals, trig atoms, and unknown functions.

Node kinds: rational constant, atom, flattened sum, flattened product,
integer power, sine, cosine, and formal (partial-)derivative of an unknown
function.  All construction goes through the factory functions below, which
flatten, fold rationals, collect like terms/powers, expand sums and integer
multiples inside sin/cos by angle addition, and keep children in one fixed
total order, so structural equality is decidable and stable.

Expressions are immutable values; every operation returns a new tree.
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import (
    CyclicBindingError,
    SubstitutionError,
    UnsupportedExpressionError,
)
from .context import PARAMETER, PI, Atom, UnknownFunction


class Expr:
    __slots__ = ("_hash",)

    def __hash__(self):
        return self._hash

    # arithmetic sugar; `other` may be an int or Fraction
    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, mul(MINUS_ONE, _coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), mul(MINUS_ONE, self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return mul(self, pow_(_coerce(other), -1))

    def __rtruediv__(self, other):
        return mul(_coerce(other), pow_(self, -1))

    def __pow__(self, n):
        return pow_(self, n)

    def __neg__(self):
        return mul(MINUS_ONE, self)

    def __repr__(self):
        from .printer import plain

        return plain(self)


class Rat(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value if isinstance(value, Fraction) else Fraction(value)
        self._hash = hash(("rat", self.value))

    def __eq__(self, other):
        return type(other) is Rat and self.value == other.value

    __hash__ = Expr.__hash__


class Sym(Expr):
    __slots__ = ("atom",)

    def __init__(self, a: Atom):
        self.atom = a
        self._hash = hash(("sym", a.name))

    def __eq__(self, other):
        return type(other) is Sym and self.atom == other.atom

    __hash__ = Expr.__hash__


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = terms
        self._hash = hash(("add", terms))

    def __eq__(self, other):
        return (
            type(other) is Add
            and self._hash == other._hash
            and self.terms == other.terms
        )

    __hash__ = Expr.__hash__


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        self.factors = factors
        self._hash = hash(("mul", factors))

    def __eq__(self, other):
        return (
            type(other) is Mul
            and self._hash == other._hash
            and self.factors == other.factors
        )

    __hash__ = Expr.__hash__


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base, exp):
        self.base = base
        self.exp = exp
        self._hash = hash(("pow", base, exp))

    def __eq__(self, other):
        return type(other) is Pow and self.exp == other.exp and self.base == other.base

    __hash__ = Expr.__hash__


class Sin(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg
        self._hash = hash(("sin", arg))

    def __eq__(self, other):
        return type(other) is Sin and self.arg == other.arg

    __hash__ = Expr.__hash__


class Cos(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg
        self._hash = hash(("cos", arg))

    def __eq__(self, other):
        return type(other) is Cos and self.arg == other.arg

    __hash__ = Expr.__hash__


class Deriv(Expr):
    """Formal partial derivative of an unknown function.

    `counts[i]` is the number of derivatives taken with respect to
    `func.args[i]`; all-zero counts denote the bare function application.
    Mixed partials commute, so the counts tuple is already canonical.
    """

    __slots__ = ("func", "counts")

    def __init__(self, func: UnknownFunction, counts):
        self.func = func
        self.counts = counts
        self._hash = hash(("fd", func.name, counts))

    def __eq__(self, other):
        return (
            type(other) is Deriv
            and self.func == other.func
            and self.counts == other.counts
        )

    __hash__ = Expr.__hash__


ZERO = Rat(Fraction(0))
ONE = Rat(Fraction(1))
MINUS_ONE = Rat(Fraction(-1))


def _coerce(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return Rat(Fraction(v))
    raise TypeError(f"cannot use {type(v).__name__} as an expression")


def rational(p, q=1) -> Expr:
    return Rat(Fraction(p, q))


def atom(a: Atom) -> Expr:
    return Sym(a)


def func(f: UnknownFunction) -> Expr:
    return Deriv(f, (0,) * len(f.args))


def deriv(f: UnknownFunction, counts) -> Expr:
    counts = tuple(counts)
    if len(counts) != len(f.args) or any(c < 0 for c in counts):
        raise ValueError(f"bad derivative counts for {f.name}: {counts}")
    return Deriv(f, counts)


# ---------------------------------------------------------------------------
# canonical child order


_RANK = {Rat: 0, Sym: 1, Sin: 2, Cos: 3, Pow: 4, Deriv: 5, Mul: 6, Add: 7}


def order_key(e: Expr):
    """Total order on nodes: constants < atoms < sin < cos < powers <
    unknown-function derivatives < products < sums; recursive within kinds."""
    t = type(e)
    if t is Rat:
        return (0, e.value)
    if t is Sym:
        return (1, e.atom.name)
    if t is Sin:
        return (2, order_key(e.arg))
    if t is Cos:
        return (3, order_key(e.arg))
    if t is Pow:
        return (4, order_key(e.base), e.exp)
    if t is Deriv:
        return (5, e.func.name, e.counts)
    if t is Mul:
        return (6, tuple(order_key(f) for f in e.factors))
    return (7, tuple(order_key(x) for x in e.terms))


def _term_key(t: Expr):
    # sums are ordered by their terms' non-constant parts ("leading monomial")
    c, rest = _split_coeff(t)
    return (order_key(rest), c)


def _split_coeff(e: Expr):
    """Split into (rational coefficient, remaining factor)."""
    if type(e) is Rat:
        return e.value, ONE
    if type(e) is Mul and type(e.factors[0]) is Rat:
        rest = e.factors[1:]
        rest_e = rest[0] if len(rest) == 1 else Mul(rest)
        return e.factors[0].value, rest_e
    return Fraction(1), e


# ---------------------------------------------------------------------------
# factories


def add(*terms) -> Expr:
    """Sum with flattening, rational folding, and like-term collection."""
    flat = []
    for t in terms:
        t = _coerce(t)
        if type(t) is Add:
            flat.extend(t.terms)
        else:
            flat.append(t)
    by_part: dict[Expr, Fraction] = {}
    const = Fraction(0)
    for t in flat:
        c, rest = _split_coeff(t)
        if rest == ONE:
            const += c
        else:
            by_part[rest] = by_part.get(rest, Fraction(0)) + c
    out = []
    if const:
        out.append(Rat(const))
    for rest, c in by_part.items():
        if c == 0:
            continue
        out.append(rest if c == 1 else mul(Rat(c), rest))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=_term_key)
    return Add(tuple(out))


def mul(*factors) -> Expr:
    """Product with flattening, rational folding, and power collection."""
    flat = []
    for f in factors:
        f = _coerce(f)
        if type(f) is Mul:
            flat.extend(f.factors)
        else:
            flat.append(f)
    coeff = Fraction(1)
    powers: dict[Expr, int] = {}
    for f in flat:
        if type(f) is Rat:
            coeff *= f.value
            continue
        base, exp = (f.base, f.exp) if type(f) is Pow else (f, 1)
        powers[base] = powers.get(base, 0) + exp
    if coeff == 0:
        return ZERO
    out = []
    for base, exp in powers.items():
        # bases coming out of the factories are never Rat/Mul/Pow, so pow_
        # returns ONE, the base itself, or a Pow node here
        p = pow_(base, exp)
        if p is not ONE:
            out.append(p)
    out.sort(key=order_key)
    if coeff != 1:
        out.insert(0, Rat(coeff))
    if not out:
        return ONE
    if len(out) == 1:
        return out[0]
    return Mul(tuple(out))


def pow_(base, n) -> Expr:
    """Integer power of an expression."""
    base = _coerce(base)
    if isinstance(n, Rat):
        if n.value.denominator != 1:
            raise UnsupportedExpressionError("only integer powers are supported")
        n = int(n.value)
    if not isinstance(n, int):
        raise UnsupportedExpressionError("only integer powers are supported")
    if n == 0:
        return ONE
    if n == 1:
        return base
    t = type(base)
    if t is Rat:
        if base.value == 0 and n < 0:
            from ..errors import ZeroDenominatorError

            raise ZeroDenominatorError("division by zero")
        return Rat(base.value**n)
    if t is Pow:
        return pow_(base.base, base.exp * n)
    if t is Mul:
        return mul(*[pow_(f, n) for f in base.factors])
    return Pow(base, n)


def _as_pi_multiple(arg: Expr):
    """Return q if arg == q*pi for a rational q, else None."""
    if type(arg) is Sym and arg.atom.name == PI:
        return Fraction(1)
    if (
        type(arg) is Mul
        and len(arg.factors) == 2
        and type(arg.factors[0]) is Rat
        and type(arg.factors[1]) is Sym
        and arg.factors[1].atom.name == PI
    ):
        return arg.factors[0].value
    return None


_SIN_TABLE = (Fraction(0), Fraction(1), Fraction(0), Fraction(-1))
_COS_TABLE = (Fraction(1), Fraction(0), Fraction(-1), Fraction(0))


def _trig(arg, which: str) -> Expr:
    """Shared builder for sin/cos with the angle-addition and folding rules."""
    arg = _coerce(arg)
    t = type(arg)
    if t is Rat:
        if arg.value == 0:
            return ZERO if which == "sin" else ONE
        return Sin(arg) if which == "sin" else Cos(arg)
    q = _as_pi_multiple(arg)
    if q is not None:
        half = q * 2
        if half.denominator == 1:
            i = int(half) % 4
            return Rat(_SIN_TABLE[i] if which == "sin" else _COS_TABLE[i])
        return Sin(arg) if which == "sin" else Cos(arg)
    if t is Add:
        a = arg.terms[0]
        b = add(*arg.terms[1:])
        if which == "sin":
            return add(mul(_trig(a, "sin"), _trig(b, "cos")),
                       mul(_trig(a, "cos"), _trig(b, "sin")))
        return add(mul(_trig(a, "cos"), _trig(b, "cos")),
                   mul(Rat(Fraction(-1)), _trig(a, "sin"), _trig(b, "sin")))
    if t is Mul:
        c, rest = _split_coeff(arg)
        if type(rest) is Sym and rest.atom.angular:
            if c < 0:
                inner = _trig(mul(Rat(-c), rest), which)
                return mul(MINUS_ONE, inner) if which == "sin" else inner
            if c.denominator == 1:
                n = int(c)
                # n >= 2 here: n*x == x + (n-1)*x
                rec = _trig(mul(Rat(n - 1), rest), "sin"), _trig(
                    mul(Rat(n - 1), rest), "cos"
                )
                sx, cx = _trig(rest, "sin"), _trig(rest, "cos")
                if which == "sin":
                    return add(mul(sx, rec[1]), mul(cx, rec[0]))
                return add(mul(cx, rec[1]), mul(MINUS_ONE, sx, rec[0]))
        raise UnsupportedExpressionError(
            f"{which}() argument not reducible to angular atoms: {arg!r}"
        )
    if t is Sym:
        if arg.atom.angular:
            return Sin(arg) if which == "sin" else Cos(arg)
        raise UnsupportedExpressionError(
            f"{which}() of non-angular atom {arg.atom.name}"
        )
    raise UnsupportedExpressionError(f"unsupported {which}() argument: {arg!r}")


def sin_(arg) -> Expr:
    return _trig(arg, "sin")


def cos_(arg) -> Expr:
    return _trig(arg, "cos")


# ---------------------------------------------------------------------------
# structural queries


def walk(e: Expr):
    """Yield every node of the tree (pre-order)."""
    stack = [e]
    while stack:
        n = stack.pop()
        yield n
        t = type(n)
        if t is Add:
            stack.extend(n.terms)
        elif t is Mul:
            stack.extend(n.factors)
        elif t is Pow:
            stack.append(n.base)
        elif t in (Sin, Cos):
            stack.append(n.arg)


def atoms_of(e: Expr):
    """Set of atoms appearing anywhere in the tree."""
    return {n.atom for n in walk(e) if type(n) is Sym}


def functions_of(e: Expr):
    """Set of unknown functions referenced by the tree."""
    return {n.func for n in walk(e) if type(n) is Deriv}


def contains_atom(e: Expr, a: Atom) -> bool:
    return any(type(n) is Sym and n.atom == a for n in walk(e))


def max_jet_order(e: Expr) -> int:
    orders = [n.atom.order for n in walk(e) if type(n) is Sym and n.atom.kind == "jet"]
    return max(orders, default=0)


# ---------------------------------------------------------------------------
# differentiation


def diff(e: Expr, x, n: int = 1) -> Expr:
    """Formal partial derivative; every other atom is held fixed."""
    if isinstance(x, Sym):
        x = x.atom
    if not isinstance(x, Atom):
        raise TypeError("diff target must be an Atom")
    out = e
    for _ in range(n):
        out = _diff1(out, x)
    return out


def _diff1(e: Expr, x: Atom) -> Expr:
    t = type(e)
    if t is Rat:
        return ZERO
    if t is Sym:
        if e.atom == x:
            return ONE
        rule = e.atom.rule_for(x.name)
        return rule if rule is not None else ZERO
    if t is Add:
        return add(*[_diff1(s, x) for s in e.terms])
    if t is Mul:
        terms = []
        for i, f in enumerate(e.factors):
            df = _diff1(f, x)
            if df is ZERO:
                continue
            rest = e.factors[:i] + e.factors[i + 1 :]
            terms.append(mul(df, *rest))
        return add(*terms) if terms else ZERO
    if t is Pow:
        return mul(Rat(Fraction(e.exp)), pow_(e.base, e.exp - 1), _diff1(e.base, x))
    if t is Sin:
        return mul(_diff1(e.arg, x), cos_(e.arg))
    if t is Cos:
        return mul(MINUS_ONE, _diff1(e.arg, x), sin_(e.arg))
    if t is Deriv:
        for i, a in enumerate(e.func.args):
            if a == x:
                counts = list(e.counts)
                counts[i] += 1
                return Deriv(e.func, tuple(counts))
        return ZERO
    raise TypeError(f"cannot differentiate {e!r}")


# ---------------------------------------------------------------------------
# substitution


def substitute(e: Expr, bindings: dict) -> Expr:
    """Simultaneous substitution of atoms and unknown functions.

    Unknown-function bindings are applied with the chain rule: a formal
    derivative node becomes the matching actual derivative of the
    replacement, and atom bindings are then applied to that result.
    Substituting a rational constant into the arguments of an *unbound*
    function collapses the application to an opaque value atom
    (``f(0)``), which only supports numeric treatment downstream.
    """
    abind: dict[Atom, Expr] = {}
    fbind: dict[UnknownFunction, Expr] = {}
    for k, v in bindings.items():
        v = _coerce(v)
        if isinstance(k, Sym):
            k = k.atom
        if isinstance(k, Atom):
            abind[k] = v
        elif isinstance(k, UnknownFunction):
            fbind[k] = v
        else:
            raise SubstitutionError(f"cannot bind {k!r}")
    _check_acyclic(abind, fbind)
    return _subst(e, abind, fbind)


def _check_acyclic(abind, fbind):
    edges: dict[str, set[str]] = {}
    names = {a.name for a in abind} | {f.name for f in fbind}

    def refs(expr):
        out = {a.name for a in atoms_of(expr)}
        out |= {f.name for f in functions_of(expr)}
        return out & names

    for a, v in abind.items():
        edges[a.name] = refs(v)
    for f, v in fbind.items():
        edges[f.name] = refs(v)
    state: dict[str, int] = {}

    def visit(n):
        state[n] = 1
        for m in edges.get(n, ()):
            s = state.get(m)
            if s == 1:
                raise CyclicBindingError(f"cyclic binding through {m}")
            if s is None:
                visit(m)
        state[n] = 2

    for n in edges:
        if n not in state:
            visit(n)


def _subst(e: Expr, abind, fbind) -> Expr:
    t = type(e)
    if t is Rat:
        return e
    if t is Sym:
        return abind.get(e.atom, e)
    if t is Add:
        return add(*[_subst(s, abind, fbind) for s in e.terms])
    if t is Mul:
        return mul(*[_subst(f, abind, fbind) for f in e.factors])
    if t is Pow:
        return pow_(_subst(e.base, abind, fbind), e.exp)
    if t is Sin:
        return sin_(_subst(e.arg, abind, fbind))
    if t is Cos:
        return cos_(_subst(e.arg, abind, fbind))
    if t is Deriv:
        repl = fbind.get(e.func)
        if repl is not None:
            out = repl
            for i, c in enumerate(e.counts):
                out = diff(out, e.func.args[i], c)
            return _subst(out, abind, {})
        bound = [a for a in e.func.args if a in abind]
        if not bound:
            return e
        return _opaque_value(e, abind)
    raise TypeError(f"cannot substitute into {e!r}")


def _opaque_value(e: Deriv, abind) -> Expr:
    values = []
    for a in e.func.args:
        v = abind.get(a)
        if v is None:
            raise SubstitutionError(
                f"partial substitution into arguments of {e.func.name} is not supported"
            )
        if type(v) is not Rat:
            raise SubstitutionError(
                f"arguments of unbound function {e.func.name} may only be "
                f"replaced by rational constants"
            )
        values.append(str(v.value))
    marks = "".join(
        "_" + e.func.args[i].name for i, c in enumerate(e.counts) for _ in range(c)
    )
    name = f"{e.func.name}{marks}({','.join(values)})"
    return Sym(Atom(name, PARAMETER))


# ---------------------------------------------------------------------------
# misc helpers


def linear_combination(coeffs_exprs) -> Expr:
    """Sum of coeff*expr pairs."""
    return add(*[mul(c, x) for c, x in coeffs_exprs])
