"""Expression printers: re-parseable plain text, LaTeX, and a JSON AST."""
from __future__ import annotations

from fractions import Fraction

from .context import Atom, UnknownFunction
from .expr import Add, Cos, Deriv, Expr, Mul, Pow, Rat, Sin, Sym, ZERO

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def plain(e: Expr) -> str:
    """Deterministic plain-text form; parse(plain(e)) reproduces e."""
    return _plain(e, 0)


def _rat_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _deriv_name(e: Deriv) -> str:
    marks = "".join(
        "_" + e.func.args[i].name for i, c in enumerate(e.counts) for _ in range(c)
    )
    return e.func.name + marks


def _plain(e: Expr, prec: int) -> str:
    t = type(e)
    if t is Rat:
        s = _rat_str(e.value)
        need = prec >= _PREC_MUL if e.value < 0 else (
            prec >= _PREC_POW and e.value.denominator != 1
        )
        return f"({s})" if need else s
    if t is Sym:
        return e.atom.name
    if t is Sin:
        return f"sin({_plain(e.arg, 0)})"
    if t is Cos:
        return f"cos({_plain(e.arg, 0)})"
    if t is Deriv:
        return _deriv_name(e)
    if t is Pow:
        if e.exp < 0:
            inner = _plain(Pow(e.base, -e.exp) if e.exp != -1 else e.base, _PREC_MUL)
            s = f"1/{inner}"
            return f"({s})" if prec >= _PREC_MUL else s
        s = f"{_plain(e.base, _PREC_POW)}^{e.exp}"
        return f"({s})" if prec > _PREC_POW else s
    if t is Mul:
        num, den = [], []
        coeff = None
        for f in e.factors:
            if type(f) is Rat:
                coeff = f.value
            elif type(f) is Pow and f.exp < 0:
                den.append(Pow(f.base, -f.exp) if f.exp != -1 else f.base)
            else:
                num.append(f)
        parts = []
        sign = ""
        if coeff is not None:
            if coeff < 0:
                sign = "-"
                coeff = -coeff
            if coeff.denominator != 1 and den:
                # keep printed denominators in one place: p/q * x/y -> p*x/(q*y)
                num_c, den_c = coeff.numerator, coeff.denominator
                if num_c != 1:
                    parts.append(str(num_c))
                den.insert(0, Rat(Fraction(den_c)))
            elif coeff != 1:
                parts.append(_rat_str(coeff))
        parts.extend(_plain(f, _PREC_MUL) for f in num)
        if not parts:
            parts = ["1"]
        s = "*".join(parts)
        if den:
            den_strs = [_plain(f, _PREC_MUL) for f in den]
            s += "/" + (den_strs[0] if len(den_strs) == 1 else f"({'*'.join(den_strs)})")
        s = sign + s
        return f"({s})" if (prec >= _PREC_MUL or (sign and prec >= _PREC_ADD + 1)) else s
    if t is Add:
        parts = []
        for i, term in enumerate(e.terms):
            ts = _plain(term, _PREC_ADD)
            if i == 0:
                parts.append(ts)
            elif ts.startswith("-"):
                parts.append(f" - {ts[1:]}")
            else:
                parts.append(f" + {ts}")
        s = "".join(parts)
        return f"({s})" if prec >= _PREC_MUL else s
    raise TypeError(f"cannot print {type(e).__name__}")


# ---------------------------------------------------------------------------
# LaTeX

_GREEK = {
    "theta": r"\theta",
    "phi": r"\phi",
    "xi": r"\xi",
    "eta": r"\eta",
    "eps": r"\epsilon",
    "pi": r"\pi",
    "lam": r"\lambda",
}


def _latex_name(name: str) -> str:
    if name.startswith("d(") and name.endswith(")"):
        return r"\dot{%s}" % _latex_name(name[2:-1])
    if name.startswith("dd(") and name.endswith(")"):
        return r"\ddot{%s}" % _latex_name(name[3:-1])
    digits = ""
    stem = name
    while stem and stem[-1].isdigit():
        digits = stem[-1] + digits
        stem = stem[:-1]
    body = _GREEK.get(stem, stem)
    if digits:
        return f"{body}^{{{digits}}}"
    return body


def latex(e: Expr) -> str:
    """LaTeX form; cos/sin quotients are re-sugared to cot/csc."""
    return _latex(e, 0)


def _latex(e: Expr, prec: int) -> str:
    t = type(e)
    if t is Rat:
        if e.value.denominator != 1:
            sign = "-" if e.value < 0 else ""
            return sign + r"\frac{%d}{%d}" % (abs(e.value.numerator), e.value.denominator)
        s = str(e.value)
        return f"({s})" if e.value < 0 and prec >= _PREC_MUL else s
    if t is Sym:
        return _latex_name(e.atom.name)
    if t is Sin:
        return r"\sin %s" % _latex_arg(e.arg)
    if t is Cos:
        return r"\cos %s" % _latex_arg(e.arg)
    if t is Deriv:
        subs = "".join(
            _latex_name(e.func.args[i].name)
            for i, c in enumerate(e.counts)
            for _ in range(c)
        )
        base = _latex_name(e.func.name)
        return f"{base}_{{{subs}}}" if subs else base
    if t is Pow:
        if e.exp < 0:
            return r"\frac{1}{%s}" % _latex(pow_abs(e), 0)
        if type(e.base) is Sin:
            return _fn_pow(r"\sin", e.base.arg, e.exp)
        if type(e.base) is Cos:
            return _fn_pow(r"\cos", e.base.arg, e.exp)
        return r"%s^{%d}" % (_latex_pow_base(e.base), e.exp)
    if t is Mul:
        return _latex_mul(e, prec)
    if t is Add:
        parts = []
        for i, term in enumerate(e.terms):
            ts = _latex(term, _PREC_ADD)
            if i == 0:
                parts.append(ts)
            elif ts.startswith("-"):
                parts.append(f" - {ts[1:]}")
            else:
                parts.append(f" + {ts}")
        s = "".join(parts)
        return r"\left(%s\right)" % s if prec >= _PREC_MUL else s
    raise TypeError(f"cannot print {type(e).__name__}")


def pow_abs(e: Pow) -> Expr:
    return Pow(e.base, -e.exp) if e.exp != -1 else e.base


def _latex_arg(arg: Expr) -> str:
    s = _latex(arg, _PREC_POW)
    if type(arg) in (Sym, Rat):
        return s
    return r"\left(%s\right)" % s


def _latex_pow_base(base: Expr) -> str:
    s = _latex(base, _PREC_POW)
    if type(base) in (Add, Mul):
        return r"\left(%s\right)" % s
    return s


def _latex_mul(e: Mul, prec: int) -> str:
    # split into numerator/denominator, then re-sugar cos/sin -> cot, 1/sin -> csc
    coeff = Fraction(1)
    num: list[tuple[Expr, int]] = []
    den: list[tuple[Expr, int]] = []
    for f in e.factors:
        if type(f) is Rat:
            coeff = f.value
        elif type(f) is Pow:
            (den if f.exp < 0 else num).append((f.base, abs(f.exp)))
        else:
            num.append((f, 1))
    # pair cos(x)^a in num with sin(x)^b in den -> cot(x)^min(a,b)
    sugar: list[str] = []
    num2, den2 = [], []
    den_sin = {f.arg: k for (f, k) in den if type(f) is Sin}
    used_sin: dict[Expr, int] = {}
    for f, k in num:
        if type(f) is Cos and den_sin.get(f.arg, 0) - used_sin.get(f.arg, 0) > 0:
            take = min(k, den_sin[f.arg] - used_sin.get(f.arg, 0))
            used_sin[f.arg] = used_sin.get(f.arg, 0) + take
            sugar.append(_fn_pow(r"\cot", f.arg, take))
            if k - take:
                num2.append((f, k - take))
        else:
            num2.append((f, k))
    for f, k in den:
        if type(f) is Sin:
            left = k - used_sin.get(f.arg, 0)
            used_sin[f.arg] = 0
            if left > 0:
                sugar.append(_fn_pow(r"\csc", f.arg, left))
        else:
            den2.append((f, k))
    parts = []
    sign = ""
    if coeff < 0:
        sign, coeff = "-", -coeff
    if coeff.denominator != 1:
        den2.insert(0, (Rat(Fraction(coeff.denominator)), 1))
        coeff = Fraction(coeff.numerator)
    if coeff != 1:
        parts.append(str(coeff))
    parts.extend(_latex(f if k == 1 else Pow(f, k), _PREC_MUL) for f, k in num2)
    parts.extend(sugar)
    if not parts:
        parts = ["1"]
    s = r"\,".join(parts)
    if den2:
        d = r"\,".join(_latex(f if k == 1 else Pow(f, k), _PREC_MUL) for f, k in den2)
        s = r"\frac{%s}{%s}" % (s, d)
    s = sign + s
    return f"({s})" if (sign and prec >= _PREC_MUL) else s


def _fn_pow(fn: str, arg: Expr, k: int) -> str:
    head = fn if k == 1 else "%s^{%d}" % (fn, k)
    return head + _latex_arg(arg)


# ---------------------------------------------------------------------------
# JSON AST


def to_json(e: Expr):
    """Nested JSON-ready objects with node-kind tags."""
    t = type(e)
    if t is Rat:
        return {"kind": "rational", "num": e.value.numerator, "den": e.value.denominator}
    if t is Sym:
        return {"kind": "atom", "name": e.atom.name}
    if t is Add:
        return {"kind": "sum", "terms": [to_json(x) for x in e.terms]}
    if t is Mul:
        return {"kind": "product", "factors": [to_json(x) for x in e.factors]}
    if t is Pow:
        return {"kind": "power", "base": to_json(e.base), "exp": e.exp}
    if t is Sin:
        return {"kind": "sin", "arg": to_json(e.arg)}
    if t is Cos:
        return {"kind": "cos", "arg": to_json(e.arg)}
    if t is Deriv:
        return {
            "kind": "derivative",
            "func": e.func.name,
            "counts": list(e.counts),
        }
    raise TypeError(f"cannot serialize {type(e).__name__}")


def from_json(obj, ctx) -> Expr:
    """Inverse of to_json against a context."""
    from . import expr as E

    kind = obj["kind"]
    if kind == "rational":
        return E.rational(obj["num"], obj["den"])
    if kind == "atom":
        return E.atom(ctx.atom(obj["name"]))
    if kind == "sum":
        return E.add(*[from_json(x, ctx) for x in obj["terms"]])
    if kind == "product":
        return E.mul(*[from_json(x, ctx) for x in obj["factors"]])
    if kind == "power":
        return E.pow_(from_json(obj["base"], ctx), obj["exp"])
    if kind == "sin":
        return E.sin_(from_json(obj["arg"], ctx))
    if kind == "cos":
        return E.cos_(from_json(obj["arg"], ctx))
    if kind == "derivative":
        return E.deriv(ctx.function(obj["func"]), tuple(obj["counts"]))
    raise ValueError(f"unknown node kind: {kind}")
