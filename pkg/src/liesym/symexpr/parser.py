"""Recursive-descent parser for the expression grammar.

Grammar (standard precedence, `^` binds tightest and right-associates):

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := ('+' | '-') factor | power
    power   := primary ('^' factor)?
    primary := INT | IDENT | IDENT '(' expr ')' | '(' expr ')'

`sin cos tan cot sec csc` are the built-in functions; tan/cot/sec/csc are
rewritten to sin/cos quotients on the spot and never stored.  `d(x)` and
`dd(x)` name the first and second derivative coordinates of a dependent
variable x.  Every other identifier must be declared in the context; an
identifier of the form `f_a_b` resolves to the formal derivative of the
unknown function f with respect to its argument atoms a and b.
"""
from __future__ import annotations

from ..errors import DerivativeOrderError, ParseError, UndeclaredIdentifierError
from .context import Context
from .expr import Expr, ONE, atom, cos_, deriv, func, pow_, rational, sin_

_TRIG = {"sin", "cos", "tan", "cot", "sec", "csc"}


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], i))
            i = j
            continue
        if c in "+-*/^(),":
            tokens.append(_Token(c, c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.text = text
        self.ctx = ctx
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.pos)
        return tok

    # -- grammar ---------------------------------------------------------

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.next().kind
            rhs = self.factor()
            e = e * rhs if op == "*" else e / rhs
        return e

    def factor(self) -> Expr:
        tok = self.peek()
        if tok.kind in ("+", "-"):
            self.next()
            inner = self.factor()
            return inner if tok.kind == "+" else -inner
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek().kind == "^":
            self.next()
            exp_tok = self.peek()
            exp = self.factor()
            exp_val = _require_int(exp, exp_tok.pos)
            return pow_(base, exp_val)
        return base

    def primary(self) -> Expr:
        tok = self.next()
        if tok.kind == "int":
            return rational(int(tok.text))
        if tok.kind == "(":
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "ident":
            if self.peek().kind == "(":
                return self.call(tok)
            return self.name(tok)
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)

    def call(self, tok: _Token) -> Expr:
        self.expect("(")
        arg = self.expr()
        self.expect(")")
        name = tok.text
        if name in _TRIG:
            return _apply_trig(name, arg)
        if name in ("d", "dd"):
            return self.jet(arg, 1 if name == "d" else 2, tok.pos)
        if name == "ddd" or (name.startswith("d") and set(name) == {"d"}):
            raise DerivativeOrderError("derivative coordinates stop at order 2")
        raise UndeclaredIdentifierError(f"unknown function {name!r}", tok.pos)

    def jet(self, arg: Expr, order: int, pos: int) -> Expr:
        from .expr import Sym

        if not isinstance(arg, Sym):
            raise ParseError("d()/dd() take a single variable", pos)
        a = arg.atom
        if a.kind == "jet":
            raise DerivativeOrderError(
                f"derivative of {a.name} exceeds order 2"
            )
        if a.kind != "dependent":
            raise ParseError(f"{a.name} is not a dependent variable", pos)
        return atom(self.ctx.jet(a, order))

    def name(self, tok: _Token) -> Expr:
        name = tok.text
        if self.ctx.has_atom(name):
            return atom(self.ctx.atom(name))
        if self.ctx.has_function(name):
            return func(self.ctx.function(name))
        if "_" in name:
            resolved = self._deriv_name(name)
            if resolved is not None:
                return resolved
        raise UndeclaredIdentifierError(f"undeclared identifier {name!r}", tok.pos)

    def _deriv_name(self, name: str) -> Expr | None:
        parts = name.split("_")
        for cut in range(1, len(parts)):
            head = "_".join(parts[:cut])
            if not self.ctx.has_function(head):
                continue
            f = self.ctx.function(head)
            argnames = [a.name for a in f.args]
            counts = [0] * len(argnames)
            ok = True
            for p in parts[cut:]:
                if p in argnames:
                    counts[argnames.index(p)] += 1
                else:
                    ok = False
                    break
            if ok:
                return deriv(f, tuple(counts))
        return None


def _require_int(e: Expr, pos: int) -> int:
    from .expr import Rat

    if isinstance(e, Rat) and e.value.denominator == 1:
        return int(e.value)
    if isinstance(e, Rat):
        raise ParseError("exponent must be an integer", pos)
    raise ParseError("exponent must be an integer literal", pos)


def _apply_trig(name: str, arg: Expr) -> Expr:
    s, c = sin_, cos_
    if name == "sin":
        return s(arg)
    if name == "cos":
        return c(arg)
    if name == "tan":
        return s(arg) / c(arg)
    if name == "cot":
        return c(arg) / s(arg)
    if name == "sec":
        return ONE / c(arg)
    return ONE / s(arg)


def parse(text: str, ctx: Context) -> Expr:
    """Parse `text` against declared names in `ctx`."""
    return _Parser(text, ctx).parse()
