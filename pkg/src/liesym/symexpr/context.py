"""Symbol declarations: atoms, unknown functions, and the Context registry."""
from __future__ import annotations

from dataclasses import dataclass, field

INDEPENDENT = "independent"
DEPENDENT = "dependent"
JET = "jet"
PARAMETER = "parameter"

#: Reserved identifier for the perturbation parameter.
EPSILON = "eps"
#: Reserved identifier for the circle constant (exact, never folded to float).
PI = "pi"


@dataclass(frozen=True)
class Atom:
    """A named coordinate-like symbol.

    Jet atoms carry the dependent variable they derive from and an order
    in {1, 2}.  `rules` optionally pins formal derivatives of an otherwise
    opaque atom (pairs of (variable name, derivative expression)); it is
    used for basis atoms such as log(sin(theta)) whose theta-derivative is
    known but which must not take part in trig reduction.
    """

    name: str
    kind: str
    angular: bool = False
    base: str | None = None
    order: int = 0
    rules: tuple = ()

    def rule_for(self, name: str):
        for var, expr in self.rules:
            if var == name:
                return expr
        return None

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True)
class UnknownFunction:
    """An undetermined scalar function of an ordered tuple of atoms."""

    name: str
    args: tuple[Atom, ...]

    def __repr__(self):
        return f"UnknownFunction({self.name!r})"


class Context:
    """Registry of declared atoms and unknown functions.

    Names are unique across both namespaces.  A context is effectively
    read-only once expression building starts; all declaration methods
    reject redefinition.  `eps` and `pi` are always present.
    """

    def __init__(self):
        self._atoms: dict[str, Atom] = {}
        self._funcs: dict[str, UnknownFunction] = {}
        self._dependents: list[Atom] = []
        self._independent: Atom | None = None
        self.parameter(EPSILON)
        self.parameter(PI)

    # -- declarations ----------------------------------------------------

    def _register(self, atom: Atom) -> Atom:
        if atom.name in self._atoms or atom.name in self._funcs:
            raise ValueError(f"name already declared: {atom.name}")
        self._atoms[atom.name] = atom
        return atom

    def independent(self, name: str) -> Atom:
        if self._independent is not None:
            raise ValueError("independent variable already declared")
        self._independent = self._register(Atom(name, INDEPENDENT))
        return self._independent

    def dependent(self, name: str, angular: bool = False) -> Atom:
        a = self._register(Atom(name, DEPENDENT, angular=angular))
        self._register(Atom(f"d({name})", JET, base=name, order=1))
        self._register(Atom(f"dd({name})", JET, base=name, order=2))
        self._dependents.append(a)
        return a

    def parameter(self, name: str, angular: bool = False, rules: tuple = ()) -> Atom:
        return self._register(Atom(name, PARAMETER, angular=angular, rules=rules))

    def unknown(self, name: str, argnames) -> UnknownFunction:
        if name in self._atoms or name in self._funcs:
            raise ValueError(f"name already declared: {name}")
        args = tuple(self.atom(n) for n in argnames)
        f = UnknownFunction(name, args)
        self._funcs[name] = f
        return f

    # -- lookups ---------------------------------------------------------

    def atom(self, name: str) -> Atom:
        try:
            return self._atoms[name]
        except KeyError:
            raise KeyError(f"undeclared atom: {name}") from None

    def function(self, name: str) -> UnknownFunction:
        try:
            return self._funcs[name]
        except KeyError:
            raise KeyError(f"undeclared function: {name}") from None

    def has_atom(self, name: str) -> bool:
        return name in self._atoms

    def has_function(self, name: str) -> bool:
        return name in self._funcs

    def jet(self, dep, order: int) -> Atom:
        name = dep.name if isinstance(dep, Atom) else dep
        if order not in (1, 2):
            raise ValueError("jet order must be 1 or 2")
        prefix = "d" if order == 1 else "dd"
        return self.atom(f"{prefix}({name})")

    @property
    def independent_atom(self) -> Atom:
        if self._independent is None:
            raise ValueError("no independent variable declared")
        return self._independent

    @property
    def dependents(self) -> tuple[Atom, ...]:
        return tuple(self._dependents)

    @property
    def epsilon(self) -> Atom:
        return self._atoms[EPSILON]

    @property
    def pi(self) -> Atom:
        return self._atoms[PI]

    def atoms(self):
        return tuple(self._atoms.values())

    def functions(self):
        return tuple(self._funcs.values())
