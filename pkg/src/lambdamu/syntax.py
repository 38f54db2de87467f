"""Core syntax of the lambda-mu calculus (de Groote style).

Terms are built from two disjoint variable namespaces: ordinary lambda
variables and mu variables (the "classical" variables, which occur only
as binders of `Mu` and as the head of a `Bracket`).  Application uses
Krivine notation, written ``(M)N``.

All values here are immutable; derived data (complexity, free variables,
the alpha-canonical key) is cached on the nodes on first use.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterator, Union


# ---------------------------------------------------------------------------
# Variables

@dataclass(frozen=True)
class LamVar:
    """A lambda variable.  Never equal to a MuVar of the same name."""
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class MuVar:
    """A mu variable.  Occurs bound under `Mu` and free/bound in brackets."""
    name: str

    def __str__(self) -> str:
        return self.name


Var_ = Union[LamVar, MuVar]


# ---------------------------------------------------------------------------
# Terms

class Term:
    """Base class; concrete terms are Var, Lam, App, Bracket, Mu."""

    __hash__ = None  # subclasses define their own

    def __str__(self) -> str:
        return term_to_str(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    var: LamVar

    def __repr__(self) -> str:
        return f"Var({self.var.name!r})"


@dataclass(frozen=True, repr=False)
class Lam(Term):
    var: LamVar
    body: Term

    def __repr__(self) -> str:
        return f"Lam({self.var.name!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class App(Term):
    fn: Term
    arg: Term

    def __repr__(self) -> str:
        return f"App({self.fn!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Bracket(Term):
    mvar: MuVar
    body: Term

    def __repr__(self) -> str:
        return f"Bracket({self.mvar.name!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Mu(Term):
    mvar: MuVar
    body: Term

    def __repr__(self) -> str:
        return f"Mu({self.mvar.name!r}, {self.body!r})"


# ---------------------------------------------------------------------------
# Types

class Type:
    def __str__(self) -> str:
        return type_to_str(self)


@dataclass(frozen=True, repr=False)
class Atom(Type):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Bottom(Type):
    def __repr__(self) -> str:
        return "Bottom()"


@dataclass(frozen=True, repr=False)
class Arrow(Type):
    left: Type
    right: Type

    def __repr__(self) -> str:
        return f"Arrow({self.left!r}, {self.right!r})"


BOT = Bottom()


# ---------------------------------------------------------------------------
# Errors

class PathError(Exception):
    """A TermPath did not resolve against a term."""


TermPath = tuple[int, ...]


# ---------------------------------------------------------------------------
# Structural measures (cached per node)

def _cache(t: Term, attr: str, value):
    object.__setattr__(t, attr, value)
    return value


def cxty(t: Term) -> int:
    """Complexity: variables count 1, applications sum both sides plus 1,
    every unary constructor adds 1."""
    v = getattr(t, "_cxty", None)
    if v is not None:
        return v
    if isinstance(t, Var):
        v = 1
    elif isinstance(t, App):
        v = cxty(t.fn) + cxty(t.arg) + 1
    else:
        v = cxty(t.body) + 1
    return _cache(t, "_cxty", v)


def free_vars(t: Term) -> frozenset[Var_]:
    """Free lambda and mu variables.  Lam and Mu bind; Bracket does not."""
    v = getattr(t, "_fv", None)
    if v is not None:
        return v
    if isinstance(t, Var):
        v = frozenset((t.var,))
    elif isinstance(t, Lam):
        v = free_vars(t.body) - {t.var}
    elif isinstance(t, App):
        v = free_vars(t.fn) | free_vars(t.arg)
    elif isinstance(t, Bracket):
        v = free_vars(t.body) | {t.mvar}
    else:  # Mu
        v = free_vars(t.body) - {t.mvar}
    return _cache(t, "_fv", v)


fv = free_vars


def free_lam_names(t: Term) -> set[str]:
    return {v.name for v in free_vars(t) if isinstance(v, LamVar)}


def free_mu_names(t: Term) -> set[str]:
    return {v.name for v in free_vars(t) if isinstance(v, MuVar)}


# ---------------------------------------------------------------------------
# Alpha equivalence via a canonical (locally nameless) key

def canon(t: Term):
    """Canonical form of a term as a nested tuple.

    Bound variables become de Bruijn distances counted per namespace, free
    variables keep their names, so two terms are alpha-equivalent exactly
    when their canonical forms are equal.  The key is hashable and is used
    for cycle detection and memo tables throughout the package.
    """
    v = getattr(t, "_canon", None)
    if v is not None:
        return v

    lenv: dict[str, int] = {}
    menv: dict[str, int] = {}

    def go(t: Term, ld: int, md: int):
        if isinstance(t, Var):
            d = lenv.get(t.var.name, -1)
            return ("b", ld - d) if d >= 0 else ("f", t.var.name)
        if isinstance(t, App):
            return ("A", go(t.fn, ld, md), go(t.arg, ld, md))
        if isinstance(t, Lam):
            name = t.var.name
            old = lenv.get(name)
            lenv[name] = ld + 1
            r = ("L", go(t.body, ld + 1, md))
            if old is None:
                del lenv[name]
            else:
                lenv[name] = old
            return r
        if isinstance(t, Mu):
            name = t.mvar.name
            old = menv.get(name)
            menv[name] = md + 1
            r = ("M", go(t.body, ld, md + 1))
            if old is None:
                del menv[name]
            else:
                menv[name] = old
            return r
        # Bracket
        d = menv.get(t.mvar.name, -1)
        head = ("b", md - d) if d >= 0 else ("f", t.mvar.name)
        return ("K", head, go(t.body, ld, md))

    return _cache(t, "_canon", go(t, 0, 0))


def alpha_eq(m: Term, n: Term) -> bool:
    """Equality modulo renaming of bound lambda and mu variables."""
    return m is n or canon(m) == canon(n)


# ---------------------------------------------------------------------------
# Paths

def subterm_at(t: Term, path: TermPath) -> Term:
    """Resolve a path: unary constructors have child 0, App has 0 (function)
    and 1 (argument)."""
    cur = t
    for i in path:
        if isinstance(cur, App):
            if i == 0:
                cur = cur.fn
            elif i == 1:
                cur = cur.arg
            else:
                raise PathError(f"index {i} invalid at application node")
        elif isinstance(cur, (Lam, Mu, Bracket)):
            if i != 0:
                raise PathError(f"index {i} invalid at unary node")
            cur = cur.body
        else:
            raise PathError("path descends below a variable")
    return cur


def replace_at(t: Term, path: TermPath, new: Term) -> Term:
    """Replace the subtree at `path` by `new`.  No capture handling: callers
    manage freshness."""
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(t, App):
        if i == 0:
            return App(replace_at(t.fn, rest, new), t.arg)
        if i == 1:
            return App(t.fn, replace_at(t.arg, rest, new))
        raise PathError(f"index {i} invalid at application node")
    if isinstance(t, Lam):
        if i != 0:
            raise PathError(f"index {i} invalid at unary node")
        return Lam(t.var, replace_at(t.body, rest, new))
    if isinstance(t, Mu):
        if i != 0:
            raise PathError(f"index {i} invalid at unary node")
        return Mu(t.mvar, replace_at(t.body, rest, new))
    if isinstance(t, Bracket):
        if i != 0:
            raise PathError(f"index {i} invalid at unary node")
        return Bracket(t.mvar, replace_at(t.body, rest, new))
    raise PathError("path descends below a variable")


def subterms(t: Term) -> Iterator[tuple[TermPath, Term]]:
    """All subterms with their paths, in preorder."""
    stack = [((), t)]
    while stack:
        path, cur = stack.pop()
        yield path, cur
        if isinstance(cur, App):
            stack.append((path + (1,), cur.arg))
            stack.append((path + (0,), cur.fn))
        elif not isinstance(cur, Var):
            stack.append((path + (0,), cur.body))


# ---------------------------------------------------------------------------
# Printing

def term_to_str(t: Term) -> str:
    """Concrete syntax.  Lambdas print as ``\\x. M``, mu abstractions as
    ``#a. M``, brackets as ``[a]M`` and applications as ``(M)N``."""
    if isinstance(t, Var):
        return t.var.name
    if isinstance(t, Lam):
        return f"\\{t.var.name}. {term_to_str(t.body)}"
    if isinstance(t, Mu):
        return f"#{t.mvar.name}. {term_to_str(t.body)}"
    if isinstance(t, Bracket):
        body = term_to_str(t.body)
        sep = " " if isinstance(t.body, Var) else ""
        return f"[{t.mvar.name}]{sep}{body}"
    # App: the function part is always parenthesised (Krivine notation);
    # the argument is wrapped unless it extends to the end unambiguously.
    fn = f"({term_to_str(t.fn)})"
    arg = t.arg
    if isinstance(arg, (Var, Lam, Mu, Bracket)):
        return f"{fn}{term_to_str(arg)}"
    return f"{fn}({term_to_str(arg)})"


def type_to_str(ty: Type) -> str:
    """Arrows are right-associative; ``_|_`` is bottom."""
    if isinstance(ty, Atom):
        return ty.name
    if isinstance(ty, Bottom):
        return "_|_"
    left = type_to_str(ty.left)
    if isinstance(ty.left, Arrow):
        left = f"({left})"
    return f"{left} -> {type_to_str(ty.right)}"


# ---------------------------------------------------------------------------
# Fresh names

class NameSupply:
    """Global counter-backed fresh name generator.

    Correctness of substitution never depends on the counter (candidates are
    filtered against an avoid set); the counter only makes generated names
    unique across a run so traces stay readable.  Thread-safe.
    """

    def __init__(self, start: int = 0):
        self._counter = itertools.count(start)
        self._lock = threading.Lock()

    def reset(self, start: int = 0) -> None:
        with self._lock:
            self._counter = itertools.count(start)

    def _fresh_name(self, base: str, avoid) -> str:
        while True:
            name = f"{base}_{next(self._counter)}"
            if name not in avoid:
                return name

    def fresh_lam(self, base: str = "x", avoid=frozenset()) -> LamVar:
        return LamVar(self._fresh_name(base, avoid))

    def fresh_mu(self, base: str = "a", avoid=frozenset()) -> MuVar:
        return MuVar(self._fresh_name(base, avoid))


SUPPLY = NameSupply()


def set_fresh_seed(n: int) -> None:
    """Reset the global fresh-name counter (CLI --seed)."""
    SUPPLY.reset(n)
