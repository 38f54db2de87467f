"""Two-context typing for the lambda-mu calculus.

The five rules (ax, arrow-intro, arrow-elim, bot-intro, bot-elim) are
syntax-directed, so both checking and Curry-style principal inference run as
a single constraint-collecting walk followed by first-order unification with
an occurs check.

A bracket [a]M is well typed when a's binding in the mu context equals M's
type, and then has type bottom; mu a.M requires M to have type bottom under
a's binding and takes that binding as its own type.  Consequently a bracket
can never be applied (its type is bottom, not an arrow) and a mu abstraction
can never have a lambda body typed bottom.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .syntax import (
    App,
    Arrow,
    Atom,
    BOT,
    Bottom,
    Bracket,
    Lam,
    LamVar,
    Mu,
    MuVar,
    Term,
    TermPath,
    Type,
    Var,
    canon,
    term_to_str,
    type_to_str,
)


# ---------------------------------------------------------------------------
# Contexts, judgments, derivations

@dataclass(frozen=True)
class Context:
    """gamma types the free lambda variables, theta the free mu variables;
    each variable occurs at most once."""
    gamma: tuple[tuple[LamVar, Type], ...] = ()
    theta: tuple[tuple[MuVar, Type], ...] = ()

    @staticmethod
    def make(gamma=None, theta=None) -> "Context":
        g = tuple(sorted((gamma or {}).items(), key=lambda kv: kv[0].name))
        t = tuple(sorted((theta or {}).items(), key=lambda kv: kv[0].name))
        return Context(g, t)

    def gamma_get(self, v: LamVar) -> Optional[Type]:
        for k, ty in self.gamma:
            if k == v:
                return ty
        return None

    def theta_get(self, v: MuVar) -> Optional[Type]:
        for k, ty in self.theta:
            if k == v:
                return ty
        return None

    def bind_lam(self, v: LamVar, ty: Type) -> "Context":
        g = tuple((k, t) for k, t in self.gamma if k != v) + ((v, ty),)
        return Context(tuple(sorted(g, key=lambda kv: kv[0].name)), self.theta)

    def bind_mu(self, v: MuVar, ty: Type) -> "Context":
        t = tuple((k, ty_) for k, ty_ in self.theta if k != v) + ((v, ty),)
        return Context(self.gamma, tuple(sorted(t, key=lambda kv: kv[0].name)))

    def __str__(self) -> str:
        g = ", ".join(f"{v.name}:{type_to_str(t)}" for v, t in self.gamma)
        t = ", ".join(f"{v.name}:{type_to_str(t)}" for v, t in self.theta)
        return f"{g} |- ... ; {t}"


@dataclass(frozen=True)
class Judgment:
    ctx: Context
    term: Term
    type: Type

    def __str__(self) -> str:
        g = ", ".join(f"{v.name}:{type_to_str(t)}" for v, t in self.ctx.gamma)
        t = ", ".join(f"{v.name}:{type_to_str(t)}" for v, t in self.ctx.theta)
        s = f"{g} |- {term_to_str(self.term)} : {type_to_str(self.type)}"
        return f"{s} ; {t}" if t else s


@dataclass(frozen=True)
class Derivation:
    rule: str  # ax | arrow_i | arrow_e | bot_i | bot_e
    conclusion: Judgment
    premises: tuple["Derivation", ...] = ()


class TypingError(Exception):
    def __init__(self, path: TermPath, reason: str, message: str):
        self.path = path
        self.reason = reason
        super().__init__(message)


class Untypable(TypingError):
    """Raised by principal inference when no typing exists."""


# ---------------------------------------------------------------------------
# Unification

@dataclass(frozen=True)
class TVar:
    """Internal type metavariable; never appears in public results."""
    id: int


class _UnifyFail(Exception):
    pass


class _Solver:
    def __init__(self):
        self.bind: dict[int, object] = {}
        self._n = 0

    def fresh(self) -> TVar:
        self._n += 1
        return TVar(self._n)

    def prune(self, t):
        while isinstance(t, TVar) and t.id in self.bind:
            t = self.bind[t.id]
        return t

    def _occurs(self, v: TVar, t) -> bool:
        t = self.prune(t)
        if isinstance(t, TVar):
            return t.id == v.id
        if isinstance(t, Arrow):
            return self._occurs(v, t.left) or self._occurs(v, t.right)
        return False

    def unify(self, a, b) -> None:
        a, b = self.prune(a), self.prune(b)
        if a is b:
            return
        if isinstance(a, TVar):
            if isinstance(b, TVar) and b.id == a.id:
                return
            if self._occurs(a, b):
                raise _UnifyFail("occurs check")
            self.bind[a.id] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a)
            return
        if isinstance(a, Bottom) and isinstance(b, Bottom):
            return
        if isinstance(a, Atom) and isinstance(b, Atom) and a.name == b.name:
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.left, b.left)
            self.unify(a.right, b.right)
            return
        raise _UnifyFail("mismatch")

    def resolve(self, t):
        """Deep resolution; unbound metavariables stay as TVar."""
        t = self.prune(t)
        if isinstance(t, Arrow):
            return Arrow(self.resolve(t.left), self.resolve(t.right))
        return t


def _ground(t, default: Type = BOT) -> Type:
    """Replace residual metavariables by `default` (resolved input)."""
    if isinstance(t, TVar):
        return default
    if isinstance(t, Arrow):
        return Arrow(_ground(t.left, default), _ground(t.right, default))
    return t


# ---------------------------------------------------------------------------
# The constraint walk

class _Inference:
    """Shared engine for checking (rigid free-variable types from a given
    context) and inference (metavariables for the free variables)."""

    def __init__(self, fixed: Optional[Context] = None):
        self.solver = _Solver()
        self.fixed = fixed
        self.free_lam: dict[LamVar, object] = {}
        self.free_mu: dict[MuVar, object] = {}
        self.binder_types: dict[TermPath, object] = {}
        # shadowing stacks for bound variables
        self._lam_env: dict[str, list] = {}
        self._mu_env: dict[str, list] = {}

    def _fail(self, path: TermPath, reason: str, message: str):
        raise TypingError(path, reason, message)

    def _lookup_lam(self, v: LamVar, path: TermPath):
        stack = self._lam_env.get(v.name)
        if stack:
            return stack[-1]
        if self.fixed is not None:
            ty = self.fixed.gamma_get(v)
            if ty is None:
                self._fail(path, "unbound-variable",
                           f"unbound lambda variable {v.name!r}")
            return ty
        if v not in self.free_lam:
            self.free_lam[v] = self.solver.fresh()
        return self.free_lam[v]

    def _lookup_mu(self, v: MuVar, path: TermPath):
        stack = self._mu_env.get(v.name)
        if stack:
            return stack[-1]
        if self.fixed is not None:
            ty = self.fixed.theta_get(v)
            if ty is None:
                self._fail(path, "unbound-mu-variable",
                           f"unbound mu variable {v.name!r}")
            return ty
        if v not in self.free_mu:
            self.free_mu[v] = self.solver.fresh()
        return self.free_mu[v]

    def walk(self, t: Term, path: TermPath = ()):
        if isinstance(t, Var):
            return self._lookup_lam(t.var, path)
        if isinstance(t, Lam):
            tv = self.solver.fresh()
            self.binder_types[path] = tv
            self._lam_env.setdefault(t.var.name, []).append(tv)
            body = self.walk(t.body, path + (0,))
            self._lam_env[t.var.name].pop()
            return Arrow(tv, body)
        if isinstance(t, App):
            fn = self.walk(t.fn, path + (0,))
            arg = self.walk(t.arg, path + (1,))
            res = self.solver.fresh()
            try:
                self.solver.unify(fn, Arrow(arg, res))
            except _UnifyFail as e:
                if str(e) == "occurs check":
                    self._fail(path, "occurs-check",
                               "no finite type: the function would need its "
                               "own type as domain")
                head = self.solver.prune(fn)
                if isinstance(head, (Bottom, Atom)):
                    self._fail(path, "not-a-function",
                               f"applied term has type {type_to_str(_ground(self.solver.resolve(head)))},"
                               " not an arrow")
                self._fail(path, "argument-mismatch",
                           "argument type does not match the function domain")
            return res
        if isinstance(t, Bracket):
            body = self.walk(t.body, path + (0,))
            mty = self._lookup_mu(t.mvar, path)
            try:
                self.solver.unify(mty, body)
            except _UnifyFail:
                self._fail(path, "bracket-mismatch",
                           f"bracket on {t.mvar.name!r} requires the body type "
                           "to equal the mu variable's declared type")
            return BOT
        # Mu
        tv = self.solver.fresh()
        self.binder_types[path] = tv
        self._mu_env.setdefault(t.mvar.name, []).append(tv)
        body = self.walk(t.body, path + (0,))
        self._mu_env[t.mvar.name].pop()
        try:
            self.solver.unify(body, BOT)
        except _UnifyFail:
            self._fail(path, "mu-body-not-bottom",
                       "the body of a mu abstraction must have type bottom")
        return tv


# ---------------------------------------------------------------------------
# Principal inference

@dataclass(frozen=True)
class PrincipalTyping:
    """Most general context and type; metavariables are rendered as atoms
    named T0, T1, ... listed in `metavars`."""
    gamma: tuple[tuple[LamVar, Type], ...]
    theta: tuple[tuple[MuVar, Type], ...]
    type: Type
    metavars: frozenset[str]

    def context(self) -> Context:
        return Context(self.gamma, self.theta)

    def __str__(self) -> str:
        j = Judgment(Context(self.gamma, self.theta), Var(LamVar("_")), self.type)
        g = ", ".join(f"{v.name}:{type_to_str(t)}" for v, t in self.gamma)
        t = ", ".join(f"{v.name}:{type_to_str(t)}" for v, t in self.theta)
        s = f"{g} |- {type_to_str(self.type)}"
        return f"{s} ; {t}" if t else s


def infer_principal(term: Term) -> PrincipalTyping:
    """Most general typing of a term, or raise Untypable.

    Free lambda and mu variables receive metavariables; the result renders
    the residual metavariables as fresh atoms T0, T1, ... numbered by first
    appearance in (gamma, theta, type) order.
    """
    eng = _Inference()
    try:
        ty = eng.walk(term)
    except Untypable:
        raise
    except TypingError as e:
        raise Untypable(e.path, e.reason, str(e)) from None

    solver = eng.solver
    naming: dict[int, Atom] = {}

    def render(t) -> Type:
        t = solver.prune(t)
        if isinstance(t, TVar):
            if t.id not in naming:
                naming[t.id] = Atom(f"T{len(naming)}")
            return naming[t.id]
        if isinstance(t, Arrow):
            left = render(t.left)
            return Arrow(left, render(t.right))
        return t

    gamma = tuple(
        (v, render(tv))
        for v, tv in sorted(eng.free_lam.items(), key=lambda kv: kv[0].name)
    )
    theta = tuple(
        (v, render(tv))
        for v, tv in sorted(eng.free_mu.items(), key=lambda kv: kv[0].name)
    )
    ty = render(ty)
    return PrincipalTyping(gamma, theta, ty,
                           frozenset(a.name for a in naming.values()))


_typable_memo: dict[object, bool] = {}


def is_typable(term: Term) -> bool:
    """Membership in Tt, the set of typable terms."""
    key = canon(term)
    hit = _typable_memo.get(key)
    if hit is not None:
        return hit
    eng = _Inference()
    try:
        eng.walk(term)
        res = True
    except TypingError:
        res = False
    _typable_memo[key] = res
    return res


# ---------------------------------------------------------------------------
# Checking against a given judgment

def check_judgment(ctx: Context, term: Term, ty: Type) -> Derivation:
    """Return a derivation of ctx |- term : ty, or raise TypingError.

    Rule selection is syntax-directed; internal types left unconstrained by
    the judgment are grounded to bottom so the derivation is fully concrete.
    """
    eng = _Inference(fixed=ctx)
    got = eng.walk(term)
    try:
        eng.solver.unify(got, ty)
    except _UnifyFail:
        raise TypingError(
            (), "type-mismatch",
            f"term has type {type_to_str(_ground(eng.solver.resolve(got)))}, "
            f"expected {type_to_str(ty)}") from None

    solver = eng.solver

    def out(t) -> Type:
        return _ground(solver.resolve(t))

    def build(t: Term, path: TermPath, ctx: Context) -> Derivation:
        if isinstance(t, Var):
            vty = ctx.gamma_get(t.var)
            return Derivation("ax", Judgment(ctx, t, vty))
        if isinstance(t, Lam):
            a = out(eng.binder_types[path])
            inner = ctx.bind_lam(t.var, a)
            prem = build(t.body, path + (0,), inner)
            return Derivation("arrow_i",
                              Judgment(ctx, t, Arrow(a, prem.conclusion.type)),
                              (prem,))
        if isinstance(t, App):
            p1 = build(t.fn, path + (0,), ctx)
            p2 = build(t.arg, path + (1,), ctx)
            fn_ty = p1.conclusion.type
            return Derivation("arrow_e", Judgment(ctx, t, fn_ty.right), (p1, p2))
        if isinstance(t, Bracket):
            prem = build(t.body, path + (0,), ctx)
            return Derivation("bot_i", Judgment(ctx, t, BOT), (prem,))
        # Mu
        a = out(eng.binder_types[path])
        inner = ctx.bind_mu(t.mvar, a)
        prem = build(t.body, path + (0,), inner)
        return Derivation("bot_e", Judgment(ctx, t, a), (prem,))

    return build(term, (), ctx)


# ---------------------------------------------------------------------------
# Independent rule-by-rule replay (oracle for check_judgment)

def replay_derivation(d: Derivation) -> bool:
    """True iff every node of the derivation instantiates its rule schema
    exactly.  Deliberately independent of the solver machinery."""
    c = d.conclusion
    t = c.term
    if d.rule == "ax":
        return (isinstance(t, Var) and not d.premises
                and c.ctx.gamma_get(t.var) == c.type)
    if d.rule == "arrow_i":
        if not (isinstance(t, Lam) and len(d.premises) == 1
                and isinstance(c.type, Arrow)):
            return False
        (p,) = d.premises
        return (p.conclusion.term == t.body
                and p.conclusion.type == c.type.right
                and p.conclusion.ctx == c.ctx.bind_lam(t.var, c.type.left)
                and replay_derivation(p))
    if d.rule == "arrow_e":
        if not (isinstance(t, App) and len(d.premises) == 2):
            return False
        p1, p2 = d.premises
        return (p1.conclusion.term == t.fn
                and p2.conclusion.term == t.arg
                and p1.conclusion.ctx == c.ctx and p2.conclusion.ctx == c.ctx
                and p1.conclusion.type == Arrow(p2.conclusion.type, c.type)
                and replay_derivation(p1) and replay_derivation(p2))
    if d.rule == "bot_i":
        if not (isinstance(t, Bracket) and len(d.premises) == 1
                and c.type == BOT):
            return False
        (p,) = d.premises
        declared = c.ctx.theta_get(t.mvar)
        return (declared is not None
                and p.conclusion.term == t.body
                and p.conclusion.type == declared
                and p.conclusion.ctx == c.ctx
                and replay_derivation(p))
    if d.rule == "bot_e":
        if not (isinstance(t, Mu) and len(d.premises) == 1):
            return False
        (p,) = d.premises
        return (p.conclusion.term == t.body
                and p.conclusion.type == BOT
                and p.conclusion.ctx == c.ctx.bind_mu(t.mvar, c.type)
                and replay_derivation(p))
    return False


# ---------------------------------------------------------------------------
# Instance matching (principality evidence)

def is_instance(principal: PrincipalTyping, gamma, theta, ty: Type) -> bool:
    """Is the ground judgment (gamma, theta, ty) a substitution instance of
    the principal result?  Domains must coincide exactly."""
    gamma = dict(gamma)
    theta = dict(theta)
    if set(gamma) != {v for v, _ in principal.gamma}:
        return False
    if set(theta) != {v for v, _ in principal.theta}:
        return False
    subst: dict[str, Type] = {}

    def match(pat: Type, got: Type) -> bool:
        if isinstance(pat, Atom) and pat.name in principal.metavars:
            bound = subst.get(pat.name)
            if bound is None:
                subst[pat.name] = got
                return True
            return bound == got
        if isinstance(pat, Atom):
            return isinstance(got, Atom) and got.name == pat.name
        if isinstance(pat, Bottom):
            return isinstance(got, Bottom)
        if isinstance(pat, Arrow):
            return (isinstance(got, Arrow) and match(pat.left, got.left)
                    and match(pat.right, got.right))
        return False

    for v, pat in principal.gamma:
        if not match(pat, gamma[v]):
            return False
    for v, pat in principal.theta:
        if not match(pat, theta[v]):
            return False
    return match(principal.type, ty)


def principal_ground_judgment(term: Term) -> tuple[Context, Type]:
    """A concrete judgment for a typable term: the principal typing with
    every metavariable instantiated to bottom."""
    pr = infer_principal(term)

    def g(t: Type) -> Type:
        if isinstance(t, Atom) and t.name in pr.metavars:
            return BOT
        if isinstance(t, Arrow):
            return Arrow(g(t.left), g(t.right))
        return t

    gamma = {v: g(t) for v, t in pr.gamma}
    theta = {v: g(t) for v, t in pr.theta}
    return Context.make(gamma, theta), g(pr.type)
