"""Substitution and translation operators.

All operators are capture-avoiding: when a bound variable of the term being
substituted into clashes with a free variable of the payload (or with the
substitution variable itself), the bound variable is renamed using the global
fresh-name supply.  The payload is never renamed, so it stays textually
stable in traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

from .syntax import (
    App,
    Bracket,
    Lam,
    LamVar,
    Mu,
    MuVar,
    SUPPLY,
    Term,
    Var,
    alpha_eq,
    free_lam_names,
    free_mu_names,
    free_vars,
)

Side = Literal["l", "r"]

TermSeq = tuple[Term, ...]


def _avoid_lam(*terms: Term) -> set[str]:
    names: set[str] = set()
    for t in terms:
        names |= free_lam_names(t)
    return names


def _avoid_mu(*terms: Term) -> set[str]:
    names: set[str] = set()
    for t in terms:
        names |= free_mu_names(t)
    return names


# ---------------------------------------------------------------------------
# Beta substitution

def beta_subst(m: Term, x: LamVar, n: Term) -> Term:
    """M[x := N]: replace every free occurrence of x in M by N."""
    if x not in free_vars(m):
        return m
    if isinstance(m, Var):
        return n  # m.var == x here, by the free-occurrence check
    if isinstance(m, App):
        return App(beta_subst(m.fn, x, n), beta_subst(m.arg, x, n))
    if isinstance(m, Bracket):
        return Bracket(m.mvar, beta_subst(m.body, x, n))
    if isinstance(m, Lam):
        # m.var != x since x is free in m
        if m.var in free_vars(n):
            y = SUPPLY.fresh_lam(m.var.name, _avoid_lam(m.body, n) | {x.name})
            body = beta_subst(m.body, m.var, Var(y))
            return Lam(y, beta_subst(body, x, n))
        return Lam(m.var, beta_subst(m.body, x, n))
    # Mu: the binder can capture free mu variables of N
    if m.mvar in free_vars(n):
        b = SUPPLY.fresh_mu(m.mvar.name, _avoid_mu(m.body, n))
        body = rename_mu(m.body, m.mvar, b)
        return Mu(b, beta_subst(body, x, n))
    return Mu(m.mvar, beta_subst(m.body, x, n))


# ---------------------------------------------------------------------------
# Mu-variable renaming

def rename_mu(m: Term, a: MuVar, b: MuVar) -> Term:
    """M[a := b]: replace every free occurrence of the mu variable a by b."""
    if a == b or a not in free_vars(m):
        return m
    if isinstance(m, Var):
        return m
    if isinstance(m, App):
        return App(rename_mu(m.fn, a, b), rename_mu(m.arg, a, b))
    if isinstance(m, Lam):
        return Lam(m.var, rename_mu(m.body, a, b))
    if isinstance(m, Bracket):
        head = b if m.mvar == a else m.mvar
        return Bracket(head, rename_mu(m.body, a, b))
    # Mu: m.mvar != a since a is free in m
    if m.mvar == b:
        c = SUPPLY.fresh_mu(b.name, _avoid_mu(m.body) | {a.name, b.name})
        body = rename_mu(m.body, b, c)
        return Mu(c, rename_mu(body, a, b))
    return Mu(m.mvar, rename_mu(m.body, a, b))


# ---------------------------------------------------------------------------
# Directed mu substitution

def mu_subst(m: Term, a: MuVar, side: Side, n: Term) -> Term:
    """M[a :=_s N]: each subterm [a]P becomes [a](P')N for s = "r" and
    [a](N)P' for s = "l", where P' is the recursive result."""
    if a not in free_vars(m):
        return m
    if isinstance(m, Var):
        return m
    if isinstance(m, App):
        return App(mu_subst(m.fn, a, side, n), mu_subst(m.arg, a, side, n))
    if isinstance(m, Lam):
        if m.var in free_vars(n):
            y = SUPPLY.fresh_lam(m.var.name, _avoid_lam(m.body, n))
            body = beta_subst(m.body, m.var, Var(y))
            return Lam(y, mu_subst(body, a, side, n))
        return Lam(m.var, mu_subst(m.body, a, side, n))
    if isinstance(m, Mu):
        # m.mvar != a since a is free in m
        if m.mvar in free_vars(n):
            b = SUPPLY.fresh_mu(m.mvar.name, _avoid_mu(m.body, n) | {a.name})
            body = rename_mu(m.body, m.mvar, b)
            return Mu(b, mu_subst(body, a, side, n))
        return Mu(m.mvar, mu_subst(m.body, a, side, n))
    # Bracket
    body = mu_subst(m.body, a, side, n)
    if m.mvar == a:
        app = App(body, n) if side == "r" else App(n, body)
        return Bracket(a, app)
    return Bracket(m.mvar, body)


def mu_subst_seq(m: Term, a: MuVar, ns: Sequence[Term]) -> Term:
    """M[a := N1...Nk] as iterated right-directed substitution, left to
    right.  The empty sequence is the identity."""
    for n in ns:
        m = mu_subst(m, a, "r", n)
    return m


# ---------------------------------------------------------------------------
# Alpha translation (bracket erasure)

def alpha_translate(m: Term, a: MuVar) -> Term:
    """M_a: erase every bracket [a]P in M, keeping P."""
    if a not in free_vars(m):
        return m
    if isinstance(m, Var):
        return m
    if isinstance(m, App):
        return App(alpha_translate(m.fn, a), alpha_translate(m.arg, a))
    if isinstance(m, Lam):
        return Lam(m.var, alpha_translate(m.body, a))
    if isinstance(m, Mu):
        # m.mvar != a (else a would not be free), so no shadowing here
        return Mu(m.mvar, alpha_translate(m.body, a))
    if m.mvar == a:
        return alpha_translate(m.body, a)
    return Bracket(m.mvar, alpha_translate(m.body, a))


# ---------------------------------------------------------------------------
# Sequences

def apply_seq(m: Term, ps: Sequence[Term]) -> Term:
    """(M)P1...Pn, left-nested; (M) applied to the empty sequence is M."""
    for p in ps:
        m = App(m, p)
    return m


def is_initial_subseq(ps: Sequence[Term], ns: Sequence[Term]) -> bool:
    """True when ps is a prefix of ns, comparing elementwise modulo alpha."""
    if len(ps) > len(ns):
        return False
    return all(alpha_eq(p, n) for p, n in zip(ps, ns))


def prefixes(ns: Sequence[Term]) -> Iterable[TermSeq]:
    """All initial subsequences of ns, shortest first (starting with the
    empty one)."""
    ns = tuple(ns)
    for k in range(len(ns) + 1):
        yield ns[:k]


# ---------------------------------------------------------------------------
# Simultaneous substitution

@dataclass(frozen=True)
class SimulSubst:
    """Simultaneous substitution: lambda variables map to terms, mu
    variables map to (right-directed) argument sequences."""
    lam: Mapping[LamVar, Term] = field(default_factory=dict)
    mu: Mapping[MuVar, TermSeq] = field(default_factory=dict)

    def payload_terms(self) -> list[Term]:
        out = list(self.lam.values())
        for seq in self.mu.values():
            out.extend(seq)
        return out


def simul_subst(m: Term, s: SimulSubst) -> Term:
    """Apply a simultaneous substitution in a single traversal."""
    payloads = s.payload_terms()

    def go(m: Term, lam: dict, mu: dict) -> Term:
        if not lam and not mu:
            return m
        if isinstance(m, Var):
            return lam.get(m.var, m)
        if isinstance(m, App):
            return App(go(m.fn, lam, mu), go(m.arg, lam, mu))
        if isinstance(m, Lam):
            lam = {k: v for k, v in lam.items() if k != m.var}
            if any(m.var in free_vars(p) for p in payloads):
                y = SUPPLY.fresh_lam(m.var.name, _avoid_lam(m.body, *payloads))
                body = beta_subst(m.body, m.var, Var(y))
                return Lam(y, go(body, lam, mu))
            return Lam(m.var, go(m.body, lam, mu))
        if isinstance(m, Mu):
            mu = {k: v for k, v in mu.items() if k != m.mvar}
            if any(m.mvar in free_vars(p) for p in payloads):
                b = SUPPLY.fresh_mu(m.mvar.name, _avoid_mu(m.body, *payloads))
                body = rename_mu(m.body, m.mvar, b)
                return Mu(b, go(body, lam, mu))
            return Mu(m.mvar, go(m.body, lam, mu))
        # Bracket
        body = go(m.body, lam, mu)
        if m.mvar in mu:
            return Bracket(m.mvar, apply_seq(body, mu[m.mvar]))
        return Bracket(m.mvar, body)

    return go(m, dict(s.lam), dict(s.mu))
