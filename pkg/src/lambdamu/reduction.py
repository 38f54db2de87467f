"""Reduction: the six rules, strategies, and normalization procedures.

Rules (on redexes):

    (\\x. M)N        -> beta     M[x := N]
    (#a. M)N         -> mu       #a. M[a :=r N]
    (N)#a. M         -> mu'      #a. M[a :=l N]
    [b]#a. M         -> rho      M[a := b]
    #a. [a]M         -> theta    M          (only when a is not free in M)
    #a. #b. M        -> epsilon  #a. M_b

Rule sets of interest: R = {beta, mu, rho, theta, epsilon} is strongly
normalizing on typable terms; adding mu' (R' = {beta, mu, mu', rho, epsilon},
FULL = all six) breaks strong normalization and confluence, leaving weak
normalization.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Union

from .subst import (
    alpha_translate,
    apply_seq,
    beta_subst,
    mu_subst,
    rename_mu,
)
from .syntax import (
    App,
    Bracket,
    Lam,
    LamVar,
    Mu,
    MuVar,
    SUPPLY,
    Term,
    TermPath,
    Var,
    alpha_eq,
    canon,
    free_mu_names,
    free_vars,
    replace_at,
    subterm_at,
)

BETA = "beta"
MU = "mu"
MU_PRIME = "mu_prime"
RHO = "rho"
THETA = "theta"
EPSILON = "epsilon"

ALL_RULES = (BETA, MU, MU_PRIME, RHO, THETA, EPSILON)

RULES_FULL = frozenset(ALL_RULES)
RULES_R = frozenset((BETA, MU, RHO, THETA, EPSILON))        # strong normalization
RULES_R_PRIME = frozenset((BETA, MU, MU_PRIME, RHO, EPSILON))  # weak normalization

RULE_DISPLAY = {
    BETA: "beta", MU: "mu", MU_PRIME: "mu'",
    RHO: "rho", THETA: "theta", EPSILON: "epsilon",
}
RULE_FROM_DISPLAY = {v: k for k, v in RULE_DISPLAY.items()}

DEFAULT_STEP_FUEL = 100_000
DEFAULT_NODE_FUEL = 1_000_000


class NotARedex(Exception):
    pass


class StrategyFailed(Exception):
    """A lemma precondition was violated inside the head-spine strategy."""


# ---------------------------------------------------------------------------
# Redexes

def _rules_at(t: Term, prefer_mu_prime: bool = False) -> tuple[str, ...]:
    if isinstance(t, App):
        out = []
        if isinstance(t.fn, Lam):
            out.append(BETA)
        has_mu = isinstance(t.fn, Mu)
        has_mu_prime = isinstance(t.arg, Mu)
        pair = ((MU_PRIME, MU) if prefer_mu_prime else (MU, MU_PRIME))
        for r in pair:
            if r == MU and has_mu:
                out.append(MU)
            if r == MU_PRIME and has_mu_prime:
                out.append(MU_PRIME)
        return tuple(out)
    if isinstance(t, Bracket):
        return (RHO,) if isinstance(t.body, Mu) else ()
    if isinstance(t, Mu):
        out = []
        b = t.body
        if isinstance(b, Bracket) and b.mvar == t.mvar and t.mvar not in free_vars(b.body):
            out.append(THETA)
        if isinstance(b, Mu):
            out.append(EPSILON)
        return tuple(out)
    return ()


def iter_redexes(t: Term, rules: frozenset[str], order: str = "pre",
                 prefer_mu_prime: bool = False) -> Iterator[tuple[TermPath, str]]:
    """Redex positions in preorder ('pre') or leftmost-innermost ('post')."""

    def walk(t: Term, path: TermPath):
        here = [(path, r) for r in _rules_at(t, prefer_mu_prime) if r in rules]
        if order == "pre":
            yield from here
        if isinstance(t, App):
            yield from walk(t.fn, path + (0,))
            yield from walk(t.arg, path + (1,))
        elif not isinstance(t, Var):
            yield from walk(t.body, path + (0,))
        if order != "pre":
            yield from here

    yield from walk(t, ())


def find_redexes(t: Term, rules: frozenset[str],
                 prefer_mu_prime: bool = False) -> list[tuple[TermPath, str]]:
    """Every redex position for the active rules, in preorder.  A single
    application node can host both a mu and a mu' redex; both are reported."""
    return list(iter_redexes(t, rules, "pre", prefer_mu_prime))


def is_normal_form(t: Term, rules: frozenset[str]) -> bool:
    for _ in iter_redexes(t, rules):
        return False
    return True


# ---------------------------------------------------------------------------
# Single step

def _contract(t: Term, rule: str) -> Term:
    if rule == BETA:
        if isinstance(t, App) and isinstance(t.fn, Lam):
            return beta_subst(t.fn.body, t.fn.var, t.arg)
    elif rule == MU:
        if isinstance(t, App) and isinstance(t.fn, Mu):
            a, body, n = t.fn.mvar, t.fn.body, t.arg
            if a in free_vars(n):
                a2 = SUPPLY.fresh_mu(a.name, free_mu_names(body) | free_mu_names(n))
                body, a = rename_mu(body, a, a2), a2
            return Mu(a, mu_subst(body, a, "r", n))
    elif rule == MU_PRIME:
        if isinstance(t, App) and isinstance(t.arg, Mu):
            a, body, n = t.arg.mvar, t.arg.body, t.fn
            if a in free_vars(n):
                a2 = SUPPLY.fresh_mu(a.name, free_mu_names(body) | free_mu_names(n))
                body, a = rename_mu(body, a, a2), a2
            return Mu(a, mu_subst(body, a, "l", n))
    elif rule == RHO:
        if isinstance(t, Bracket) and isinstance(t.body, Mu):
            return rename_mu(t.body.body, t.body.mvar, t.mvar)
    elif rule == THETA:
        if (isinstance(t, Mu) and isinstance(t.body, Bracket)
                and t.body.mvar == t.mvar
                and t.mvar not in free_vars(t.body.body)):
            return t.body.body
    elif rule == EPSILON:
        if isinstance(t, Mu) and isinstance(t.body, Mu):
            return Mu(t.mvar, alpha_translate(t.body.body, t.body.mvar))
    else:
        raise NotARedex(f"unknown rule {rule!r}")
    raise NotARedex(f"subterm is not a {RULE_DISPLAY[rule]}-redex")


def step_at(t: Term, path: TermPath, rule: str) -> Term:
    """Contract the redex at `path` by `rule` and splice the contractum
    back.  Raises NotARedex when the subterm does not match (the theta side
    condition counts)."""
    sub = subterm_at(t, path)
    return replace_at(t, path, _contract(sub, rule))


# ---------------------------------------------------------------------------
# Traces

NORMAL = "normal"
CYCLE = "cycle"
FUEL = "fuel"


@dataclass(frozen=True)
class Step:
    rule: str
    path: TermPath
    before: Term
    after: Term


@dataclass(frozen=True)
class Trace:
    initial: Term
    steps: tuple[Step, ...]
    status: str  # normal | cycle | fuel

    @property
    def final(self) -> Term:
        return self.steps[-1].after if self.steps else self.initial

    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]


def _make_trace(initial: Term, steps: Sequence[Step], status: str) -> Trace:
    return Trace(initial, tuple(steps), status)


# ---------------------------------------------------------------------------
# Strategies

Selector = Callable[[Term, int], Optional[tuple[TermPath, str]]]

CYCLE_SCHEDULE = (MU_PRIME, MU, RHO, THETA)


def _leftmost_outermost(rules, prefer_mu_prime):
    def pick(t: Term, i: int):
        for p, r in iter_redexes(t, rules, "pre", prefer_mu_prime):
            return p, r
        return None
    return pick


def _leftmost_innermost(rules, prefer_mu_prime):
    def pick(t: Term, i: int):
        for p, r in iter_redexes(t, rules, "post", prefer_mu_prime):
            return p, r
        return None
    return pick


def _cycle_demo(rules, prefer_mu_prime):
    # Cyclic mu', mu, rho, theta schedule, innermost redex of the scheduled
    # rule.  Exists to replay the non-SN loop of the FULL calculus.
    def pick(t: Term, i: int):
        rule = CYCLE_SCHEDULE[i % 4]
        if rule not in rules:
            return None
        cands = [p for p, r in iter_redexes(t, rules, "pre") if r == rule]
        if not cands:
            return None
        return max(cands, key=lambda p: (len(p), p)), rule
    return pick


def script_strategy(moves: Sequence[tuple[TermPath, str]]) -> Selector:
    """Replay an explicit list of (path, rule) moves (the by-path interface
    used by the CLI's trace replay and by tests)."""
    def pick(t: Term, i: int):
        return moves[i] if i < len(moves) else None
    return pick


_NAMED_STRATEGIES = {
    "leftmost-outermost": _leftmost_outermost,
    "leftmost-innermost": _leftmost_innermost,
    "cycle-demo": _cycle_demo,
}

STRATEGY_NAMES = tuple(_NAMED_STRATEGIES) + ("full-search-first-NF",)


def reduce(term: Term, rules: frozenset[str],
           strategy: Union[str, Selector] = "leftmost-outermost",
           fuel: int = DEFAULT_STEP_FUEL,
           prefer_mu_prime: bool = False) -> Trace:
    """Reduce until normal form, a revisited term (CycleFound), strategy
    exhaustion, or fuel exhaustion.  `strategy` is a name or a selector
    callable (term, step_index) -> (path, rule) | None."""
    if strategy == "full-search-first-NF":
        return search_normal_form(term, rules, fuel)
    if isinstance(strategy, str):
        try:
            pick = _NAMED_STRATEGIES[strategy](rules, prefer_mu_prime)
        except KeyError:
            raise ValueError(f"unknown strategy {strategy!r}") from None
    else:
        pick = strategy

    steps: list[Step] = []
    seen = {canon(term)}
    cur = term
    while len(steps) < fuel:
        move = pick(cur, len(steps))
        if move is None:
            status = NORMAL if is_normal_form(cur, rules) else FUEL
            return _make_trace(term, steps, status)
        path, rule = move
        nxt = step_at(cur, path, rule)
        steps.append(Step(rule, path, cur, nxt))
        key = canon(nxt)
        if key in seen:
            return _make_trace(term, steps, CYCLE)
        seen.add(key)
        cur = nxt
    return _make_trace(term, steps, FUEL)


def successors(t: Term, rules: frozenset[str]) -> list[tuple[str, TermPath, Term]]:
    """One-step reducts, deduplicated by alpha-canonical form (first redex
    producing a given reduct wins)."""
    out = []
    seen = set()
    for path, rule in iter_redexes(t, rules):
        nt = step_at(t, path, rule)
        k = canon(nt)
        if k not in seen:
            seen.add(k)
            out.append((rule, path, nt))
    return out


def search_normal_form(term: Term, rules: frozenset[str],
                       fuel: int = DEFAULT_STEP_FUEL) -> Trace:
    """Breadth-first search of the reduction graph for any normal form.
    Status is `cycle` when the whole finite reachable graph holds no normal
    form, `fuel` when the budget is exhausted first."""
    start = canon(term)
    if is_normal_form(term, rules):
        return _make_trace(term, [], NORMAL)
    parent: dict = {start: None}
    holder = {start: term}
    queue = deque([term])
    explored = 1
    while queue:
        cur = queue.popleft()
        ck = canon(cur)
        for rule, path, nt in successors(cur, rules):
            nk = canon(nt)
            if nk in parent:
                continue
            parent[nk] = (ck, rule, path)
            holder[nk] = nt
            explored += 1
            if is_normal_form(nt, rules):
                chain = []
                k = nk
                while parent[k] is not None:
                    pk, r, p = parent[k]
                    chain.append(Step(r, p, holder[pk], holder[k]))
                    k = pk
                chain.reverse()
                return _make_trace(term, chain, NORMAL)
            if explored > fuel:
                return _make_trace(term, [], FUEL)
            queue.append(nt)
    return _make_trace(term, [], CYCLE)


# ---------------------------------------------------------------------------
# Longest reduction path (eta) and strong normalization

@dataclass(frozen=True)
class EtaResult:
    kind: str  # value | not_sn | fuel
    value: Optional[int] = None
    cycle: Optional[Trace] = None


def eta(term: Term, rules: frozenset[str], fuel: int = DEFAULT_NODE_FUEL,
        memo: Optional[dict] = None) -> EtaResult:
    """Length of the longest reduction sequence, memoized over the reduction
    graph by canonical form: 0 for normal forms, otherwise
    1 + max over one-step reducts.

    Reports a witness cycle when the graph has one, and fuel exhaustion when
    more than `fuel` distinct nodes get explored.  An optional shared `memo`
    dict carries completed values across calls."""
    memo = {} if memo is None else memo
    root = canon(term)
    if root in memo:
        return EtaResult("value", memo[root])

    onpath: dict = {root: 0}
    # frame: [term, key, succs, next_index, best, entry_rule, entry_path]
    frames = [[term, root, None, 0, 0, None, None]]
    explored = 1

    while frames:
        fr = frames[-1]
        if fr[2] is None:
            fr[2] = successors(fr[0], rules)
        if fr[3] < len(fr[2]):
            rule, path, nt = fr[2][fr[3]]
            fr[3] += 1
            nk = canon(nt)
            if nk in memo:
                fr[4] = max(fr[4], memo[nk] + 1)
                continue
            if nk in onpath:
                j = onpath[nk]
                steps = [
                    Step(f[5], f[6], frames[i - 1][0], f[0])
                    for i, f in enumerate(frames)
                    if i > j
                ]
                steps.append(Step(rule, path, fr[0], nt))
                return EtaResult("not_sn", None,
                                 _make_trace(frames[j][0], steps, CYCLE))
            explored += 1
            if explored > fuel:
                return EtaResult("fuel")
            onpath[nk] = len(frames)
            frames.append([nt, nk, None, 0, 0, rule, path])
        else:
            memo[fr[1]] = fr[4]
            del onpath[fr[1]]
            frames.pop()
            if frames:
                frames[-1][4] = max(frames[-1][4], fr[4] + 1)
    return EtaResult("value", memo[root])


SN = "sn"
NOT_SN = "not_sn"


@dataclass(frozen=True)
class SNResult:
    kind: str  # sn | not_sn | fuel
    eta: Optional[int] = None
    cycle: Optional[Trace] = None


def is_sn(term: Term, rules: frozenset[str], fuel: int = DEFAULT_NODE_FUEL,
          memo: Optional[dict] = None) -> SNResult:
    """SN iff the reachable reduction graph is finite and acyclic (then eta
    is defined).  Acyclic-but-infinite graphs come back as fuel exhaustion,
    never as SN."""
    r = eta(term, rules, fuel, memo)
    if r.kind == "value":
        return SNResult(SN, eta=r.value)
    if r.kind == "not_sn":
        return SNResult(NOT_SN, cycle=r.cycle)
    return SNResult(FUEL)


# ---------------------------------------------------------------------------
# Theta normalization (terminates: every theta step shrinks the term)

def theta_steps(term: Term) -> list[Step]:
    steps = []
    cur = term
    while True:
        move = next(iter_redexes(cur, frozenset((THETA,))), None)
        if move is None:
            return steps
        path, rule = move
        nxt = step_at(cur, path, rule)
        steps.append(Step(rule, path, cur, nxt))
        cur = nxt


def theta_normalize(term: Term) -> Term:
    steps = theta_steps(term)
    return steps[-1].after if steps else term


# ---------------------------------------------------------------------------
# Weak normalization for the full rule set

def normalize_wn(term: Term, fuel: int = DEFAULT_STEP_FUEL) -> Trace:
    """Find a FULL-normal form of a term, in two phases: reach an R'-normal
    form (deterministic reduction first, breadth-first search of the
    reduction graph as fallback), then exhaust theta.

    Theta steps from an R'-normal form stay R'-normal, so the result has no
    redex for any of the six rules.  Termination is guaranteed for typable
    terms (given enough fuel); the deterministic-then-search design is an
    implementation choice, not a published algorithm."""
    phase1 = reduce(term, RULES_R_PRIME, "leftmost-outermost", fuel)
    if phase1.status != NORMAL:
        phase1 = search_normal_form(term, RULES_R_PRIME, fuel)
        if phase1.status != NORMAL:
            return _make_trace(term, phase1.steps, FUEL)
    steps = list(phase1.steps)
    steps.extend(theta_steps(phase1.final))
    return _make_trace(term, steps, NORMAL)


# ---------------------------------------------------------------------------
# Alpha-cleanness and the head-spine strategy

def is_alpha_clean(t: Term, a: MuVar) -> bool:
    """No subterm [a]U with U a lambda abstraction, for the given free a.
    A mu binder re-binding the same name shadows it: brackets underneath
    refer to the inner variable and are not inspected."""
    if isinstance(t, Var):
        return True
    if isinstance(t, App):
        return is_alpha_clean(t.fn, a) and is_alpha_clean(t.arg, a)
    if isinstance(t, Bracket):
        if t.mvar == a and isinstance(t.body, Lam):
            return False
        return is_alpha_clean(t.body, a)
    if isinstance(t, Mu) and t.mvar == a:
        return True
    return is_alpha_clean(t.body, a)


_CLEANUP_CAP = 10_000


def head_spine_trace(x: LamVar, ns: Sequence[Term]) -> Trace:
    """Normalize a head-variable spine (x)N1...Nn with R'-normal arguments,
    following the left-to-right strategy: fire a mu' step at the first
    mu-headed argument, then consume the remaining arguments with a mu step
    (argument not mu-headed) or a mu' step plus mu/rho cleanup (argument
    mu-headed), keeping the growing mu abstraction clean for its bound
    variable throughout.

    Every intermediate invariant from the supporting lemmas is asserted at
    runtime; a violation raises StrategyFailed naming the condition."""
    ns = tuple(ns)
    for i, n in enumerate(ns):
        if not is_normal_form(n, RULES_R_PRIME):
            raise StrategyFailed(f"argument {i + 1} is not R'-normal")

    initial = apply_seq(Var(x), ns)
    total = len(ns)
    first = next((j for j in range(total) if isinstance(ns[j], Mu)), None)
    if first is None:
        return _make_trace(initial, [], NORMAL)

    cur = initial
    steps: list[Step] = []

    def fire(path: TermPath, rule: str):
        nonlocal cur
        nxt = step_at(cur, path, rule)
        steps.append(Step(rule, path, cur, nxt))
        cur = nxt

    def cleanup_under(prefix: TermPath):
        # innermost-first mu/rho elimination of the bracket sites created by
        # substituting a mu-headed term; processed sites are never duplicated
        for _ in range(_CLEANUP_CAP):
            cands = [
                (p, r) for p, r in iter_redexes(subterm_at(cur, prefix),
                                                frozenset((MU, RHO)))
            ]
            if not cands:
                return
            p, r = max(cands, key=lambda pr: (len(pr[0]), pr[0]))
            fire(prefix + p, r)
        raise StrategyFailed("mu/rho cleanup did not terminate")

    def check_stage(node: TermPath, stage: str):
        sub = subterm_at(cur, node)
        if not isinstance(sub, Mu):
            raise StrategyFailed(f"{stage}: expected a mu abstraction")
        if not is_normal_form(sub, RULES_R_PRIME):
            raise StrategyFailed(f"{stage}: intermediate result is not R'-normal")
        if not is_alpha_clean(sub.body, sub.mvar):
            raise StrategyFailed(f"{stage}: intermediate result is not clean "
                                 "for its bound mu variable")

    node = (0,) * (total - 1 - first)
    fire(node, MU_PRIME)
    cleanup_under(node)
    check_stage(node, f"after argument {first + 1}")

    for j in range(first + 1, total):
        node = (0,) * (total - 1 - j)
        if isinstance(ns[j], Mu):
            fire(node, MU_PRIME)
            cleanup_under(node)
        else:
            fire(node, MU)
        check_stage(node, f"after argument {j + 1}")

    if not is_normal_form(cur, RULES_R_PRIME):
        raise StrategyFailed("final result is not R'-normal")
    return _make_trace(initial, steps, NORMAL)


def head_spine_normalize(x: LamVar, ns: Sequence[Term]) -> Term:
    """R'-normal form of (x)N1...Nn computed by the head-spine strategy."""
    return head_spine_trace(x, ns).final


# ---------------------------------------------------------------------------
# Trace replay and serialization helpers

def replay_trace(trace: Trace) -> bool:
    """Re-run every step of a trace through step_at and compare."""
    cur = trace.initial
    for s in trace.steps:
        if not alpha_eq(cur, s.before):
            return False
        try:
            nxt = step_at(cur, s.path, s.rule)
        except NotARedex:
            return False
        if not alpha_eq(nxt, s.after):
            return False
        cur = nxt
    return True
