"""Desk-scale test harness: term enumeration, saturation conditions,
orthogonals, and lemma-indexed property suites.

Everything here quantifies over a bounded fragment of the term language, so
a passing verdict is always "pass at these bounds", never a proof.  Failing
verdicts carry concrete counterexamples that replay through the public
operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .parse import parse_term
from .reduction import (
    BETA,
    EPSILON,
    FUEL,
    MU,
    MU_PRIME,
    NORMAL,
    RHO,
    RULES_FULL,
    RULES_R,
    RULES_R_PRIME,
    SN,
    THETA,
    eta,
    find_redexes,
    is_alpha_clean,
    is_normal_form,
    is_sn,
    iter_redexes,
    normalize_wn,
    reduce,
    search_normal_form,
    step_at,
    successors,
)
from .subst import (
    alpha_translate,
    apply_seq,
    beta_subst,
    mu_subst,
    mu_subst_seq,
    rename_mu,
)
from .syntax import (
    App,
    Bracket,
    Lam,
    LamVar,
    Mu,
    MuVar,
    Term,
    Var,
    alpha_eq,
    canon,
    cxty,
    free_vars,
    subterm_at,
    term_to_str,
)
from .typecheck import (
    check_judgment,
    TypingError,
    is_typable,
    principal_ground_judgment,
)

CYCLE_TERM_TEXT = "(#b. #a. [a][a]x)(#a. [a][a]x)"


def cycle_term() -> Term:
    """The typable term with a 4-step mu',mu,rho,theta loop under FULL."""
    return parse_term(CYCLE_TERM_TEXT)


# ---------------------------------------------------------------------------
# Enumeration

_LAM_POOL = ("x", "y", "z", "w")
_MU_POOL = ("a", "b", "c", "d")


def lam_pool(n: int) -> tuple[LamVar, ...]:
    names = _LAM_POOL[:n] + tuple(f"x{i}" for i in range(len(_LAM_POOL), n))
    return tuple(LamVar(s) for s in names)


def mu_pool(n: int) -> tuple[MuVar, ...]:
    names = _MU_POOL[:n] + tuple(f"a{i}" for i in range(len(_MU_POOL), n))
    return tuple(MuVar(s) for s in names)


@dataclass(frozen=True)
class EnumBounds:
    """Enumeration fragment: all terms up to max_cxty whose free variables
    come from pools of the given sizes, one representative per alpha class."""
    max_cxty: int
    lam_pool: int = 1
    mu_pool: int = 1
    typable_only: bool = False

    def __post_init__(self):
        if self.max_cxty < 1:
            raise ValueError("max_cxty must be at least 1")
        if self.lam_pool < 1 or self.mu_pool < 1:
            raise ValueError("variable pools must be at least 1")


def enumerate_terms(bounds: EnumBounds) -> Iterator[Term]:
    """All terms of the fragment in a fixed order: complexity ascending,
    then Var / Lam / App / Bracket / Mu at each node.

    Alpha classes are enumerated exactly once: the binder introduced at
    lambda depth d is always named u{d}, at mu depth d always g{d}, so each
    class is generated in canonical bound-variable form.
    """
    pool_l = lam_pool(bounds.lam_pool)
    pool_m = mu_pool(bounds.mu_pool)
    cache: dict[tuple[int, int, int], list[Term]] = {}

    def gen(size: int, ld: int, md: int) -> list[Term]:
        key = (size, ld, md)
        hit = cache.get(key)
        if hit is not None:
            return hit
        out: list[Term] = []
        if size == 1:
            out.extend(Var(v) for v in pool_l)
            out.extend(Var(LamVar(f"u{i}")) for i in range(ld))
        else:
            binder = LamVar(f"u{ld}")
            out.extend(Lam(binder, b) for b in gen(size - 1, ld + 1, md))
            for i in range(1, size - 1):
                args = gen(size - 1 - i, ld, md)
                out.extend(App(f, a)
                           for f in gen(i, ld, md) for a in args)
            mvars = list(pool_m) + [MuVar(f"g{i}") for i in range(md)]
            for mv in mvars:
                out.extend(Bracket(mv, b) for b in gen(size - 1, ld, md))
            mbinder = MuVar(f"g{md}")
            out.extend(Mu(mbinder, b) for b in gen(size - 1, ld, md + 1))
        cache[key] = out
        return out

    for size in range(1, bounds.max_cxty + 1):
        for t in gen(size, 0, 0):
            if bounds.typable_only and not is_typable(t):
                continue
            yield t


_fragment_cache: dict[EnumBounds, tuple[Term, ...]] = {}


def fragment(bounds: EnumBounds) -> tuple[Term, ...]:
    """Materialized enumeration, cached per bounds."""
    hit = _fragment_cache.get(bounds)
    if hit is None:
        hit = tuple(enumerate_terms(bounds))
        _fragment_cache[bounds] = hit
    return hit


def count_terms(bounds: EnumBounds) -> int:
    return len(fragment(bounds))


# ---------------------------------------------------------------------------
# Set predicates

class PredicateFuelExhausted(RuntimeError):
    """A membership test could not be decided within its fuel budget."""


@dataclass
class SetPredicate:
    """A decidable membership test over terms, memoized by alpha class."""
    name: str
    fn: Callable[[Term], bool]
    _memo: dict = field(default_factory=dict, repr=False)

    def contains(self, t: Term) -> bool:
        key = canon(t)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self.fn(t)
        return hit

    def intersect(self, other: "SetPredicate") -> "SetPredicate":
        return SetPredicate(f"({self.name} & {other.name})",
                            lambda t: self.contains(t) and other.contains(t))

    def minus_term(self, excluded: Term) -> "SetPredicate":
        """Self without one alpha class (used to corrupt predicates in
        sensitivity tests)."""
        k = canon(excluded)
        return SetPredicate(f"({self.name} - {term_to_str(excluded)})",
                            lambda t: canon(t) != k and self.contains(t))


def typable_set() -> SetPredicate:
    return SetPredicate("Tt", is_typable)


def sn_set(rules: frozenset[str], fuel: int = 200_000) -> SetPredicate:
    """Typable and strongly normalizing for the given rules."""
    memo: dict = {}

    def fn(t: Term) -> bool:
        if not is_typable(t):
            return False
        r = is_sn(t, rules, fuel, memo)
        if r.kind == FUEL:
            raise PredicateFuelExhausted(term_to_str(t))
        return r.kind == SN

    return SetPredicate(f"SN({''.join(sorted(r[0] for r in rules))})&Tt", fn)


def wn_set(rules: frozenset[str], fuel: int = 200_000) -> SetPredicate:
    """Typable and weakly normalizing (some normal form reachable)."""

    def fn(t: Term) -> bool:
        if not is_typable(t):
            return False
        tr = search_normal_form(t, rules, fuel)
        if tr.status == FUEL:
            raise PredicateFuelExhausted(term_to_str(t))
        return tr.status == NORMAL

    return SetPredicate(f"WN({''.join(sorted(r[0] for r in rules))})&Tt", fn)


def arrow_set(k: SetPredicate, l: SetPredicate, bb: SetPredicate,
              bounds: EnumBounds) -> SetPredicate:
    """K ~> L relative to BB: members of BB mapping every member of K (of
    the bounded fragment) into L, within typability.  The quantifier over K
    is bounded by `bounds` -- a documented approximation."""
    kmembers: list[Term] = [t for t in fragment(bounds) if k.contains(t)]

    def fn(m: Term) -> bool:
        if not bb.contains(m):
            return False
        for n in kmembers:
            t = App(m, n)
            if is_typable(t) and not l.contains(t):
                return False
        return True

    return SetPredicate(f"({k.name} ~> {l.name})", fn)


def seq_arrow_set(seqs: Sequence[tuple[Term, ...]], bb: SetPredicate) -> SetPredicate:
    """X ~> BB for a set X of argument sequences: members of BB whose
    applications to every prefix of every sequence stay in BB, within
    typability."""
    prefix_set = {()}
    for seq in seqs:
        for k in range(1, len(seq) + 1):
            prefix_set.add(seq[:k])
    prefixes = sorted(prefix_set, key=lambda s: (len(s), [canon(t) for t in s]))

    def fn(m: Term) -> bool:
        if not bb.contains(m):
            return False
        for p in prefixes:
            t = apply_seq(m, p)
            if is_typable(t) and not bb.contains(t):
                return False
        return True

    return SetPredicate("(X ~> BB)", fn)


def compute_orthogonal(s: SetPredicate, bb: SetPredicate, bounds: EnumBounds,
                       seq_len: int = 3,
                       seq_elem_cxty: Optional[int] = None) -> list[tuple[Term, ...]]:
    """Bounded weakest precondition: every enumerated sequence (elements in
    BB, length and element size bounded) all of whose prefix applications to
    members of S stay in BB whenever typable.  The empty sequence is always
    included."""
    if seq_elem_cxty is None:
        seq_elem_cxty = max(1, bounds.max_cxty // 2)
    frag = fragment(bounds)
    pool = [t for t in frag if cxty(t) <= seq_elem_cxty and bb.contains(t)]
    smembers = [t for t in frag if s.contains(t)]

    def full_len_ok(seq: tuple[Term, ...]) -> bool:
        for m in smembers:
            t = apply_seq(m, seq)
            if is_typable(t) and not bb.contains(t):
                return False
        return True

    result: list[tuple[Term, ...]] = [()]
    frontier: list[tuple[Term, ...]] = [()]
    for _ in range(seq_len):
        new = []
        for base in frontier:
            for nxt in pool:
                seq = base + (nxt,)
                # proper prefixes already qualified via `base`
                if full_len_ok(seq):
                    new.append(seq)
        result.extend(new)
        frontier = new
    return result


# ---------------------------------------------------------------------------
# Reports

@dataclass
class Counterexample:
    condition: str
    detail: str
    parts: dict[str, str]

    def to_dict(self) -> dict:
        return {"condition": self.condition, "detail": self.detail,
                "parts": dict(self.parts)}


@dataclass
class ConditionOutcome:
    condition: str
    instances: int = 0
    failures: list[Counterexample] = field(default_factory=list)

    _MAX_STORED = 5

    @property
    def verdict(self) -> str:
        return "fail" if self.failures else "pass-at-bound"

    def record(self, ce: Optional[Counterexample] = None):
        self.instances += 1
        if ce is not None and len(self.failures) < self._MAX_STORED:
            self.failures.append(ce)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "instances": self.instances,
            "verdict": self.verdict,
            "failures": [f.to_dict() for f in self.failures],
        }


@dataclass
class ConditionReport:
    title: str
    conditions: dict[str, ConditionOutcome] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def outcome(self, name: str) -> ConditionOutcome:
        if name not in self.conditions:
            self.conditions[name] = ConditionOutcome(name)
        return self.conditions[name]

    @property
    def passed(self) -> bool:
        return all(not o.failures for o in self.conditions.values())

    @property
    def total_instances(self) -> int:
        return sum(o.instances for o in self.conditions.values())

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "total_instances": self.total_instances,
            "meta": dict(self.meta),
            "conditions": {k: v.to_dict() for k, v in sorted(self.conditions.items())},
        }

    def render(self) -> str:
        lines = [f"{self.title}: {'PASS (at bounds)' if self.passed else 'FAIL'}"]
        for name in sorted(self.conditions):
            o = self.conditions[name]
            lines.append(f"  {name}: {o.verdict} ({o.instances} instances)")
            for ce in o.failures:
                lines.append(f"    counterexample: {ce.detail}")
                for k, v in ce.parts.items():
                    lines.append(f"      {k} = {v}")
        return "\n".join(lines)


def _ce(condition: str, detail: str, **parts) -> Counterexample:
    rendered = {}
    for k, v in parts.items():
        if isinstance(v, Term):
            rendered[k] = term_to_str(v)
        elif isinstance(v, (tuple, list)):
            rendered[k] = "; ".join(term_to_str(t) for t in v)
        else:
            rendered[k] = str(v)
    return Counterexample(condition, detail, rendered)


# ---------------------------------------------------------------------------
# Saturation conditions C1..C6

DEFAULT_MAX_INSTANCES = 50_000


def _seq_blocks(pool: Sequence[Term], max_len: int) -> Iterator[tuple[Term, ...]]:
    """Sequences over `pool`, length-major (all shorter sequences first)."""
    for k in range(max_len + 1):
        yield from itertools.product(pool, repeat=k)


def _seqs_by_total(pool: Sequence[Term], max_len: int) -> dict[int, list[tuple[Term, ...]]]:
    """Sequences over `pool` up to `max_len`, bucketed by total complexity
    (the empty sequence sits in bucket 0)."""
    buckets: dict[int, list[tuple[Term, ...]]] = {0: [()]}
    frontier: list[tuple[int, tuple[Term, ...]]] = [(0, ())]
    for _ in range(max_len):
        new = []
        for total, seq in frontier:
            for t in pool:
                new.append((total + cxty(t), seq + (t,)))
        for total, seq in new:
            buckets.setdefault(total, []).append(seq)
        frontier = new
    return buckets


def _bucket_by_cxty(terms: Sequence[Term]) -> dict[int, list[Term]]:
    buckets: dict[int, list[Term]] = {}
    for t in terms:
        buckets.setdefault(cxty(t), []).append(t)
    return buckets


def _sized_product(heads: Sequence[Term], seq_buckets: dict[int, list[tuple[Term, ...]]]
                   ) -> Iterator[tuple[Term, tuple[Term, ...]]]:
    """(head, sequence) pairs in ascending order of combined complexity, so
    the smallest instances are exercised before any instance cap bites."""
    head_buckets = _bucket_by_cxty(heads)
    if not head_buckets or not seq_buckets:
        return
    budgets = range(
        min(head_buckets) + min(seq_buckets),
        max(head_buckets) + max(seq_buckets) + 1,
    )
    for budget in budgets:
        for total in sorted(seq_buckets):
            for head in head_buckets.get(budget - total, ()):
                for seq in seq_buckets[total]:
                    yield head, seq


def check_saturated(s: SetPredicate, bounds: EnumBounds,
                    seq_len: int = 2,
                    seq_elem_cxty: Optional[int] = None,
                    max_instances: int = DEFAULT_MAX_INSTANCES) -> ConditionReport:
    """Test the six saturation conditions for S over the bounded fragment.

    Head terms and sequence elements are drawn from the fragment; sequence
    enumeration is length-major so small instances are exercised before any
    instance cap bites.
    """
    if seq_elem_cxty is None:
        seq_elem_cxty = max(1, bounds.max_cxty // 2)
    report = ConditionReport(
        f"saturation of {s.name}",
        meta={"max_cxty": bounds.max_cxty, "lam_pool": bounds.lam_pool,
              "mu_pool": bounds.mu_pool, "seq_len": seq_len,
              "seq_elem_cxty": seq_elem_cxty},
    )
    frag = fragment(bounds)
    members: list[Term] = []
    subset = report.outcome("S-subset-of-Tt")
    for t in frag:
        if s.contains(t):
            subset.instances += 1
            if not is_typable(t):
                subset.record(_ce("S-subset-of-Tt", "member is not typable", M=t))
                subset.instances -= 1
            else:
                members.append(t)

    lam_cands = list(lam_pool(bounds.lam_pool)) + [LamVar("q0")]
    mu_cands = list(mu_pool(bounds.mu_pool)) + [MuVar("q0")]
    elem_pool = [t for t in members if cxty(t) <= seq_elem_cxty]

    # C1: closure under lambda abstraction
    c1 = report.outcome("C1")
    for m in members:
        for x in lam_cands:
            if c1.instances >= max_instances:
                break
            ok = s.contains(Lam(x, m))
            c1.record(None if ok else _ce(
                "C1", "lambda abstraction left S", M=m, x=x.name))

    # C2: closure under mu abstraction, guarded by typability
    c2 = report.outcome("C2")
    for m in members:
        for a in mu_cands:
            if c2.instances >= max_instances:
                break
            t = Mu(a, m)
            if not is_typable(t):
                continue
            ok = s.contains(t)
            c2.record(None if ok else _ce(
                "C2", "mu abstraction left S", M=m, alpha=a.name))

    # C3: closure under brackets, guarded by typability
    c3 = report.outcome("C3")
    for m in members:
        for a in mu_cands:
            if c3.instances >= max_instances:
                break
            t = Bracket(a, m)
            if not is_typable(t):
                continue
            ok = s.contains(t)
            c3.record(None if ok else _ce(
                "C3", "bracket left S", M=m, alpha=a.name))

    elem_buckets = _seqs_by_total(elem_pool, seq_len)

    # C4: head-variable spines over S-members
    c4 = report.outcome("C4")
    for total in sorted(elem_buckets):
        if c4.instances >= max_instances:
            break
        for seq in elem_buckets[total]:
            for x in lam_cands:
                t = apply_seq(Var(x), seq)
                if not is_typable(t):
                    continue
                ok = s.contains(t)
                c4.record(None if ok else _ce(
                    "C4", "typable head-variable spine not in S",
                    x=x.name, args=seq))

    # C5: head beta expansion
    c5 = report.outcome("C5")
    lam_heads = [t for t in frag if isinstance(t, Lam) and is_typable(t)]
    tt_pool = [t for t in frag if cxty(t) <= seq_elem_cxty and is_typable(t)]
    # arguments N (in S) and trailing sequence P, jointly size-ordered
    ps_buckets = _seqs_by_total(tt_pool, seq_len - 1)
    np_buckets: dict[int, list[tuple[Term, ...]]] = {}
    for n_elem in elem_pool:
        for total, seqs in ps_buckets.items():
            np_buckets.setdefault(cxty(n_elem) + total, []).extend(
                (n_elem,) + ps for ps in seqs)
    for head, nps in _sized_product(lam_heads, np_buckets):
        if c5.instances >= max_instances:
            break
        n, ps = nps[0], nps[1:]
        target = apply_seq(App(head, n), ps)
        if not is_typable(target):
            continue
        reduced = apply_seq(beta_subst(head.body, head.var, n), ps)
        if not s.contains(reduced):
            continue
        ok = s.contains(target)
        c5.record(None if ok else _ce(
            "C5", "head beta expansion left S",
            head=head, N=n, P=ps, target=target))

    # C6: head mu expansion with sequence arguments
    c6 = report.outcome("C6")
    mu_heads = [t for t in frag if isinstance(t, Mu) and is_typable(t)]
    for head, seq in _sized_product(mu_heads, elem_buckets):
        if c6.instances >= max_instances:
            break
        target = apply_seq(head, seq)
        if not is_typable(target):
            continue
        contractum = Mu(head.mvar, mu_subst_seq(head.body, head.mvar, seq))
        if not s.contains(contractum):
            continue
        ok = s.contains(target)
        c6.record(None if ok else _ce(
            "C6", "head mu expansion left S",
            head=head, args=seq, target=target))

    return report


# ---------------------------------------------------------------------------
# Bottom-bottom-saturated sets D1..D3

def check_bb_saturated(s: SetPredicate, bb: SetPredicate, bounds: EnumBounds,
                       seq_len: int = 2,
                       seq_elem_cxty: Optional[int] = None,
                       max_instances: int = DEFAULT_MAX_INSTANCES,
                       d3_sample: int = 2000) -> ConditionReport:
    """Test the three conditions for S to be saturated relative to BB.

    D3 is checked through the orthogonal: S must coincide on the fragment
    with X ~> BB where X is the computed bounded weakest precondition."""
    if seq_elem_cxty is None:
        seq_elem_cxty = max(1, bounds.max_cxty // 2)
    report = ConditionReport(
        f"{bb.name}-saturation of {s.name}",
        meta={"max_cxty": bounds.max_cxty, "seq_len": seq_len,
              "seq_elem_cxty": seq_elem_cxty},
    )
    frag = fragment(bounds)

    sub = report.outcome("S-subset-of-BB")
    for t in frag:
        if s.contains(t):
            sub.instances += 1
            if not bb.contains(t):
                sub.record(_ce("S-subset-of-BB", "S member outside BB", M=t))
                sub.instances -= 1
    sub2 = report.outcome("BB-subset-of-Tt")
    for t in frag:
        if bb.contains(t):
            sub2.instances += 1
            if not is_typable(t):
                sub2.record(_ce("BB-subset-of-Tt", "BB member not typable", M=t))
                sub2.instances -= 1

    bb_pool = [t for t in frag if cxty(t) <= seq_elem_cxty and bb.contains(t)]
    tt_pool = [t for t in frag if cxty(t) <= seq_elem_cxty and is_typable(t)]

    # D1: head beta saturation into S, argument in BB
    d1 = report.outcome("D1")
    lam_heads = [t for t in frag if isinstance(t, Lam) and is_typable(t)]
    for ps in _seq_blocks(tt_pool, seq_len - 1):
        if d1.instances >= max_instances:
            break
        for head in lam_heads:
            for n in bb_pool:
                if d1.instances >= max_instances:
                    break
                target = apply_seq(App(head, n), ps)
                if not is_typable(target):
                    continue
                reduced = apply_seq(beta_subst(head.body, head.var, n), ps)
                if not s.contains(reduced):
                    continue
                ok = s.contains(target)
                d1.record(None if ok else _ce(
                    "D1", "head beta expansion left S",
                    head=head, N=n, P=ps, target=target))

    # D2: head-variable spines over BB land in S
    d2 = report.outcome("D2")
    for seq in _seq_blocks(bb_pool, seq_len):
        if d2.instances >= max_instances:
            break
        for x in list(lam_pool(bounds.lam_pool)) + [LamVar("q0")]:
            t = apply_seq(Var(x), seq)
            if not is_typable(t):
                continue
            ok = s.contains(t)
            d2.record(None if ok else _ce(
                "D2", "typable spine over BB missed S", x=x.name, args=seq))

    # D3 via the orthogonal characterization
    d3 = report.outcome("D3")
    orth = compute_orthogonal(s, bb, bounds, seq_len, seq_elem_cxty)
    report.meta["orthogonal_size"] = len(orth)
    arrow = seq_arrow_set(orth, bb)
    for t in frag[:d3_sample]:
        lhs = s.contains(t)
        rhs = arrow.contains(t)
        ok = lhs == rhs
        d3.record(None if ok else _ce(
            "D3", f"S and (S-orthogonal ~> BB) disagree: S={lhs}, arrow={rhs}",
            M=t))
    return report


# ---------------------------------------------------------------------------
# Non-confluence search

def distinct_normal_forms(term: Term, rules: frozenset[str],
                          fuel: int = 5000) -> Optional[list[Term]]:
    """All normal forms reachable from `term`, deduplicated by alpha class;
    None when the budget runs out before the graph is exhausted."""
    seen = {canon(term)}
    queue = [term]
    nfs: dict = {}
    explored = 0
    while queue:
        cur = queue.pop()
        explored += 1
        if explored > fuel:
            return None
        succ = successors(cur, rules)
        if not succ:
            nfs.setdefault(canon(cur), cur)
            continue
        for _, _, nt in succ:
            k = canon(nt)
            if k not in seen:
                seen.add(k)
                queue.append(nt)
    return [nfs[k] for k in sorted(nfs)]


def find_non_confluent_witness(bounds: EnumBounds,
                               fuel: int = 5000) -> Optional[tuple[Term, list[Term]]]:
    """First enumerated typable term with at least two distinct FULL-normal
    forms, with the normal forms."""
    for t in enumerate_terms(bounds):
        if not is_typable(t):
            continue
        nfs = distinct_normal_forms(t, RULES_FULL, fuel)
        if nfs is not None and len(nfs) >= 2:
            return t, nfs
    return None


# ---------------------------------------------------------------------------
# Lemma-indexed property suites

class UnknownSuite(ValueError):
    pass


def _mu_var_cases(bounds: EnumBounds) -> list[MuVar]:
    """Mu variables to instantiate lemmas with: the pool (these occur free
    in enumerated terms) plus one fresh name."""
    return list(mu_pool(bounds.mu_pool)) + [MuVar("q9")]


def _suite_triva(bounds: EnumBounds, report: ConditionReport):
    frag = fragment(bounds)
    small = [t for t in frag if cxty(t) <= min(3, bounds.max_cxty)]
    pool_m = mu_pool(max(2, bounds.mu_pool))
    a = MuVar("q9")  # fresh: never occurs in enumerated terms
    combos = [(a, pool_m[0], pool_m[1]), (a, pool_m[0], pool_m[0]),
              (a, pool_m[1], pool_m[0])]
    x = lam_pool(1)[0]

    rename_eq = report.outcome("rename-commutes")
    translate_pair = report.outcome("translations-commute")
    for m in frag:
        for (aa, b, g) in combos:
            lhs = alpha_translate(rename_mu(m, b, g), aa)
            rhs = rename_mu(alpha_translate(m, aa), b, g)
            rename_eq.record(None if alpha_eq(lhs, rhs) else _ce(
                "rename-commutes", "translation/rename mismatch",
                M=m, a=aa.name, b=b.name, g=g.name))
        b = pool_m[0]
        lhs = alpha_translate(alpha_translate(m, a), b)
        rhs = alpha_translate(alpha_translate(m, b), a)
        translate_pair.record(None if alpha_eq(lhs, rhs) else _ce(
            "translations-commute", "nested translations differ",
            M=m, a=a.name, b=b.name))

    beta_eq = report.outcome("beta-subst-commutes")
    mu_eq = report.outcome("mu-subst-commutes")
    for m in frag:
        for n in small:
            lhs = alpha_translate(beta_subst(m, x, n), a)
            rhs = beta_subst(alpha_translate(m, a), x, alpha_translate(n, a))
            beta_eq.record(None if alpha_eq(lhs, rhs) else _ce(
                "beta-subst-commutes", "translation/beta-subst mismatch",
                M=m, N=n, x=x.name, a=a.name))
            b = pool_m[0]
            lhs = alpha_translate(mu_subst(m, b, "r", n), a)
            rhs = mu_subst(alpha_translate(m, a), b, "r", alpha_translate(n, a))
            mu_eq.record(None if alpha_eq(lhs, rhs) else _ce(
                "mu-subst-commutes", "translation/mu-subst mismatch",
                M=m, N=n, b=b.name, a=a.name))


def _suite_rename_nf(bounds: EnumBounds, report: ConditionReport):
    frag = fragment(bounds)
    pool_m = mu_pool(max(2, bounds.mu_pool))
    pairs = [(pool_m[0], pool_m[1]), (pool_m[0], MuVar("q9")),
             (pool_m[1], pool_m[0])]
    for rules, label in ((RULES_R, "R"), (RULES_R_PRIME, "R'")):
        out = report.outcome(f"rename-nf-{label}")
        for m in frag:
            before = is_normal_form(m, rules)
            for (va, vb) in pairs:
                renamed = rename_mu(m, va, vb)
                after = is_normal_form(renamed, rules)
                out.record(None if before == after else _ce(
                    f"rename-nf-{label}",
                    f"normality changed under renaming: {before} -> {after}",
                    M=m, a=va.name, b=vb.name))


def _suite_l_alpha(bounds: EnumBounds, report: ConditionReport):
    frag = fragment(bounds)
    out = report.outcome("translation-preserves-R'-nf")
    heads = report.outcome("head-constructor-transfer")
    for m in frag:
        if not is_normal_form(m, RULES_R_PRIME) or not is_typable(m):
            continue
        for a in _mu_var_cases(bounds):
            t = alpha_translate(m, a)
            out.record(None if is_normal_form(t, RULES_R_PRIME) else _ce(
                "translation-preserves-R'-nf", "translation created a redex",
                M=m, a=a.name, translated=t))
            ok = True
            if isinstance(t, Mu) and not isinstance(m, Mu):
                ok = False
            if isinstance(t, Lam) and not isinstance(m, (Lam, Bracket)):
                ok = False
            heads.record(None if ok else _ce(
                "head-constructor-transfer", "head constructor not transferred",
                M=m, a=a.name, translated=t))

    # the typability assumption is essential: fixed untypable witness
    wit = report.outcome("untypable-witness")
    m0 = parse_term("([a]\\x. y)z")
    t0 = alpha_translate(m0, MuVar("a"))
    ok = (is_normal_form(m0, RULES_R_PRIME)
          and not is_typable(m0)
          and not is_normal_form(t0, RULES_R_PRIME))
    wit.record(None if ok else _ce(
        "untypable-witness", "fixed witness did not behave as required",
        M=m0, translated=t0))


def _suite_bl_head(bounds: EnumBounds, report: ConditionReport):
    frag = fragment(bounds)
    small = [t for t in frag if cxty(t) <= min(3, bounds.max_cxty)]
    pool_m = mu_pool(max(2, bounds.mu_pool))
    a, b = pool_m[0], pool_m[1]
    subst_out = report.outcome("mu-subst-head")
    ren_out = report.outcome("rename-head")

    def head_of(t: Term):
        return type(t)

    for m in frag:
        for s in ("l", "r"):
            for n in small[: max(4, bounds.mu_pool)]:
                r = mu_subst(m, a, s, n)
                ok = head_of(r) not in (Lam, Mu, Bracket) or head_of(r) == head_of(m)
                subst_out.record(None if ok else _ce(
                    "mu-subst-head", "substitution invented a head constructor",
                    M=m, N=n, side=s))
        r = rename_mu(m, a, b)
        ok = head_of(r) not in (Lam, Mu, Bracket) or head_of(r) == head_of(m)
        ren_out.record(None if ok else _ce(
            "rename-head", "renaming invented a head constructor", M=m))


def _suite_propaga_sn(bounds: EnumBounds, report: ConditionReport):
    cap = min(bounds.max_cxty, 5)
    frag = [t for t in fragment(bounds) if cxty(t) <= cap]
    small = [t for t in frag if cxty(t) <= 3]
    x = lam_pool(1)[0]
    a = mu_pool(1)[0]
    memo: dict = {}
    beta_out = report.outcome("beta-subst-propagates-SN")
    mu_out = report.outcome("mu-subst-propagates-SN")
    for m in frag:
        for n in small:
            sub = beta_subst(m, x, n)
            if is_sn(sub, RULES_R, 50_000, memo).kind != SN:
                continue
            ok = is_sn(m, RULES_R, 50_000, memo).kind == SN
            beta_out.record(None if ok else _ce(
                "beta-subst-propagates-SN", "substituted term SN but original not",
                M=m, N=n, x=x.name))
            sub = mu_subst(m, a, "r", n)
            if is_sn(sub, RULES_R, 50_000, memo).kind != SN:
                continue
            ok = is_sn(m, RULES_R, 50_000, memo).kind == SN
            mu_out.record(None if ok else _ce(
                "mu-subst-propagates-SN", "substituted term SN but original not",
                M=m, N=n, a=a.name))


def _suite_eta_malpha(bounds: EnumBounds, report: ConditionReport):
    memo: dict = {}
    out = report.outcome("eta-monotone-under-translation")
    for m in fragment(bounds):
        if not is_typable(m):
            continue
        base = eta(m, RULES_R, memo=memo)
        if base.kind != "value":
            out.record(_ce("eta-monotone-under-translation",
                           f"typable term not SN under R ({base.kind})", M=m))
            continue
        for a in _mu_var_cases(bounds):
            t = alpha_translate(m, a)
            r = eta(t, RULES_R, memo=memo)
            ok = r.kind == "value" and r.value <= base.value
            out.record(None if ok else _ce(
                "eta-monotone-under-translation",
                f"eta({t}) = {r.value if r.kind == 'value' else r.kind} "
                f"> eta({m}) = {base.value}",
                M=m, a=a.name))


def _theta_transfer_ok(m: Term, n: Term) -> bool:
    if isinstance(n, Lam) and not isinstance(m, (Lam, Mu)):
        return False
    if isinstance(n, Mu) and not isinstance(m, Mu):
        return False
    return True


def _suite_theta_postpone(bounds: EnumBounds, report: ConditionReport,
                          count: int = 1000):
    out = report.outcome("theta-preserves-R'-nf")
    shrink = report.outcome("theta-shrinks")
    produced = 0
    for m in enumerate_terms(bounds):
        if produced >= count:
            break
        if not is_normal_form(m, RULES_R_PRIME):
            continue
        produced += 1
        for path, _ in iter_redexes(m, frozenset((THETA,))):
            n = step_at(m, path, THETA)
            out.record(None if (is_normal_form(n, RULES_R_PRIME)
                                and _theta_transfer_ok(m, n)) else _ce(
                "theta-preserves-R'-nf", "theta step broke R'-normality or "
                "the head transfer", M=m, N=n))
            shrink.record(None if cxty(n) < cxty(m) else _ce(
                "theta-shrinks", "theta step did not shrink the term", M=m, N=n))
    report.meta["terms"] = produced


_MU_RHO = frozenset((MU, RHO))


def _mu_rho_normalize(t: Term, cap: int = 10_000) -> Optional[Term]:
    """Innermost-first mu/rho rewriting; None if it runs away."""
    for _ in range(cap):
        cands = list(iter_redexes(t, _MU_RHO))
        if not cands:
            return t
        p, r = max(cands, key=lambda pr: (len(pr[0]), pr[0]))
        t = step_at(t, p, r)
    return None


def free_mu_vars(t: Term) -> set[MuVar]:
    return {v for v in free_vars(t) if isinstance(v, MuVar)}


def _residuals_localized(r: Term, rule: str, a: MuVar, n: Term,
                         arg_side: bool) -> bool:
    """Every residual redex of `rule` sits directly under a bracket on `a`,
    with the substituted term `n` in the expected position."""
    for path, _ in iter_redexes(r, frozenset((rule,))):
        if not path or path[-1] != 0:
            return False
        parent = subterm_at(r, path[:-1])
        if not (isinstance(parent, Bracket) and parent.mvar == a):
            return False
        node = subterm_at(r, path)
        payload = node.arg if arg_side else node.fn
        if not alpha_eq(payload, n):
            return False
    return True


def _suite_wn2lem1(bounds: EnumBounds, report: ConditionReport):
    frag = [t for t in fragment(bounds) if is_normal_form(t, RULES_R_PRIME)]
    small = [t for t in frag if cxty(t) <= min(4, bounds.max_cxty)]
    a = mu_pool(1)[0]
    p1 = report.outcome("right-subst-residuals")
    p2 = report.outcome("left-subst-residuals")
    no_mu_rules = frozenset((BETA, MU_PRIME, RHO, EPSILON))
    no_mu_prime_rules = frozenset((BETA, MU, RHO, EPSILON))
    # point 1: M a-clean, a not free in N (the renaming convention)
    for m in frag:
        if not is_alpha_clean(m, a):
            continue
        for n in small:
            if a in free_mu_vars(n):
                continue
            r = mu_subst(m, a, "r", n)
            ok = is_normal_form(r, no_mu_prime_rules) and is_alpha_clean(r, a)
            if ok:
                if isinstance(n, Mu):
                    ok = _residuals_localized(r, MU_PRIME, a, n, arg_side=True)
                else:
                    ok = is_normal_form(r, RULES_R_PRIME)
            p1.record(None if ok else _ce(
                "right-subst-residuals", "unexpected residual redexes",
                M=m, N=n, a=a.name, result=r))
    # point 2: N not lambda-headed
    for m in frag:
        for n in small:
            if isinstance(n, Lam) or a in free_mu_vars(n):
                continue
            r = mu_subst(m, a, "l", n)
            ok = is_normal_form(r, no_mu_rules)
            if ok:
                if isinstance(n, Mu):
                    ok = _residuals_localized(r, MU, a, n, arg_side=False)
                else:
                    ok = is_normal_form(r, RULES_R_PRIME)
            p2.record(None if ok else _ce(
                "left-subst-residuals", "unexpected residual redexes",
                M=m, N=n, a=a.name, result=r))


def _suite_wn2lem2(bounds: EnumBounds, report: ConditionReport):
    # quantified over typable inputs: with an untypable N such as ([a]x)x a
    # bracket can sit in function position and the mu/rho cleanup then
    # manufactures a beta redex, so the untyped reading of the property is
    # false; the head-spine strategy only ever substitutes into typable
    # normal forms
    frag = [t for t in fragment(bounds)
            if is_normal_form(t, RULES_R_PRIME) and is_typable(t)]
    small = [t for t in frag if cxty(t) <= min(4, bounds.max_cxty)]
    g = mu_pool(1)[0]
    out = report.outcome("left-subst-mu-rho-normalizes")
    for n in frag:
        for m in small:
            if isinstance(m, Lam) or g in free_mu_vars(m):
                continue
            if isinstance(m, Mu) and not is_alpha_clean(m.body, m.mvar):
                continue
            start = mu_subst(n, g, "l", m)
            p = _mu_rho_normalize(start)
            ok = (p is not None and is_normal_form(p, RULES_R_PRIME)
                  and is_alpha_clean(p, g)
                  and (isinstance(n, Mu) or not isinstance(p, Mu)))
            out.record(None if ok else _ce(
                "left-subst-mu-rho-normalizes",
                "mu/rho normalization missed the lemma's guarantees",
                N=n, M=m, g=g.name, result=p if p is not None else "fuel"))


def _suite_wn2lem3(bounds: EnumBounds, report: ConditionReport):
    # typable inputs only, as in the suite above
    frag = [t for t in fragment(bounds)
            if is_normal_form(t, RULES_R_PRIME) and is_typable(t)]
    mus = [t for t in frag if isinstance(t, Mu) and is_alpha_clean(t.body, t.mvar)]
    small = [t for t in frag if cxty(t) <= min(4, bounds.max_cxty)]
    pt1 = report.outcome("mu-step-on-clean-function")
    pt2 = report.outcome("mu-prime-step-then-cleanup")
    for p in mus:
        for q in small:
            if isinstance(q, Mu):
                continue
            r = step_at(App(p, q), (), MU)
            ok = (isinstance(r, Mu) and is_normal_form(r, RULES_R_PRIME)
                  and is_alpha_clean(r.body, r.mvar))
            pt1.record(None if ok else _ce(
                "mu-step-on-clean-function", "mu step left a redex or dirt",
                P=p, Q=q, result=r))
    for q in [t for t in small if isinstance(t, Mu)]:
        for p in small:
            if isinstance(p, Lam):
                continue
            if isinstance(p, Mu) and not is_alpha_clean(p.body, p.mvar):
                continue
            if q.mvar in free_mu_vars(p):
                continue
            step1 = step_at(App(p, q), (), MU_PRIME)
            r = _mu_rho_normalize(step1)
            ok = (r is not None and isinstance(r, Mu)
                  and is_normal_form(r, RULES_R_PRIME)
                  and is_alpha_clean(r.body, r.mvar))
            pt2.record(None if ok else _ce(
                "mu-prime-step-then-cleanup",
                "cleanup missed the lemma's guarantees",
                P=p, Q=q, result=r if r is not None else "fuel"))


def _suite_subject_reduction(bounds: EnumBounds, report: ConditionReport):
    out = report.outcome("subject-reduction")
    for m in fragment(bounds):
        if not is_typable(m):
            continue
        ctx, ty = principal_ground_judgment(m)
        for rule, path, m2 in successors(m, RULES_FULL):
            try:
                check_judgment(ctx, m2, ty)
                ok = True
            except TypingError:
                ok = False
            out.record(None if ok else _ce(
                "subject-reduction",
                f"reduct no longer checks at the same judgment ({rule})",
                M=m, reduct=m2, type=str(ty)))


def _suite_sn_r(bounds: EnumBounds, report: ConditionReport):
    out = report.outcome("typable-implies-SN-R")
    memo: dict = {}
    for m in fragment(bounds):
        if not is_typable(m):
            continue
        r = is_sn(m, RULES_R, memo=memo)
        out.record(None if r.kind == SN else _ce(
            "typable-implies-SN-R", f"verdict {r.kind}", M=m))


def _suite_wn_full(bounds: EnumBounds, report: ConditionReport):
    out = report.outcome("typable-implies-WN-FULL")
    terms: list[Term] = [t for t in fragment(bounds) if is_typable(t)]
    terms.append(cycle_term())
    for m in terms:
        tr = normalize_wn(m)
        ok = tr.status == NORMAL and not find_redexes(tr.final, RULES_FULL)
        out.record(None if ok else _ce(
            "typable-implies-WN-FULL",
            f"no FULL-normal form found (status {tr.status})", M=m))


def _suite_saturation_tt(bounds: EnumBounds, report: ConditionReport):
    inner = check_saturated(typable_set(), bounds)
    report.conditions.update(inner.conditions)
    report.meta.update(inner.meta)


def _suite_cycle_witness(bounds: EnumBounds, report: ConditionReport):
    out = report.outcome("cycle-witness")
    m = cycle_term()
    tr = reduce(m, RULES_FULL, "cycle-demo", fuel=16)
    ok = (tr.status == "cycle" and len(tr.steps) == 4
          and tr.rules() == [MU_PRIME, MU, RHO, THETA]
          and alpha_eq(tr.final, m))
    out.record(None if ok else _ce(
        "cycle-witness",
        f"schedule produced {tr.rules()} with status {tr.status}", M=m))


_SUITES = {
    "triva": _suite_triva,
    "rename-nf": _suite_rename_nf,
    "l-alpha": _suite_l_alpha,
    "bl-head": _suite_bl_head,
    "propaga-sn": _suite_propaga_sn,
    "eta-malpha": _suite_eta_malpha,
    "theta-postpone": _suite_theta_postpone,
    "wn2lem1": _suite_wn2lem1,
    "wn2lem2": _suite_wn2lem2,
    "wn2lem3": _suite_wn2lem3,
    "subject-reduction": _suite_subject_reduction,
    "sn-R": _suite_sn_r,
    "wn-full": _suite_wn_full,
    "saturation-Tt": _suite_saturation_tt,
    "cycle-witness": _suite_cycle_witness,
}

SUITE_NAMES = tuple(sorted(_SUITES))


def run_lemma_suite(name: str, bounds: EnumBounds, **kwargs) -> ConditionReport:
    """Run one named property suite over the bounded fragment."""
    if name not in _SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    report = ConditionReport(
        f"suite {name}",
        meta={"max_cxty": bounds.max_cxty, "lam_pool": bounds.lam_pool,
              "mu_pool": bounds.mu_pool},
    )
    _SUITES[name](bounds, report, **kwargs)
    return report
