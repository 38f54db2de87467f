import itertools

import pytest

from lambdamu.harness import EnumBounds, fragment
from lambdamu.parse import parse_term, parse_type
from lambdamu.syntax import (
    Arrow,
    Atom,
    BOT,
    Bracket,
    LamVar,
    Mu,
    MuVar,
    Var,
    free_vars,
)
from lambdamu.typecheck import (
    Context,
    Derivation,
    Judgment,
    TypingError,
    Untypable,
    check_judgment,
    infer_principal,
    is_instance,
    is_typable,
    principal_ground_judgment,
    replay_derivation,
)

x, y = LamVar("x"), LamVar("y")
a = MuVar("a")
p = parse_term
A, B = Atom("A"), Atom("B")


class TestCheckJudgment:
    def test_axiom(self):
        d = check_judgment(Context.make({x: A}), Var(x), A)
        assert d.rule == "ax" and replay_derivation(d)

    def test_paper_cycle_judgment(self):
        m = p("(#b. #a. [a][a] x)(#a. [a][a] x)")
        d = check_judgment(Context.make({x: BOT}), m, BOT)
        assert replay_derivation(d)

    def test_double_negation_eliminator(self):
        m = p("\\x. #a. (x)\\y. [a] y")
        ty = parse_type("((A -> _|_) -> _|_) -> A")
        d = check_judgment(Context.make(), m, ty)
        assert replay_derivation(d)
        # replay a hand-built derivation of the same judgment node by node
        ctx0 = Context.make()
        xty = parse_type("(A -> _|_) -> _|_")
        ctx1 = ctx0.bind_lam(x, xty)
        ctx2 = ctx1.bind_mu(a, A)
        ctx3 = ctx2.bind_lam(y, A)
        inner = Derivation(
            "arrow_e",
            Judgment(ctx2, p("(x)\\y. [a] y"), BOT),
            (
                Derivation("ax", Judgment(ctx2, Var(x), xty)),
                Derivation(
                    "arrow_i",
                    Judgment(ctx2, p("\\y. [a] y"), Arrow(A, BOT)),
                    (
                        Derivation(
                            "bot_i",
                            Judgment(ctx3, p("[a] y"), BOT),
                            (Derivation("ax", Judgment(ctx3, Var(y), A)),),
                        ),
                    ),
                ),
            ),
        )
        hand = Derivation(
            "arrow_i",
            Judgment(ctx0, m, ty),
            (
                Derivation(
                    "bot_e",
                    Judgment(ctx1, p("#a. (x)\\y. [a] y"), A),
                    (inner,),
                ),
            ),
        )
        assert replay_derivation(hand)

    def test_failure_carries_path_and_reason(self):
        with pytest.raises(TypingError) as e:
            check_judgment(Context.make({x: A}), p("#a. x"), A)
        assert e.value.reason == "mu-body-not-bottom"
        assert e.value.path == ()

    def test_unbound_variable(self):
        with pytest.raises(TypingError) as e:
            check_judgment(Context.make(), Var(x), A)
        assert e.value.reason == "unbound-variable"

    def test_unbound_mu_variable(self):
        with pytest.raises(TypingError) as e:
            check_judgment(Context.make({x: BOT}), p("[a] x"), BOT)
        assert e.value.reason == "unbound-mu-variable"

    def test_bracket_needs_matching_type(self):
        ctx = Context.make({x: A}, {a: B})
        with pytest.raises(TypingError) as e:
            check_judgment(ctx, p("[a] x"), BOT)
        assert e.value.reason == "bracket-mismatch"

    def test_goal_mismatch(self):
        with pytest.raises(TypingError):
            check_judgment(Context.make({x: A}), Var(x), B)

    def test_weakening(self):
        m = p("\\x. x")
        base = check_judgment(Context.make(), m, Arrow(A, A))
        extended = check_judgment(
            Context.make({y: B}, {a: BOT}), m, Arrow(A, A))
        assert replay_derivation(base) and replay_derivation(extended)


class TestInferPrincipal:
    def test_identity(self):
        pr = infer_principal(p("\\x. x"))
        assert pr.gamma == () and pr.theta == ()
        assert pr.type == Arrow(Atom("T0"), Atom("T0"))
        assert pr.metavars == {"T0"}

    def test_self_application_untypable(self):
        with pytest.raises(Untypable) as e:
            infer_principal(p("\\x. (x)x"))
        assert e.value.reason == "occurs-check"

    def test_applied_bracket_untypable(self):
        # a bracket has type bottom, never an arrow
        with pytest.raises(Untypable) as e:
            infer_principal(p("([a]x)y"))
        assert e.value.reason == "not-a-function"

    def test_mu_over_lambda_untypable(self):
        with pytest.raises(Untypable):
            infer_principal(p("#a. \\x. x"))

    def test_double_bracket_term(self):
        assert is_typable(p("#a. [a][a] x"))

    def test_double_negation_eliminator_type(self):
        pr = infer_principal(p("\\x. #a. (x)\\y. [a] y"))
        assert pr.type == parse_type("((T0 -> _|_) -> _|_) -> T0")

    def test_cycle_term_instance(self):
        pr = infer_principal(p("(#b. #a. [a][a] x)(#a. [a][a] x)"))
        assert is_instance(pr, {x: BOT}, {}, BOT)
        assert not is_instance(pr, {x: A}, {}, BOT)


class TestIsTypable:
    @pytest.mark.parametrize("text,expected", [
        ("#a. [a][a] x", True),
        ("#a. \\x. x", False),
        ("\\x. (x)x", False),
        ("\\x. x", True),
        ("#a. x", True),
    ])
    def test_cases(self, text, expected):
        assert is_typable(p(text)) is expected


def _ground_types(depth: int):
    base = [BOT, A, B]
    out = list(base)
    for _ in range(depth):
        out = out + [Arrow(l, r) for l in out for r in base] \
                  + [Arrow(l, r) for l in base for r in out]
        # dedup, keep deterministic order
        seen, uniq = set(), []
        for t in out:
            if t not in seen:
                seen.add(t)
                uniq.append(t)
        out = uniq
    return out


class TestPrincipality:
    def test_checker_output_replays_on_corpus(self, typable5):
        for t in typable5:
            ctx, ty = principal_ground_judgment(t)
            d = check_judgment(ctx, t, ty)
            assert replay_derivation(d)

    def test_soundness_every_instance_checks(self, typable5):
        # substituting ground types (arrow depth up to 3) into the principal
        # result always yields a derivable judgment
        deep = Arrow(Arrow(Arrow(A, B), BOT), A)
        for t in typable5[:150]:
            pr = infer_principal(t)
            for ground in (BOT, A, Arrow(A, BOT), deep):
                subst = {name: ground for name in pr.metavars}

                def apply(ty):
                    if isinstance(ty, Atom) and ty.name in subst:
                        return subst[ty.name]
                    if isinstance(ty, Arrow):
                        return Arrow(apply(ty.left), apply(ty.right))
                    return ty

                ctx = Context.make({v: apply(tt) for v, tt in pr.gamma},
                                   {v: apply(tt) for v, tt in pr.theta})
                d = check_judgment(ctx, t, apply(pr.type))
                assert replay_derivation(d)

    def test_completeness_ground_search_is_instance(self):
        # brute force: every derivable ground judgment over a small type
        # universe is an instance of the principal result
        universe = _ground_types(1)
        frag = [t for t in fragment(EnumBounds(max_cxty=4)) if is_typable(t)]
        checked = 0
        for t in frag:
            fls = sorted({v for v in free_vars(t) if isinstance(v, LamVar)},
                         key=lambda v: v.name)
            fms = sorted({v for v in free_vars(t) if isinstance(v, MuVar)},
                         key=lambda v: v.name)
            if len(fls) + len(fms) > 1:
                continue
            pr = infer_principal(t)
            for assignment in itertools.product(universe,
                                                repeat=len(fls) + len(fms) + 1):
                gamma = dict(zip(fls, assignment))
                theta = dict(zip(fms, assignment[len(fls):]))
                goal = assignment[-1]
                try:
                    check_judgment(Context.make(gamma, theta), t, goal)
                except TypingError:
                    continue
                checked += 1
                assert is_instance(pr, gamma, theta, goal), (
                    f"{t} ground judgment not an instance of {pr}")
        assert checked > 100


class TestReplayRejectsBrokenDerivations:
    def test_wrong_axiom(self):
        d = Derivation("ax", Judgment(Context.make({x: A}), Var(x), B))
        assert not replay_derivation(d)

    def test_mismatched_arrow_elim(self):
        ctx = Context.make({x: Arrow(A, B), y: B})
        d = Derivation(
            "arrow_e",
            Judgment(ctx, p("(x)y"), B),
            (
                Derivation("ax", Judgment(ctx, Var(x), Arrow(A, B))),
                Derivation("ax", Judgment(ctx, Var(y), B)),
            ),
        )
        assert not replay_derivation(d)

    def test_bracket_without_binding(self):
        ctx = Context.make({x: A})
        d = Derivation(
            "bot_i",
            Judgment(ctx, Bracket(a, Var(x)), BOT),
            (Derivation("ax", Judgment(ctx, Var(x), A)),),
        )
        assert not replay_derivation(d)


class TestSubjectReductionSpot:
    def test_every_full_reduct_rechecks(self, typable5):
        from lambdamu.reduction import RULES_FULL, successors
        for t in typable5:
            ctx, ty = principal_ground_judgment(t)
            for _, _, t2 in successors(t, RULES_FULL):
                d = check_judgment(ctx, t2, ty)
                assert replay_derivation(d)
