import pytest
from hypothesis import given

from lambdamu.harness import EnumBounds, enumerate_terms
from lambdamu.parse import ParseError, parse_ruleset, parse_judgment, parse_term, parse_term_seq, parse_type
from lambdamu.syntax import (
    App,
    Arrow,
    Atom,
    BOT,
    Bracket,
    Lam,
    LamVar,
    Mu,
    MuVar,
    Var,
    alpha_eq,
    term_to_str,
)
from lambdamu.reduction import RULES_FULL, RULES_R, RULES_R_PRIME

from test_syntax import terms

x, y = LamVar("x"), LamVar("y")
a, b = MuVar("a"), MuVar("b")


class TestTermGrammar:
    def test_lambda(self):
        assert parse_term("\\x. x") == Lam(x, Var(x))

    def test_mu_bracket(self):
        assert parse_term("#a. [a] x") == Mu(a, Bracket(a, Var(x)))

    def test_krivine_application(self):
        assert parse_term("(#b. #a. [a][a] x) y") == App(
            Mu(b, Mu(a, Bracket(a, Bracket(a, Var(x))))), Var(y))

    def test_left_nesting(self):
        assert parse_term("((x)y)x") == App(App(Var(x), Var(y)), Var(x))

    def test_greedy_argument(self):
        assert parse_term("(x)(y)x") == App(Var(x), App(Var(y), Var(x)))

    def test_parenthesized_term(self):
        assert parse_term("(x)") == Var(x)
        assert parse_term("((\\x. x))") == Lam(x, Var(x))

    def test_unicode_aliases(self):
        assert parse_term("λx. x") == Lam(x, Var(x))
        assert parse_term("μa. [a] x") == Mu(a, Bracket(a, Var(x)))

    def test_juxtaposition_rejected(self):
        with pytest.raises(ParseError):
            parse_term("x y")

    def test_error_carries_position_and_expected(self):
        with pytest.raises(ParseError) as e:
            parse_term("\\x x")
        assert e.value.line == 1
        assert e.value.col == 4
        assert "DOT" in e.value.expected

    def test_unbalanced(self):
        with pytest.raises(ParseError):
            parse_term("(x")
        with pytest.raises(ParseError):
            parse_term("[a x")


class TestRoundTrip:
    @given(terms())
    def test_random_terms(self, t):
        assert parse_term(term_to_str(t)) == t

    def test_enumerated_corpus(self):
        for t in enumerate_terms(EnumBounds(max_cxty=5, lam_pool=2, mu_pool=2)):
            back = parse_term(term_to_str(t))
            assert back == t and alpha_eq(back, t)


class TestTypeGrammar:
    def test_atoms_and_bottom(self):
        assert parse_type("A") == Atom("A")
        assert parse_type("_|_") == BOT
        assert parse_type("⊥") == BOT

    def test_right_associative(self):
        assert parse_type("A -> B -> C") == Arrow(
            Atom("A"), Arrow(Atom("B"), Atom("C")))
        assert parse_type("(A -> B) -> C") == Arrow(
            Arrow(Atom("A"), Atom("B")), Atom("C"))

    def test_lowercase_atom_rejected(self):
        with pytest.raises(ParseError):
            parse_type("a")


class TestJudgments:
    def test_full_judgment(self):
        gamma, theta, term, ty = parse_judgment(
            "x:A, y:B |- (x)y : B ; a:C, b:_|_")
        assert gamma == {x: Atom("A"), y: Atom("B")}
        assert theta == {a: Atom("C"), b: BOT}
        assert term == App(Var(x), Var(y))
        assert ty == Atom("B")

    def test_empty_contexts(self):
        gamma, theta, term, ty = parse_judgment("|- \\x. x : A -> A")
        assert gamma == {} and theta == {}

    def test_duplicate_binding_rejected(self):
        with pytest.raises(ParseError):
            parse_judgment("x:A, x:B |- x : A")


class TestSequencesAndRules:
    def test_term_seq(self):
        assert parse_term_seq("x ; y") == (Var(x), Var(y))
        assert parse_term_seq("") == ()

    def test_ruleset_letters(self):
        assert parse_ruleset("bmMrte") == RULES_FULL
        assert parse_ruleset("bmrte") == RULES_R
        assert parse_ruleset("bmMre") == RULES_R_PRIME

    def test_bad_letter(self):
        with pytest.raises(ValueError):
            parse_ruleset("q")
        with pytest.raises(ValueError):
            parse_ruleset("")
