from hypothesis import given, strategies as st

from lambdamu.parse import parse_term
from lambdamu.subst import (
    SimulSubst,
    alpha_translate,
    apply_seq,
    beta_subst,
    is_initial_subseq,
    mu_subst,
    mu_subst_seq,
    prefixes,
    rename_mu,
    simul_subst,
)
from lambdamu.syntax import (
    App,
    Bracket,
    Lam,
    LamVar,
    Mu,
    MuVar,
    Var,
    alpha_eq,
    free_vars,
)

from test_syntax import terms

x, y, z = LamVar("x"), LamVar("y"), LamVar("z")
a, b, g = MuVar("a"), MuVar("b"), MuVar("g")
p = parse_term


class TestBetaSubst:
    def test_variable(self):
        assert beta_subst(Var(x), x, Var(y)) == Var(y)

    def test_bound_occurrence_untouched(self):
        assert beta_subst(p("\\x. x"), x, Var(y)) == p("\\x. x")

    def test_capture_avoided(self):
        # substituting y for x under \y. forces the binder to move
        out = beta_subst(p("\\y. (x)y"), x, Var(y))
        assert alpha_eq(out, p("\\w. (y)w"))
        assert not alpha_eq(out, p("\\w. (w)w"))

    def test_mu_binder_capture_avoided(self):
        out = beta_subst(p("#a. [a] x"), x, p("[a] y"))
        assert alpha_eq(out, p("#b. [b]([a] y)"))

    @given(terms(), terms())
    def test_free_variable_flow(self, m, n):
        out = beta_subst(m, x, n)
        expected_upper = (free_vars(m) - {x}) | free_vars(n)
        assert free_vars(out) <= expected_upper
        if x in free_vars(m):
            assert free_vars(out) == expected_upper
        else:
            assert out == m


class TestMuSubst:
    def test_right(self):
        assert mu_subst(p("[a] x"), a, "r", Var(y)) == p("[a](x)y")

    def test_left(self):
        assert mu_subst(p("[a] x"), a, "l", Var(y)) == p("[a](y)x")

    def test_other_variable(self):
        assert mu_subst(p("[b] x"), a, "r", Var(y)) == p("[b] x")

    def test_recursion_into_body(self):
        assert mu_subst(p("[a][a] x"), a, "r", Var(y)) == p("[a]([a](x)y)y")

    def test_no_occurrence_identity(self):
        for t in (Var(x), p("\\x. x"), p("#b. [b] x")):
            assert mu_subst(t, a, "r", Var(y)) == t
            assert mu_subst(t, a, "l", Var(y)) == t

    def test_capture_of_payload_mu_var(self):
        # substituting a term with free b under #b. renames the binder
        out = mu_subst(p("#b. [a][b] x"), a, "r", p("[b] y"))
        assert alpha_eq(out, p("#g. [a]([g] x)([b] y)"))


class TestMuSubstSeq:
    def test_empty_sequence_identity(self):
        assert mu_subst_seq(p("[a] x"), a, ()) == p("[a] x")

    def test_two_elements(self):
        # oracle: compose single substitutions by hand
        one = mu_subst(p("[a] x"), a, "r", Var(y))
        two = mu_subst(one, a, "r", Var(z))
        seq = mu_subst_seq(p("[a] x"), a, (Var(y), Var(z)))
        assert seq == two == p("[a]((x)y)z")

    def test_no_bracket(self):
        assert mu_subst_seq(Var(x), a, (Var(y),)) == Var(x)


class TestRenameMu:
    def test_free_occurrence(self):
        assert rename_mu(p("[a] x"), a, b) == p("[b] x")

    def test_bound_untouched(self):
        assert rename_mu(p("#a. [a] x"), a, b) == p("#a. [a] x")

    def test_all_occurrences(self):
        assert rename_mu(p("[a][a] x"), a, b) == p("[b][b] x")

    def test_capture_avoided(self):
        out = rename_mu(p("#b. [a][b] x"), a, b)
        assert alpha_eq(out, p("#g. [b][g] x"))


class TestAlphaTranslate:
    def test_erases_bracket(self):
        assert alpha_translate(p("[a] x"), a) == Var(x)

    def test_keeps_other_brackets(self):
        assert alpha_translate(p("[b] x"), a) == p("[b] x")

    def test_under_binders(self):
        assert alpha_translate(p("#b. [a][b] x"), a) == p("#b. [b] x")

    def test_shadowed_binder_untouched(self):
        assert alpha_translate(p("#a. [a] x"), a) == p("#a. [a] x")


class TestSequences:
    def test_apply_seq(self):
        assert apply_seq(Var(x), ()) == Var(x)
        assert apply_seq(Var(x), (Var(y),)) == p("(x)y")
        assert apply_seq(Var(x), (Var(y), Var(z))) == p("((x)y)z")

    @given(terms(), st.lists(terms(), max_size=3), st.lists(terms(), max_size=3))
    def test_apply_seq_appends(self, m, ps, qs):
        assert apply_seq(m, ps + qs) == apply_seq(apply_seq(m, ps), qs)

    def test_is_initial_subseq(self):
        seq = (Var(y), Var(z))
        assert is_initial_subseq((), seq)
        assert is_initial_subseq((Var(y),), seq)
        assert not is_initial_subseq((Var(z),), seq)
        assert is_initial_subseq((p("\\x. x"),), (p("\\y. y"), Var(z)))

    def test_prefixes(self):
        assert list(prefixes((Var(y), Var(z)))) == [
            (), (Var(y),), (Var(y), Var(z))]


class TestSimulSubst:
    def test_lambda_only(self):
        out = simul_subst(p("(x)y"), SimulSubst(lam={x: Var(z)}))
        assert out == p("(z)y")

    def test_single_mu_matches_seq_subst(self):
        out = simul_subst(p("[a] x"), SimulSubst(mu={a: (Var(y),)}))
        assert out == p("[a](x)y") == mu_subst_seq(p("[a] x"), a, (Var(y),))

    def test_both_namespaces_simultaneous(self):
        out = simul_subst(p("[a](x)x"),
                          SimulSubst(lam={x: Var(y)}, mu={a: (Var(z),)}))
        assert out == p("[a]((y)y)z")

    def test_simultaneity_not_iteration(self):
        # mapping x to a term that mentions y while y is also being replaced
        out = simul_subst(p("(x)y"), SimulSubst(lam={x: Var(y), y: Var(z)}))
        assert out == p("(y)z")

    def test_shadowed_binders_skip(self):
        out = simul_subst(p("\\x. (x)y"), SimulSubst(lam={x: Var(z)}))
        assert alpha_eq(out, p("\\x. (x)y"))


class TestTranslationLemma:
    """Commutation of alpha-translation with renaming and substitution,
    instantiated with a fresh first variable as the paper requires."""

    def test_instances(self, bounds5):
        from lambdamu.harness import fragment
        fresh = MuVar("q")
        small = [t for t in fragment(bounds5)][:80]
        for m in small:
            lhs = alpha_translate(rename_mu(m, a, b), fresh)
            rhs = rename_mu(alpha_translate(m, fresh), a, b)
            assert alpha_eq(lhs, rhs)
            assert alpha_eq(
                alpha_translate(alpha_translate(m, fresh), a),
                alpha_translate(alpha_translate(m, a), fresh))
        for m in small:
            for n in (Var(y), p("[a] y"), p("#b. [a] y")):
                lhs = alpha_translate(beta_subst(m, x, n), fresh)
                rhs = beta_subst(alpha_translate(m, fresh), x,
                                 alpha_translate(n, fresh))
                assert alpha_eq(lhs, rhs)
                lhs = alpha_translate(mu_subst(m, a, "r", n), fresh)
                rhs = mu_subst(alpha_translate(m, fresh), a, "r",
                               alpha_translate(n, fresh))
                assert alpha_eq(lhs, rhs)
