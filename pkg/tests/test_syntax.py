import pytest
from hypothesis import given, strategies as st

from lambdamu.syntax import (
    App,
    Bracket,
    Lam,
    LamVar,
    Mu,
    MuVar,
    NameSupply,
    PathError,
    Var,
    alpha_eq,
    canon,
    cxty,
    free_vars,
    replace_at,
    subterm_at,
    subterms,
    term_to_str,
)

x, y = LamVar("x"), LamVar("y")
a, b = MuVar("a"), MuVar("b")


def lam_vars():
    return st.builds(LamVar, st.sampled_from(["x", "y", "z"]))


def mu_vars():
    return st.builds(MuVar, st.sampled_from(["a", "b", "g"]))


def terms():
    return st.recursive(
        st.builds(Var, lam_vars()),
        lambda kids: st.one_of(
            st.builds(Lam, lam_vars(), kids),
            st.builds(App, kids, kids),
            st.builds(Bracket, mu_vars(), kids),
            st.builds(Mu, mu_vars(), kids),
        ),
        max_leaves=20,
    )


class TestCxty:
    def test_variable(self):
        assert cxty(Var(x)) == 1

    def test_abstraction(self):
        assert cxty(Lam(x, Var(x))) == 2

    def test_application(self):
        assert cxty(App(Var(x), Var(y))) == 3

    def test_mu_and_bracket(self):
        assert cxty(Mu(a, Bracket(a, Var(x)))) == 3

    @given(terms())
    def test_positive_and_decreasing(self, t):
        assert cxty(t) >= 1
        for path, sub in subterms(t):
            if path:
                assert cxty(sub) < cxty(t)


class TestFreeVars:
    def test_lam_binds(self):
        assert free_vars(Lam(x, App(Var(x), Var(y)))) == {y}

    def test_mu_binds(self):
        assert free_vars(Mu(a, Bracket(a, Var(x)))) == {x}

    def test_bracket_does_not_bind(self):
        assert free_vars(Bracket(a, Var(x))) == {a, x}

    def test_namespaces_disjoint(self):
        assert LamVar("a") != MuVar("a")
        assert free_vars(Bracket(MuVar("x"), Var(LamVar("x")))) == {
            MuVar("x"), LamVar("x")}


class TestAlphaEq:
    def test_bound_lambda_renaming(self):
        assert alpha_eq(Lam(x, Var(x)), Lam(y, Var(y)))

    def test_bound_mu_renaming(self):
        assert alpha_eq(Mu(a, Bracket(a, Var(x))), Mu(b, Bracket(b, Var(x))))

    def test_free_mu_variables_matter(self):
        assert not alpha_eq(Bracket(a, Var(x)), Bracket(b, Var(x)))

    def test_free_lambda_variables_matter(self):
        assert not alpha_eq(Var(x), Var(y))

    def test_shadowing(self):
        assert alpha_eq(Lam(x, Lam(x, Var(x))), Lam(y, Lam(x, Var(x))))
        assert not alpha_eq(Lam(x, Lam(y, Var(x))), Lam(x, Lam(y, Var(y))))

    @given(terms())
    def test_reflexive(self, t):
        assert alpha_eq(t, t)

    @given(terms(), terms())
    def test_symmetric(self, t, u):
        assert alpha_eq(t, u) == alpha_eq(u, t)

    @given(terms(), terms())
    def test_equal_classes_share_measures(self, t, u):
        if alpha_eq(t, u):
            assert cxty(t) == cxty(u)
            assert free_vars(t) == free_vars(u)

    @given(terms(), mu_vars())
    def test_invariant_under_bound_mu_rename(self, t, fresh):
        # renaming the binder of any mu abstraction keeps the class
        from lambdamu.subst import rename_mu
        for path, sub in subterms(t):
            if isinstance(sub, Mu) and fresh not in free_vars(sub.body):
                renamed = replace_at(
                    t, path, Mu(fresh, rename_mu(sub.body, sub.mvar, fresh)))
                assert alpha_eq(t, renamed)
                assert free_vars(renamed) == free_vars(t)


class TestPaths:
    def test_subterm_at_argument(self):
        m = App(Var(x), Var(y))
        assert subterm_at(m, (1,)) == Var(y)
        assert subterm_at(m, ()) == m

    def test_replace_at(self):
        assert replace_at(Lam(x, Var(x)), (0,), Var(y)) == Lam(x, Var(y))

    def test_path_errors(self):
        with pytest.raises(PathError):
            subterm_at(Var(x), (0,))
        with pytest.raises(PathError):
            subterm_at(Lam(x, Var(x)), (1,))
        with pytest.raises(PathError):
            replace_at(App(Var(x), Var(y)), (2,), Var(x))

    @given(terms())
    def test_every_subterm_resolves(self, t):
        for path, sub in subterms(t):
            assert subterm_at(t, path) == sub
            assert replace_at(t, path, sub) == t


class TestPrinting:
    def test_examples(self):
        assert term_to_str(Lam(x, Var(x))) == "\\x. x"
        assert term_to_str(Mu(a, Bracket(a, Var(x)))) == "#a. [a] x"
        assert term_to_str(App(Var(x), Var(y))) == "(x)y"
        assert term_to_str(App(App(Var(x), Var(y)), Var(x))) == "((x)y)x"


class TestNameSupply:
    def test_avoids_given_names(self):
        s = NameSupply()
        avoid = {f"x_{i}" for i in range(20)}
        v = s.fresh_lam("x", avoid)
        assert v.name not in avoid

    def test_reset_reproduces(self):
        s = NameSupply()
        first = s.fresh_mu("a").name
        s.reset()
        assert s.fresh_mu("a").name == first
