"""Simply typed lambda-mu calculus (de Groote syntax): terms, typing, the
six reduction rules, normalization procedures, and a bounded-scale property
harness for the saturation conditions."""

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
    PathError,
    Term,
    Type,
    Var,
    alpha_eq,
    canon,
    cxty,
    free_vars,
    replace_at,
    set_fresh_seed,
    subterm_at,
    term_to_str,
    type_to_str,
)
from .parse import ParseError, parse_judgment, parse_ruleset, parse_term, parse_type
from .subst import (
    SimulSubst,
    alpha_translate,
    apply_seq,
    beta_subst,
    is_initial_subseq,
    mu_subst,
    mu_subst_seq,
    rename_mu,
    simul_subst,
)
from .typecheck import (
    Context,
    Derivation,
    Judgment,
    PrincipalTyping,
    TypingError,
    Untypable,
    check_judgment,
    infer_principal,
    is_instance,
    is_typable,
    replay_derivation,
)
from .reduction import (
    BETA,
    EPSILON,
    MU,
    MU_PRIME,
    NotARedex,
    RHO,
    RULES_FULL,
    RULES_R,
    RULES_R_PRIME,
    THETA,
    EtaResult,
    SNResult,
    Step,
    StrategyFailed,
    Trace,
    eta,
    find_redexes,
    head_spine_normalize,
    head_spine_trace,
    is_alpha_clean,
    is_normal_form,
    is_sn,
    normalize_wn,
    reduce,
    search_normal_form,
    step_at,
    theta_normalize,
)
from .harness import (
    ConditionReport,
    EnumBounds,
    SetPredicate,
    arrow_set,
    check_bb_saturated,
    check_saturated,
    compute_orthogonal,
    cycle_term,
    enumerate_terms,
    find_non_confluent_witness,
    run_lemma_suite,
    sn_set,
    typable_set,
    wn_set,
)

__all__ = [name for name in dir() if not name.startswith("_")]
