"""Exact symbolic computation for zero-totalised fields (meadows) with
formal partial derivatives: normal forms, generic equality, guarded-form
collapse, axiom verification, and pointwise evaluation oracles."""

from .normalform import (
    BadSet,
    Quot,
    RatNF,
    ZERO_NF,
    ZeroNF,
    decide_eq,
    is_ztc_zero,
    normalize,
    poly_to_term,
    ratnf_equal,
    ratnf_from_json,
    ratnf_to_json,
    ratnf_to_term,
    render_ratnf,
)
from .oracle import (
    PointCheckReport,
    UnsupportedTermError,
    eval_term,
    exhaustive_fp_check,
    random_point_check,
    ztf_inv,
)
from .poly import (
    DEFAULT_MONOMIAL_BUDGET,
    MonomialBudgetError,
    Polynomial,
    monomial_budget,
    set_monomial_budget,
)
from .smf import Guard, Level0, SMFNode, level, smf_collapse, smf_from_json, smf_to_json, smf_to_term
from .syntax import ParseError, SourceSpan, parse_equation, parse_term, print_term
from .terms import (
    HOLE,
    ONE,
    ZERO,
    Add,
    Context,
    Diff,
    Equation,
    Hole,
    Inv,
    MetaVar,
    Mul,
    Neg,
    One,
    Term,
    UnboundMetaVarError,
    Var,
    Zero,
    contains_diff,
    int_pow,
    metavars,
    node_count,
    numeral,
    plug,
    pseudo_unit,
    pseudo_zero,
    substitute,
    term_from_json,
    term_to_json,
    variables,
)
from .verify import (
    CheckReport,
    Failure,
    TermGen,
    check_cancellation,
    check_equation,
    check_propagation_units,
    check_propagation_zeros,
    de_axioms,
    derive_seed,
    derived_identities,
    full_catalog,
    inverse_law,
    md_axioms,
    run_full_suite,
)

__version__ = "0.1.0"
