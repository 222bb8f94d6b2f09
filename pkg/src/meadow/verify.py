"""Randomized machine checks of the axioms and laws against the model.

Every named equation is checked by drawing substitutions for its
metavariables and deciding generic equality of the two instantiated
sides.  The substitution pool always exercises the degenerate elements
(0, 1, fresh variables, a term that normalizes to 0, a pseudo unit)
before random terms: the generic all-variables instance alone would
wrongly accept field-only laws such as x * x^-1 = 1, which fail exactly
at 0 under a total inverse.

All generation is driven by seeded PRNGs, so identical (seed, nvars,
trials) settings reproduce identical reports.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from random import Random
from typing import Iterable, Mapping, Sequence

from .normalform import (
    RatNF,
    ZeroNF,
    is_ztc_zero,
    normalize,
    ratnf_equal,
    render_ratnf,
)
from .poly import MonomialBudgetError
from .syntax import parse_equation, print_term
from .terms import (
    HOLE,
    ONE,
    ZERO,
    Add,
    Context,
    Diff,
    Equation,
    Inv,
    Mul,
    Neg,
    Term,
    Var,
    numeral,
    plug,
    pseudo_unit,
    pseudo_zero,
    substitute,
)

DEFAULT_TRIALS = 200
DEFAULT_MAX_DEPTH = 5

# Relative odds of each constructor when growing a random term.  The diff
# weight is additionally halved per tree level, which keeps derivatives
# shallow and cross-multiplication sizes manageable.
DEFAULT_NODE_WEIGHTS: Mapping[str, float] = {
    "zero": 1.0,
    "one": 2.0,
    "var": 5.0,
    "numeral": 2.0,
    "add": 5.0,
    "mul": 5.0,
    "neg": 2.0,
    "inv": 2.0,
    "diff": 2.0,
}

# Relative odds of each substitution-pool category for a metavariable.
DEFAULT_POOL_POLICY: Mapping[str, float] = {
    "zero": 1.0,
    "one": 1.0,
    "variable": 2.0,
    "null": 1.0,
    "pseudo-unit": 1.0,
    "random": 5.0,
}

_LEAVES = ("zero", "one", "var", "numeral")


def derive_seed(seed: int, label: str) -> int:
    """Stable per-label 64-bit seed, independent of hash randomization."""
    return (seed * 0x9E3779B97F4A7C15 + zlib.crc32(label.encode())) % 2**64


class TermGen:
    """Deterministic random generator for terms, contexts and substitutions."""

    def __init__(
        self,
        nvars: int,
        seed: int = 0,
        max_depth: int = DEFAULT_MAX_DEPTH,
        weights: Mapping[str, float] | None = None,
        pool_policy: Mapping[str, float] | None = None,
    ):
        if nvars < 1:
            raise ValueError("nvars must be at least 1")
        self.nvars = nvars
        self.seed = seed
        self.max_depth = max_depth
        self.weights = dict(DEFAULT_NODE_WEIGHTS if weights is None else weights)
        self.pool_policy = dict(
            DEFAULT_POOL_POLICY if pool_policy is None else pool_policy
        )
        self.rng = Random(seed)

    def _pick(self, options: Sequence[str], depth: int) -> str:
        weights = []
        for name in options:
            w = self.weights.get(name, 0.0)
            if name == "diff":
                w *= 0.5**depth
            weights.append(w)
        if not any(weights):
            return "var"
        return self.rng.choices(options, weights)[0]

    def term(self, depth: int = 0) -> Term:
        options = _LEAVES if depth >= self.max_depth else tuple(self.weights)
        kind = self._pick(options, depth)
        rng = self.rng
        if kind == "zero":
            return ZERO
        if kind == "one":
            return ONE
        if kind == "var":
            return Var(rng.randint(1, self.nvars))
        if kind == "numeral":
            return numeral(rng.choice((-3, -2, 2, 3, 5)))
        if kind == "add":
            return Add(self.term(depth + 1), self.term(depth + 1))
        if kind == "mul":
            return Mul(self.term(depth + 1), self.term(depth + 1))
        if kind == "neg":
            return Neg(self.term(depth + 1))
        if kind == "inv":
            return Inv(self.term(depth + 1))
        return Diff(rng.randint(1, self.nvars), self.term(depth + 1))

    def context(self) -> Context:
        """A random one-hole context over the full signature."""

        def body(depth: int) -> Term:
            if depth >= self.max_depth or self.rng.random() < 0.25:
                return HOLE
            kind = self._pick(("add", "mul", "neg", "inv", "diff"), depth)
            if kind in ("add", "mul"):
                other = self.term(depth + 1)
                inner = body(depth + 1)
                left = self.rng.random() < 0.5
                pair = (inner, other) if left else (other, inner)
                return Add(*pair) if kind == "add" else Mul(*pair)
            if kind == "neg":
                return Neg(body(depth + 1))
            if kind == "inv":
                return Inv(body(depth + 1))
            return Diff(self.rng.randint(1, self.nvars), body(depth + 1))

        return Context(body(0))

    def null_term(self) -> Term:
        """A term that normalizes to 0 without being the constant 0."""
        if self.rng.random() < 0.5:
            v = Var(self.rng.randint(1, self.nvars))
            return Add(v, Neg(v))
        return pseudo_zero(Var(self.rng.randint(1, self.nvars)))

    def nonzero_term(self, attempts: int = 200) -> Term:
        """A random term that does not normalize to 0."""
        for _ in range(attempts):
            t = self.term()
            try:
                if not is_ztc_zero(t, self.nvars):
                    return t
            except MonomialBudgetError:
                continue
        return ONE

    def generic_substitution(self, names: Sequence[str]) -> dict[str, Term]:
        """Each metavariable to its own formal variable (cycled past nvars)."""
        return {
            name: Var(k % self.nvars + 1) for k, name in enumerate(sorted(names))
        }

    def draw_substitution(self, names: Sequence[str], trial: int) -> dict[str, Term]:
        """Substitution for the given trial number.

        Trial 0 is the generic instance; trials 1..4 force every
        metavariable to 0, 1, a null term and a pseudo unit respectively;
        later trials mix pool categories independently per metavariable.
        """
        names = sorted(names)
        if trial == 0:
            return self.generic_substitution(names)
        if trial == 1:
            return {name: ZERO for name in names}
        if trial == 2:
            return {name: ONE for name in names}
        if trial == 3:
            fixed = Add(Var(1), Neg(Var(1)))
            return {name: fixed for name in names}
        if trial == 4:
            return {name: pseudo_unit(Var(1)) for name in names}
        subst = {}
        categories = list(self.pool_policy)
        weights = list(self.pool_policy.values())
        for name in names:
            kind = self.rng.choices(categories, weights)[0]
            if kind == "zero":
                subst[name] = ZERO
            elif kind == "one":
                subst[name] = ONE
            elif kind == "variable":
                subst[name] = Var(self.rng.randint(1, self.nvars))
            elif kind == "null":
                subst[name] = self.null_term()
            elif kind == "pseudo-unit":
                subst[name] = pseudo_unit(Var(self.rng.randint(1, self.nvars)))
            else:
                subst[name] = self.term()
        return subst


@dataclass(frozen=True, slots=True)
class Failure:
    trial: int
    subst: tuple[tuple[str, str], ...]
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "subst": dict(self.subst),
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass(frozen=True, slots=True)
class CheckReport:
    name: str
    mode: str  # "symbolic" for deterministic checks, "randomized" otherwise
    trials: int
    failures: tuple[Failure, ...]
    seed: int
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "trials": self.trials,
            "failures": [f.to_json() for f in self.failures],
            "seed": self.seed,
            "skipped": self.skipped,
            "verdict": "pass" if self.passed else "fail",
        }


def _render_subst(subst: Mapping[str, Term]) -> tuple[tuple[str, str], ...]:
    return tuple((name, print_term(t)) for name, t in sorted(subst.items()))


_MD_AXIOMS = (
    ("add-assoc", "(x + y) + z = x + (y + z)"),
    ("add-comm", "x + y = y + x"),
    ("add-zero", "x + 0 = x"),
    ("add-neg", "x + -x = 0"),
    ("mul-assoc", "(x * y) * z = x * (y * z)"),
    ("mul-comm", "x * y = y * x"),
    ("mul-one", "1 * x = x"),
    ("distrib", "x * (y + z) = x * y + x * z"),
    ("Refl", "(x^-1)^-1 = x"),
    ("RIL", "x * (x * x^-1) = x"),
)

_DERIVED_IDENTITIES = (
    ("inv-zero", "0^-1 = 0"),
    ("mul-zero", "0 * x = 0"),
    ("inv-neg", "(-x)^-1 = -(x^-1)"),
    ("neg-mul", "x * -y = -(x * y)"),
    ("inv-mul", "(x * y)^-1 = x^-1 * y^-1"),
    ("neg-neg", "-(-x) = x"),
    ("inverse-derivative", "D[1](x^-1) = -(x^-2) * D[1](x)"),
    ("unit-through-diff", "D[1]((t * t^-1) * r) = (t * t^-1) * D[1](r)"),
)


def md_axioms(nvars: int) -> list[Equation]:
    """The ten meadow axioms: commutative ring with unit, reflection of the
    inverse, and the restricted inverse law."""
    return [parse_equation(src, nvars, name) for name, src in _MD_AXIOMS]


def de_axioms(nvars: int) -> list[Equation]:
    """Derivation axioms: additivity, the product rule, vanishing of
    D(x * x^-1), and the variable rules D_i(X_i) = 1, D_i(X_j) = 0."""
    eqs = [
        parse_equation("D[1](x + y) = D[1](x) + D[1](y)", nvars, "D1"),
        parse_equation("D[1](x * y) = D[1](x) * y + x * D[1](y)", nvars, "D2"),
        parse_equation("D[1](x * x^-1) = 0", nvars, "D3"),
    ]
    for i in range(1, nvars + 1):
        eqs.append(parse_equation(f"D[{i}](X{i}) = 1", nvars, f"D4[{i}]"))
    for i in range(1, nvars + 1):
        for j in range(1, nvars + 1):
            if i != j:
                eqs.append(parse_equation(f"D[{i}](X{j}) = 0", nvars, f"D5[{i},{j}]"))
    return eqs


def derived_identities(nvars: int) -> list[Equation]:
    """Consequences of the axioms, including the derivative of an inverse
    and the pseudo-unit factoring law for derivatives."""
    return [parse_equation(src, nvars, name) for name, src in _DERIVED_IDENTITIES]


def inverse_law(nvars: int) -> Equation:
    """x * x^-1 = 1: valid in fields, refuted at x = 0 by a total inverse.
    Deliberately not part of any catalog; useful as a negative control."""
    return parse_equation("x * x^-1 = 1", nvars, "inverse-law")


def full_catalog(nvars: int) -> list[Equation]:
    return md_axioms(nvars) + de_axioms(nvars) + derived_identities(nvars)


def check_equation(eq: Equation, gen: TermGen, trials: int = DEFAULT_TRIALS) -> CheckReport:
    """Check one equation over the substitution pool.

    Ground equations are decided by a single symbolic check.  Budget
    overruns count as skipped trials, never as failures.
    """
    names = sorted(eq.metavars())
    if not names:
        effective, mode = 1, "symbolic"
    else:
        effective, mode = trials, "randomized"
    failures = []
    skipped = 0
    for trial in range(effective):
        subst = gen.draw_substitution(names, trial)
        try:
            lhs_nf, _ = normalize(substitute(eq.lhs, subst), gen.nvars)
            rhs_nf, _ = normalize(substitute(eq.rhs, subst), gen.nvars)
        except MonomialBudgetError:
            skipped += 1
            continue
        if not ratnf_equal(lhs_nf, rhs_nf):
            failures.append(
                Failure(trial, _render_subst(subst), render_ratnf(lhs_nf), render_ratnf(rhs_nf))
            )
    return CheckReport(eq.name, mode, effective, tuple(failures), gen.seed, skipped)


def _check_propagation(
    name: str, wrap, gen: TermGen, trials: int
) -> CheckReport:
    failures = []
    skipped = 0
    for trial in range(trials):
        t = gen.term()
        r = gen.term()
        context = gen.context()
        guard = wrap(t)
        lhs = Mul(guard, plug(context, r))
        rhs = Mul(guard, plug(context, Mul(guard, r)))
        try:
            lhs_nf, _ = normalize(lhs, gen.nvars)
            rhs_nf, _ = normalize(rhs, gen.nvars)
        except MonomialBudgetError:
            skipped += 1
            continue
        if not ratnf_equal(lhs_nf, rhs_nf):
            subst = (
                ("C", print_term(context.body)),
                ("r", print_term(r)),
                ("t", print_term(t)),
            )
            failures.append(Failure(trial, subst, render_ratnf(lhs_nf), render_ratnf(rhs_nf)))
    return CheckReport(name, "randomized", trials, tuple(failures), gen.seed, skipped)


def check_propagation_units(gen: TermGen, trials: int = DEFAULT_TRIALS) -> CheckReport:
    """1_t * C[r] = 1_t * C[1_t * r] for random t, r and contexts C."""
    return _check_propagation("unit-propagation", pseudo_unit, gen, trials)


def check_propagation_zeros(gen: TermGen, trials: int = DEFAULT_TRIALS) -> CheckReport:
    """0_t * C[r] = 0_t * C[0_t * r] for random t, r and contexts C."""
    return _check_propagation("zero-propagation", pseudo_zero, gen, trials)


def check_cancellation(gen: TermGen, trials: int = DEFAULT_TRIALS) -> CheckReport:
    """The no-zero-divisors laws of the model.

    Per trial, draw t not normalizing to 0 and check t * t^-1 = 1; then
    build u, v with t * u = t * v by construction (v is u plus a multiple
    of the pseudo zero of t) and check that u = v follows.
    """
    failures = []
    skipped = 0
    one_nf, _ = normalize(ONE, gen.nvars)
    for trial in range(trials):
        t = gen.nonzero_term()
        u = gen.term()
        if gen.rng.random() < 0.5:
            v = u
        else:
            v = Add(u, Mul(gen.term(), pseudo_zero(t)))
        try:
            il_nf, _ = normalize(Mul(t, Inv(t)), gen.nvars)
            tu_nf, _ = normalize(Mul(t, u), gen.nvars)
            tv_nf, _ = normalize(Mul(t, v), gen.nvars)
            u_nf, _ = normalize(u, gen.nvars)
            v_nf, _ = normalize(v, gen.nvars)
        except MonomialBudgetError:
            skipped += 1
            continue
        subst = (("t", print_term(t)), ("u", print_term(u)), ("v", print_term(v)))
        if not ratnf_equal(il_nf, one_nf):
            failures.append(Failure(trial, subst, render_ratnf(il_nf), "1 / 1"))
            continue
        if not ratnf_equal(tu_nf, tv_nf):
            skipped += 1  # premise not satisfied; nothing to conclude
            continue
        if not ratnf_equal(u_nf, v_nf):
            failures.append(Failure(trial, subst, render_ratnf(u_nf), render_ratnf(v_nf)))
    return CheckReport("cancellation", "randomized", trials, tuple(failures), gen.seed, skipped)


def run_full_suite(
    nvars: int,
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> list[CheckReport]:
    """One report per catalog entry, then the conditional property checks."""
    reports = []
    for eq in full_catalog(nvars):
        gen = TermGen(nvars, derive_seed(seed, eq.name), max_depth)
        reports.append(check_equation(eq, gen, trials))
    for name, check in (
        ("unit-propagation", check_propagation_units),
        ("zero-propagation", check_propagation_zeros),
        ("cancellation", check_cancellation),
    ):
        gen = TermGen(nvars, derive_seed(seed, name), max_depth)
        reports.append(check(gen, trials))
    return reports
