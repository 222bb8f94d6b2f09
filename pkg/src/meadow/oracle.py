"""Independent pointwise oracles for cross-validating generic equality.

Three views of the same terms:

  * eval_term: exact zero-totalised evaluation at a rational point, with
    0^-1 = 0.  This is honest pointwise semantics and deliberately differs
    from generic equality at bad points: X1 * X1^-1 evaluates to 0 at
    X1 = 0 although it is generically 1.
  * random_point_check: samples rational points away from the zero sets of
    both terms' bad-set polynomials and compares the values of their
    normal forms there.  Arithmetic is exact, so on the sampled locus
    agreement is exact as well, and a single disagreement at a valid point
    refutes generic equality outright.
  * exhaustive_fp_check: enumerates every metavariable assignment over the
    zero-totalised prime field of p elements and checks an equation
    pointwise, a tiny finite model in which the meadow axioms also hold.

Derivative nodes are not pointwise-evaluable; eval_term rejects them, and
random_point_check sidesteps them by evaluating normal forms instead of
raw terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Mapping

from .normalform import BadSet, Quot, RatNF, ZeroNF, normalize
from .poly import Polynomial
from .terms import (
    Add,
    Diff,
    Hole,
    Inv,
    MetaVar,
    Mul,
    Neg,
    One,
    Term,
    Var,
    Zero,
)
from .verify import CheckReport, Failure

DEFAULT_POINT_TRIALS = 20
DEFAULT_RETRIES = 50
DEFAULT_MAX_NUMERATOR = 10**6
DEFAULT_MAX_DENOMINATOR = 10**3

Point = Mapping[int, Fraction]


class UnsupportedTermError(ValueError):
    """The term contains a node the requested evaluation cannot handle."""


def ztf_inv(value: Fraction) -> Fraction:
    """Total inverse on the rationals: 0 maps to 0."""
    return 1 / value if value else Fraction(0)


def eval_term(t: Term, point: Point) -> Fraction:
    """Zero-totalised evaluation at a rational point.

    Derivative nodes are rejected: differentiation is not an operation on
    point values.
    """
    match t:
        case Zero():
            return Fraction(0)
        case One():
            return Fraction(1)
        case Var(i):
            try:
                return Fraction(point[i])
            except KeyError:
                raise ValueError(f"point does not assign X{i}") from None
        case Add(l, r):
            return eval_term(l, point) + eval_term(r, point)
        case Mul(l, r):
            return eval_term(l, point) * eval_term(r, point)
        case Neg(a):
            return -eval_term(a, point)
        case Inv(a):
            return ztf_inv(eval_term(a, point))
        case Diff(i, _):
            raise UnsupportedTermError(
                f"D[{i}] cannot be evaluated at a point; normalize first"
            )
        case MetaVar(name):
            raise UnsupportedTermError(f"metavariable {name!r} has no point value")
        case Hole():
            raise UnsupportedTermError("context hole has no point value")
    raise TypeError(f"unknown term node {t!r}")


def _eval_nf(nf: RatNF, point: Point) -> Fraction:
    if isinstance(nf, ZeroNF):
        return Fraction(0)
    return nf.num.evaluate(point) / nf.den.evaluate(point)


@dataclass(frozen=True, slots=True)
class PointCheckReport:
    """Outcome of sampled pointwise comparison of two terms."""

    trials: int
    agreed: int
    disagreed: int
    inconclusive: int
    seed: int
    disagreements: tuple[tuple[tuple[int, str], ...], ...]  # points, as (index, value)

    @property
    def all_agreed(self) -> bool:
        return self.disagreed == 0 and self.inconclusive == 0

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "agreed": self.agreed,
            "disagreed": self.disagreed,
            "inconclusive": self.inconclusive,
            "seed": self.seed,
            "disagreements": [
                {f"X{i}": value for i, value in point} for point in self.disagreements
            ],
            "verdict": "agree" if self.disagreed == 0 else "disagree",
        }


def random_point_check(
    t: Term,
    r: Term,
    nvars: int,
    trials: int = DEFAULT_POINT_TRIALS,
    seed: int = 0,
    max_numerator: int = DEFAULT_MAX_NUMERATOR,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    retries: int = DEFAULT_RETRIES,
) -> PointCheckReport:
    """Compare the normal forms of t and r at random valid rational points.

    A point is valid when no bad-set polynomial and neither denominator
    vanishes there; invalid draws are retried a bounded number of times,
    after which the trial is reported inconclusive.
    """
    nf_t, bad_t = normalize(t, nvars)
    nf_r, bad_r = normalize(r, nvars)
    gates: set[Polynomial] = set(bad_t) | set(bad_r)
    for nf in (nf_t, nf_r):
        if isinstance(nf, Quot):
            gates.add(nf.den)
    rng = Random(seed)
    agreed = disagreed = inconclusive = 0
    disagreements = []
    for _ in range(trials):
        point = None
        for _ in range(retries):
            candidate = {
                i: Fraction(
                    rng.randint(-max_numerator, max_numerator),
                    rng.randint(1, max_denominator),
                )
                for i in range(1, nvars + 1)
            }
            if all(gate.evaluate(candidate) != 0 for gate in gates):
                point = candidate
                break
        if point is None:
            inconclusive += 1
            continue
        if _eval_nf(nf_t, point) == _eval_nf(nf_r, point):
            agreed += 1
        else:
            disagreed += 1
            disagreements.append(
                tuple((i, str(point[i])) for i in range(1, nvars + 1))
            )
    return PointCheckReport(
        trials, agreed, disagreed, inconclusive, seed, tuple(disagreements)
    )


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _fp_inv(value: int, p: int) -> int:
    # Total inverse in GF(p): 0^-1 = 0, otherwise Fermat.
    return pow(value, p - 2, p) if value else 0


def _eval_fp(t: Term, env: Mapping[str, int], p: int) -> int:
    match t:
        case Zero():
            return 0
        case One():
            return 1 % p
        case MetaVar(name):
            return env[name]
        case Add(l, r):
            return (_eval_fp(l, env, p) + _eval_fp(r, env, p)) % p
        case Mul(l, r):
            return (_eval_fp(l, env, p) * _eval_fp(r, env, p)) % p
        case Neg(a):
            return (-_eval_fp(a, env, p)) % p
        case Inv(a):
            return _fp_inv(_eval_fp(a, env, p), p)
        case Diff(i, _):
            raise UnsupportedTermError(
                f"D[{i}] has no interpretation in a finite zero-totalised field"
            )
        case Var(i):
            raise UnsupportedTermError(
                f"formal variable X{i} has no interpretation in a finite "
                "zero-totalised field; only metavariables are assigned"
            )
    raise TypeError(f"unknown term node {t!r}")


def exhaustive_fp_check(eq, p: int, max_metavars: int = 3) -> CheckReport:
    """Check an equation over all assignments in the zero-totalised field
    of p elements.  Exact and exhaustive, so the report is symbolic-grade."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    names = sorted(eq.metavars())
    if len(names) > max_metavars:
        raise ValueError(
            f"{eq.name!r} has {len(names)} metavariables, over the cap {max_metavars}"
        )
    assignments = [{}]
    for name in names:
        assignments = [
            {**env, name: value} for env in assignments for value in range(p)
        ]
    failures = []
    for trial, env in enumerate(assignments):
        lhs = _eval_fp(eq.lhs, env, p)
        rhs = _eval_fp(eq.rhs, env, p)
        if lhs != rhs:
            subst = tuple((name, str(env[name])) for name in names)
            failures.append(Failure(trial, subst, str(lhs), str(rhs)))
    return CheckReport(
        f"{eq.name} mod {p}", "symbolic", len(assignments), tuple(failures), seed=p
    )
