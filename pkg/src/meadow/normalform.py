"""Generic normal form and equality for meadow terms.

Away from the zero sets of finitely many nonzero polynomials, every closed
term over (0, 1, X_i, +, *, -, ^-1, D_i) denotes either 0 or a quotient
p/q of two nonzero polynomials.  normalize computes that representative by
structural recursion:

    0   -> Zero                       1        -> 1/1
    X_i -> X_i/1                      -(p/q)   -> (-p)/q
    p/q + p'/q'  -> (pq' + p'q)/qq'   (Zero if the numerator vanishes)
    p/q * p'/q'  -> pp'/qq'           (Zero absorbs)
    (p/q)^-1     -> q/p               (Zero^-1 is Zero)
    D_i(p/q)     -> (D_i(p)q - pD_i(q))/q^2   (Zero if the numerator vanishes)

Inverting p/q records p in the returned bad set: p is a nonzero polynomial,
hence nonzero away from its zero set, and that is exactly where the generic
reading of the inverse diverges from pointwise zero-totalised evaluation.
The result is valid on the locus where every bad-set member is nonzero, a
set that is never empty.

Quotients are deliberately not reduced.  Two quotients are equal exactly
when cross-multiplication cancels:

    p/q == p'/q'  iff  p*q' - p'*q is the zero polynomial

so equality needs no gcd machinery, and a canonical representative within
the class is never chosen; decide_eq is the only equality interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .poly import Polynomial, sort_key
from .terms import (
    ZERO,
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
    int_pow,
    numeral,
)

BadSet = frozenset[Polynomial]


class RatNF:
    """Normal form: either ZeroNF or a quotient of nonzero polynomials."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class ZeroNF(RatNF):
    pass


@dataclass(frozen=True, slots=True)
class Quot(RatNF):
    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.num.is_zero or self.den.is_zero:
            raise ValueError("quotient parts must be nonzero polynomials")
        if self.num.nvars != self.den.nvars:
            raise ValueError("quotient parts disagree on the variable count")


ZERO_NF = ZeroNF()


def normalize(term: Term, nvars: int) -> tuple[RatNF, BadSet]:
    """Normal form of a closed, metavariable-free term, plus the bad set
    (the inverted numerators) outside whose zero sets the form is valid."""
    bad: set[Polynomial] = set()
    one = Polynomial.const(nvars, 1)

    def go(t: Term) -> RatNF:
        match t:
            case Zero():
                return ZERO_NF
            case One():
                return Quot(one, one)
            case Var(i):
                if i > nvars:
                    raise ValueError(f"variable index {i} out of range 1..{nvars}")
                return Quot(Polynomial.variable(nvars, i), one)
            case Neg(a):
                na = go(a)
                if isinstance(na, ZeroNF):
                    return ZERO_NF
                return Quot(-na.num, na.den)
            case Add(l, r):
                nl, nr = go(l), go(r)
                if isinstance(nl, ZeroNF):
                    return nr
                if isinstance(nr, ZeroNF):
                    return nl
                num = nl.num * nr.den + nr.num * nl.den
                if num.is_zero:
                    return ZERO_NF
                return Quot(num, nl.den * nr.den)
            case Mul(l, r):
                nl, nr = go(l), go(r)
                if isinstance(nl, ZeroNF) or isinstance(nr, ZeroNF):
                    return ZERO_NF
                return Quot(nl.num * nr.num, nl.den * nr.den)
            case Inv(a):
                na = go(a)
                if isinstance(na, ZeroNF):
                    return ZERO_NF
                if na.num.total_degree() > 0:
                    bad.add(na.num)
                return Quot(na.den, na.num)
            case Diff(i, a):
                if i > nvars:
                    raise ValueError(f"derivative index {i} out of range 1..{nvars}")
                na = go(a)
                if isinstance(na, ZeroNF):
                    return ZERO_NF
                num = na.num.partial(i) * na.den - na.num * na.den.partial(i)
                if num.is_zero:
                    return ZERO_NF
                return Quot(num, na.den * na.den)
            case MetaVar(name):
                raise ValueError(
                    f"term contains metavariable {name!r}; substitute it first"
                )
            case Hole():
                raise ValueError("term contains a context hole")
        raise TypeError(f"unknown term node {t!r}")

    return go(term), frozenset(bad)


def ratnf_equal(a: RatNF, b: RatNF) -> bool:
    """Cross-multiplication equality of two normal forms."""
    if isinstance(a, ZeroNF) or isinstance(b, ZeroNF):
        return isinstance(a, ZeroNF) and isinstance(b, ZeroNF)
    return (a.num * b.den - b.num * a.den).is_zero


def decide_eq(t: Term, r: Term, nvars: int) -> bool:
    """Generic equality: do t and r agree on a nonempty Zariski-open set?"""
    nt, _ = normalize(t, nvars)
    nr, _ = normalize(r, nvars)
    return ratnf_equal(nt, nr)


def is_ztc_zero(t: Term, nvars: int) -> bool:
    nf, _ = normalize(t, nvars)
    return isinstance(nf, ZeroNF)


def _wrap_side(p: Polynomial) -> str:
    # Bare only for a lone nonnegative integer or a single plain variable.
    entries = list(p.terms())
    if len(entries) == 1:
        exponents, coeff = entries[0]
        if all(e == 0 for e in exponents) and coeff.denominator == 1 and coeff >= 0:
            return str(coeff)
        if coeff == 1 and sum(exponents) == 1:
            return p.render()
    return f"({p.render()})"


def render_ratnf(nf: RatNF) -> str:
    if isinstance(nf, ZeroNF):
        return "0"
    return f"{_wrap_side(nf.num)} / {_wrap_side(nf.den)}"


def sorted_bad_set(bad: Iterable[Polynomial]) -> list[Polynomial]:
    return sorted(bad, key=sort_key)


def render_bad_set(bad: Iterable[Polynomial]) -> str:
    return "[" + ", ".join(p.render() for p in sorted_bad_set(bad)) + "]"


def ratnf_to_json(nf: RatNF, bad: BadSet = frozenset()) -> dict:
    if isinstance(nf, ZeroNF):
        return {"kind": "zero"}
    return {
        "kind": "quot",
        "num": nf.num.to_json(),
        "den": nf.den.to_json(),
        "badset": [p.to_json() for p in sorted_bad_set(bad)],
    }


def ratnf_from_json(data: Mapping, nvars: int) -> tuple[RatNF, BadSet]:
    kind = data["kind"]
    if kind == "zero":
        return ZERO_NF, frozenset()
    if kind != "quot":
        raise ValueError(f"unknown normal form kind {kind!r}")
    num = Polynomial.from_json(nvars, data["num"])
    den = Polynomial.from_json(nvars, data["den"])
    bad = frozenset(Polynomial.from_json(nvars, p) for p in data.get("badset", ()))
    return Quot(num, den), bad


def poly_to_term(p: Polynomial) -> Term:
    """A term denoting the polynomial: numerals and variable powers only."""
    total: Term | None = None
    for exponents, coeff in p.terms():
        factors: list[Term] = []
        if coeff.denominator != 1:
            factors.append(
                Mul(numeral(coeff.numerator), Inv(numeral(coeff.denominator)))
            )
        elif coeff != 1 or all(e == 0 for e in exponents):
            factors.append(numeral(coeff.numerator))
        for i, e in enumerate(exponents):
            if e:
                factors.append(int_pow(Var(i + 1), e))
        piece = factors[0]
        for extra in factors[1:]:
            piece = Mul(piece, extra)
        total = piece if total is None else Add(total, piece)
    return total if total is not None else ZERO


def ratnf_to_term(nf: RatNF) -> Term:
    if isinstance(nf, ZeroNF):
        return ZERO
    return Mul(poly_to_term(nf.num), Inv(poly_to_term(nf.den)))
