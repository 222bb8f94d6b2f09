"""Term syntax for meadows with formal partial derivatives.

The signature has nine core constructors: the constants 0 and 1, formal
variables X_i, metavariables (placeholders that axiom schemata quantify
over), binary + and *, unary negation, the total inverse, and the partial
derivative operators D_i.  Everything else (difference, division, numerals,
integer powers, pseudo units, pseudo zeros) is sugar: plain functions that
immediately build core terms.

Terms are immutable and hashable; equality is structural.  Source spans
attached by the parser are carried in a side field that does not take part
in comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Mapping

if TYPE_CHECKING:
    from .syntax import SourceSpan


class UnboundMetaVarError(LookupError):
    """A substitution does not cover some metavariable of the term."""


class Term:
    """Base class for all term nodes; supports operator sugar."""

    __slots__ = ()

    def __add__(self, other: Term) -> Term:
        return Add(self, other)

    def __mul__(self, other: Term) -> Term:
        return Mul(self, other)

    def __sub__(self, other: Term) -> Term:
        return Add(self, Neg(other))

    def __truediv__(self, other: Term) -> Term:
        return Mul(self, Inv(other))

    def __neg__(self) -> Term:
        return Neg(self)


def _span_field():
    # Parser-attached position info; invisible to equality and hashing.
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Zero(Term):
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True, slots=True)
class One(Term):
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True, slots=True)
class Var(Term):
    """The formal variable X_index, 1-based."""

    index: int
    span: SourceSpan | None = _span_field()

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True, slots=True)
class MetaVar(Term):
    """A schema variable ranging over arbitrary meadow elements.

    Distinct from Var: the formal variables X_i are constants of the
    signature, while metavariables are placeholders instantiated by
    substitution before any term reaches normalization.
    """

    name: str
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True, slots=True)
class Add(Term):
    left: Term
    right: Term
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True, slots=True)
class Mul(Term):
    left: Term
    right: Term
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True, slots=True)
class Neg(Term):
    arg: Term
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True, slots=True)
class Inv(Term):
    arg: Term
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True, slots=True)
class Diff(Term):
    """The partial derivative operator D_index applied to a term."""

    index: int
    arg: Term
    span: SourceSpan | None = _span_field()

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"derivative index must be >= 1, got {self.index}")


@dataclass(frozen=True, slots=True)
class Hole(Term):
    """The single open position of a Context; never part of a plain term."""

    span: SourceSpan | None = _span_field()


ZERO = Zero()
ONE = One()
HOLE = Hole()


def children(t: Term) -> tuple[Term, ...]:
    match t:
        case Add(l, r) | Mul(l, r):
            return (l, r)
        case Neg(a) | Inv(a):
            return (a,)
        case Diff(_, a):
            return (a,)
        case _:
            return ()


def subterms(t: Term) -> Iterator[Term]:
    """Depth-first traversal including the term itself."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(children(node))


def node_count(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def metavars(t: Term) -> frozenset[str]:
    return frozenset(n.name for n in subterms(t) if isinstance(n, MetaVar))


def variables(t: Term) -> frozenset[int]:
    """Indices of the formal variables occurring in t (Diff indices included)."""
    found = set()
    for node in subterms(t):
        if isinstance(node, Var):
            found.add(node.index)
        elif isinstance(node, Diff):
            found.add(node.index)
    return frozenset(found)


def contains_diff(t: Term) -> bool:
    return any(isinstance(node, Diff) for node in subterms(t))


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneously replace every metavariable; there are no binders, so
    replacement is plain.  Raises UnboundMetaVarError for uncovered names."""
    match t:
        case MetaVar(name):
            try:
                return mapping[name]
            except KeyError:
                raise UnboundMetaVarError(f"no substitution for metavariable {name!r}") from None
        case Add(l, r):
            return Add(substitute(l, mapping), substitute(r, mapping))
        case Mul(l, r):
            return Mul(substitute(l, mapping), substitute(r, mapping))
        case Neg(a):
            return Neg(substitute(a, mapping))
        case Inv(a):
            return Inv(substitute(a, mapping))
        case Diff(i, a):
            return Diff(i, substitute(a, mapping))
        case _:
            return t


@dataclass(frozen=True, slots=True)
class Equation:
    """A named pair of terms; metavariables are implicitly universally
    quantified over all meadow elements."""

    name: str
    lhs: Term
    rhs: Term

    def metavars(self) -> frozenset[str]:
        return metavars(self.lhs) | metavars(self.rhs)


@dataclass(frozen=True, slots=True)
class Context:
    """A term with exactly one Hole."""

    body: Term

    def __post_init__(self):
        holes = sum(1 for node in subterms(self.body) if isinstance(node, Hole))
        if holes != 1:
            raise ValueError(f"a context needs exactly one hole, found {holes}")


def plug(context: Context, t: Term) -> Term:
    """Replace the context's hole by t."""

    def go(node: Term) -> Term:
        match node:
            case Hole():
                return t
            case Add(l, r):
                return Add(go(l), go(r))
            case Mul(l, r):
                return Mul(go(l), go(r))
            case Neg(a):
                return Neg(go(a))
            case Inv(a):
                return Inv(go(a))
            case Diff(i, a):
                return Diff(i, go(a))
            case _:
                return node

    return go(context.body)


def pseudo_unit(t: Term) -> Term:
    """t * t^-1, an idempotent that is 1 wherever t is invertible."""
    return Mul(t, Inv(t))


def pseudo_zero(t: Term) -> Term:
    """1 - t * t^-1, the complementary idempotent of pseudo_unit(t)."""
    return Add(ONE, Neg(pseudo_unit(t)))


_TWO = Add(ONE, ONE)


def numeral(k: int) -> Term:
    """The integer k as a term, built by balanced doubling: O(log|k|) nodes."""
    if k < 0:
        return Neg(numeral(-k))
    if k == 0:
        return ZERO
    if k == 1:
        return ONE
    if k == 2:
        return _TWO
    half = numeral(k // 2)
    doubled = Mul(half, _TWO)
    return Add(doubled, ONE) if k & 1 else doubled


def int_pow(t: Term, k: int) -> Term:
    """t raised to an integer power; negative powers go through the total
    inverse, so int_pow is defined for every k."""
    if k < 0:
        return Inv(int_pow(t, -k))
    if k == 0:
        return ONE
    result = None
    base = t
    while k:
        if k & 1:
            result = base if result is None else Mul(result, base)
        k >>= 1
        if k:
            base = Mul(base, base)
    return result


def strip_spans(t: Term) -> Term:
    """Rebuild t with no source spans anywhere (useful in tests)."""
    match t:
        case Add(l, r):
            return Add(strip_spans(l), strip_spans(r))
        case Mul(l, r):
            return Mul(strip_spans(l), strip_spans(r))
        case Neg(a):
            return Neg(strip_spans(a))
        case Inv(a):
            return Inv(strip_spans(a))
        case Diff(i, a):
            return Diff(i, strip_spans(a))
        case Var(i):
            return Var(i)
        case MetaVar(n):
            return MetaVar(n)
        case Zero():
            return ZERO
        case One():
            return ONE
        case Hole():
            return HOLE
    raise TypeError(f"unknown term node {t!r}")


def term_to_json(t: Term) -> dict:
    match t:
        case Zero():
            return {"op": "zero"}
        case One():
            return {"op": "one"}
        case Var(i):
            return {"op": "var", "index": i}
        case MetaVar(n):
            return {"op": "metavar", "name": n}
        case Add(l, r):
            return {"op": "add", "args": [term_to_json(l), term_to_json(r)]}
        case Mul(l, r):
            return {"op": "mul", "args": [term_to_json(l), term_to_json(r)]}
        case Neg(a):
            return {"op": "neg", "args": [term_to_json(a)]}
        case Inv(a):
            return {"op": "inv", "args": [term_to_json(a)]}
        case Diff(i, a):
            return {"op": "diff", "index": i, "args": [term_to_json(a)]}
    raise TypeError(f"term {t!r} has no JSON form")


def term_from_json(data: Mapping) -> Term:
    op = data["op"]
    if op == "zero":
        return ZERO
    if op == "one":
        return ONE
    if op == "var":
        return Var(int(data["index"]))
    if op == "metavar":
        return MetaVar(str(data["name"]))
    args = [term_from_json(a) for a in data.get("args", ())]
    if op == "add":
        return Add(*args)
    if op == "mul":
        return Mul(*args)
    if op == "neg":
        return Neg(*args)
    if op == "inv":
        return Inv(*args)
    if op == "diff":
        return Diff(int(data["index"]), *args)
    raise ValueError(f"unknown term op {op!r}")
