"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in the variables X1..Xn is a mapping from exponent tuples
(one nonnegative integer per variable) to nonzero Fraction coefficients;
the zero polynomial is the empty mapping.  All arithmetic is exact, so two
polynomials denote the same function precisely when their stored maps are
equal, and the zero test is "is the map empty".

Monomials are ordered graded lexicographically with X1 > X2 > ... > Xn
(higher total degree first, ties broken by comparing exponent tuples).
Rendering and JSON serialization list terms in that order, which keeps all
printed output deterministic.

Repeated cross-multiplication can blow up; a session-wide cap on the
stored monomial count turns runaway growth into a MonomialBudgetError
instead of an unbounded computation.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Mapping

Exponents = tuple[int, ...]

DEFAULT_MONOMIAL_BUDGET = 100_000

_monomial_budget = DEFAULT_MONOMIAL_BUDGET


class MonomialBudgetError(RuntimeError):
    """A result would store more monomials than the session allows."""

    def __init__(self, count: int, budget: int):
        super().__init__(
            f"result has {count} monomials, exceeding the budget of {budget}"
        )
        self.count = count
        self.budget = budget


def set_monomial_budget(budget: int) -> None:
    """Set the session-wide cap on stored monomials per polynomial."""
    if budget < 1:
        raise ValueError("monomial budget must be positive")
    global _monomial_budget
    _monomial_budget = budget


def monomial_budget() -> int:
    return _monomial_budget


def _grlex_key(exponents: Exponents) -> tuple[int, Exponents]:
    return (sum(exponents), exponents)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients.

    Instances are canonical: zero coefficients are never stored, so ``==``
    is semantic equality.  Variable indices are 1-based throughout.
    """

    __slots__ = ("_nvars", "_terms", "_hash")

    def __init__(
        self,
        nvars: int,
        terms: Mapping[Exponents, Fraction | int] | Iterable[tuple[Exponents, Fraction | int]] = (),
    ):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        stored: dict[Exponents, Fraction] = {}
        for exponents, coeff in items:
            exponents = tuple(exponents)
            if len(exponents) != nvars:
                raise ValueError(
                    f"exponent tuple {exponents} does not match variable count {nvars}"
                )
            if any(e < 0 for e in exponents):
                raise ValueError(f"negative exponent in {exponents}")
            coeff = Fraction(coeff) + stored.get(exponents, 0)
            if coeff:
                stored[exponents] = coeff
            else:
                stored.pop(exponents, None)
        if len(stored) > _monomial_budget:
            raise MonomialBudgetError(len(stored), _monomial_budget)
        self._nvars = nvars
        self._terms = stored
        self._hash: int | None = None

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value: Fraction | int) -> Polynomial:
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> Polynomial:
        """The polynomial X_index (1-based)."""
        if not 1 <= index <= nvars:
            raise ValueError(f"variable index {index} out of range 1..{nvars}")
        exponents = tuple(1 if i == index - 1 else 0 for i in range(nvars))
        return cls(nvars, {exponents: Fraction(1)})

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def terms(self) -> Iterator[tuple[Exponents, Fraction]]:
        """Yield (exponents, coefficient) pairs in descending graded-lex order."""
        for exponents in sorted(self._terms, key=_grlex_key, reverse=True):
            yield exponents, self._terms[exponents]

    def coefficient(self, exponents: Exponents) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def _check_compatible(self, other: Polynomial) -> None:
        if self._nvars != other._nvars:
            raise ValueError(
                f"variable count mismatch: {self._nvars} vs {other._nvars}"
            )

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check_compatible(other)
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for exponents, coeff in other._terms.items():
            total = out.get(exponents, 0) + coeff
            if total:
                out[exponents] = total
            else:
                out.pop(exponents, None)
        return Polynomial(self._nvars, out)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __neg__(self) -> Polynomial:
        return Polynomial(self._nvars, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other: Polynomial) -> Polynomial:
        self._check_compatible(other)
        if not self._terms or not other._terms:
            return Polynomial.zero(self._nvars)
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exponents = tuple(x + y for x, y in zip(ea, eb))
                total = out.get(exponents, 0) + ca * cb
                if total:
                    out[exponents] = total
                else:
                    out.pop(exponents, None)
        return Polynomial(self._nvars, out)

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise ValueError("polynomial powers take nonnegative exponents")
        result = Polynomial.const(self._nvars, 1)
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def partial(self, index: int) -> Polynomial:
        """Formal partial derivative with respect to X_index (1-based)."""
        if not 1 <= index <= self._nvars:
            raise ValueError(f"variable index {index} out of range 1..{self._nvars}")
        i = index - 1
        out: dict[Exponents, Fraction] = {}
        for exponents, coeff in self._terms.items():
            e = exponents[i]
            if e == 0:
                continue
            lowered = exponents[:i] + (e - 1,) + exponents[i + 1 :]
            out[lowered] = out.get(lowered, 0) + coeff * e
        return Polynomial(self._nvars, out)

    def evaluate(self, point: Mapping[int, Fraction | int]) -> Fraction:
        """Exact value at a rational point; keys are variable indices 1..n."""
        missing = [i for i in range(1, self._nvars + 1) if i not in point]
        if missing:
            raise ValueError(f"point does not assign variables {missing}")
        values = [Fraction(point[i]) for i in range(1, self._nvars + 1)]
        total = Fraction(0)
        for exponents, coeff in self._terms.items():
            term = coeff
            for value, e in zip(values, exponents):
                if e:
                    term *= value**e
            total += term
        return total

    def render(self, clear_denominators: bool = False) -> str:
        """Canonical text form, terms in descending graded-lex order.

        With clear_denominators, print the integer-coefficient multiple
        divided by the common denominator, e.g. ``(3*X1 + 2)/6``.
        """
        if not self._terms:
            return "0"
        if clear_denominators:
            common = lcm(*(c.denominator for c in self._terms.values()))
            if common > 1:
                scaled = self * Polynomial.const(self._nvars, common)
                return f"({scaled.render()})/{common}"
        parts: list[str] = []
        for exponents, coeff in self.terms():
            factors = [
                f"X{i + 1}" if e == 1 else f"X{i + 1}^{e}"
                for i, e in enumerate(exponents)
                if e
            ]
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self._nvars}, {self.render()!r})"

    def to_json(self) -> list[dict]:
        return [
            {
                "exponents": list(exponents),
                "num": str(coeff.numerator),
                "den": str(coeff.denominator),
            }
            for exponents, coeff in self.terms()
        ]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable[Mapping]) -> Polynomial:
        terms = {}
        for entry in data:
            exponents = tuple(int(e) for e in entry["exponents"])
            coeff = Fraction(int(entry["num"]), int(entry["den"]))
            if exponents in terms:
                raise ValueError(f"duplicate exponent tuple {exponents}")
            terms[exponents] = coeff
        return cls(nvars, terms)


def sort_key(poly: Polynomial) -> tuple:
    """Deterministic ordering key for listing polynomials (bad sets, reports)."""
    return tuple(
        (sum(e), e, c.numerator, c.denominator) for e, c in poly.terms()
    )
