"""Guarded quotient trees (standard meadow forms) and their collapse.

A level-0 form is a quotient p/q of polynomials; a level k+1 form is
0_p * P + 1_p * Q, a pair of lower forms guarded by the complementary
idempotents of a pivot polynomial.  Under generic equality the hierarchy
collapses to level 0: a nonzero pivot is nonzero on a dense open set,
where 1_pivot is 1 and 0_pivot is 0, so the guard picks its unit branch;
a pivot that is the zero polynomial makes 0_pivot equal to 1 (0/0 is 0,
so 1_0 is 0) and picks the zero branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .normalform import RatNF, ZERO_NF, Quot, poly_to_term
from .poly import Polynomial
from .terms import Add, Inv, Mul, Term, pseudo_unit, pseudo_zero


class SMFNode:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Level0(SMFNode):
    """p/q with no nonzero requirement on either part."""

    p: Polynomial
    q: Polynomial

    def __post_init__(self):
        if self.p.nvars != self.q.nvars:
            raise ValueError("quotient parts disagree on the variable count")


@dataclass(frozen=True, slots=True)
class Guard(SMFNode):
    """0_pivot * zero_branch + 1_pivot * unit_branch."""

    pivot: Polynomial
    zero_branch: SMFNode
    unit_branch: SMFNode


def level(node: SMFNode) -> int:
    if isinstance(node, Level0):
        return 0
    return 1 + max(level(node.zero_branch), level(node.unit_branch))


def smf_collapse(node: SMFNode) -> RatNF:
    """Level-0 representative of the tree under generic equality.

    A vanishing numerator gives 0 outright; a vanishing denominator also
    gives 0, because p/q is p * q^-1 and the inverse of 0 is 0.
    """
    if isinstance(node, Level0):
        if node.p.is_zero or node.q.is_zero:
            return ZERO_NF
        return Quot(node.p, node.q)
    branch = node.zero_branch if node.pivot.is_zero else node.unit_branch
    return smf_collapse(branch)


def smf_to_term(node: SMFNode) -> Term:
    """Literal syntactic reading of the tree as a meadow term."""
    if isinstance(node, Level0):
        return Mul(poly_to_term(node.p), Inv(poly_to_term(node.q)))
    pivot = poly_to_term(node.pivot)
    return Add(
        Mul(pseudo_zero(pivot), smf_to_term(node.zero_branch)),
        Mul(pseudo_unit(pivot), smf_to_term(node.unit_branch)),
    )


def smf_to_json(node: SMFNode) -> dict:
    if isinstance(node, Level0):
        return {"kind": "level0", "p": node.p.to_json(), "q": node.q.to_json()}
    return {
        "kind": "guard",
        "pivot": node.pivot.to_json(),
        "zero": smf_to_json(node.zero_branch),
        "unit": smf_to_json(node.unit_branch),
    }


def smf_from_json(data: Mapping, nvars: int) -> SMFNode:
    kind = data.get("kind")
    if kind == "level0":
        return Level0(
            Polynomial.from_json(nvars, data["p"]),
            Polynomial.from_json(nvars, data["q"]),
        )
    if kind == "guard":
        return Guard(
            Polynomial.from_json(nvars, data["pivot"]),
            smf_from_json(data["zero"], nvars),
            smf_from_json(data["unit"], nvars),
        )
    raise ValueError(f"unknown form kind {kind!r}")
