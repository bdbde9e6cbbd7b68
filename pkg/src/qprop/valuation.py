"""Three-valued semantics for experimental propositions.

A proposition is a named subspace; a state is evaluated against it through
the meet of the state's home subspace with the proposition's subspace, but
only where that meet exists, i.e. where both subspaces share a lattice of
the collection. Elsewhere the proposition has a truth-value gap. The full
space represents the disjunction of any proposition with its negation and
is true outright, which is what makes the semantics supervaluationist.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import HomeNotInContext, InvalidInput, TruthTableError
from .lattices import Context, LatticeCollection, find_common_lattices
from .subspaces import (
    StateVector,
    Subspace,
    complement,
    contains_vector,
    full_space,
    meet,
    range_of,
    subspace_from_spanning,
)


class TruthValue(Enum):
    TRUE = "true"
    FALSE = "false"
    GAP = "gap"

    @property
    def rendered(self) -> str:
        """Report form: "1", "0", or "0/0" for the gap."""
        return {"true": "1", "false": "0", "gap": "0/0"}[self.value]

    @property
    def json_value(self):
        """True/False, or None for the gap (status string carries the rest)."""
        return {"true": True, "false": False, "gap": None}[self.value]

    def __str__(self) -> str:
        return self.rendered


@dataclass(frozen=True)
class Proposition:
    """A named experimental proposition represented by a subspace."""

    name: str
    subspace: Subspace


@dataclass(frozen=True)
class ValuationInput:
    """A state, its declared home subspace, and the lattice collection."""

    state: StateVector
    home: Subspace
    collection: LatticeCollection


def default_home(state: StateVector) -> Subspace:
    """The one-dimensional span of the state, used when no home is declared."""
    return subspace_from_spanning([state.amplitudes])


def _check_input(inp: ValuationInput, tol: float | None) -> None:
    if not contains_vector(inp.home, inp.state, tol):
        raise InvalidInput("state does not lie in its declared home subspace")
    if not any(lat.contains(inp.home, tol) for lat in inp.collection.lattices):
        raise InvalidInput("home subspace is not an element of any lattice")


def evaluate(inp: ValuationInput, prop: Proposition, tol: float | None = None) -> TruthValue:
    """Three-valued value of a proposition in the given state.

    The full space is true outright (tautology precedence); a proposition
    sharing no lattice with the home has a gap; otherwise the meet with the
    home decides membership.
    """
    _check_input(inp, tol)
    if prop.subspace.ambient_dim != inp.home.ambient_dim:
        raise InvalidInput(
            f"proposition {prop.name!r} has ambient dim "
            f"{prop.subspace.ambient_dim}, expected {inp.home.ambient_dim}"
        )
    if prop.subspace.is_full:
        return TruthValue.TRUE
    if not find_common_lattices(inp.collection, inp.home, prop.subspace, tol):
        return TruthValue.GAP
    m = meet(inp.home, prop.subspace, tol)
    if contains_vector(m, inp.state, tol):
        return TruthValue.TRUE
    return TruthValue.FALSE


def negation_of(prop: Proposition) -> Proposition:
    """Proposition on the orthogonal complement, named with a ¬ prefix."""
    return Proposition(f"¬{prop.name}", complement(prop.subspace))


def evaluate_disjunction_with_negation(
    inp: ValuationInput, prop: Proposition, tol: float | None = None
) -> TruthValue:
    """Value of prop ∨ ¬prop, represented by the full space: always true.

    True even when the proposition and its negation are both gaps — the
    supervaluationist signature.
    """
    d = prop.subspace.ambient_dim
    disjunction = Proposition(f"{prop.name} ∨ ¬{prop.name}", full_space(d))
    return evaluate(inp, disjunction, tol)


def context_valuation_profile(
    inp: ValuationInput, ctx: Context, tol: float | None = None
) -> dict[int, TruthValue]:
    """Per-member truth values when the home is one of the context ranges.

    Exactly one member comes out true and the rest false; no member can be
    a gap because everything happens inside one Boolean block.
    """
    _check_input(inp, tol)
    ranges = [range_of(p, tol) for p in ctx.projectors]
    if not any(r.equals(inp.home, tol) for r in ranges):
        raise HomeNotInContext(
            f"home subspace is not a range of context {ctx.label!r}"
        )
    profile: dict[int, TruthValue] = {}
    for i, r in enumerate(ranges):
        m = meet(inp.home, r, tol)
        profile[i] = (
            TruthValue.TRUE if contains_vector(m, inp.state, tol) else TruthValue.FALSE
        )
    return profile


def truth_table(
    inp: ValuationInput, props, tol: float | None = None
) -> list[tuple[str, TruthValue]]:
    """Evaluate a list of propositions, preserving order.

    Per-proposition failures are collected and raised together as a
    TruthTableError after the whole batch has been attempted.
    """
    rows: list[tuple[str, TruthValue]] = []
    failures: dict[str, Exception] = {}
    for prop in props:
        try:
            rows.append((prop.name, evaluate(inp, prop, tol)))
        except Exception as exc:  # gather everything, report once
            failures[prop.name] = exc
    if failures:
        raise TruthTableError(failures)
    return rows
