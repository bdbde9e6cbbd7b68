"""Contexts and their Boolean invariant-subspace lattices.

A context is a complete family of mutually annihilating nontrivial
projectors; its lattice is the 2^n subset-sums of the projector ranges.
Collections of such lattices, and their pasting into a single sublattice
sharing the trivial elements, are the structures the valuation semantics
runs on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    Incomplete,
    NotAnElement,
    NotOrthogonal,
    TooLarge,
    TrivialMember,
    UnknownLabel,
)
from .subspaces import (
    Projector,
    Subspace,
    meet,
    join,
    range_of,
    resolve_tol,
    subspace_sum,
)

#: Refuse to enumerate lattices beyond 2^12 elements.
MAX_CONTEXT_SIZE = 12


@dataclass(frozen=True, eq=False)
class Context:
    """An ordered family of projectors; validate through :func:`context_new`."""

    label: str
    projectors: tuple[Projector, ...]

    def __post_init__(self):
        projs = tuple(self.projectors)
        if not projs:
            raise ValueError("context needs at least one projector")
        d = projs[0].ambient_dim
        if any(p.ambient_dim != d for p in projs):
            raise DimensionMismatch("context projectors live in different spaces")
        object.__setattr__(self, "projectors", projs)

    @property
    def ambient_dim(self) -> int:
        return self.projectors[0].ambient_dim

    def __len__(self) -> int:
        return len(self.projectors)

    def __repr__(self) -> str:
        return f"Context({self.label!r}, {len(self)} projectors on C^{self.ambient_dim})"


def context_new(label: str, projectors, tol: float | None = None) -> Context:
    """Validated context: nontrivial members, pairwise annihilation, completeness.

    Raises TrivialMember, NotOrthogonal or Incomplete in that order, so the
    first structural defect is the one reported.
    """
    tol = resolve_tol(tol)
    projs = tuple(projectors)
    ctx = Context(label, projs)
    d = ctx.ambient_dim
    for i, p in enumerate(projs):
        if not 0 < p.rank < d:
            raise TrivialMember(
                f"context {label!r}: projector {i} has rank {p.rank} on C^{d}"
            )
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            prod = projs[i].matrix @ projs[j].matrix
            worst = float(np.max(np.abs(prod)))
            if worst > tol:
                raise NotOrthogonal(
                    f"context {label!r}: projectors {i} and {j} do not annihilate "
                    f"(max |PP'| entry {worst:.3e})"
                )
    total = sum(p.matrix for p in projs)
    if float(np.max(np.abs(total - np.eye(d)))) > tol:
        raise Incomplete(
            f"context {label!r}: projectors sum to trace "
            f"{float(np.trace(total).real):.6g}, expected {d}"
        )
    if len(projs) < 2:
        raise Incomplete(f"context {label!r}: needs at least two members")
    return ctx


@dataclass(frozen=True, eq=False)
class InvariantSubspaceLattice:
    """The Boolean lattice of subset-sums of a context's ranges.

    Elements are ordered by (dimension, subset index): {0} first, the full
    space last. Build with :func:`lattice_of`.
    """

    context_label: str
    elements: tuple[Subspace, ...]

    @property
    def ambient_dim(self) -> int:
        return self.elements[0].ambient_dim

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, s: Subspace, tol: float | None = None) -> int | None:
        for i, e in enumerate(self.elements):
            if e.equals(s, tol):
                return i
        return None

    def contains(self, s: Subspace, tol: float | None = None) -> bool:
        return self.index_of(s, tol) is not None

    def __repr__(self) -> str:
        return (
            f"InvariantSubspaceLattice({self.context_label!r}, "
            f"{len(self)} elements on C^{self.ambient_dim})"
        )


def lattice_of(ctx: Context, tol: float | None = None) -> InvariantSubspaceLattice:
    """All 2^n subset-sums of the context ranges, {0} and H included."""
    n = len(ctx)
    if n > MAX_CONTEXT_SIZE:
        raise TooLarge(
            f"context {ctx.label!r} has {n} members; lattice would hold 2^{n} elements"
        )
    d = ctx.ambient_dim
    ranges = [range_of(p, tol) for p in ctx.projectors]
    masks = sorted(range(2**n), key=lambda m: (bin(m).count("1"), m))
    elements = []
    for mask in masks:
        parts = [ranges[i] for i in range(n) if mask >> i & 1]
        elements.append(subspace_sum(parts, tol, ambient_dim=d))
    return InvariantSubspaceLattice(ctx.label, tuple(elements))


@dataclass(frozen=True, eq=False)
class LatticeCollection:
    """The lattices of a context set, keyed by unique labels."""

    lattices: tuple[InvariantSubspaceLattice, ...]

    def __post_init__(self):
        lats = tuple(self.lattices)
        if not lats:
            raise ValueError("collection needs at least one lattice")
        labels = [lat.context_label for lat in lats]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate lattice labels in {labels}")
        d = lats[0].ambient_dim
        if any(lat.ambient_dim != d for lat in lats):
            raise DimensionMismatch("lattices live in different ambient spaces")
        object.__setattr__(self, "lattices", lats)

    @property
    def ambient_dim(self) -> int:
        return self.lattices[0].ambient_dim

    def by_label(self, label: str) -> InvariantSubspaceLattice:
        for lat in self.lattices:
            if lat.context_label == label:
                return lat
        raise UnknownLabel(f"no lattice labelled {label!r}")

    def labels(self) -> list[str]:
        return [lat.context_label for lat in self.lattices]


def collection_of(contexts, tol: float | None = None) -> LatticeCollection:
    """Build the lattice collection of a list of contexts."""
    return LatticeCollection(tuple(lattice_of(c, tol) for c in contexts))


def find_common_lattices(
    coll: LatticeCollection, a: Subspace, b: Subspace, tol: float | None = None
) -> list[str]:
    """Labels of every lattice containing both subspaces.

    An empty result means the meet of a and b is undefined within the
    collection: the truth-value-gap situation.
    """
    if a.ambient_dim != coll.ambient_dim or b.ambient_dim != coll.ambient_dim:
        raise DimensionMismatch("subspace dimension differs from the collection's")
    return [
        lat.context_label
        for lat in coll.lattices
        if lat.contains(a, tol) and lat.contains(b, tol)
    ]


def intertwined(c1: Context, c2: Context, tol: float | None = None) -> bool:
    """True iff the contexts share at least one projector."""
    if c1.ambient_dim != c2.ambient_dim:
        raise DimensionMismatch("contexts live in different spaces")
    tol = resolve_tol(tol)
    for p in c1.projectors:
        for q in c2.projectors:
            if float(np.linalg.norm(p.matrix - q.matrix)) <= tol:
                return True
    return False


def individual_subspaces(
    coll: LatticeCollection, lattice_label: str, tol: float | None = None
) -> list[Subspace]:
    """Nontrivial elements of one lattice appearing in no other lattice."""
    target = coll.by_label(lattice_label)
    others = [lat for lat in coll.lattices if lat.context_label != lattice_label]
    out = []
    for e in target.elements:
        if e.is_zero or e.is_full:
            continue
        if any(o.contains(e, tol) for o in others):
            continue
        out.append(e)
    return out


@dataclass(frozen=True, eq=False)
class HilbertSublattice:
    """Union of Boolean blocks pasted at the shared trivial subspaces.

    ``blocks`` maps each context label to the indices its elements occupy
    in the deduplicated ``elements`` tuple.
    """

    elements: tuple[Subspace, ...]
    blocks: dict[str, tuple[int, ...]]

    def index_of(self, s: Subspace, tol: float | None = None) -> int | None:
        for i, e in enumerate(self.elements):
            if e.equals(s, tol):
                return i
        return None

    def __len__(self) -> int:
        return len(self.elements)

    def blocks_of(self, index: int) -> list[str]:
        return [lab for lab, idxs in self.blocks.items() if index in idxs]


def paste_sublattice(
    coll: LatticeCollection, tol: float | None = None
) -> HilbertSublattice:
    """Deduplicated union of all lattice elements, block membership retained."""
    elements: list[Subspace] = []
    blocks: dict[str, tuple[int, ...]] = {}
    for lat in coll.lattices:
        idxs = []
        for e in lat.elements:
            found = None
            for i, known in enumerate(elements):
                if known.equals(e, tol):
                    found = i
                    break
            if found is None:
                elements.append(e)
                found = len(elements) - 1
            idxs.append(found)
        blocks[lat.context_label] = tuple(idxs)
    return HilbertSublattice(tuple(elements), blocks)


@dataclass(frozen=True, eq=False)
class DistributivityReport:
    """Both sides of a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c) and whether they agree."""

    lhs: Subspace
    rhs: Subspace
    equal: bool


def check_distributivity(
    structure, a: Subspace, b: Subspace, c: Subspace, tol: float | None = None
) -> DistributivityReport:
    """Evaluate the distributive law on three elements of a lattice structure.

    Meets and joins are computed in the ambient space (the quantum-logic
    reading); ``structure`` is any object with an ``index_of`` element test.
    """
    for name, s in (("a", a), ("b", b), ("c", c)):
        if structure.index_of(s, tol) is None:
            raise NotAnElement(f"argument {name} is not an element of the structure")
    lhs = meet(a, join(b, c, tol), tol)
    rhs = join(meet(a, b, tol), meet(a, c, tol), tol)
    return DistributivityReport(lhs, rhs, lhs.equals(rhs, tol))
