"""Tolerance-based linear algebra over closed subspaces of C^d.

Every subspace is held as a matrix with orthonormal columns; the zero
subspace {0} is the zero-column matrix, the full space is a d-column
basis. All operations are pure and deterministic: fixed algorithms, no
randomized pivoting, so repeated runs produce identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidSpectralDecomposition,
    NotAProjector,
    NotOrthogonal,
)

#: Global default tolerance for rank decisions, membership and equality tests.
DEFAULT_EPS = 1e-9


def resolve_tol(tol: float | None) -> float:
    """Map None or 0 to the default tolerance; reject negatives."""
    if tol is None or tol == 0:
        return DEFAULT_EPS
    if tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    return float(tol)


def _as_complex(a, name: str = "array") -> np.ndarray:
    out = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{name} contains non-finite entries")
    return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    """A closed linear subspace of C^d, stored as an orthonormal basis.

    ``basis`` has shape ``(ambient_dim, r)`` with orthonormal columns;
    ``r = 0`` encodes {0} and ``r = ambient_dim`` the full space. The
    instance is immutable; compare with :meth:`equals`, never ``==``.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError("ambient_dim must be positive")
        b = _as_complex(self.basis, "basis")
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise ValueError(
                f"basis must be {self.ambient_dim}xr, got shape {b.shape}"
            )
        if b.shape[1] > self.ambient_dim:
            raise ValueError("more basis columns than ambient dimension")
        gram = b.conj().T @ b
        if gram.size and np.max(np.abs(gram - np.eye(b.shape[1]))) > DEFAULT_EPS:
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", _frozen(b))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def projector_matrix(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def equals(self, other: "Subspace", tol: float | None = None) -> bool:
        """Subspace equality as projector distance ‖P_a − P_b‖_F ≤ tol."""
        if self.ambient_dim != other.ambient_dim:
            return False
        if self.dim != other.dim:
            return False
        diff = self.projector_matrix() - other.projector_matrix()
        return float(np.linalg.norm(diff)) <= resolve_tol(tol)

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of C^{self.ambient_dim})"


@dataclass(frozen=True, eq=False)
class Projector:
    """A Hermitian idempotent operator on C^d.

    Construction validates Hermiticity and idempotence at the global
    tolerance; use :func:`validate_projector` first to check a raw matrix
    against a custom tolerance.
    """

    ambient_dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_complex(self.matrix, "matrix")
        if m.shape != (self.ambient_dim, self.ambient_dim):
            raise ValueError(
                f"matrix must be {self.ambient_dim}x{self.ambient_dim}, got {m.shape}"
            )
        validate_projector(m, DEFAULT_EPS)
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.matrix).real)))

    def __repr__(self) -> str:
        return f"Projector(rank {self.rank} on C^{self.ambient_dim})"


@dataclass(frozen=True, eq=False)
class StateVector:
    """A nonzero pure state of C^d, normalized on construction."""

    ambient_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        v = _as_complex(self.amplitudes, "amplitudes").reshape(-1)
        if v.shape != (self.ambient_dim,):
            raise ValueError(
                f"amplitudes must have length {self.ambient_dim}, got {v.shape[0]}"
            )
        n = float(np.linalg.norm(v))
        if n <= DEFAULT_EPS:
            raise ValueError("state vector must be nonzero")
        object.__setattr__(self, "amplitudes", _frozen(v / n))

    def __repr__(self) -> str:
        return f"StateVector(C^{self.ambient_dim})"


def validate_projector(matrix, tol: float | None = None) -> np.ndarray:
    """Check Hermiticity and idempotence; return the matrix as complex.

    Raises NotAProjector with the worst violation magnitude, so callers
    can report how far a candidate is from being a projector.
    """
    tol = resolve_tol(tol)
    m = _as_complex(matrix, "projector matrix")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotAProjector(f"projector matrix must be square, got shape {m.shape}")
    asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if asym > tol:
        raise NotAProjector(f"not Hermitian: max asymmetry {asym:.3e} > {tol:.1e}")
    nonidem = float(np.max(np.abs(m @ m - m))) if m.size else 0.0
    if nonidem > tol:
        raise NotAProjector(
            f"not idempotent: max |P^2 - P| entry {nonidem:.3e} > {tol:.1e}"
        )
    return m


# ---------------------------------------------------------------------------
# Canonical constructions
# ---------------------------------------------------------------------------


def zero_space(d: int) -> Subspace:
    return Subspace(d, np.zeros((d, 0), dtype=complex))


def full_space(d: int) -> Subspace:
    return Subspace(d, np.eye(d, dtype=complex))


def zero_projector(d: int) -> Projector:
    return Projector(d, np.zeros((d, d), dtype=complex))


def identity_projector(d: int) -> Projector:
    return Projector(d, np.eye(d, dtype=complex))


_PAULI = {
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def qubit_projector(axis: str, sign: int) -> Projector:
    """Eigenprojector (1 ± sigma_axis)/2 of a spin component, axis in {z,x,y}."""
    if axis not in _PAULI:
        raise ValueError(f"axis must be one of {sorted(_PAULI)}, got {axis!r}")
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return Projector(2, (np.eye(2, dtype=complex) + sign * _PAULI[axis]) / 2)


def subspace_from_spanning(
    vectors, tol: float | None = None, *, ambient_dim: int | None = None
) -> Subspace:
    """Span of a list of vectors, canonicalized to an orthonormal basis.

    Modified Gram-Schmidt with one reorthogonalization pass; a vector is
    discarded when its residual after orthogonalization is ≤ tol relative
    to its own norm, so the rank is deterministic for a fixed input order.
    ``ambient_dim`` is required when ``vectors`` is empty.
    """
    tol = resolve_tol(tol)
    vs = [_as_complex(v, "spanning vector").reshape(-1) for v in vectors]
    dims = {v.shape[0] for v in vs}
    if len(dims) > 1:
        raise DimensionMismatch(f"spanning vectors have mixed lengths {sorted(dims)}")
    if dims:
        d = dims.pop()
        if ambient_dim is not None and ambient_dim != d:
            raise DimensionMismatch(
                f"vectors have length {d}, ambient_dim says {ambient_dim}"
            )
    elif ambient_dim is not None:
        d = ambient_dim
    else:
        raise ValueError("ambient_dim is required for an empty spanning set")

    accepted: list[np.ndarray] = []
    for v in vs:
        scale = float(np.linalg.norm(v))
        u = v.copy()
        for _ in range(2):  # second pass restores orthogonality lost to cancellation
            for q in accepted:
                u = u - (q.conj() @ u) * q
        residual = float(np.linalg.norm(u))
        if residual > tol * scale and residual > 0.0:
            accepted.append(u / residual)
    if not accepted:
        return zero_space(d)
    return Subspace(d, np.column_stack(accepted))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def projector_of(s: Subspace) -> Projector:
    """The projector whose range is s."""
    return Projector(s.ambient_dim, s.projector_matrix())


def range_of(p, tol: float | None = None) -> Subspace:
    """Orthonormal basis of the eigenvalue-1 eigenspace of a projector.

    Accepts a Projector or a raw matrix; the matrix is validated against
    ``tol`` first. The rank is fixed as round(trace(p)).
    """
    if isinstance(p, Projector):
        m = p.matrix
    else:
        m = validate_projector(p, tol)
    d = m.shape[0]
    rank = int(round(float(np.trace(m).real)))
    if rank <= 0:
        return zero_space(d)
    if rank >= d:
        return full_space(d)
    _, vecs = np.linalg.eigh(m)  # ascending eigenvalues: range is the tail block
    return Subspace(d, vecs[:, d - rank :])


def negate(p: Projector) -> Projector:
    """Complement projector 1 - p; its range is the kernel of p."""
    return Projector(p.ambient_dim, np.eye(p.ambient_dim, dtype=complex) - p.matrix)


def complement(s: Subspace) -> Subspace:
    """Orthogonal complement s^perp; dim(s) + dim(s^perp) = d."""
    d, r = s.ambient_dim, s.dim
    if r == 0:
        return full_space(d)
    if r == d:
        return zero_space(d)
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(d, u[:, r:])


def join(a: Subspace, b: Subspace, tol: float | None = None) -> Subspace:
    """Closed span of the union of two subspaces."""
    _check_same_dim(a, b)
    cols = [a.basis[:, i] for i in range(a.dim)]
    cols += [b.basis[:, i] for i in range(b.dim)]
    return subspace_from_spanning(cols, tol, ambient_dim=a.ambient_dim)


def meet(a: Subspace, b: Subspace, tol: float | None = None) -> Subspace:
    """Set-theoretic intersection, computed by ortholattice duality."""
    _check_same_dim(a, b)
    return complement(join(complement(a), complement(b), tol))


def subspace_sum(
    parts, tol: float | None = None, *, ambient_dim: int | None = None
) -> Subspace:
    """Internal direct sum of pairwise-orthogonal subspaces.

    Raises NotOrthogonal when any pair of parts fails orthogonality at
    ``tol``. The empty sum is {0} and needs ``ambient_dim``.
    """
    tol = resolve_tol(tol)
    parts = list(parts)
    if not parts:
        if ambient_dim is None:
            raise ValueError("ambient_dim is required for an empty sum")
        return zero_space(ambient_dim)
    d = parts[0].ambient_dim
    for s in parts:
        if s.ambient_dim != d:
            raise DimensionMismatch("summands live in different ambient spaces")
    if ambient_dim is not None and ambient_dim != d:
        raise DimensionMismatch("ambient_dim disagrees with the summands")
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            overlap = parts[i].basis.conj().T @ parts[j].basis
            if overlap.size and float(np.max(np.abs(overlap))) > tol:
                raise NotOrthogonal(
                    f"summands {i} and {j} are not orthogonal "
                    f"(max overlap {float(np.max(np.abs(overlap))):.3e})"
                )
    cols = [s.basis[:, i] for s in parts for i in range(s.dim)]
    out = subspace_from_spanning(cols, tol, ambient_dim=d)
    if out.dim != sum(s.dim for s in parts):
        raise NotOrthogonal("summands overlap: direct-sum dimension lost")
    return out


def contains_vector(s: Subspace, v, tol: float | None = None) -> bool:
    """True iff the projection of v onto s leaves v unchanged (relative tol)."""
    tol = resolve_tol(tol)
    vec = v.amplitudes if isinstance(v, StateVector) else _as_complex(v).reshape(-1)
    if vec.shape[0] != s.ambient_dim:
        raise DimensionMismatch(
            f"vector has length {vec.shape[0]}, subspace ambient dim {s.ambient_dim}"
        )
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        return True  # the zero vector belongs to every subspace
    residual = vec - s.basis @ (s.basis.conj().T @ vec)
    return float(np.linalg.norm(residual)) <= tol * norm


def contains_subspace(inner: Subspace, outer: Subspace, tol: float | None = None) -> bool:
    """True iff every basis column of inner lies in outer."""
    _check_same_dim(inner, outer)
    return all(
        contains_vector(outer, inner.basis[:, i], tol) for i in range(inner.dim)
    )


def is_invariant_under(s: Subspace, p: Projector, tol: float | None = None) -> bool:
    """True iff p maps s into itself.

    An image with norm ≤ tol (columns are unit vectors) counts as the zero
    vector, which lies in every subspace.
    """
    tol = resolve_tol(tol)
    if s.ambient_dim != p.ambient_dim:
        raise DimensionMismatch("subspace and projector dimensions differ")
    for i in range(s.dim):
        image = p.matrix @ s.basis[:, i]
        if float(np.linalg.norm(image)) <= tol:
            continue
        if not contains_vector(s, image, tol):
            return False
    return True


def subspaces_commute(a: Subspace, b: Subspace, tol: float | None = None) -> bool:
    """Lattice-theoretic commutativity: a ∩ (a ∩ b^perp)^perp ⊆ b.

    Agrees with the vanishing of the projector commutator; both members of
    a Boolean block pass, generic subspace pairs fail.
    """
    _check_same_dim(a, b)
    inner = meet(a, complement(b), tol)
    reduced = meet(a, complement(inner), tol)
    return contains_subspace(reduced, b, tol)


def commutator(p, q) -> np.ndarray:
    """PQ - QP for two projectors (or raw square matrices); anti-Hermitian."""
    pm = p.matrix if isinstance(p, Projector) else _as_complex(p)
    qm = q.matrix if isinstance(q, Projector) else _as_complex(q)
    if pm.shape != qm.shape:
        raise DimensionMismatch(f"operand shapes differ: {pm.shape} vs {qm.shape}")
    return pm @ qm - qm @ pm


def _check_spectral_family(spec, which: str, tol: float) -> list[Projector]:
    projs = [p for _, p in spec]
    if not projs:
        raise InvalidSpectralDecomposition(f"{which}: empty spectral family")
    d = projs[0].ambient_dim
    for p in projs:
        if p.ambient_dim != d:
            raise InvalidSpectralDecomposition(f"{which}: mixed dimensions")
        if not 0 < p.rank < d:
            raise InvalidSpectralDecomposition(
                f"{which}: trivial projector of rank {p.rank} in the family"
            )
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            prod = projs[i].matrix @ projs[j].matrix
            if float(np.max(np.abs(prod))) > tol:
                raise InvalidSpectralDecomposition(
                    f"{which}: projectors {i} and {j} do not annihilate"
                )
    total = sum(p.matrix for p in projs)
    if float(np.max(np.abs(total - np.eye(d)))) > tol:
        raise InvalidSpectralDecomposition(f"{which}: family does not sum to identity")
    return projs


def observable_commutator(p_spec, q_spec, tol: float | None = None) -> np.ndarray:
    """Commutator of two observables given by spectral decompositions.

    Each spec is a list of (eigenvalue, Projector) pairs whose projectors
    form a context. Returns sum_n sum_m p_n q_m (P_n Q_m − Q_m P_n), which
    equals the commutator of the assembled operators.
    """
    tol = resolve_tol(tol)
    ps = _check_spectral_family(p_spec, "p_spec", tol)
    qs = _check_spectral_family(q_spec, "q_spec", tol)
    if ps[0].ambient_dim != qs[0].ambient_dim:
        raise DimensionMismatch("spectral families act on different spaces")
    d = ps[0].ambient_dim
    out = np.zeros((d, d), dtype=complex)
    for pn, p in p_spec:
        for qm, q in q_spec:
            out += pn * qm * commutator(p, q)
    return out


def _check_same_dim(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )
