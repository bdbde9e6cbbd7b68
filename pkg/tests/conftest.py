"""Shared randomized constructors for subspaces, states and contexts.

Everything is driven by an explicit numpy Generator so tests stay
reproducible; hypothesis supplies seeds and sizes, not raw arrays.
"""

from __future__ import annotations

import numpy as np

from qprop import Context, Projector, StateVector, Subspace, context_new, zero_space


def random_subspace(rng: np.random.Generator, d: int, r: int) -> Subspace:
    """Haar-ish random r-dimensional subspace of C^d (QR of a Gaussian)."""
    if r == 0:
        return zero_space(d)
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    q, _ = np.linalg.qr(g)
    return Subspace(d, q[:, :r])


def random_state(rng: np.random.Generator, d: int) -> StateVector:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector(d, v)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, _ = np.linalg.qr(g)
    return q


def random_context(
    rng: np.random.Generator, d: int, n_parts: int | None = None, label: str = "ctx"
) -> Context:
    """Random context: a Haar-ish unitary's columns split into >= 2 blocks."""
    if n_parts is None:
        n_parts = int(rng.integers(2, d + 1))
    if not 2 <= n_parts <= d:
        raise ValueError(f"cannot split {d} columns into {n_parts} nontrivial blocks")
    q = random_unitary(rng, d)
    cuts = sorted(rng.choice(np.arange(1, d), size=n_parts - 1, replace=False))
    bounds = [0, *[int(c) for c in cuts], d]
    projectors = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        block = q[:, lo:hi]
        projectors.append(Projector(d, block @ block.conj().T))
    return context_new(label, projectors)


def state_in_subspace(rng: np.random.Generator, s: Subspace) -> StateVector:
    """Random unit vector inside a nonzero subspace."""
    coeffs = rng.standard_normal(s.dim) + 1j * rng.standard_normal(s.dim)
    return StateVector(s.ambient_dim, s.basis @ coeffs)
