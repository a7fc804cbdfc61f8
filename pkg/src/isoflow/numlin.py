"""Deterministic dense complex linear algebra.

Everything downstream (grids, operator families, decompositions) reduces to
a handful of subspace primitives implemented here on complex128 arrays.
Two rules shape the implementation:

* Determinism.  Factorizations are delegated to LAPACK on fixed-layout
  inputs, reduction orders are fixed, and repeated calls on identical input
  bits return identical output bits.

* Exactness.  The constructors in this package produce 0/1-valued,
  permutation-like data.  The primitives detect such input and
  short-circuit to integer-exact arithmetic, so identities that hold
  exactly are reported as exactly zero, not as 1e-16 noise.  Subspaces
  spanned by standard basis vectors carry their coordinate index set in
  ``cells`` and set arithmetic is used whenever both operands have one.

Zero-dimensional subspaces are ordinary values throughout, never errors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidInput

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Subspace",
    "as_matrix",
    "orthonormal_basis",
    "intersect",
    "complement",
    "subtract",
    "nullspace",
    "residual_norm",
    "spectral_norm",
    "column_restricted_residual",
]

_ORTHO_ATOL = 1e-12  # entrywise bound for basis*.basis - I


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by every rank/residual/angle decision.

    rank_rel:  relative singular-value cutoff against the largest one.
    resid_abs: absolute bound under which a residual counts as zero.
    angle:     principal-angle cosine above which directions count as shared.
    """

    rank_rel: float = 1e-10
    resid_abs: float = 1e-10
    angle: float = 1.0 - 1e-8

    def __post_init__(self) -> None:
        for name in ("rank_rel", "resid_abs", "angle"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise InvalidInput(f"tolerance {name} must lie strictly in (0, 1), got {value!r}")


DEFAULT_TOL = Tolerances()


def as_matrix(a) -> np.ndarray:
    """Validate and normalize a dense operator matrix to complex128.

    Raises InvalidInput for non-2D input or non-finite entries.
    """
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise InvalidInput(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if arr.size and not np.isfinite(arr).all():
        raise InvalidInput("matrix has non-finite entries")
    return arr


def _coordinate_cells(basis: np.ndarray) -> tuple[int, ...] | None:
    """Return the coordinate set when columns are exactly standard basis vectors."""
    cells = []
    for col in range(basis.shape[1]):
        support = np.flatnonzero(basis[:, col])
        if support.size != 1 or basis[support[0], col] != 1.0:
            return None
        cells.append(int(support[0]))
    if len(set(cells)) != len(cells):
        return None
    return tuple(sorted(cells))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^ambient held as an orthonormal column basis.

    ``cells`` is set when the subspace is exactly the span of standard
    basis vectors; it has set semantics (sorted, independent of column
    order) and enables integer-exact lattice arithmetic downstream.
    """

    ambient: int
    basis: np.ndarray
    cells: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        basis = np.asarray(self.basis, dtype=np.complex128)
        object.__setattr__(self, "basis", basis)
        if basis.ndim != 2 or basis.shape[0] != self.ambient:
            raise InvalidInput(f"basis shape {basis.shape} incompatible with ambient {self.ambient}")
        if not 0 <= basis.shape[1] <= self.ambient:
            raise InvalidInput("basis has more columns than the ambient dimension")
        if basis.size and not np.isfinite(basis).all():
            raise InvalidInput("basis has non-finite entries")
        gram = basis.conj().T @ basis
        if gram.size and np.abs(gram - np.eye(basis.shape[1])).max() > _ORTHO_ATOL:
            raise InvalidInput("basis columns are not orthonormal to 1e-12")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def gap(self, other: "Subspace") -> float:
        """Spectral distance between the two orthogonal projectors."""
        if other.ambient != self.ambient:
            raise DimensionMismatch("subspaces live in different ambient spaces")
        return residual_norm(self.projector(), other.projector())

    @classmethod
    def from_cells(cls, ambient: int, cells) -> "Subspace":
        cells = tuple(sorted(int(c) for c in cells))
        if any(not 0 <= c < ambient for c in cells):
            raise InvalidInput("cell index outside the ambient space")
        if len(set(cells)) != len(cells):
            raise InvalidInput("duplicate cell index")
        basis = np.zeros((ambient, len(cells)), dtype=np.complex128)
        for j, c in enumerate(cells):
            basis[c, j] = 1.0
        return cls(ambient, basis, cells)

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls.from_cells(ambient, range(ambient))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls.from_cells(ambient, ())


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value; exactly 0.0 for an exactly zero matrix."""
    arr = np.asarray(m)
    if arr.size == 0 or not arr.any():
        return 0.0
    return float(np.linalg.svd(arr, compute_uv=False)[0])


def residual_norm(a, b) -> float:
    """Spectral norm of A - B, exactly 0.0 when the entries agree bitwise."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    if np.array_equal(a, b):
        return 0.0
    return spectral_norm(a - b)


def column_restricted_residual(a: np.ndarray, b: np.ndarray, columns) -> float:
    """Spectral norm of (A - B) restricted to the given columns.

    The restriction implements the faithful-set contract: identities are
    asserted only where both truncations represent the true operators.
    """
    cols = sorted(columns)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    if not cols:
        raise InvalidInput("empty column restriction")
    diff = a[:, cols] - b[:, cols]
    if not diff.any():
        return 0.0
    return float(np.linalg.svd(diff, compute_uv=False)[0])


def orthonormal_basis(m, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the column space of ``m``.

    Rank is the number of singular values >= rank_rel * sigma_max.  Columns
    that are already exactly orthonormal (after dropping exact zero
    columns) are returned as-is, keeping permutation data exact.
    """
    mat = as_matrix(m)
    ambient = mat.shape[0]
    nonzero = [j for j in range(mat.shape[1]) if mat[:, j].any()]
    if not nonzero:
        return Subspace.zero(ambient)
    trimmed = mat[:, nonzero]
    gram = trimmed.conj().T @ trimmed
    if np.array_equal(gram, np.eye(trimmed.shape[1])):
        return Subspace(ambient, trimmed, _coordinate_cells(trimmed))
    u, s, _ = np.linalg.svd(trimmed, full_matrices=False)
    rank = int(np.sum(s >= tol.rank_rel * s[0]))
    basis = u[:, :rank]
    return Subspace(ambient, basis, _coordinate_cells(basis))


def intersect(s1: Subspace, s2: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Numerical intersection of two subspaces.

    Keeps the directions whose principal-angle cosine is >= tol.angle,
    computed from the Hermitian product P1 P2 P1 (eigenvalue = cosine
    squared).  Coordinate-exact operands intersect by set arithmetic.
    """
    if s1.ambient != s2.ambient:
        raise DimensionMismatch("ambient dimensions differ")
    if s1.cells is not None and s2.cells is not None:
        return Subspace.from_cells(s1.ambient, set(s1.cells) & set(s2.cells))
    if s1.dim == 0 or s2.dim == 0:
        return Subspace.zero(s1.ambient)
    p1 = s1.projector()
    core = p1 @ s2.projector() @ p1
    core = (core + core.conj().T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(core)
    keep = eigvals >= tol.angle**2
    basis = eigvecs[:, keep][:, ::-1]  # descending cosine, fixed order
    if basis.shape[1] == 0:
        return Subspace.zero(s1.ambient)
    return Subspace(s1.ambient, basis, _coordinate_cells(basis))


def complement(s: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthogonal complement within the ambient space."""
    if s.cells is not None:
        return Subspace.from_cells(s.ambient, set(range(s.ambient)) - set(s.cells))
    if s.dim == 0:
        return Subspace.full(s.ambient)
    if s.dim == s.ambient:
        return Subspace.zero(s.ambient)
    _, _, vh = np.linalg.svd(s.basis.conj().T, full_matrices=True)
    basis = vh[s.dim:].conj().T
    return Subspace(s.ambient, basis, _coordinate_cells(basis))


def subtract(big: Subspace, small: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthogonal difference ``big (-) small`` for ``small`` contained in ``big``."""
    if big.ambient != small.ambient:
        raise DimensionMismatch("ambient dimensions differ")
    if big.cells is not None and small.cells is not None:
        if not set(small.cells) <= set(big.cells):
            raise InvalidInput("subtrahend is not contained in the minuend")
        return Subspace.from_cells(big.ambient, set(big.cells) - set(small.cells))
    if small.dim == 0:
        return big
    residual = big.basis - small.projector() @ big.basis
    return orthonormal_basis(residual, tol)


def nullspace(m, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical null space of ``m``.

    Directions are the right singular vectors with singular value below
    rank_rel * sigma_max.  The exactly-zero matrix maps to the full space
    with the identity basis.
    """
    mat = as_matrix(m)
    ambient = mat.shape[1]
    if mat.size == 0 or not mat.any():
        return Subspace.full(ambient)
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    rank = int(np.sum(s >= tol.rank_rel * s[0]))
    basis = vh[rank:].conj().T
    if basis.shape[1] == 0:
        return Subspace.zero(ambient)
    return Subspace(ambient, basis, _coordinate_cells(basis))
