"""Index conventions for the discretized function spaces.

All spaces are coordinate spaces indexed by cells of a uniform grid with
``m`` cells per unit length plus an inner fiber coordinate.  The layouts
are fixed once and for all here; reports and golden files depend on them:

* 1-D cell grid on [0, T):       ``index(k, rho) = k*r + rho`` with cell
  ``k`` in ``[0, m*T)``.
* coefficient space of degrees 0..d over the m-cell interval: degree
  block ``n`` occupies ``m*r`` consecutive coordinates, interval-cell
  major then fiber: ``index(n, j, rho) = n*m*r + j*r + rho``.
* quadrant grid on [0, T)^2:     axis-1 major,
  ``index(k1, k2, rho) = (k1*m*T + k2)*r + rho``.
* torus grid, n cells per cyclic axis: same lexicographic rule with all
  axis arithmetic modulo n.

For the two-sided constructions the torus has ``n = 2*m*T`` cells per
axis and axis index ``k`` represents the physical cell ``k - m*T`` of the
window [-T, T); cyclic translations are then exactly unitary and the
wrap-affected cells are excluded from faithful sets by the callers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, InvalidRegion

__all__ = [
    "CellGrid1D",
    "HardyCoeffSpace",
    "QuadrantGrid2D",
    "TorusGrid2D",
    "LRegionIndex",
    "w_unitary",
    "lambda_reorder",
    "region_injection",
]


def _require_positive(**values: int) -> None:
    for name, value in values.items():
        if int(value) != value or value < 1:
            raise InvalidInput(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class CellGrid1D:
    """Uniform cell grid on [0, T) with fiber dimension r."""

    m: int
    T: int
    r: int = 1

    def __post_init__(self) -> None:
        _require_positive(m=self.m, T=self.T, r=self.r)

    @property
    def cells(self) -> int:
        return self.m * self.T

    @property
    def dim(self) -> int:
        return self.cells * self.r

    def index(self, k: int, rho: int = 0) -> int:
        if not (0 <= k < self.cells and 0 <= rho < self.r):
            raise InvalidInput(f"grid index ({k}, {rho}) out of range")
        return k * self.r + rho


@dataclass(frozen=True)
class HardyCoeffSpace:
    """Coefficient space of degrees 0..d with m-cell interval fibers."""

    d: int
    m: int
    r: int = 1

    def __post_init__(self) -> None:
        _require_positive(m=self.m, r=self.r)
        if int(self.d) != self.d or self.d < 0:
            raise InvalidInput(f"top degree must be a nonnegative integer, got {self.d!r}")

    @property
    def block(self) -> int:
        """Coordinates per degree block."""
        return self.m * self.r

    @property
    def dim(self) -> int:
        return (self.d + 1) * self.block

    def index(self, n: int, j: int, rho: int = 0) -> int:
        if not (0 <= n <= self.d and 0 <= j < self.m and 0 <= rho < self.r):
            raise InvalidInput(f"coefficient index ({n}, {j}, {rho}) out of range")
        return n * self.block + j * self.r + rho


@dataclass(frozen=True)
class QuadrantGrid2D:
    """Cell grid on the quadrant [0, T)^2, axis-1 major."""

    m: int
    T: int
    r: int = 1

    def __post_init__(self) -> None:
        _require_positive(m=self.m, T=self.T, r=self.r)

    @property
    def side(self) -> int:
        return self.m * self.T

    @property
    def dim(self) -> int:
        return self.side * self.side * self.r

    def index(self, k1: int, k2: int, rho: int = 0) -> int:
        if not (0 <= k1 < self.side and 0 <= k2 < self.side and 0 <= rho < self.r):
            raise InvalidInput(f"quadrant index ({k1}, {k2}, {rho}) out of range")
        return (k1 * self.side + k2) * self.r + rho


@dataclass(frozen=True)
class TorusGrid2D:
    """Cyclic grid with n cells per axis; index arithmetic is modulo n."""

    n: int
    r: int = 1

    def __post_init__(self) -> None:
        _require_positive(n=self.n, r=self.r)

    @property
    def dim(self) -> int:
        return self.n * self.n * self.r

    def index(self, k1: int, k2: int, rho: int = 0) -> int:
        if not 0 <= rho < self.r:
            raise InvalidInput(f"fiber index {rho} out of range")
        return ((k1 % self.n) * self.n + (k2 % self.n)) * self.r + rho


@dataclass(frozen=True)
class LRegionIndex:
    """The window [-T, T)^2 with the quadrant [0, T)^2 removed.

    Lives inside a parent torus with ``n = 2*m*T`` cells per axis; axis
    index ``k`` stands for the physical cell ``k - m*T``.  The selected
    (L-shaped) cells and the removed quadrant cells are reported as
    sorted flat parent indices, which fixes the coordinate order of every
    operator built on them.
    """

    m: int
    T: int
    r: int = 1
    parent: TorusGrid2D = field(init=False)

    def __post_init__(self) -> None:
        _require_positive(m=self.m, T=self.T, r=self.r)
        object.__setattr__(self, "parent", TorusGrid2D(2 * self.m * self.T, self.r))

    @property
    def half(self) -> int:
        """Cells per half axis, i.e. m*T."""
        return self.m * self.T

    def physical(self, k: int) -> int:
        """Physical cell coordinate represented by torus axis index k."""
        return k - self.half

    def quadrant_cells(self) -> tuple[int, ...]:
        n, half, r = self.parent.n, self.half, self.r
        out = []
        for k1 in range(half, n):
            for k2 in range(half, n):
                for rho in range(r):
                    out.append(self.parent.index(k1, k2, rho))
        return tuple(sorted(out))

    def l_cells(self) -> tuple[int, ...]:
        quadrant = set(self.quadrant_cells())
        return tuple(i for i in range(self.parent.dim) if i not in quadrant)


def w_unitary(T: int, m: int, r: int = 1) -> np.ndarray:
    """Permutation unitary regrouping a 1-D grid into coefficient blocks.

    Grid cell ``k = n*m + j`` (fiber preserved) is sent to degree ``n``,
    interval cell ``j`` of the coefficient space of top degree T-1.
    """
    grid = CellGrid1D(m, T, r)
    coeff = HardyCoeffSpace(T - 1, m, r)
    w = np.zeros((coeff.dim, grid.dim), dtype=np.complex128)
    for k in range(grid.cells):
        n, j = divmod(k, m)
        for rho in range(r):
            w[coeff.index(n, j, rho), grid.index(k, rho)] = 1.0
    return w


def lambda_reorder(m: int, r: int = 1) -> np.ndarray:
    """Permutation from fiber-major (rho*m + k) to cell-major (k*r + rho)."""
    _require_positive(m=m, r=r)
    lam = np.zeros((m * r, m * r), dtype=np.complex128)
    for rho in range(r):
        for k in range(m):
            lam[k * r + rho, rho * m + k] = 1.0
    return lam


def region_injection(sub, ambient) -> np.ndarray:
    """Isometric 0/1 matrix placing sub-coordinates at their ambient positions.

    ``ambient`` is either the ambient dimension or an explicit index set
    whose sorted order defines the ambient coordinates.  ``sub`` must be
    contained in it.
    """
    if isinstance(ambient, (int, np.integer)):
        ambient_list = list(range(int(ambient)))
    else:
        ambient_list = sorted(int(i) for i in ambient)
    sub_list = sorted(int(i) for i in sub)
    position = {idx: row for row, idx in enumerate(ambient_list)}
    if len(position) != len(ambient_list):
        raise InvalidRegion("ambient index set has duplicates")
    missing = [i for i in sub_list if i not in position]
    if missing:
        raise InvalidRegion(f"sub indices {missing} not contained in the ambient set")
    if len(set(sub_list)) != len(sub_list):
        raise InvalidRegion("sub index set has duplicates")
    j = np.zeros((len(ambient_list), len(sub_list)), dtype=np.complex128)
    for col, idx in enumerate(sub_list):
        j[position[idx], col] = 1.0
    return j
