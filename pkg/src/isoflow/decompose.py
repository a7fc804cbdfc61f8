"""Canonical splittings of isometric families on their exactness windows.

The unitary part of a family is the intersection of the spans of the
trusted columns of its powers; the split into a unitary and a completely
nonunitary (pure shift) part is computed by iterating that intersection
until it certifies itself by standing still for one extra step.  The
stabilization certificate is always reported, never assumed: a window can
be too small to resolve the unitary part, in which case the result
carries ``stabilized=False``.

On top of the single-family split sit the pair-level operations:
commutation classification, the fourfold split of a doubly commuting
pair, the unitary part of the product family, and the exact-permutation
identification of the half-line translation with its coefficient-space
multiplier model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInput, PreconditionFailed, WindowTooSmall
from .numlin import (DEFAULT_TOL, Subspace, Tolerances, column_restricted_residual,
                     complement, intersect, orthonormal_basis, residual_norm,
                     spectral_norm)
from .report import CheckEntry, Report
from .semigroups import (PairOfSemigroups, SemigroupFamily, WindowedMap, grid_steps,
                         halfline_shift, phi_multiplier)
from .spaces import CellGrid1D, w_unitary

__all__ = [
    "WoldResult",
    "FourfoldResult",
    "CommutationReport",
    "ProductWoldResult",
    "wold_cooper",
    "is_cnu",
    "classify_pair",
    "fourfold_decompose",
    "bcl_check",
    "verify_joint_equivalence",
    "product_unitary_part",
]


@dataclass(frozen=True)
class WoldResult:
    cnu_part: Subspace
    unitary_part: Subspace
    stabilized: bool
    steps_used: int
    unitary_residual: float


@dataclass(frozen=True)
class CommutationReport:
    comm_residual: float
    double_comm_residual: float
    classified: str  # "doubly_commuting" | "commuting" | "neither"


@dataclass(frozen=True)
class FourfoldResult:
    h_pp: Subspace
    h_pu: Subspace
    h_up: Subspace
    h_uu: Subspace
    reduction_residual: float
    wold_first: WoldResult
    wold_second: WoldResult

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.h_pp.dim, self.h_pu.dim, self.h_up.dim, self.h_uu.dim)


@dataclass(frozen=True)
class ProductWoldResult:
    subspace: Subspace
    stabilized: bool
    steps_used: int
    reduction_residual: float


def _faithful_range(element: WindowedMap, tol: Tolerances) -> Subspace:
    cols = sorted(element.faithful)
    if not cols:
        return Subspace.zero(element.domain_dim)
    return orthonormal_basis(element.matrix[:, cols], tol)


def wold_cooper(family: SemigroupFamily, max_steps: int, tol: Tolerances = DEFAULT_TOL) -> WoldResult:
    """Split the space into unitary and pure parts of the family.

    Iterates the generator's powers, intersecting the spans of their
    faithful columns.  Stops early once the intersection is unchanged for
    one extra step (dimension and projector), which is the stabilization
    certificate; running out of steps, including by window exhaustion,
    reports stabilized=False rather than raising.
    """
    if max_steps < 1:
        raise InvalidInput("max_steps must be >= 1")
    current = Subspace.full(family.dim)
    stabilized = False
    steps_used = max_steps
    for k in range(1, max_steps + 1):
        range_k = _faithful_range(family.element(k), tol)
        nxt = intersect(current, range_k, tol)
        if nxt.dim == current.dim and nxt.gap(current) <= tol.resid_abs:
            current = nxt
            stabilized = True
            steps_used = k
            break
        current = nxt
    unitary_part = current
    cnu_part = complement(unitary_part, tol)
    gen = family.generator.matrix
    if unitary_part.dim:
        restr = unitary_part.basis.conj().T @ gen @ unitary_part.basis
        eye = np.eye(unitary_part.dim)
        unitary_residual = max(residual_norm(restr.conj().T @ restr, eye),
                               residual_norm(restr @ restr.conj().T, eye))
    else:
        unitary_residual = 0.0
    return WoldResult(cnu_part, unitary_part, stabilized, steps_used, unitary_residual)


def is_cnu(family: SemigroupFamily, max_steps: int, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when the stabilized unitary part is zero-dimensional."""
    result = wold_cooper(family, max_steps, tol)
    return result.stabilized and result.unitary_part.dim == 0


def _pair_residual(x: WindowedMap, y: WindowedMap) -> tuple[float, int] | None:
    columns = x.faithful & y.faithful
    if not columns:
        return None
    return column_restricted_residual(x.matrix, y.matrix, columns), len(columns)


def classify_pair(pair: PairOfSemigroups, samples, tol: Tolerances = DEFAULT_TOL) -> CommutationReport:
    """Classify a pair as commuting / doubly commuting / neither.

    Residuals are maxima over all ordered sample pairs (t for the first
    family, s for the second), restricted to the composed faithful sets.
    """
    times = list(samples)
    if not times:
        raise InvalidInput("no sample times given")
    comm = 0.0
    double = 0.0
    usable_comm = usable_double = 0
    for t in times:
        a = pair.first.at_time(t)
        for s in times:
            b = pair.second.at_time(s)
            got = _pair_residual(a.compose(b), b.compose(a))
            if got is not None:
                comm = max(comm, got[0])
                usable_comm += 1
            b_adj = b.adjoint()
            got = _pair_residual(a.compose(b_adj), b_adj.compose(a))
            if got is not None:
                double = max(double, got[0])
                usable_double += 1
    if not usable_comm or not usable_double:
        raise WindowTooSmall("no sample pair leaves a nonempty faithful intersection")
    if comm <= tol.resid_abs and double <= tol.resid_abs:
        classified = "doubly_commuting"
    elif comm <= tol.resid_abs:
        classified = "commuting"
    else:
        classified = "neither"
    return CommutationReport(comm, double, classified)


def _reduction_residual(subspace: Subspace, elements) -> float:
    """Max commutation residual of the projector with the given elements."""
    if subspace.dim == 0:
        return 0.0
    p = subspace.projector()
    worst = 0.0
    for element in elements:
        cols = sorted(element.faithful)
        if not cols:
            continue
        diff = (p @ element.matrix - element.matrix @ p)[:, cols]
        worst = max(worst, spectral_norm(diff))
    return worst


def fourfold_decompose(pair: PairOfSemigroups, max_steps: int,
                       tol: Tolerances = DEFAULT_TOL) -> FourfoldResult:
    """Fourfold split of a doubly commuting pair by crossing the two splits.

    Each corner is the intersection of one part of each family's split;
    the reduction residuals cannot be nonzero for a genuinely doubly
    commuting pair, so they are reported as window-pollution detectors.
    """
    step_time = Fraction(1, pair.cells_per_unit)
    verdict = classify_pair(pair, [step_time], tol)
    if verdict.classified != "doubly_commuting":
        raise PreconditionFailed(
            f"pair classifies as {verdict.classified}, needs doubly_commuting")
    w1 = wold_cooper(pair.first, max_steps, tol)
    w2 = wold_cooper(pair.second, max_steps, tol)
    h_pp = intersect(w1.cnu_part, w2.cnu_part, tol)
    h_pu = intersect(w1.cnu_part, w2.unitary_part, tol)
    h_up = intersect(w1.unitary_part, w2.cnu_part, tol)
    h_uu = intersect(w1.unitary_part, w2.unitary_part, tol)
    gens = [pair.first.generator, pair.second.generator]
    residual = max(_reduction_residual(part, gens) for part in (h_pp, h_pu, h_up, h_uu))
    return FourfoldResult(h_pp, h_pu, h_up, h_uu, residual, w1, w2)


def bcl_check(T: int, m: int, r: int, samples, tol: Tolerances = DEFAULT_TOL) -> Report:
    """Exact identification of the half-line shift with its multiplier model.

    Conjugates each sampled shift by the interval-stacking permutation and
    compares with the degree-block multiplier; both sides are partial
    permutations, so the check demands residual exactly zero on the common
    window.
    """
    grid = CellGrid1D(m, T, r)
    w = w_unitary(T, m, r)
    w_image = {i: int(np.flatnonzero(w[:, i])[0]) for i in range(grid.dim)}
    entries = []
    for t in samples:
        time = Fraction(t)
        shift = halfline_shift(grid, time)
        multiplier = phi_multiplier(T - 1, m, r, time)
        conjugated = w @ shift.matrix @ w.conj().T
        columns = {w_image[i] for i in shift.faithful} & multiplier.faithful
        if not columns:
            raise WindowTooSmall(f"time {time} leaves no faithful window")
        residual = column_restricted_residual(conjugated, multiplier.matrix, columns)
        entries.append(CheckEntry(f"t={time}", residual, (len(columns),), residual == 0.0))
    return Report(scenario=f"bcl[T={T},m={m},r={r}]", entries=entries)


def verify_joint_equivalence(pair_a: PairOfSemigroups, pair_b: PairOfSemigroups,
                             z: np.ndarray, samples,
                             tol: Tolerances = DEFAULT_TOL) -> Report:
    """Check Z A_{j,t} Z* = B_{j,t} on faithful windows for j = 1, 2.

    Only verifies a supplied equivalence; finding one is out of scope.
    """
    z = np.asarray(z, dtype=np.complex128)
    eye = np.eye(z.shape[0])
    if max(residual_norm(z.conj().T @ z, eye), residual_norm(z @ z.conj().T, eye)) > tol.resid_abs:
        raise PreconditionFailed("supplied conjugation is not unitary within tolerance")
    row_support = {i: frozenset(int(x) for x in np.flatnonzero(z[i, :])) for i in range(z.shape[0])}
    entries = []
    usable = 0
    for axis, (fam_a, fam_b) in enumerate(((pair_a.first, pair_b.first),
                                           (pair_a.second, pair_b.second)), start=1):
        for t in samples:
            time = Fraction(t)
            a = fam_a.at_time(time)
            b = fam_b.at_time(time)
            conjugated = z @ a.matrix @ z.conj().T
            columns = {i for i in b.faithful if row_support[i] <= a.faithful}
            check_id = f"axis{axis}_t={time}"
            if not columns:
                entries.append(CheckEntry(check_id, 0.0, (0,), True, "empty window, skipped"))
                continue
            usable += 1
            residual = column_restricted_residual(conjugated, b.matrix, columns)
            entries.append(CheckEntry(check_id, residual, (len(columns),),
                                      residual <= tol.resid_abs))
    if not usable:
        raise WindowTooSmall("no sample leaves a nonempty faithful window")
    return Report(scenario="joint_equivalence", entries=entries)


def product_unitary_part(pair: PairOfSemigroups, max_steps: int,
                         tol: Tolerances = DEFAULT_TOL) -> ProductWoldResult:
    """Unitary part of the product family t -> V1_t V2_t of a commuting pair.

    The result is checked to reduce both factors; the residuals are folded
    into ``reduction_residual``.
    """
    step_time = Fraction(1, pair.cells_per_unit)
    verdict = classify_pair(pair, [step_time], tol)
    if verdict.comm_residual > tol.resid_abs:
        raise PreconditionFailed("product family of a non-commuting pair is not a semigroup")
    generator = pair.first.generator.compose(pair.second.generator)
    product = SemigroupFamily(generator, label="product", cells_per_unit=pair.cells_per_unit)
    wold = wold_cooper(product, max_steps, tol)
    residual = _reduction_residual(wold.unitary_part,
                                   [pair.first.generator, pair.second.generator])
    return ProductWoldResult(wold.unitary_part, wold.stabilized, wold.steps_used, residual)
