"""Minimal unitary extensions on finite ambients and dual-pair extraction.

An ``ExtensionSetup`` supplies the extension as data: two commuting
unitaries on a finite ambient space (exact permutations wherever
possible) together with an embedded subspace whose compressions recover
the pair of isometric families under study.  Solving for extensions of
abstract pairs is out of scope; the bundled setups realize the two-sided
translation ambients in which the compressions are exact.

The dual of the pair is the adjoint extension compressed to the
orthogonal complement of the original space inside the minimal extension
space.  The minimal extension space itself is certified by a finite orbit
computation: the span of U1^a U2^b H over the box |a|, |b| <= A, with A
grown until two consecutive spans agree in dimension and projector.  The
continuum statement quantifies over real parameters; the certificate here
covers the integer box only, and that distinction is always reported (the
``stabilized`` flag), never hidden.

When both unitaries are generalized permutations and the subspace is a
coordinate span, every computation below stays in integer-exact set
arithmetic; otherwise the general dense path is used.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import (InternalInconsistency, InvalidInput, PreconditionFailed,
                     WindowTooSmall)
from .numlin import (DEFAULT_TOL, Subspace, Tolerances, column_restricted_residual,
                     intersect, orthonormal_basis, residual_norm, spectral_norm,
                     subtract)
from .decompose import (classify_pair, fourfold_decompose, product_unitary_part,
                        wold_cooper)
from .report import CheckEntry, Report
from .semigroups import (PairOfSemigroups, SemigroupFamily, WindowedMap, circulant_unitary,
                         direct_sum, modified_bishift_pair, torus_translation)
from .spaces import LRegionIndex

__all__ = [
    "ExtensionSetup",
    "OrbitSpan",
    "DualResult",
    "DualFourfoldResult",
    "minimal_extension",
    "dual_pair",
    "dual_cnu_check",
    "double_dual_check",
    "dual_fourfold",
    "modified_bishift_model_check",
    "simultaneous_dc_ddc_classify",
    "l_region_setup",
    "bishift_setup",
    "halfline_circulant_setup",
    "circulant_pair_setup",
    "setup_direct_sum",
]

_UNITARY_ATOL = 1e-12


def _supp(vector: np.ndarray) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(vector))


@dataclass(frozen=True, eq=False)
class ExtensionSetup:
    """Commuting ambient unitaries plus the embedded original subspace.

    The unitaries are carried as WindowedMaps so that their own exactness
    windows (wrap-affected cells of a cyclic ambient) propagate into every
    compression.  ``physical_window`` records the ambient indices that
    represent the modeled region; it is echoed into reports.
    """

    u1: WindowedMap
    u2: WindowedMap
    h: Subspace
    physical_window: frozenset[int]
    cells_per_unit: int = 1
    label: str = ""
    geometry: LRegionIndex | None = None

    def __post_init__(self) -> None:
        n = self.u1.domain_dim
        if self.u1.codomain_dim != n or self.u2.matrix.shape != (n, n):
            raise InvalidInput("ambient unitaries must be square and equal-sized")
        if self.h.ambient != n:
            raise InvalidInput("subspace ambient does not match the unitaries")
        eye = np.eye(n)
        for tag, u in (("U1", self.u1), ("U2", self.u2)):
            if residual_norm(u.matrix.conj().T @ u.matrix, eye) > _UNITARY_ATOL:
                raise InvalidInput(f"{tag} is not unitary to 1e-12")
        if spectral_norm(self.u1.matrix @ self.u2.matrix
                         - self.u2.matrix @ self.u1.matrix) > _UNITARY_ATOL:
            raise InvalidInput("ambient unitaries do not commute")
        if self.cells_per_unit < 1:
            raise InvalidInput("cells_per_unit must be >= 1")
        object.__setattr__(self, "physical_window",
                           frozenset(int(i) for i in self.physical_window))

    @property
    def ambient_dim(self) -> int:
        return self.u1.domain_dim

    def compressed_pair(self) -> PairOfSemigroups:
        """The pair of isometric families P_H U_i|_H that the setup encodes."""
        g1 = _compress(self.u1, self.h)
        g2 = _compress(self.u2, self.h)
        return PairOfSemigroups(
            SemigroupFamily(g1, f"{self.label}:V1", self.cells_per_unit),
            SemigroupFamily(g2, f"{self.label}:V2", self.cells_per_unit))


@dataclass(frozen=True)
class OrbitSpan:
    span: Subspace
    stabilized: bool
    radius: int


@dataclass(frozen=True)
class DualResult:
    obh: Subspace
    wth: Subspace
    pair: PairOfSemigroups
    invariance_residuals: tuple[float, float]
    radius: int


@dataclass(frozen=True)
class DualFourfoldResult:
    h_m: Subspace
    h_pu: Subspace
    h_up: Subspace
    h_uu: Subspace
    tilde_dims: tuple[int, int, int, int]
    orthogonality_residual: float
    reduction_residual: float

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.h_m.dim, self.h_pu.dim, self.h_up.dim, self.h_uu.dim)


# ---------------------------------------------------------------------------
# compressions and orbit spans


def _compress(u: WindowedMap, sub: Subspace) -> WindowedMap:
    """Compression of an ambient map to a subspace, with derived windows.

    For a coordinate subspace the compressed column at a cell is trusted
    exactly when the ambient column is trusted and its support stays
    inside the subspace (the setup promises invariance on trusted cells,
    so an escaping image means wrap pollution).  The adjoint direction is
    a co-isometry whose kills are true compression behavior: its window
    only excludes cells where the ambient adjoint itself is untrusted.
    For a general basis the compression is the dense conjugation; its
    window is the full local space, which is the honest choice when the
    finite matrices are themselves the represented operators.
    """
    if sub.cells is not None:
        cells = list(sub.cells)
        cellset = frozenset(cells)
        matrix = u.matrix[np.ix_(cells, cells)]
        faithful = frozenset(
            pos for pos, c in enumerate(cells)
            if c in u.faithful and _supp(u.matrix[:, c]) <= cellset)
        adj_faithful = frozenset(
            pos for pos, c in enumerate(cells) if c in u.adj_faithful)
        return WindowedMap(matrix, faithful, adj_faithful, u.domain, u.codomain)
    matrix = sub.basis.conj().T @ u.matrix @ sub.basis
    return WindowedMap.full(matrix, u.domain, u.codomain)


def _generalized_permutation(matrix: np.ndarray) -> np.ndarray | None:
    """Column -> row support map when the matrix has one nonzero per row/column."""
    n = matrix.shape[0]
    image = np.empty(n, dtype=np.int64)
    for col in range(n):
        support = np.flatnonzero(matrix[:, col])
        if support.size != 1:
            return None
        image[col] = support[0]
    if len(set(image.tolist())) != n:
        return None
    return image


def _power_maps(perm: np.ndarray, radius: int) -> dict[int, np.ndarray]:
    n = len(perm)
    inverse = np.empty(n, dtype=np.int64)
    inverse[perm] = np.arange(n)
    powers = {0: np.arange(n)}
    for a in range(1, radius + 1):
        powers[a] = perm[powers[a - 1]]
        powers[-a] = inverse[powers[-(a - 1)]]
    return powers


def _orbit_span(u1: WindowedMap, u2: WindowedMap, start: Subspace,
                max_orbit: int, tol: Tolerances) -> OrbitSpan:
    """Span of U1^a U2^b (start) over the box |a|, |b| <= A, grown until stable."""
    if max_orbit < 1:
        raise InvalidInput("max_orbit must be >= 1")
    p1 = _generalized_permutation(u1.matrix)
    p2 = _generalized_permutation(u2.matrix)
    if start.cells is not None and p1 is not None and p2 is not None:
        pw1 = _power_maps(p1, max_orbit)
        pw2 = _power_maps(p2, max_orbit)
        base = np.array(start.cells, dtype=np.int64)

        def box(radius: int) -> frozenset[int]:
            out: set[int] = set()
            for a in range(-radius, radius + 1):
                for b in range(-radius, radius + 1):
                    out.update(pw1[a][pw2[b][base]].tolist())
            return frozenset(out)

        current = box(0)
        for radius in range(max_orbit):
            grown = box(radius + 1)
            if grown == current:
                return OrbitSpan(Subspace.from_cells(start.ambient, current), True, radius)
            current = grown
        return OrbitSpan(Subspace.from_cells(start.ambient, current), False, max_orbit)

    def dense_box(radius: int) -> Subspace:
        blocks = []
        for a in range(-radius, radius + 1):
            left = np.linalg.matrix_power(u1.matrix if a >= 0 else u1.matrix.conj().T, abs(a))
            for b in range(-radius, radius + 1):
                right = np.linalg.matrix_power(u2.matrix if b >= 0 else u2.matrix.conj().T, abs(b))
                blocks.append(left @ right @ start.basis)
        return orthonormal_basis(np.hstack(blocks), tol)

    current = dense_box(0)
    for radius in range(max_orbit):
        grown = dense_box(radius + 1)
        if grown.dim == current.dim and grown.gap(current) <= tol.resid_abs:
            return OrbitSpan(current, True, radius)
        current = grown
    return OrbitSpan(current, False, max_orbit)


def minimal_extension(setup: ExtensionSetup, max_orbit: int,
                      tol: Tolerances = DEFAULT_TOL) -> OrbitSpan:
    """Certified span of the unitary orbit of the embedded subspace."""
    return _orbit_span(setup.u1, setup.u2, setup.h, max_orbit, tol)


def _lift_local(local: Subspace, host: Subspace) -> Subspace:
    """Embed a subspace given in host-local coordinates into the ambient."""
    if host.cells is not None and local.cells is not None:
        cells = [host.cells[i] for i in local.cells]
        return Subspace.from_cells(host.ambient, cells)
    return orthonormal_basis(host.basis @ local.basis)


def _restrict_to(host: Subspace, part: Subspace, tol: Tolerances) -> Subspace:
    """Express an ambient subspace contained in ``host`` in host-local coordinates."""
    if host.cells is not None and part.cells is not None:
        position = {cell: pos for pos, cell in enumerate(host.cells)}
        missing = [c for c in part.cells if c not in position]
        if missing:
            raise InternalInconsistency(f"cells {missing} fall outside the host subspace")
        return Subspace.from_cells(host.dim, [position[c] for c in part.cells])
    local = host.basis.conj().T @ part.basis
    contained = residual_norm(host.basis @ local, part.basis)
    if contained > 1e-8:
        raise InternalInconsistency("subspace is not contained in the host")
    return orthonormal_basis(local, tol)


# ---------------------------------------------------------------------------
# dual pair operations


def dual_pair(setup: ExtensionSetup, max_orbit: int,
              tol: Tolerances = DEFAULT_TOL) -> DualResult:
    """Dual of the compressed pair: adjoint extension on obH minus H.

    Reports the invariance defect of the complement under each adjoint
    unitary, restricted to faithful columns (the complement is invariant
    for the adjoints; a nonzero value flags window pollution).
    """
    extension = minimal_extension(setup, max_orbit, tol)
    if not extension.stabilized:
        raise PreconditionFailed(f"orbit span did not stabilize within radius {max_orbit}")
    wth = subtract(extension.span, setup.h, tol)
    residuals = []
    for u in (setup.u1, setup.u2):
        adj = u.adjoint()
        if wth.dim == 0:
            residuals.append(0.0)
            continue
        if wth.cells is not None:
            cols = sorted(set(wth.cells) & adj.faithful)
            if not cols:
                residuals.append(0.0)
                continue
            defect = ((np.eye(setup.ambient_dim) - wth.projector()) @ adj.matrix)[:, cols]
            residuals.append(spectral_norm(defect))
        else:
            p = wth.projector()
            residuals.append(spectral_norm((np.eye(setup.ambient_dim) - p) @ adj.matrix @ p))
    g1 = _compress(setup.u1.adjoint(), wth)
    g2 = _compress(setup.u2.adjoint(), wth)
    pair = PairOfSemigroups(
        SemigroupFamily(g1, f"{self_label(setup)}:dual1", setup.cells_per_unit),
        SemigroupFamily(g2, f"{self_label(setup)}:dual2", setup.cells_per_unit))
    return DualResult(extension.span, wth, pair, (residuals[0], residuals[1]),
                      extension.radius)


def self_label(setup: ExtensionSetup) -> str:
    return setup.label or "setup"


def dual_cnu_check(setup: ExtensionSetup, max_steps: int,
                   tol: Tolerances = DEFAULT_TOL, max_orbit: int = 16) -> Report:
    """The dual pair must be completely nonunitary.

    Verified through the product family: the pair is c.n.u. exactly when
    the unitary part of t -> V1_t V2_t vanishes.  An empty dual passes
    vacuously.  This is a theorem on faithful data, so a failure entry
    here flags window pollution rather than new mathematics.
    """
    dual = dual_pair(setup, max_orbit, tol)
    entries = []
    if dual.wth.dim == 0:
        entries.append(CheckEntry("empty_dual", 0.0, (0,), True, "vacuous"))
    else:
        product = product_unitary_part(dual.pair, max_steps, tol)
        entries.append(CheckEntry(
            "dual_product_unitary_dim", product.reduction_residual,
            (product.subspace.dim,), product.subspace.dim == 0 and product.stabilized,
            f"stabilized={product.stabilized}"))
    entries.append(CheckEntry("dual_invariance", max(dual.invariance_residuals),
                              (dual.wth.dim,), max(dual.invariance_residuals) <= tol.resid_abs))
    return Report(scenario=f"dual_cnu[{self_label(setup)}]", entries=entries)


def double_dual_check(setup: ExtensionSetup, max_orbit: int,
                      tol: Tolerances = DEFAULT_TOL,
                      radius_bound: int | None = None) -> Report:
    """Dual of the dual recovers the original pair; minimality certified.

    Requires the original pair to be c.n.u. (checked through the product
    family); the recovered compressions are compared with the original
    ones restricted to their common faithful columns, and the orbit of the
    dual space under the adjoint unitaries must reproduce the extension
    space.  ``radius_bound``, when given, caps the orbit radius at which
    that minimality certificate is allowed to stabilize.
    """
    if setup.h.dim == 0:
        raise PreconditionFailed("empty original space: c.n.u. check is undefined")
    original = setup.compressed_pair()
    product = product_unitary_part(original, max_orbit, tol)
    if product.subspace.dim != 0 or not product.stabilized:
        raise PreconditionFailed(
            f"original pair is not certified c.n.u. (unitary dim {product.subspace.dim}, "
            f"stabilized={product.stabilized})")
    first_dual = dual_pair(setup, max_orbit, tol)
    dual_setup = replace(setup, u1=setup.u1.adjoint(), u2=setup.u2.adjoint(),
                         h=first_dual.wth, label=f"{self_label(setup)}~")
    second_dual = dual_pair(dual_setup, max_orbit, tol)
    entries = [
        CheckEntry("minimality_gap", second_dual.obh.gap(first_dual.obh),
                   (second_dual.obh.dim,),
                   second_dual.obh.gap(first_dual.obh) <= tol.resid_abs),
        CheckEntry("minimality_radius", 0.0, (second_dual.radius,),
                   radius_bound is None or second_dual.radius <= radius_bound,
                   f"orbit stabilized at radius {second_dual.radius}"),
        CheckEntry("recovered_space_gap", second_dual.wth.gap(setup.h),
                   (second_dual.wth.dim,), second_dual.wth.gap(setup.h) <= tol.resid_abs),
    ]
    recovered = second_dual.pair
    for axis, (rec, orig) in enumerate(((recovered.first, original.first),
                                        (recovered.second, original.second)), start=1):
        if second_dual.wth.cells is not None and setup.h.cells is not None \
                and second_dual.wth.cells == setup.h.cells:
            columns = rec.generator.faithful & orig.generator.faithful
            residual = column_restricted_residual(rec.generator.matrix,
                                                  orig.generator.matrix, columns)
            dims = (len(columns),)
        else:
            p_rec = second_dual.wth.projector()
            p_orig = setup.h.projector()
            u = (setup.u1 if axis == 1 else setup.u2).matrix
            residual = spectral_norm(p_rec @ u @ p_rec - p_orig @ u @ p_orig)
            dims = (second_dual.wth.dim,)
        entries.append(CheckEntry(f"recovered_axis{axis}", residual, dims,
                                  residual <= tol.resid_abs))
    return Report(scenario=f"double_dual[{self_label(setup)}]", entries=entries)


def dual_fourfold(setup: ExtensionSetup, max_steps: int, max_orbit: int,
                  tol: Tolerances = DEFAULT_TOL) -> DualFourfoldResult:
    """Cooper-type splitting of a dual doubly commuting pair.

    The unitary-times-unitary corner comes from the product family on the
    original space.  On its complement the dual pair is split fourfold;
    its unitary-times-unitary corner must vanish (a theorem for duals:
    nonzero means window pollution and raises InternalInconsistency).
    The remaining three dual corners are lifted back by orbit spans under
    the original unitaries, and the original summands are the lifted
    spaces minus the dual corners.
    """
    pair = setup.compressed_pair()
    product = product_unitary_part(pair, max_steps, tol)
    if not product.stabilized:
        raise WindowTooSmall("product unitary part did not stabilize")
    h_uu_local = product.subspace
    h_uu_ambient = _lift_local(h_uu_local, setup.h)
    h_s_ambient = subtract(setup.h, h_uu_ambient, tol)
    zero_local = Subspace.zero(setup.h.dim)
    if h_s_ambient.dim == 0:
        return DualFourfoldResult(zero_local, zero_local, zero_local, h_uu_local,
                                  (0, 0, 0, 0), 0.0, product.reduction_residual)
    reduced = replace(setup, h=h_s_ambient, label=f"{self_label(setup)}|cnu")
    dual = dual_pair(reduced, max_orbit, tol)
    step = Fraction(1, setup.cells_per_unit)
    verdict = classify_pair(dual.pair, [step], tol)
    if verdict.classified != "doubly_commuting":
        raise PreconditionFailed(f"dual pair classifies as {verdict.classified}; "
                                 "the splitting needs dual double commutation")
    split = fourfold_decompose(dual.pair, max_steps, tol)
    if split.h_uu.dim != 0:
        raise InternalInconsistency(
            f"dual unitary-unitary corner has dimension {split.h_uu.dim}; "
            "the dual of a c.n.u. pair admits none (window pollution)")
    tilde_dims = split.dims
    hats: list[Subspace] = []
    parts_ambient: list[Subspace] = []
    for tilde_local in (split.h_pp, split.h_pu, split.h_up):
        tilde_ambient = _lift_local(tilde_local, dual.wth)
        if tilde_local.dim == 0:
            hats.append(Subspace.zero(setup.ambient_dim))
            parts_ambient.append(Subspace.zero(setup.ambient_dim))
            continue
        lift = _orbit_span(setup.u1, setup.u2, tilde_ambient, max_orbit, tol)
        if not lift.stabilized:
            raise WindowTooSmall("lifted orbit span did not stabilize")
        hats.append(lift.span)
        parts_ambient.append(subtract(lift.span, tilde_ambient, tol))
    ortho = 0.0
    for i in range(len(hats)):
        for j in range(i + 1, len(hats)):
            if hats[i].dim and hats[j].dim:
                ortho = max(ortho, spectral_norm(hats[i].projector() @ hats[j].projector()))
    locals_ = [_restrict_to(setup.h, part, tol) for part in parts_ambient]
    h_m, h_pu, h_up = locals_
    gens = [pair.first.generator, pair.second.generator]
    reduction = max(
        product.reduction_residual,
        *(_part_reduction(part, gens) for part in (h_m, h_pu, h_up, h_uu_local)))
    return DualFourfoldResult(h_m, h_pu, h_up, h_uu_local, tilde_dims, ortho, reduction)


def _part_reduction(part: Subspace, generators) -> float:
    if part.dim == 0:
        return 0.0
    p = part.projector()
    worst = 0.0
    for gen in generators:
        cols = sorted(gen.faithful)
        if not cols:
            continue
        worst = max(worst, spectral_norm((p @ gen.matrix - gen.matrix @ p)[:, cols]))
    return worst


def modified_bishift_model_check(setup: ExtensionSetup, max_steps: int, max_orbit: int,
                                 tol: Tolerances = DEFAULT_TOL) -> Report:
    """A pair whose dual is a pure bishift matches the canonical L-region model.

    The dual is split fourfold; it must be concentrated in the
    pure-times-pure corner (that is the bishift certificate).  The
    recovered quadrant coordinates then define the reindexing onto the
    canonical region, and the conjugated original pair is compared with
    the canonical compressed-translation pair, fiber included.
    """
    if setup.geometry is None:
        raise PreconditionFailed("setup carries no region geometry to compare against")
    region = setup.geometry
    dual = dual_pair(setup, max_orbit, tol)
    step = Fraction(1, setup.cells_per_unit)
    verdict = classify_pair(dual.pair, [step], tol)
    if verdict.classified != "doubly_commuting":
        raise PreconditionFailed("dual pair is not doubly commuting, hence not a bishift")
    split = fourfold_decompose(dual.pair, max_steps, tol)
    if split.dims != (dual.wth.dim, 0, 0, 0):
        raise PreconditionFailed(f"dual fourfold dims {split.dims} are not pure bishift")
    expected_quadrant = set(region.quadrant_cells())
    if dual.wth.cells is None or set(dual.wth.cells) != expected_quadrant:
        raise PreconditionFailed("recovered dual space does not sit on the quadrant cells")
    entries = [CheckEntry("dual_bishift_dims", 0.0, split.dims, True)]
    if setup.h.cells is None:
        raise PreconditionFailed("original space is not a coordinate subspace")
    canonical_cells = region.l_cells()
    order = {cell: pos for pos, cell in enumerate(canonical_cells)}
    dim = len(canonical_cells)
    z = np.zeros((dim, dim), dtype=np.complex128)
    for pos, cell in enumerate(setup.h.cells):
        z[order[cell], pos] = 1.0  # setup coordinates -> canonical region coordinates
    m1, m2 = modified_bishift_pair(region, step)
    pair = setup.compressed_pair()
    for axis, (fam, model) in enumerate(((pair.first, m1), (pair.second, m2)), start=1):
        gen = fam.generator
        conjugated = z @ gen.matrix @ z.conj().T
        mapped_faithful = {order[setup.h.cells[i]] for i in gen.faithful}
        columns = mapped_faithful & model.faithful
        if not columns:
            raise WindowTooSmall("no common faithful window for the model comparison")
        residual = column_restricted_residual(conjugated, model.matrix, columns)
        entries.append(CheckEntry(f"model_axis{axis}", residual, (len(columns),),
                                  residual <= tol.resid_abs))
    return Report(scenario=f"modified_bishift_model[{self_label(setup)}]", entries=entries)


def simultaneous_dc_ddc_classify(setup: ExtensionSetup, max_steps: int, max_orbit: int,
                                 tol: Tolerances = DEFAULT_TOL) -> Report:
    """Classify double commutation of the pair and of its dual, jointly.

    When both hold, the space must split into the three mixed/unitary
    summands with both the pure-times-pure corner and the two-sided
    compressed-translation corner absent; the splitting is computed and
    those two dimensions are checked to vanish.
    """
    step = Fraction(1, setup.cells_per_unit)
    pair = setup.compressed_pair()
    entries = []
    dc = classify_pair(pair, [step], tol)
    entries.append(CheckEntry("doubly_commuting", dc.double_comm_residual,
                              (1 if dc.classified == "doubly_commuting" else 0,), True,
                              dc.classified))
    try:
        dual = dual_pair(setup, max_orbit, tol)
    except (PreconditionFailed, WindowTooSmall) as exc:
        entries.append(CheckEntry("dual", 0.0, (), False, f"window exhausted: {exc}"))
        return Report(scenario=f"simultaneous[{self_label(setup)}]", entries=entries)
    if dual.wth.dim == 0:
        ddc_holds = True
        entries.append(CheckEntry("dual_doubly_commuting", 0.0, (1,), True,
                                  "empty dual, vacuous"))
    else:
        ddc = classify_pair(dual.pair, [step], tol)
        ddc_holds = ddc.classified == "doubly_commuting"
        entries.append(CheckEntry("dual_doubly_commuting", ddc.double_comm_residual,
                                  (1 if ddc_holds else 0,), True, ddc.classified))
    if dc.classified == "doubly_commuting" and ddc_holds:
        split = fourfold_decompose(pair, max_steps, tol)
        entries.append(CheckEntry("h_pp_dim", split.reduction_residual,
                                  (split.h_pp.dim,), split.h_pp.dim == 0))
        dsplit = dual_fourfold(setup, max_steps, max_orbit, tol)
        entries.append(CheckEntry("h_m_dim", dsplit.reduction_residual,
                                  (dsplit.h_m.dim,), dsplit.h_m.dim == 0))
        covered = dsplit.h_pu.dim + dsplit.h_up.dim + dsplit.h_uu.dim
        entries.append(CheckEntry("three_part_sum", dsplit.orthogonality_residual,
                                  (dsplit.h_pu.dim, dsplit.h_up.dim, dsplit.h_uu.dim),
                                  covered == setup.h.dim))
    return Report(scenario=f"simultaneous[{self_label(setup)}]", entries=entries)


# ---------------------------------------------------------------------------
# bundled setups


def _torus_axis_faithful(region: LRegionIndex, axis: int, forward: bool) -> frozenset[int]:
    """Ambient cells whose one-step translate stays inside the window."""
    n, r = region.parent.n, region.r
    keep = range(1, n) if not forward else range(0, n - 1)
    out = []
    for k1 in range(n):
        for k2 in range(n):
            k = k1 if axis == 0 else k2
            if k in keep:
                for rho in range(r):
                    out.append(region.parent.index(k1, k2, rho))
    return frozenset(out)


def _torus_unitary(region: LRegionIndex, axis: int, forward: bool) -> WindowedMap:
    step = 1 if forward else -1
    a, b = (step, 0) if axis == 0 else (0, step)
    matrix = torus_translation(region.parent, a, b)
    faithful = _torus_axis_faithful(region, axis, forward)
    adj_faithful = _torus_axis_faithful(region, axis, not forward)
    tag = f"torus(n={region.parent.n},r={region.r})"
    return WindowedMap(matrix, faithful, adj_faithful, tag, tag)


def l_region_setup(m: int, T: int, r: int = 1) -> ExtensionSetup:
    """Two-sided window with the quadrant removed; compressions are the
    modified bishift pair, ambient unitaries translate toward the far
    corner of the L."""
    region = LRegionIndex(m, T, r)
    return ExtensionSetup(
        u1=_torus_unitary(region, 0, forward=False),
        u2=_torus_unitary(region, 1, forward=False),
        h=Subspace.from_cells(region.parent.dim, region.l_cells()),
        physical_window=frozenset(range(region.parent.dim)),
        cells_per_unit=m,
        label=f"l_region(m={m},T={T},r={r})",
        geometry=region)


def bishift_setup(m: int, T: int, r: int = 1) -> ExtensionSetup:
    """Quadrant inside the two-sided window; compressions are the bishift pair."""
    region = LRegionIndex(m, T, r)
    return ExtensionSetup(
        u1=_torus_unitary(region, 0, forward=True),
        u2=_torus_unitary(region, 1, forward=True),
        h=Subspace.from_cells(region.parent.dim, region.quadrant_cells()),
        physical_window=frozenset(range(region.parent.dim)),
        cells_per_unit=m,
        label=f"bishift_setup(m={m},T={T},r={r})",
        geometry=region)


def halfline_circulant_setup(m: int, T: int, p: int, unitary_first: bool = False) -> ExtensionSetup:
    """Half-line shift compression tensored against a cyclic fiber rotation.

    The ambient is a two-sided cycle of 2mT cells (axis index k stands
    for physical cell k - mT) times a p-dimensional fiber; the embedded
    space is the nonnegative half times the full fiber.  With
    ``unitary_first`` the roles of the two families are swapped.
    """
    n = 2 * m * T
    cycle = circulant_unitary(n, 1)
    eye_fiber = np.eye(p, dtype=np.complex128)
    shift_matrix = np.kron(cycle, eye_fiber)
    shift_faithful = frozenset(k * p + rho for k in range(n - 1) for rho in range(p))
    shift_adj = frozenset(k * p + rho for k in range(1, n) for rho in range(p))
    tag = f"cycle({n})xC{p}"
    u_shift = WindowedMap(shift_matrix, shift_faithful, shift_adj, tag, tag)
    u_fiber = WindowedMap.full(np.kron(np.eye(n, dtype=np.complex128),
                                       circulant_unitary(p, 1)), tag, tag)
    h = Subspace.from_cells(n * p, [k * p + rho for k in range(m * T, n) for rho in range(p)])
    u1, u2 = (u_fiber, u_shift) if unitary_first else (u_shift, u_fiber)
    kind = "circulant_x_shift" if unitary_first else "shift_x_circulant"
    return ExtensionSetup(u1, u2, h, frozenset(range(n * p)), m,
                          f"{kind}(m={m},T={T},p={p})")


def circulant_pair_setup(n1: int, n2: int, cells_per_unit: int = 1) -> ExtensionSetup:
    """Two commuting cyclic rotations with the full space embedded."""
    u1 = WindowedMap.full(np.kron(circulant_unitary(n1, 1), np.eye(n2, dtype=np.complex128)))
    u2 = WindowedMap.full(np.kron(np.eye(n1, dtype=np.complex128), circulant_unitary(n2, 1)))
    return ExtensionSetup(u1, u2, Subspace.full(n1 * n2), frozenset(range(n1 * n2)),
                          cells_per_unit, f"circulant_pair({n1},{n2})")


def setup_direct_sum(*setups: ExtensionSetup, label: str = "") -> ExtensionSetup:
    """Block-diagonal direct sum of setups sharing one time grid."""
    if not setups:
        raise InvalidInput("need at least one setup")
    grids = {s.cells_per_unit for s in setups}
    if len(grids) != 1:
        raise InvalidInput("setups use different time grids")
    u1 = direct_sum(*(s.u1 for s in setups))
    u2 = direct_sum(*(s.u2 for s in setups))
    cells: list[int] = []
    window: set[int] = set()
    offset = 0
    for s in setups:
        if s.h.cells is None:
            raise InvalidInput("direct sums require coordinate subspaces")
        cells.extend(offset + c for c in s.h.cells)
        window.update(offset + c for c in s.physical_window)
        offset += s.ambient_dim
    return ExtensionSetup(u1, u2, Subspace.from_cells(offset, cells), frozenset(window),
                          setups[0].cells_per_unit,
                          label or "(+)".join(self_label(s) for s in setups))
