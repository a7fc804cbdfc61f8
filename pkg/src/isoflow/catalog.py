"""Named scenario catalog and the batch runner behind the CLI.

Each construction builds a bundled operator family or extension setup,
runs its documented checks, and emits one report entry per check.  Given
identical parameters the entries are byte-identical across runs: all
constructions are deterministic and seedless.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import duality
from .commutant import commutant_of_partial_isometries, doubly_commutant_of_mz
from .decompose import (bcl_check, classify_pair, fourfold_decompose,
                        product_unitary_part, wold_cooper)
from .errors import InvalidInput
from .numlin import Tolerances, residual_norm
from .report import CheckEntry, Report
from .semigroups import (PairOfSemigroups, SemigroupFamily, bishift_families,
                         bishift_pair, check_semigroup_law, circulant_family,
                         direct_sum, halfline_shift_family,
                         modified_bishift_families, tensor_with_identity)
from .spaces import CellGrid1D, LRegionIndex, QuadrantGrid2D

__all__ = ["Scenario", "run_scenario", "list_catalog", "CATALOG"]


@dataclass(frozen=True)
class Scenario:
    name: str
    construction: str
    params: dict


def _get_int(params: dict, key: str, default: int) -> int:
    try:
        return int(params.get(key, default))
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"parameter {key} must be an integer") from exc


def _get_samples(params: dict, default: str) -> list[Fraction]:
    raw = str(params.get("samples", default))
    try:
        return [Fraction(token.strip()) for token in raw.split(",") if token.strip()]
    except ValueError as exc:
        raise InvalidInput(f"cannot parse samples {raw!r}") from exc


def _tolerances(params: dict) -> Tolerances:
    def pick(key: str, default: float) -> float:
        try:
            return float(params.get(key, default))
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"parameter {key} must be a real number") from exc

    return Tolerances(rank_rel=pick("rank_rel", 1e-10),
                      resid_abs=pick("resid_abs", 1e-10),
                      angle=pick("angle", 1.0 - 1e-8))


def _echo(tol: Tolerances, **resolved) -> dict:
    out = {key: str(value) for key, value in resolved.items()}
    out["rank_rel"] = repr(tol.rank_rel)
    out["resid_abs"] = repr(tol.resid_abs)
    out["angle"] = repr(tol.angle)
    return out


def _samples_str(samples) -> str:
    return ",".join(str(Fraction(s)) for s in samples)


def _generator_isometry_entry(family, check_id: str) -> CheckEntry:
    gen = family.generator
    cols = sorted(gen.faithful)
    if not cols:
        return CheckEntry(check_id, 0.0, (0,), False, "empty window")
    block = gen.matrix[:, cols]
    residual = residual_norm(block.conj().T @ block, np.eye(len(cols)))
    return CheckEntry(check_id, residual, (len(cols),), residual == 0.0)


# ---------------------------------------------------------------------------
# runners


def _run_halfline_shift(params, tol):
    m = _get_int(params, "m", 1)
    T = _get_int(params, "T", 8)
    r = _get_int(params, "r", 1)
    K = _get_int(params, "K", m * T + 2)
    samples = _get_samples(params, "1,2,3")
    family = halfline_shift_family(CellGrid1D(m, T, r))
    entries = [_generator_isometry_entry(family, "generator_isometry")]
    law = check_semigroup_law(family, samples, tol)
    entries.extend(law.entries)
    wold = wold_cooper(family, K, tol)
    entries.append(CheckEntry("wold_unitary_dim", wold.unitary_residual,
                              (wold.unitary_part.dim,), wold.unitary_part.dim == 0))
    entries.append(CheckEntry("wold_stabilized", 0.0, (wold.steps_used,), wold.stabilized))
    return entries, _echo(tol, m=m, T=T, r=r, K=K, samples=_samples_str(samples))


def _run_bishift(params, tol):
    m = _get_int(params, "m", 2)
    T = _get_int(params, "T", 2)
    r = _get_int(params, "r", 1)
    K = _get_int(params, "K", m * T + 2)
    samples = _get_samples(params, "1/2,1" if m > 1 else "1,2")
    pair = bishift_families(QuadrantGrid2D(m, T, r))
    entries = [_generator_isometry_entry(pair.first, "generator_isometry_axis1"),
               _generator_isometry_entry(pair.second, "generator_isometry_axis2")]
    for tag, family in (("axis1:", pair.first), ("axis2:", pair.second)):
        law = check_semigroup_law(family, samples, tol)
        for entry in law.entries:
            entries.append(CheckEntry(tag + entry.check_id, entry.residual, entry.dims,
                                      entry.passed, entry.note))
    verdict = classify_pair(pair, samples, tol)
    entries.append(CheckEntry("commutator", verdict.comm_residual, (),
                              verdict.comm_residual <= tol.resid_abs))
    entries.append(CheckEntry("adjoint_commutator", verdict.double_comm_residual, (),
                              verdict.double_comm_residual <= tol.resid_abs))
    entries.append(CheckEntry("classified", 0.0, (), verdict.classified == "doubly_commuting",
                              verdict.classified))
    split = fourfold_decompose(pair, K, tol)
    entries.append(CheckEntry("fourfold_dims", split.reduction_residual, split.dims,
                              split.dims == (pair.dim, 0, 0, 0)))
    product = product_unitary_part(pair, K, tol)
    entries.append(CheckEntry("product_unitary_dim", product.reduction_residual,
                              (product.subspace.dim,),
                              product.subspace.dim == 0 and product.stabilized))
    return entries, _echo(tol, m=m, T=T, r=r, K=K, samples=_samples_str(samples))


def _run_modified_bishift(params, tol):
    m = _get_int(params, "m", 1)
    T = _get_int(params, "T", 2)
    r = _get_int(params, "r", 1)
    samples = _get_samples(params, "1")
    pair = modified_bishift_families(LRegionIndex(m, T, r))
    entries = [_generator_isometry_entry(pair.first, "generator_isometry_axis1"),
               _generator_isometry_entry(pair.second, "generator_isometry_axis2")]
    for tag, family in (("axis1:", pair.first), ("axis2:", pair.second)):
        law = check_semigroup_law(family, samples, tol)
        for entry in law.entries:
            entries.append(CheckEntry(tag + entry.check_id, entry.residual, entry.dims,
                                      entry.passed, entry.note))
    verdict = classify_pair(pair, samples, tol)
    entries.append(CheckEntry("commutator", verdict.comm_residual, (),
                              verdict.comm_residual <= tol.resid_abs))
    entries.append(CheckEntry("adjoint_commutator_witness", verdict.double_comm_residual, (),
                              verdict.double_comm_residual > tol.resid_abs,
                              "a nonzero value is the expected witness"))
    entries.append(CheckEntry("classified", 0.0, (), verdict.classified == "commuting",
                              verdict.classified))
    return entries, _echo(tol, m=m, T=T, r=r, samples=_samples_str(samples))


def _four_block_dc_pair(shift_T: int, circ: int):
    shift_gen = halfline_shift_family(CellGrid1D(1, shift_T, 1)).generator
    circ_gen = circulant_family(circ).generator
    a = shift_T
    v1 = direct_sum(tensor_with_identity(shift_gen, a, "right"),
                    tensor_with_identity(shift_gen, circ, "right"),
                    tensor_with_identity(circ_gen, a, "right"),
                    tensor_with_identity(circ_gen, circ, "right"))
    v2 = direct_sum(tensor_with_identity(shift_gen, a, "left"),
                    tensor_with_identity(circ_gen, a, "left"),
                    tensor_with_identity(shift_gen, circ, "left"),
                    tensor_with_identity(circ_gen, circ, "left"))
    pair = PairOfSemigroups(SemigroupFamily(v1, "four_block_dc:V1", 1),
                            SemigroupFamily(v2, "four_block_dc:V2", 1))
    dims = (a * a, a * circ, circ * a, circ * circ)
    return pair, dims


def _run_four_block_dc(params, tol):
    shift_T = _get_int(params, "T", 4)
    circ = _get_int(params, "circ", 3)
    K = _get_int(params, "K", shift_T + 2)
    pair, expected = _four_block_dc_pair(shift_T, circ)
    verdict = classify_pair(pair, [1], tol)
    entries = [CheckEntry("classified", verdict.double_comm_residual, (),
                          verdict.classified == "doubly_commuting", verdict.classified)]
    split = fourfold_decompose(pair, K, tol)
    entries.append(CheckEntry("fourfold_dims", 0.0, split.dims, split.dims == expected,
                              f"expected {expected}"))
    entries.append(CheckEntry("reduction_residual", split.reduction_residual, (),
                              split.reduction_residual <= tol.resid_abs))
    entries.append(CheckEntry("wold_stabilized", 0.0,
                              (split.wold_first.steps_used, split.wold_second.steps_used),
                              split.wold_first.stabilized and split.wold_second.stabilized))
    return entries, _echo(tol, T=shift_T, circ=circ, K=K)


def _ddc_setup(m: int, T: int, p: int, circ: int):
    return duality.setup_direct_sum(
        duality.l_region_setup(m, T),
        duality.halfline_circulant_setup(m, T, p),
        duality.halfline_circulant_setup(m, T, p, unitary_first=True),
        duality.circulant_pair_setup(circ, circ, cells_per_unit=m),
        label="four_block_ddc")


def _run_four_block_ddc(params, tol):
    m = _get_int(params, "m", 1)
    T = _get_int(params, "T", 2)
    p = _get_int(params, "p", 3)
    circ = _get_int(params, "circ", 3)
    K = _get_int(params, "K", 2 * m * T + 2)
    max_orbit = _get_int(params, "max_orbit", 4 * m * T)
    setup = _ddc_setup(m, T, p, circ)
    expected = (3 * (m * T) ** 2, m * T * p, m * T * p, circ * circ)
    result = duality.dual_fourfold(setup, K, max_orbit, tol)
    entries = [
        CheckEntry("dual_fourfold_dims", 0.0, result.dims, result.dims == expected,
                   f"expected {expected}"),
        CheckEntry("dual_tilde_dims", 0.0, result.tilde_dims, result.tilde_dims[3] == 0),
        CheckEntry("orthogonality", result.orthogonality_residual, (),
                   result.orthogonality_residual <= tol.resid_abs),
        CheckEntry("reduction_residual", result.reduction_residual, (),
                   result.reduction_residual <= tol.resid_abs),
        CheckEntry("dims_sum", 0.0, (sum(result.dims),), sum(result.dims) == setup.h.dim),
    ]
    return entries, _echo(tol, m=m, T=T, p=p, circ=circ, K=K, max_orbit=max_orbit)


def _run_commutant_e(params, tol):
    m = _get_int(params, "m", 2)
    r = _get_int(params, "r", 1)
    result = commutant_of_partial_isometries(m, r, tol)
    entries = [
        CheckEntry("dimension", 0.0, (result.dim,), result.dim == r * r,
                   f"expected {r * r}"),
        CheckEntry("structure", result.max_structure_residual, (),
                   result.structure_verdict == "fiber_scalar", result.structure_verdict),
        CheckEntry("reconstruction", result.max_structure_residual, (),
                   result.max_structure_residual <= tol.resid_abs),
    ]
    return entries, _echo(tol, m=m, r=r)


def _run_commutant_mz(params, tol):
    d = _get_int(params, "d", 1)
    r = _get_int(params, "r", 1)
    result = doubly_commutant_of_mz(d, r, tol)
    entries = [
        CheckEntry("dimension", 0.0, (result.dim,), result.dim == r * r,
                   f"expected {r * r}"),
        CheckEntry("structure", result.max_structure_residual, (),
                   result.structure_verdict == "fiber_scalar", result.structure_verdict),
        CheckEntry("reconstruction", result.max_structure_residual, (),
                   result.max_structure_residual <= tol.resid_abs),
    ]
    return entries, _echo(tol, d=d, r=r)


def _bcl_default_samples(T: int, m: int) -> list[Fraction]:
    """All grid times whose faithful window is nonempty."""
    d = T - 1
    out = []
    for j in range(m * d + 1):
        n, jj = divmod(j, m)
        top = d - n if jj == 0 else d - n - 1
        if top >= 0:
            out.append(Fraction(j, m))
    return out


def _run_bcl(params, tol):
    T = _get_int(params, "T", 4)
    m = _get_int(params, "m", 4)
    r = _get_int(params, "r", 1)
    if "samples" in params:
        samples = _get_samples(params, "")
    else:
        samples = _bcl_default_samples(T, m)
    report = bcl_check(T, m, r, samples, tol)
    return list(report.entries), _echo(tol, T=T, m=m, r=r, samples=_samples_str(samples))


def _run_dual_example(params, tol):
    m = _get_int(params, "m", 1)
    T = _get_int(params, "T", 2)
    r = _get_int(params, "r", 1)
    K = _get_int(params, "K", m * T + 2)
    max_orbit = _get_int(params, "max_orbit", 4 * m * T)
    setup = duality.l_region_setup(m, T, r)
    dual = duality.dual_pair(setup, max_orbit, tol)
    model1, model2 = bishift_pair(QuadrantGrid2D(m, T, r), Fraction(1, m))
    entries = []
    for axis, (got, model) in enumerate(((dual.pair.first.generator, model1),
                                         (dual.pair.second.generator, model2)), start=1):
        exact = (np.array_equal(got.matrix, model.matrix)
                 and got.faithful == model.faithful)
        entries.append(CheckEntry(f"dual_equals_bishift_axis{axis}",
                                  residual_norm(got.matrix, model.matrix),
                                  (got.domain_dim,), exact, "integer equality"))
    entries.append(CheckEntry("dual_space_dim", 0.0, (dual.wth.dim,),
                              dual.wth.dim == (m * T) ** 2 * r))
    cnu = duality.dual_cnu_check(setup, K, tol, max_orbit)
    for entry in cnu.entries:
        entries.append(CheckEntry("cnu:" + entry.check_id, entry.residual, entry.dims,
                                  entry.passed, entry.note))
    return entries, _echo(tol, m=m, T=T, r=r, K=K, max_orbit=max_orbit)


def _run_double_dual(params, tol):
    m = _get_int(params, "m", 1)
    T = _get_int(params, "T", 2)
    r = _get_int(params, "r", 1)
    max_orbit = _get_int(params, "max_orbit", 4 * m * T)
    setup = duality.l_region_setup(m, T, r)
    report = duality.double_dual_check(setup, max_orbit, tol, radius_bound=2 * m * T)
    return list(report.entries), _echo(tol, m=m, T=T, r=r, max_orbit=max_orbit)


def _run_simultaneous(params, tol):
    variant = str(params.get("variant", "mixed"))
    m = _get_int(params, "m", 1)
    T = _get_int(params, "T", 2)
    p = _get_int(params, "p", 3)
    K = _get_int(params, "K", 2 * m * T + 2)
    max_orbit = _get_int(params, "max_orbit", 4 * m * T)
    if variant == "mixed":
        setup = duality.setup_direct_sum(
            duality.halfline_circulant_setup(m, T, p),
            duality.halfline_circulant_setup(m, T, p, unitary_first=True),
            label="mixed")
        expected_dc, expected_ddc = True, True
    elif variant == "bishift":
        setup = duality.bishift_setup(m, T)
        expected_dc, expected_ddc = True, False
    elif variant == "unitary":
        setup = duality.circulant_pair_setup(p, p, cells_per_unit=m)
        expected_dc, expected_ddc = True, True
    else:
        raise InvalidInput(f"unknown simultaneous variant {variant!r}")
    report = duality.simultaneous_dc_ddc_classify(setup, K, max_orbit, tol)
    entries = list(report.entries)
    flags = {entry.check_id: entry for entry in entries}
    dc_seen = flags["doubly_commuting"].dims == (1,)
    ddc_entry = flags.get("dual_doubly_commuting")
    ddc_seen = ddc_entry is not None and ddc_entry.dims == (1,)
    entries.append(CheckEntry("expected_dc", 0.0, (int(expected_dc),), dc_seen == expected_dc))
    entries.append(CheckEntry("expected_ddc", 0.0, (int(expected_ddc),), ddc_seen == expected_ddc))
    return entries, _echo(tol, variant=variant, m=m, T=T, p=p, K=K, max_orbit=max_orbit)


CATALOG = (
    ("halfline_shift",
     "Forward translation on a half-line grid: semigroup law, window accounting, "
     "pure Wold split.",
     "m=1 T=8 r=1 K=m*T+2 samples=1,2,3",
     _run_halfline_shift),
    ("bishift",
     "Coordinate shifts on a quadrant grid: doubly commuting; the fourfold split "
     "concentrates in the pure-pure corner.",
     "m=2 T=2 r=1 K=m*T+2 samples=1/2,1",
     _run_bishift),
    ("modified_bishift",
     "Compressed two-sided translations on the L-shaped region: commuting with a "
     "nonzero adjoint-commutation witness.",
     "m=1 T=2 r=1 samples=1",
     _run_modified_bishift),
    ("four_block_dc",
     "Direct sum of four tensor blocks with prescribed pure/unitary types; the "
     "fourfold split must recover the block dimensions.",
     "T=4 circ=3 K=T+2",
     _run_four_block_dc),
    ("four_block_ddc",
     "Direct sum of setups whose duals commute doubly; the dual fourfold split "
     "must recover the block dimensions.",
     "m=1 T=2 p=3 circ=3 K=2*m*T+2 max_orbit=4*m*T",
     _run_four_block_ddc),
    ("commutant_e",
     "Commutant of the interval cut-shift pair over all grid shifts: dimension "
     "r^2, fiber-scalar form.",
     "m=2 r=1",
     _run_commutant_e),
    ("commutant_mz",
     "Operators doubly commuting with the truncated degree shift: dimension r^2, "
     "identity-tensor form.",
     "d=1 r=1",
     _run_commutant_mz),
    ("bcl",
     "Exact identification of the half-line shift with its coefficient-space "
     "multiplier model under the interval-stacking permutation.",
     "T=4 m=4 r=1 samples=<all nonempty windows>",
     _run_bcl),
    ("dual_example",
     "Dual pair of the L-region setup equals the quadrant bishift, integer-exactly; "
     "the dual is certified completely nonunitary.",
     "m=1 T=2 r=1 K=m*T+2 max_orbit=4*m*T",
     _run_dual_example),
    ("double_dual",
     "Dual of the dual recovers the original compressed pair; orbit minimality "
     "certificate within radius 2*m*T.",
     "m=1 T=2 r=1 max_orbit=4*m*T",
     _run_double_dual),
    ("simultaneous",
     "Joint classification: doubly commuting and dual doubly commuting, with the "
     "three-part split when both hold (variants: mixed, bishift, unitary).",
     "variant=mixed m=1 T=2 p=3 K=2*m*T+2 max_orbit=4*m*T",
     _run_simultaneous),
)

_RUNNERS = {name: runner for name, _, _, runner in CATALOG}


def run_scenario(scenario: Scenario) -> Report:
    """Run one named scenario deterministically."""
    runner = _RUNNERS.get(scenario.construction)
    if runner is None:
        raise InvalidInput(f"unknown construction {scenario.construction!r}; "
                           f"known: {', '.join(sorted(_RUNNERS))}")
    tol = _tolerances(scenario.params)
    entries, echo = runner(scenario.params, tol)
    return Report(scenario=scenario.name, construction=scenario.construction,
                  params=tuple(sorted(echo.items())), entries=entries)


def list_catalog() -> str:
    """Stable text listing of every bundled construction."""
    lines = ["available constructions:"]
    for name, description, defaults, _ in CATALOG:
        lines.append(f"  {name}")
        lines.append(f"    {description}")
        lines.append(f"    defaults: {defaults}")
    lines.append("")
    lines.append("config format: one [section] per scenario; keys: construction=<name>,")
    lines.append("construction parameters, and optional rank_rel / resid_abs / angle.")
    return "\n".join(lines) + "\n"
