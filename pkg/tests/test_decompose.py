"""Wold splits, pair classification, fourfold splits, and the multiplier model."""

from fractions import Fraction

import numpy as np
import pytest

from isoflow.decompose import (bcl_check, classify_pair, fourfold_decompose, is_cnu,
                               product_unitary_part, verify_joint_equivalence,
                               wold_cooper)
from isoflow.errors import PreconditionFailed
from isoflow.numlin import Subspace, residual_norm
from isoflow.semigroups import (PairOfSemigroups, SemigroupFamily, WindowedMap,
                                bishift_families, circulant_family, direct_sum,
                                halfline_shift_family, modified_bishift_families,
                                phi_family, tensor_with_identity)
from isoflow.spaces import CellGrid1D, LRegionIndex, QuadrantGrid2D, w_unitary


def shift_plus_circulant():
    shift = halfline_shift_family(CellGrid1D(1, 8))
    gen = direct_sum(shift.generator, circulant_family(4).generator)
    return SemigroupFamily(gen, "shift(+)circulant", 1)


def range_intersection_oracle(max_steps):
    """Brute-force oracle by index arithmetic: trusted ranges of the powers
    of the shift(+)circulant generator, intersected as coordinate sets."""
    current = set(range(12))
    for k in range(1, max_steps + 1):
        shift_range = {i + k for i in range(8) if i + k < 8}
        current &= shift_range | {8, 9, 10, 11}
    return current


# --- Wold split -------------------------------------------------------------------

def test_wold_circulant_is_all_unitary():
    result = wold_cooper(circulant_family(4), 4)
    assert result.unitary_part.dim == 4
    assert result.cnu_part.dim == 0
    assert result.stabilized and result.steps_used == 1
    assert result.unitary_residual == 0.0


def test_wold_direct_sum_recovers_circulant_block():
    result = wold_cooper(shift_plus_circulant(), 8)
    oracle = range_intersection_oracle(8)
    assert result.unitary_part.dim == len(oracle) == 4
    assert result.unitary_part.cells == tuple(sorted(oracle))
    block = Subspace.from_cells(12, (8, 9, 10, 11))
    assert result.unitary_part.gap(block) <= 1e-8


def test_wold_pure_shift_has_no_unitary_part():
    fam = halfline_shift_family(CellGrid1D(1, 8))
    result = wold_cooper(fam, 8)
    assert result.unitary_part.dim == 0
    assert not result.stabilized  # window exhausts exactly at the last step
    stable = wold_cooper(fam, 9)
    assert stable.unitary_part.dim == 0 and stable.stabilized


def test_wold_stability_under_extra_steps():
    """Rerunning a stabilized split with a larger budget changes nothing."""
    for family, k in ((circulant_family(4), 3), (shift_plus_circulant(), 10)):
        a = wold_cooper(family, k)
        b = wold_cooper(family, k + 1)
        assert a.stabilized and b.stabilized
        assert a.unitary_part.gap(b.unitary_part) <= 1e-10


def test_is_cnu():
    assert is_cnu(halfline_shift_family(CellGrid1D(1, 8)), 9)
    assert not is_cnu(circulant_family(4), 4)
    assert not is_cnu(shift_plus_circulant(), 10)


# --- classification -----------------------------------------------------------------

def test_classify_bishift_doubly_commuting():
    pair = bishift_families(QuadrantGrid2D(2, 2))
    verdict = classify_pair(pair, [Fraction(1, 2), 1])
    assert verdict.classified == "doubly_commuting"
    assert verdict.comm_residual == 0.0
    assert verdict.double_comm_residual == 0.0


def test_classify_modified_bishift_not_doubly():
    pair = modified_bishift_families(LRegionIndex(1, 2))
    verdict = classify_pair(pair, [1])
    assert verdict.classified == "commuting"
    assert verdict.comm_residual == 0.0
    assert verdict.double_comm_residual > 0.5  # witness vector


def test_classify_shift_with_itself():
    """A proper isometry never doubly commutes with itself: the one-step
    backward-then-forward and forward-then-backward products differ on the
    first cell, and the window sees it (direct residual oracle)."""
    fam = halfline_shift_family(CellGrid1D(1, 4))
    pair = PairOfSemigroups(fam, SemigroupFamily(fam.generator, "copy", 1))
    verdict = classify_pair(pair, [1])
    assert verdict.comm_residual == 0.0
    assert verdict.double_comm_residual == 1.0
    assert verdict.classified == "commuting"
    # oracle: S S* kills the first cell, S* S keeps it
    s = fam.generator
    forward_back = s.matrix @ s.matrix.conj().T
    back_forward = s.matrix.conj().T @ s.matrix
    assert forward_back[0, 0] == 0.0 and back_forward[0, 0] == 1.0


# --- fourfold split -------------------------------------------------------------------

def four_block_pair(shift_T=4, circ=3):
    shift_gen = halfline_shift_family(CellGrid1D(1, shift_T)).generator
    circ_gen = circulant_family(circ).generator
    v1 = direct_sum(tensor_with_identity(shift_gen, shift_T, "right"),
                    tensor_with_identity(shift_gen, circ, "right"),
                    tensor_with_identity(circ_gen, shift_T, "right"),
                    tensor_with_identity(circ_gen, circ, "right"))
    v2 = direct_sum(tensor_with_identity(shift_gen, shift_T, "left"),
                    tensor_with_identity(circ_gen, shift_T, "left"),
                    tensor_with_identity(shift_gen, circ, "left"),
                    tensor_with_identity(circ_gen, circ, "left"))
    pair = PairOfSemigroups(SemigroupFamily(v1, "fb:V1", 1), SemigroupFamily(v2, "fb:V2", 1))
    return pair, (shift_T * shift_T, shift_T * circ, circ * shift_T, circ * circ)


def test_fourfold_four_block_construction_oracle():
    pair, expected = four_block_pair()
    split = fourfold_decompose(pair, 6)
    assert split.dims == expected
    assert split.reduction_residual <= 1e-10
    assert sum(split.dims) == pair.dim


def test_fourfold_bishift_concentrates_in_pp():
    pair = bishift_families(QuadrantGrid2D(1, 2))
    split = fourfold_decompose(pair, 4)
    assert split.dims == (4, 0, 0, 0)


def test_fourfold_unitary_pair_concentrates_in_uu():
    c1 = tensor_with_identity(circulant_family(3).generator, 3, "right")
    c2 = tensor_with_identity(circulant_family(3).generator, 3, "left")
    pair = PairOfSemigroups(SemigroupFamily(c1, "c1", 1), SemigroupFamily(c2, "c2", 1))
    split = fourfold_decompose(pair, 3)
    assert split.dims == (0, 0, 0, 9)


def test_fourfold_requires_double_commutation():
    pair = modified_bishift_families(LRegionIndex(1, 2))
    with pytest.raises(PreconditionFailed):
        fourfold_decompose(pair, 4)


def test_fourfold_projectors_commute_with_samples():
    pair, _ = four_block_pair()
    split = fourfold_decompose(pair, 6)
    for part in (split.h_pp, split.h_pu, split.h_up, split.h_uu):
        p = part.projector()
        for fam in (pair.first, pair.second):
            for steps in (1, 2):
                el = fam.element(steps)
                cols = sorted(el.faithful)
                diff = (p @ el.matrix - el.matrix @ p)[:, cols]
                assert (np.abs(diff).max() if diff.size else 0.0) <= 1e-10


# --- multiplier model ------------------------------------------------------------------

def test_bcl_time_one_and_zero():
    report = bcl_check(4, 4, 1, [0, 1])
    assert report.overall
    assert all(e.residual == 0.0 for e in report.entries)


def test_bcl_full_grid_r2():
    samples = [Fraction(j, 4) for j in range(13)]
    report = bcl_check(4, 4, 2, samples)
    assert report.overall
    assert all(e.residual == 0.0 for e in report.entries)
    assert len(report.entries) == 13


# --- joint equivalence -----------------------------------------------------------------

def test_joint_equivalence_identity():
    pair = bishift_families(QuadrantGrid2D(1, 2))
    report = verify_joint_equivalence(pair, pair, np.eye(4), [1])
    assert report.overall
    assert all(e.residual == 0.0 for e in report.entries)


def test_joint_equivalence_bishift_tensor_form():
    pair = bishift_families(QuadrantGrid2D(2, 2))
    shift = halfline_shift_family(CellGrid1D(2, 2)).generator
    tens = PairOfSemigroups(
        SemigroupFamily(tensor_with_identity(shift, 4, "right"), "SxI", 2),
        SemigroupFamily(tensor_with_identity(shift, 4, "left"), "IxS", 2))
    report = verify_joint_equivalence(pair, tens, np.eye(16), [Fraction(1, 2), 1])
    assert report.overall and all(e.residual == 0.0 for e in report.entries)


def test_joint_equivalence_w_conjugation():
    """The interval-stacking permutation turns the half-line shift family
    into the multiplier family (same oracle as the model check)."""
    grid = CellGrid1D(4, 4)
    shifts = halfline_shift_family(grid)
    phis = phi_family(3, 4)
    w = w_unitary(4, 4)
    single = PairOfSemigroups(shifts, shifts)
    model = PairOfSemigroups(phis, phis)
    report = verify_joint_equivalence(single, model, w, [Fraction(1, 4), 1])
    assert report.overall and all(e.residual == 0.0 for e in report.entries)


def test_joint_equivalence_requires_unitary():
    pair = bishift_families(QuadrantGrid2D(1, 2))
    with pytest.raises(PreconditionFailed):
        verify_joint_equivalence(pair, pair, 0.5 * np.eye(4), [1])


# --- product family ---------------------------------------------------------------------

def test_product_unitary_part_bishift_vanishes():
    pair = bishift_families(QuadrantGrid2D(1, 2))
    result = product_unitary_part(pair, 4)
    assert result.subspace.dim == 0 and result.stabilized


def test_product_unitary_part_unitary_pair_full():
    c1 = tensor_with_identity(circulant_family(3).generator, 3, "right")
    c2 = tensor_with_identity(circulant_family(3).generator, 3, "left")
    pair = PairOfSemigroups(SemigroupFamily(c1, "c1", 1), SemigroupFamily(c2, "c2", 1))
    result = product_unitary_part(pair, 3)
    assert result.subspace.dim == 9 and result.stabilized


def test_product_unitary_part_four_block():
    pair, _ = four_block_pair()
    result = product_unitary_part(pair, 6)
    assert result.subspace.dim == 9  # the doubly-unitary corner
    assert result.reduction_residual <= 1e-10


def test_product_unitary_matches_fourfold_uu_corner():
    """For doubly commuting pairs the product family's unitary part is the
    doubly-unitary corner of the fourfold split (principal angle <= 1e-8)."""
    for pair in (four_block_pair()[0], bishift_families(QuadrantGrid2D(1, 2))):
        split = fourfold_decompose(pair, 6)
        product = product_unitary_part(pair, 6)
        assert split.h_uu.dim == product.subspace.dim
        if split.h_uu.dim:
            assert split.h_uu.gap(product.subspace) <= 1e-8


def test_product_requires_commutation():
    shift = halfline_shift_family(CellGrid1D(1, 4))
    e0 = np.zeros((4, 4), dtype=complex)
    e0[0, 0] = e0[1, 2] = e0[2, 1] = e0[3, 3] = 1  # swap two middle cells
    other = SemigroupFamily(WindowedMap.full(e0), "swap", 1)
    with pytest.raises(PreconditionFailed):
        product_unitary_part(PairOfSemigroups(shift, other), 4)
