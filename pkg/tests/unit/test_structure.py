"""
Unit tests for the structure operators F, G, H.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_array_equal

from src.app.geometry.structure import (
    ChartDim,
    SignedPermutation,
    StructureKind,
    apply,
    build_all,
    build_structure,
    compose,
    corrupt,
    format_matrix,
    random_unit_vector,
    verify_relations,
)
from src.core.errors import DimensionError


@pytest.mark.unit
class TestChartDim:
    def test_total_is_four_n(self):
        assert ChartDim(3).total == 12

    def test_blocks(self):
        dim = ChartDim(2)
        assert list(dim.block(0)) == [0, 1]
        assert list(dim.block(3)) == [6, 7]

    @pytest.mark.parametrize("n", [0, -1])
    def test_rejects_non_positive(self, n):
        with pytest.raises(DimensionError):
            ChartDim(n)

    @pytest.mark.parametrize("n", [1.5, "2", True])
    def test_rejects_non_integer(self, n):
        with pytest.raises(DimensionError):
            ChartDim(n)


@pytest.mark.unit
class TestStructureKind:
    def test_parse_is_case_insensitive(self):
        assert StructureKind.parse("g") is StructureKind.G

    def test_parse_unknown(self):
        with pytest.raises(ValueError, match="Unknown structure"):
            StructureKind.parse("K")

    def test_str_is_name(self):
        assert str(StructureKind.H) == "H"


@pytest.mark.unit
class TestBuildStructure:
    def test_f_on_n1(self, F1):
        expected = np.array([
            [0, -1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, 0, -1],
            [0, 0, 1, 0],
        ])
        assert_array_equal(F1.matrix(), expected)

    def test_g_on_n1(self, G1):
        assert_array_equal(G1.apply([1, 0, 0, 0]), [0, 0, 1, 0])
        assert_array_equal(G1.apply([0, 1, 0, 0]), [0, 0, 0, -1])

    def test_h_on_n1(self, H1):
        assert_array_equal(H1.apply([1, 0, 0, 0]), [0, 0, 0, 1])
        assert_array_equal(H1.apply([0, 1, 0, 0]), [0, 0, 1, 0])

    def test_apply_zero_vector(self, F1):
        assert_array_equal(apply(F1, np.zeros(4)), np.zeros(4))

    def test_gh_applied_to_e2(self, G1, H1):
        # GH = F and F e2 = e3
        gh = compose(G1, H1)
        assert_array_equal(gh.apply([0, 0, 1, 0]), [0, 0, 0, 1])

    def test_apply_wrong_length(self, F1):
        with pytest.raises(DimensionError):
            F1.apply([1.0, 2.0, 3.0])

    def test_blocks_act_independently_of_index(self):
        dim = ChartDim(3)
        F = build_structure(StructureKind.F, dim)
        v = np.zeros(12)
        v[2] = 1.0  # x_2 in block 0
        out = F.apply(v)
        assert out[5] == 1.0  # moved to the same index in block 1
        assert np.count_nonzero(out) == 1

    def test_kind_is_recorded(self, dim2):
        ops = build_all(dim2)
        assert [op.kind for op in ops.values()] == list(StructureKind)

    def test_transpose_is_inverse(self, dim2, rng):
        for J in build_all(dim2).values():
            v = rng.standard_normal(8)
            assert_array_equal(J.apply_transpose(J.apply(v)), v)

    def test_left_and_right_multiply_match_dense(self, dim2, rng):
        m = rng.standard_normal((8, 8))
        for J in build_all(dim2).values():
            dense = J.matrix().astype(float)
            np.testing.assert_allclose(J.left_multiply(m), dense @ m, rtol=0, atol=1e-15)
            np.testing.assert_allclose(J.right_multiply(m), m @ dense, rtol=0, atol=1e-15)


@pytest.mark.unit
class TestCompose:
    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            compose(build_structure(StructureKind.F, ChartDim(1)), build_structure(StructureKind.F, ChartDim(2)))

    def test_f_squared_is_minus_identity(self, F1):
        assert compose(F1, F1).same_action(-SignedPermutation.identity(F1.dim))

    def test_hg_is_minus_f(self, G1, H1, F1):
        assert compose(H1, G1).same_action(-F1)


@pytest.mark.unit
class TestVerifyRelations:
    @pytest.mark.parametrize("n", [1, 2, 4, 8, 16])
    def test_all_relations_hold(self, n):
        report = verify_relations(ChartDim(n))
        assert report.all_passed
        assert report.max_violation == 0
        assert report.failures() == []

    def test_report_names_every_relation(self, dim1):
        names = {c.name for c in verify_relations(dim1).checks}
        for expected in ("F^2 = -I", "G^2 = -I", "H^2 = -I", "GH = F", "HG = -F",
                         "HF = G", "FH = -G", "FG = H", "GF = -H", "FGH = -I",
                         "F antisymmetric", "G orthogonal", "H bijective"):
            assert expected in names

    def test_flipped_sign_is_reported(self, dim2):
        F = build_structure(StructureKind.F, dim2)
        report = verify_relations(dim2, {StructureKind.F: corrupt(F, 3)})
        assert not report.all_passed
        failed = {c.name for c in report.failures()}
        assert "F^2 = -I" in failed
        assert "GH = F" in failed
        assert report.max_violation == 2

    def test_failure_is_logged(self, dim1, caplog):
        F = build_structure(StructureKind.F, dim1)
        with caplog.at_level("WARNING", logger="qkmech.structure"):
            verify_relations(dim1, {StructureKind.F: corrupt(F, 0)})
        assert "quaternion relations failed" in caplog.text


@pytest.mark.unit
class TestHelpers:
    def test_format_matrix(self, F1):
        lines = format_matrix(F1.matrix()).splitlines()
        assert lines[0] == "0 -1 0 0"
        assert len(lines) == 4

    def test_random_unit_vector_is_unit(self, dim2, rng):
        v = random_unit_vector(rng, dim2)
        assert v.shape == (8,)
        assert np.linalg.norm(v) == pytest.approx(1.0)

    def test_signed_permutation_validates(self, dim1):
        with pytest.raises(ValueError):
            SignedPermutation(dim1, (0, 1, 2, 3), (1, 1, 0, 1))
        with pytest.raises(DimensionError):
            SignedPermutation(dim1, (0, 1, 2), (1, 1, 1))


@pytest.mark.unit
@pytest.mark.property
@settings(max_examples=50, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=6),
    kind=st.sampled_from(list(StructureKind)),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_operators_preserve_norm(n, kind, seed):
    dim = ChartDim(n)
    v = np.random.default_rng(seed).standard_normal(dim.total)
    J = build_structure(kind, dim)
    w = J.apply(v)
    assert np.linalg.norm(w) == pytest.approx(np.linalg.norm(v), rel=1e-15)
    assert w @ v == pytest.approx(0.0, abs=1e-12)
    assert_array_equal(J.apply(w), -v)
