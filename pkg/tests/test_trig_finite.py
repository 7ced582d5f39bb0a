import numpy as np
import pytest

from snpcert import trig_finite as tf
from snpcert.kmatrix import k_limits
from snpcert.rmatrix import RegimeParams, SampleGrid
from snpcert.tensor_core import SingularMatrixError, identity, residual

CASES = [(n, k, s) for n in (2, 3) for k, s in [("i", 1), ("ii", 1), ("ii", -1), ("iv", 1)]
         if not (k == "iv" and n % 2)]


def test_constant_rbar_inverts_crossed():
    p = RegimeParams.trigonometric(2)
    assert np.all(np.isfinite(tf.constant_Rbar(p)))


def test_finite_charges_need_trig():
    with pytest.raises(ValueError):
        tf.build_finite_charges(RegimeParams.rational(2), 1, "i")


def test_kind_ii_diagonal_block_is_scalar_n2_N0():
    p = RegimeParams.trigonometric(2)
    ch = tf.build_finite_charges(p, 0, "ii")
    kp, _ = k_limits("ii", p, 1)
    assert residual(ch.bplus, kp) == 0.0
    assert ch.plus_blocks[1, 0].item() == 0


def test_kind_i_upper_triangular():
    ch = tf.build_finite_charges(RegimeParams.trigonometric(2), 1, "i")
    assert np.array_equal(ch.plus_blocks[1, 0], np.zeros((2, 2)))


@pytest.mark.parametrize("n,kind,sign", CASES)
@pytest.mark.parametrize("N", [1, 2])
def test_triangularity(n, kind, sign, N):
    ch = tf.build_finite_charges(RegimeParams.trigonometric(n), N, kind, sign)
    assert max(tf.check_triangularity(ch).values()) < 1e-12


def test_kind_iv_band_only():
    ch = tf.build_finite_charges(RegimeParams.trigonometric(4), 1, "iv")
    assert tf.lower_block_norm(ch.plus_blocks, 1) < 1e-12
    assert tf.lower_block_norm(ch.plus_blocks, 0) > 1e-3


@pytest.mark.parametrize("n,kind,sign", CASES)
def test_fi_relations(n, kind, sign):
    ch = tf.build_finite_charges(RegimeParams.trigonometric(n), 2, kind, sign)
    assert max(tf.check_fi_relations(ch).values()) < 1e-9


@pytest.mark.parametrize("n,kind,sign", CASES)
def test_exc1(n, kind, sign):
    p = RegimeParams.trigonometric(n)
    ch = tf.build_finite_charges(p, 2, kind, sign)
    for lam in SampleGrid.draw(p, 3, 4):
        assert tf.check_exc1(ch, lam) < 1e-9


@pytest.mark.parametrize("n,kind,sign", CASES)
def test_inverse_transpose_map_full_transpose(n, kind, sign):
    ch = tf.build_finite_charges(RegimeParams.trigonometric(n), 2, kind, sign)
    assert tf.check_inverse_transpose_map(ch, "full") < 1e-9


def test_inverse_transpose_map_aux_transpose_fails_in_general():
    # transposing only the auxiliary factor is not enough once the chain blocks are non-symmetric
    ch = tf.build_finite_charges(RegimeParams.trigonometric(3), 2, "i")
    assert tf.check_inverse_transpose_map(ch, "aux") > 1e-3


def test_kind_iii_is_singular_and_abelian():
    p = RegimeParams.trigonometric(2)
    with pytest.raises(SingularMatrixError):
        tf.check_inverse_transpose_map(tf.build_finite_charges(p, 2, "iii"), "full")
    for N in (1, 2):
        out = tf.check_abelian_iii(p, N)
        assert out["commutator"] == 0.0
        assert out["plus_other_blocks"] == 0.0 and out["minus_other_blocks"] == 0.0
        assert out["plus_nonzero"] > 0.5 and out["minus_nonzero"] > 0.5


def test_non_symmetry_witness_needs_two_sites():
    p = RegimeParams.trigonometric(2)
    lams = SampleGrid.draw(p, 2, 0).points
    ch = tf.build_finite_charges(p, 2, "i")
    assert min(tf.non_symmetry_witness(ch, [identity(2)], lams)) > 1e-3


def test_diagonal_triviality():
    for n in (2, 3):
        assert tf.diagonal_triviality(RegimeParams.trigonometric(n), 2) < 1e-12


@pytest.fixture(scope="module", params=[1, 2])
def gl3(request):
    p = RegimeParams.trigonometric(3)
    return tf.gl3_commutation_suite(p, request.param, SampleGrid.draw(p, 3, 0).points)


def test_gl3_single_reading_relations(gl3):
    rows = [r for r in gl3.rows if not r.dual]
    assert len(rows) == 23
    assert all(r.passed(1e-9) for r in rows), gl3.table()


def test_gl3_named_examples(gl3):
    assert gl3.by_relation("B12.A3")[0].residual < 1e-9
    assert gl3.by_relation("B12.A1")[0].residual < 1e-9


@pytest.mark.parametrize("name", ["B11.D", "B22.D2", "B13.C2", "B12.C2"])
def test_gl3_dual_rows(gl3, name):
    rows = {r.reading: r for r in gl3.by_relation(name)}
    assert set(rows) == {"printed", "corrected"}
    assert rows["corrected"].passed(1e-9)
    assert not rows["printed"].passed(1e-3)


def test_gl3_block_reassembly():
    p = RegimeParams.trigonometric(3)
    from snpcert.spinchain import ChainSpec, double_row
    b = double_row(ChainSpec(p, 1), identity(3), 0.3 + 0.2j)
    assert np.array_equal(tf.Gl3Blocks.from_double_row(b).reassemble(), b)


def test_gl3_needs_n3():
    with pytest.raises(ValueError):
        tf.gl3_commutation_suite(RegimeParams.trigonometric(2), 1, [0.3])


def test_gl3_table_format(gl3):
    text = gl3.table()
    assert text.splitlines()[0].split()[:3] == ["relation", "reading", "residual"]
    assert "corrected" in text
    assert len(gl3.relations()) == 27
