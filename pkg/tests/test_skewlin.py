import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermifisher import skewlin
from fermifisher.config import DEFAULT_TOL
from fermifisher.skewlin import (
    block_matrix,
    canonical_form,
    hermitian_eig,
    pfaffian,
    random_antisym,
    tanh_of_i_halved,
)


def _recon_ok(a, cf):
    err = np.linalg.norm(cf.reconstruct() - a)
    return err <= DEFAULT_TOL.recon * (1 + np.linalg.norm(a))


def _orth_ok(q):
    return np.abs(q @ q.T - np.eye(q.shape[0])).max() <= DEFAULT_TOL.orth


def test_antisymmetrize_rejects_bad_shapes():
    with pytest.raises(ValueError):
        skewlin.antisymmetrize(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        skewlin.antisymmetrize(np.zeros((2, 4)))
    with pytest.raises(ValueError):
        skewlin.antisymmetrize(np.full((2, 2), np.nan))
    a = skewlin.antisymmetrize([[1.0, 2.0], [0.0, 3.0]])
    np.testing.assert_array_equal(a, [[0.0, 1.0], [-1.0, 0.0]])


def test_canonical_form_of_canonical_block():
    cf = canonical_form([[0.0, 2.5], [-2.5, 0.0]])
    np.testing.assert_allclose(cf.angles, [2.5])
    np.testing.assert_allclose(cf.rotation, np.eye(2), atol=1e-15)


def test_canonical_form_negative_block_flips_orientation():
    a = [[0.0, -1.5], [1.5, 0.0]]
    cf = canonical_form(a)
    np.testing.assert_allclose(cf.angles, [1.5])
    assert _recon_ok(np.array(a), cf)
    assert np.linalg.det(cf.rotation) == pytest.approx(-1.0)


def test_canonical_form_zero_matrix():
    cf = canonical_form(np.zeros((6, 6)))
    np.testing.assert_array_equal(cf.angles, np.zeros(3))
    np.testing.assert_array_equal(cf.rotation, np.eye(6))


def test_canonical_form_matches_generic_eigensolver():
    a = random_antisym(6, np.random.default_rng(42))
    cf = canonical_form(a)
    eig = np.linalg.eigvals(a)
    expected = np.sort(eig.imag[eig.imag > 0])[::-1]
    np.testing.assert_allclose(cf.angles, expected, rtol=1e-12)
    assert _recon_ok(a, cf)
    assert _orth_ok(cf.rotation)


def test_canonical_form_angles_sorted_nonnegative(rng):
    cf = canonical_form(random_antisym(10, rng))
    assert np.all(cf.angles >= 0)
    assert np.all(np.diff(cf.angles) <= 0)


@pytest.mark.parametrize(
    "angles",
    [[2.0, 2.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.0, 0.0, 0.0, 3.0], [5.0, 1e-9, 0.0]],
)
def test_canonical_form_degenerate_spectra(angles, rng):
    q = np.linalg.qr(rng.normal(size=(2 * len(angles),) * 2))[0]
    a = q.T @ block_matrix(angles) @ q
    cf = canonical_form(a)
    np.testing.assert_allclose(cf.angles, np.sort(angles)[::-1], atol=1e-12)
    assert _recon_ok(a, cf)
    assert _orth_ok(cf.rotation)


@st.composite
def antisym_matrices(draw, max_modes=6):
    n = draw(st.integers(1, max_modes))
    seed = draw(st.integers(0, 2**32 - 1))
    scale = draw(st.sampled_from([1e-6, 1.0, 30.0]))
    return random_antisym(2 * n, np.random.default_rng(seed), scale)


@settings(max_examples=60, deadline=None)
@given(antisym_matrices())
def test_canonical_form_round_trip(a):
    cf = canonical_form(a)
    assert _recon_ok(a, cf)
    assert _orth_ok(cf.rotation)


@settings(max_examples=40, deadline=None)
@given(antisym_matrices(max_modes=5), st.integers(0, 2**32 - 1))
def test_canonical_form_rank_deficient(a, seed):
    # zero out some planes to force a kernel
    cf = canonical_form(a)
    k = np.random.default_rng(seed).integers(0, cf.modes + 1)
    angles = cf.angles.copy()
    angles[:k] = 0.0
    b = cf.reconstruct(angles)
    cfb = canonical_form(b)
    assert _recon_ok(b, cfb)
    assert _orth_ok(cfb.rotation)


def test_pfaffian_two_by_two():
    assert pfaffian([[0.0, 1.0], [-1.0, 0.0]]) == 1.0
    assert pfaffian([[0.0, -3.5], [3.5, 0.0]]) == -3.5


def test_pfaffian_block_diagonal_product():
    assert pfaffian(block_matrix([2.0, -3.0, 0.5])) == pytest.approx(-3.0)


def test_pfaffian_odd_dimension_is_zero():
    assert pfaffian(np.zeros((3, 3))) == 0.0


def test_pfaffian_squared_is_determinant_seed7():
    a = random_antisym(8, np.random.default_rng(7))
    v = pfaffian(a)
    assert v**2 == pytest.approx(np.linalg.det(a), rel=1e-10)


def test_pfaffian_sign_by_leibniz_expansion():
    # 4x4: Pf = a01 a23 - a02 a13 + a03 a12
    a = random_antisym(4, np.random.default_rng(1))
    expected = a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
    assert pfaffian(a) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("dim", [2, 6, 20, 64, 120, 200])
def test_pfaffian_squared_is_determinant(dim):
    a = random_antisym(dim, np.random.default_rng(dim))
    v = pfaffian(a)
    sign, logdet = np.linalg.slogdet(a)
    assert sign > 0
    assert abs(np.expm1(2 * np.log(abs(v)) - logdet)) <= 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_pfaffian_congruence(n, seed):
    r = np.random.default_rng(seed)
    a = random_antisym(2 * n, r)
    b = r.normal(size=(2 * n, 2 * n))
    lhs = pfaffian(b.T @ a @ b)
    rhs = np.linalg.det(b) * pfaffian(a)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-12)


def test_tanh_of_zero_is_zero():
    np.testing.assert_array_equal(tanh_of_i_halved(np.zeros((4, 4))), np.zeros((4, 4)))


def test_tanh_inverse_relation_single_block():
    g = tanh_of_i_halved(block_matrix([2 * np.arctanh(0.5)]))
    np.testing.assert_allclose(g, block_matrix([0.5]), atol=1e-15)


def test_tanh_matches_dense_hermitian_function():
    a = random_antisym(6, np.random.default_rng(3))
    lam, v = np.linalg.eigh(0.5j * a)
    dense = (v * np.tanh(lam)) @ v.conj().T
    np.testing.assert_allclose(1j * tanh_of_i_halved(a), dense, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(antisym_matrices())
def test_tanh_spectrum_bounded(a):
    vals = np.linalg.eigvalsh(1j * tanh_of_i_halved(a))
    assert np.all(np.abs(vals) <= 1 + 1e-12)


def test_hermitian_eig_two_by_two():
    eig = hermitian_eig([[0.0, 1.0], [-1.0, 0.0]])
    np.testing.assert_allclose(eig.values, [-1.0, 1.0])


def test_hermitian_eig_zero():
    eig = hermitian_eig(np.zeros((4, 4)))
    np.testing.assert_array_equal(eig.values, np.zeros(4))
    np.testing.assert_array_equal(eig.vectors, np.eye(4))


def test_hermitian_eig_pairs_seed11():
    a = random_antisym(8, np.random.default_rng(11))
    eig = hermitian_eig(a)
    np.testing.assert_allclose(eig.values, -eig.values[::-1], atol=1e-12)
    np.testing.assert_allclose(eig.reconstruct(), 1j * a, atol=1e-12)
    v = eig.vectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(8), atol=DEFAULT_TOL.orth)


@settings(max_examples=40, deadline=None)
@given(antisym_matrices())
def test_hermitian_eig_values_sum_to_zero(a):
    vals = hermitian_eig(a).values
    assert abs(vals.sum()) <= 1e-10 * max(np.linalg.norm(a), 1e-300)
