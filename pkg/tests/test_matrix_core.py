from __future__ import annotations

import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitopes.errors import NotHermitian, NotSkewSymmetric, SizeCapExceeded
from orbitopes.matrix_core import (
    QMatrix,
    eig_hermitian,
    embed_quaternion,
    exterior_power_additive,
    haar_orthogonal,
    haar_symplectic,
    haar_unitary,
    hermitian_dilation,
    ky_fan_norm,
    pfaffian,
    pfaffian_sign,
    qmul,
    random_quaternion,
    singular_values,
    trace_form,
    unembed_quaternion,
)


def rand_herm(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def cubic_roots(A):
    """Eigenvalues of a 3x3 hermitian matrix by the trigonometric cubic formula."""
    A = np.asarray(A)
    q = np.trace(A).real / 3
    B = A - q * np.eye(3)
    p = np.sqrt(np.trace(B @ B).real / 6)
    r = np.clip(np.linalg.det(B / p).real / 2, -1, 1)
    phi = np.arccos(r) / 3
    e1 = q + 2 * p * np.cos(phi)
    e3 = q + 2 * p * np.cos(phi + 2 * np.pi / 3)
    return np.array(sorted([e1, 3 * q - e1 - e3, e3], reverse=True))


# --- eigensolver ---------------------------------------------------------

@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_diagonal(method):
    assert np.allclose(eig_hermitian(np.diag([3.0, 1.0, -2.0]), method=method), [3, 1, -2])


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_shift_and_cubic(method):
    rng = np.random.default_rng(0)
    for _ in range(20):
        A = rand_herm(3, rng)
        assert np.allclose(eig_hermitian(A, method=method), cubic_roots(A), atol=1e-10)
        B = rand_herm(6, rng)
        assert np.allclose(eig_hermitian(B + 2.5 * np.eye(6), method=method),
                           eig_hermitian(B, method=method) + 2.5, atol=1e-10)


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(3)
    for n in (1, 2, 5, 9):
        A = rand_herm(n, rng)
        assert np.allclose(eig_hermitian(A, "jacobi"), eig_hermitian(A, "lapack"), atol=1e-11)
        S = A.real
        assert np.allclose(eig_hermitian(S, "jacobi"), eig_hermitian(S, "lapack"), atol=1e-11)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


# --- dilation, singular values, Ky Fan -------------------------------------

def test_dilation_examples():
    assert np.allclose(eig_hermitian(hermitian_dilation(np.array([[1.0]]))), [1, -1])
    assert np.allclose(eig_hermitian(hermitian_dilation(np.diag([2.0, 1.0]))), [2, 1, -1, -2])
    assert np.allclose(eig_hermitian(hermitian_dilation(np.zeros((3, 2)))), np.zeros(5))


def test_dilation_spectrum_symmetric():
    rng = np.random.default_rng(1)
    for m, n in [(3, 2), (4, 4), (2, 5)]:
        x = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        ev = eig_hermitian(hermitian_dilation(x))
        assert np.allclose(np.sort(ev), np.sort(-ev), atol=1e-10)


def test_singular_value_examples():
    assert np.allclose(singular_values(np.diag([3.0, 1.0])), [3, 1])
    rng = np.random.default_rng(2)
    assert np.allclose(singular_values(haar_orthogonal(3, rng)), [1, 1, 1])
    qi = QMatrix.from_parts(np.zeros((1, 1)), np.ones((1, 1)), np.zeros((1, 1)), np.zeros((1, 1)))
    assert np.allclose(singular_values(qi), [1.0])


def test_singular_values_match_numpy_and_invariance():
    rng = np.random.default_rng(4)
    for m, n in [(4, 3), (3, 3), (5, 2)]:
        x = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        sv = singular_values(x)
        assert np.allclose(sv, np.linalg.svd(x, compute_uv=False), atol=1e-10)
        u, v = haar_unitary(m, rng), haar_unitary(n, rng)
        assert np.allclose(singular_values(u @ x @ v.conj().T), sv, atol=1e-9)


def test_quaternion_singular_values_symplectic_invariance():
    rng = np.random.default_rng(5)
    x = random_quaternion(3, 2, rng)
    sv = singular_values(x)
    assert len(sv) == 2
    u, v = haar_symplectic(3, rng), haar_symplectic(2, rng)
    assert np.allclose(singular_values(u @ x @ v.conj_t()), sv, atol=1e-9)


def test_ky_fan_examples():
    assert ky_fan_norm(np.diag([3.0, 2.0, 1.0]), 2) == pytest.approx(5)
    for n in (2, 4):
        for k in range(1, n + 1):
            assert ky_fan_norm(np.eye(n), k) == pytest.approx(k)
    with pytest.raises(ValueError):
        ky_fan_norm(np.eye(2), 3)


def test_ky_fan_triangle_and_von_neumann():
    rng = np.random.default_rng(6)
    for _ in range(50):
        x = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        y = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        for k in (1, 2, 3):
            assert ky_fan_norm(x + y, k) <= ky_fan_norm(x, k) + ky_fan_norm(y, k) + 1e-12
        bound = float(singular_values(x) @ singular_values(y))
        assert abs(trace_form(x, y)) <= bound + 1e-10


# --- quaternions --------------------------------------------------------

def test_embed_examples():
    one = QMatrix.from_parts(np.ones((1, 1)), *(np.zeros((1, 1)),) * 3)
    assert np.array_equal(embed_quaternion(one), np.eye(2))
    j = QMatrix.from_parts(np.zeros((1, 1)), np.zeros((1, 1)), np.ones((1, 1)), np.zeros((1, 1)))
    assert np.array_equal(embed_quaternion(j), np.array([[0, -1], [1, 0]]))


def test_quaternion_multiplication_table():
    e = np.eye(4)
    one, i, j, k = e
    assert np.array_equal(qmul(i, j), k)
    assert np.array_equal(qmul(j, k), i)
    assert np.array_equal(qmul(k, i), j)
    assert np.array_equal(qmul(i, i), -one)
    assert np.array_equal(qmul(j, i), -k)


def test_embedding_homomorphism_and_inverse():
    rng = np.random.default_rng(7)
    for _ in range(20):
        A, B = random_quaternion(3, 4, rng), random_quaternion(4, 2, rng)
        assert np.allclose(embed_quaternion(A @ B), embed_quaternion(A) @ embed_quaternion(B), atol=1e-10)
        assert np.allclose(unembed_quaternion(embed_quaternion(A)).data, A.data)
        assert np.allclose(embed_quaternion(A.conj_t()), embed_quaternion(A).conj().T)


def test_hermitian_quaternion_doubled_spectrum():
    # 2x2 hermitian quaternion [[a, q], [q*, d]] has right eigenvalues (a+d)/2 +- sqrt(((a-d)/2)^2 + |q|^2)
    rng = np.random.default_rng(8)
    for _ in range(10):
        a, d = rng.standard_normal(2)
        q = rng.standard_normal(4)
        data = np.zeros((2, 2, 4))
        data[0, 0, 0], data[1, 1, 0] = a, d
        data[0, 1] = q
        data[1, 0] = q * np.array([1, -1, -1, -1])
        r = np.sqrt(((a - d) / 2) ** 2 + q @ q)
        expected = [(a + d) / 2 + r] * 2 + [(a + d) / 2 - r] * 2
        assert np.allclose(eig_hermitian(embed_quaternion(QMatrix(data))), expected, atol=1e-10)


# --- exterior powers ---------------------------------------------------

def test_exterior_examples():
    assert np.allclose(eig_hermitian(exterior_power_additive(np.diag([5.0, 3.0, 1.0]), 2)), [8, 6, 4])
    for N, k in [(4, 2), (5, 3)]:
        L = exterior_power_additive(np.eye(N), k)
        assert np.allclose(L, k * np.eye(L.shape[0]))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_exterior_spectrum_is_subset_sums(k):
    rng = np.random.default_rng(9)
    for _ in range(5):
        A = rand_herm(6, rng)
        th = eig_hermitian(A)
        sums = sorted((sum(c) for c in itertools.combinations(th, k)), reverse=True)
        assert np.allclose(eig_hermitian(exterior_power_additive(A, k)), sums, atol=1e-9)


def test_exterior_entry_rule_against_wedge_products():
    """Compare with the action on explicit antisymmetric tensors (N=4, k=2)."""
    rng = np.random.default_rng(10)
    A = rand_herm(4, rng)
    subsets = list(itertools.combinations(range(4), 2))
    basis = []
    for a, b in subsets:
        t = np.zeros((4, 4), dtype=complex)
        t[a, b], t[b, a] = 1, -1
        basis.append(t)
    L = exterior_power_additive(A, 2)
    for col, t in enumerate(basis):
        img = A @ t + t @ A.T  # derivative action on v_a (x) v_b - v_b (x) v_a
        coeffs = [img[a, b] for a, b in subsets]
        assert np.allclose(L[:, col], coeffs)


def test_exterior_linearity_exact():
    A = np.array([[F(1), F(2), F(0)], [F(2), F(-1), F(3)], [F(0), F(3), F(1, 2)]], dtype=object)
    B = np.array([[F(1, 3), F(0), F(1)], [F(0), F(2), F(-1)], [F(1), F(-1), F(0)]], dtype=object)
    LA, LB = exterior_power_additive(A, 2), exterior_power_additive(B, 2)
    assert (exterior_power_additive(A + B, 2) == LA + LB).all()
    assert (exterior_power_additive(F(5, 7) * A, 2) == F(5, 7) * LA).all()


def test_exterior_cap():
    with pytest.raises(SizeCapExceeded):
        exterior_power_additive(np.eye(20), 10, cap=1000)


# --- Pfaffian ------------------------------------------------------------

def test_pfaffian_sign_examples():
    assert pfaffian_sign(np.array([[0.0, 1.0], [-1.0, 0.0]])) == 1
    assert pfaffian_sign(np.array([[0.0, -1.0], [1.0, 0.0]])) == -1
    assert pfaffian_sign(np.zeros((4, 4))) == 0


def test_pfaffian_errors():
    with pytest.raises(NotSkewSymmetric):
        pfaffian(np.eye(2))
    with pytest.raises((NotSkewSymmetric, ValueError)):
        pfaffian(np.zeros((3, 3)))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31))
def test_pfaffian_squared_is_determinant(half, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((2 * half, 2 * half))
    A = X - X.T
    pf = pfaffian(A)
    assert pf * pf == pytest.approx(np.linalg.det(A), rel=1e-8, abs=1e-10)
    assert pfaffian_sign(A) ** 2 == (1 if abs(np.linalg.det(A)) > 1e-10 else 0)


def test_pfaffian_of_block_diagonal():
    v = [3.0, -2.0, 0.5]
    A = np.zeros((6, 6))
    for i, t in enumerate(v):
        A[2 * i, 2 * i + 1], A[2 * i + 1, 2 * i] = t, -t
    assert pfaffian(A) == pytest.approx(np.prod(v))
