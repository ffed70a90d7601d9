import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from braidgames.linalg import (
    HADAMARD,
    X,
    Y,
    Z,
    ValidationError,
    equal_up_to_global_phase,
    expm_involution,
    expm_series,
    hermitian_eigs,
    tridiagonal_eigs,
    verdict,
)

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def _hermitian(n, data):
    re = data.draw(arrays(float, (n, n), elements=finite))
    im = data.draw(arrays(float, (n, n), elements=finite))
    a = re + 1j * im
    return a + a.conj().T


def test_involution_closed_form_matches_series():
    for m in (X, Y, Z, HADAMARD, np.kron(X, Z)):
        for theta in (0.0, 0.3, -1.7, np.pi):
            ref = expm_series(0.5j * theta * m)
            assert np.allclose(expm_involution(m, theta), ref, atol=1e-13)


def test_involution_rejects_non_involution():
    with pytest.raises(ValidationError):
        expm_involution(np.diag([1.0, 2.0]), 0.1)


@settings(max_examples=40, deadline=None)
@given(st.data(), st.integers(1, 6))
def test_series_against_eigendecomposition(data, n):
    # exp(iH) = V diag(e^{iw}) V^H from an independent eigen-solver
    h = _hermitian(n, data)
    w, v = np.linalg.eigh(h)
    ref = (v * np.exp(1j * w)) @ v.conj().T
    out = expm_series(1j * h)
    assert np.allclose(out, ref, atol=1e-10 * max(1.0, np.abs(h).max()))
    assert verdict(out, "unitary", 1e-9).passed


def test_series_is_stable_under_extra_squarings():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.allclose(expm_series(a), expm_series(a, extra_squarings=3), rtol=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.data(), st.integers(1, 8))
def test_jacobi_matches_lapack(data, n):
    h = _hermitian(n, data)
    w, v = hermitian_eigs(h)
    assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-11 * max(1.0, np.abs(h).max()))
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
    assert np.allclose(h @ v, v * w, atol=1e-10 * max(1.0, np.abs(h).max()))


def test_hermitian_eigs_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        hermitian_eigs(np.array([[0, 1], [0, 0]]))


@settings(max_examples=30, deadline=None)
@given(arrays(float, 40, elements=finite), arrays(float, 39, elements=finite))
def test_tridiagonal_against_dense(d, e):
    m = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    w, v = tridiagonal_eigs(d, e, k=5)
    assert np.allclose(w, np.linalg.eigvalsh(m)[:5], atol=1e-10)
    assert np.allclose(m @ v, v * w, atol=1e-8)


def test_tridiagonal_k_out_of_range():
    with pytest.raises(ValidationError):
        tridiagonal_eigs([1.0, 2.0], [0.5], k=3)


def test_verdicts():
    assert verdict(HADAMARD, "unitary").passed
    assert verdict(X, "involution").passed
    assert not verdict(np.array([[1, 1], [0, 1]]), "hermitian").passed
    with pytest.raises(ValidationError):
        verdict(X, "normal")


@given(st.floats(-np.pi, np.pi))
def test_global_phase(alpha):
    pm = equal_up_to_global_phase(np.exp(1j * alpha) * HADAMARD, HADAMARD)
    assert pm.equal
    assert abs(pm.phase - np.exp(1j * alpha)) < 1e-12
    assert not equal_up_to_global_phase(X, Z).equal
