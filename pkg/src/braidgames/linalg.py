"""Small dense complex linear algebra with residual-based verdicts.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Two-qubit
operators use the index convention ``|ij> -> row 2*i + j``, i.e. the first
tensor factor is the most significant bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

OPERATOR_TOL = 1e-10
EIGEN_TOL = 1e-8

Property = Literal["unitary", "hermitian", "involution"]

# Pauli matrices and single-qubit constants used across the package.
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
BIT_FLIP = 1j * X  # F = i sigma_1


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def _square(m, name: str = "matrix") -> np.ndarray:
    a = as_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    return a


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValidationError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Tensor product; ``kron(a, b)[2*i + j, ...]`` for qubit factors."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def expm_involution(m, theta: float, tol: float = OPERATOR_TOL) -> np.ndarray:
    """Return ``exp(i*theta*m/2)`` for an involution ``m`` (``m @ m == I``).

    Uses the closed form ``cos(theta/2) I + i sin(theta/2) m``.

    Raises
    ------
    ValidationError
        If ``m`` is not square or ``||m^2 - I||_F > tol``.
    """
    m = _square(m)
    v = verdict(m, "involution", tol)
    if not v.passed:
        raise ValidationError(
            f"matrix is not an involution: residual {v.residual:.3e} > {tol:.1e}"
        )
    half = 0.5 * theta
    return math.cos(half) * np.eye(m.shape[0]) + 1j * math.sin(half) * m


def _expm_taylor(a: np.ndarray, squarings: int) -> np.ndarray:
    scaled = a / 2.0**squarings
    n = a.shape[0]
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ scaled / k
        result = result + term
        if np.abs(term).max() < 1e-18:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def expm_series(m, extra_squarings: int = 0) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a Taylor core.

    The matrix is scaled until its 1-norm is at most 1/2, after which the
    Taylor series converges to machine precision in under 30 terms.
    ``extra_squarings`` adds further halvings (used to estimate the error).
    """
    a = _square(m)
    norm = np.abs(a).sum(axis=0).max() if a.size else 0.0
    squarings = max(0, math.ceil(math.log2(norm)) + 1) if norm > 0.5 else 0
    return _expm_taylor(a, squarings + extra_squarings)


def is_tridiagonal(m: np.ndarray) -> bool:
    n = m.shape[0]
    if n < 3:
        return True
    band = np.triu(np.tril(m, 1), -1)
    return bool(np.array_equal(band, m))


def _jacobi_eigh(a: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    # Cyclic Jacobi with exact 2x2 Hermitian rotations.
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-16 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                theta = 0.5 * math.atan2(2.0 * r, app - aqq)
                c, s = math.cos(theta), math.sin(theta)
                u = np.eye(n, dtype=complex)
                u[p, p] = c
                u[q, p] = s * phase.conjugate()
                u[p, q] = -s
                u[q, q] = c * phase.conjugate()
                a = u.conj().T @ a @ u
                v = v @ u
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def tridiagonal_eigs(
    diag, offdiag, k: int | None = None, vectors: bool = True
) -> tuple[np.ndarray, np.ndarray | None]:
    """Lowest ``k`` eigenpairs of a real symmetric tridiagonal matrix.

    Backed by LAPACK bisection plus inverse iteration (``stebz``/``stein``).
    """
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise ValidationError("tridiagonal matrix has non-finite entries")
    kwargs = {}
    if k is not None:
        if not 0 < k <= d.size:
            raise ValidationError(f"k={k} out of range for n={d.size}")
        kwargs = {"select": "i", "select_range": (0, k - 1)}
    if vectors:
        w, v = eigh_tridiagonal(d, e, lapack_driver="stebz", **kwargs)
        return w, v
    w = eigh_tridiagonal(d, e, eigvals_only=True, lapack_driver="stebz", **kwargs)
    return w, None


def hermitian_eigs(m, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.

    Small complex matrices (n <= 8) use cyclic Jacobi. Larger real
    symmetric tridiagonal matrices go through :func:`tridiagonal_eigs`;
    any other large Hermitian input falls back to LAPACK ``heevd``.

    Raises
    ------
    ValidationError
        If ``||m - m^H||_F > tol * max(1, ||m||_F)``.
    """
    a = _square(m)
    herm = np.linalg.norm(a - a.conj().T)
    if herm > tol * max(1.0, np.linalg.norm(a)):
        raise ValidationError(f"matrix is not Hermitian: residual {herm:.3e}")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    if n <= 8:
        return _jacobi_eigh(a)
    if np.all(a.imag == 0) and is_tridiagonal(a.real):
        w, v = tridiagonal_eigs(np.diag(a.real), np.diag(a.real, 1))
        return w, v.astype(complex)
    return np.linalg.eigh(a)


@dataclass(frozen=True)
class MatrixVerdict:
    property: str
    residual: float
    passed: bool
    tolerance: float


def verdict(m, prop: Property, tol: float = OPERATOR_TOL) -> MatrixVerdict:
    """Frobenius residual of a matrix identity, with pass flag.

    ``unitary``: ``||m^H m - I||``; ``hermitian``: ``||m - m^H||``;
    ``involution``: ``||m m - I||``.
    """
    a = _square(m)
    eye = np.eye(a.shape[0])
    if prop == "unitary":
        res = np.linalg.norm(a.conj().T @ a - eye)
    elif prop == "hermitian":
        res = np.linalg.norm(a - a.conj().T)
    elif prop == "involution":
        res = np.linalg.norm(a @ a - eye)
    else:
        raise ValidationError(f"unknown property {prop!r}")
    res = float(res)
    return MatrixVerdict(prop, res, res <= tol, tol)


class PhaseMatch(NamedTuple):
    equal: bool
    phase: complex
    residual: float


def equal_up_to_global_phase(a, b, tol: float = OPERATOR_TOL) -> PhaseMatch:
    """Test ``a == lam * b`` for some unit-modulus ``lam``.

    ``lam`` is read off the entry where ``b`` has its largest modulus.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}")
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) == 0.0:
        res = float(np.linalg.norm(a))
        return PhaseMatch(res <= tol, 1.0 + 0j, res)
    lam = a[k] / b[k]
    if abs(lam) == 0.0:
        res = float(np.linalg.norm(a - b))
        return PhaseMatch(False, 1.0 + 0j, max(res, float(np.linalg.norm(b))))
    lam = complex(lam / abs(lam))
    res = float(np.linalg.norm(a - lam * b))
    return PhaseMatch(res <= tol, lam, res)
