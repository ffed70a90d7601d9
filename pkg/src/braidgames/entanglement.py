"""Pure two-qubit states: product test, concurrence, factorization.

Amplitudes are stored in basis order ``|00>, |01>, |10>, |11>``. The
``a0..a3`` coefficients of the diagonal-permutation map follow the other
common ordering ``a0|00> + a1|10> + a2|01> + a3|11>``; ``COEFF_ORDER``
converts between the two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import OPERATOR_TOL, ValidationError, verdict

NORM_TOL = 1e-12

# a_k multiplies basis state COEFF_ORDER[k]
COEFF_ORDER = (0, 2, 1, 3)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).ravel()
        if a.shape != (4,):
            raise ValidationError("a two-qubit state has 4 amplitudes")
        if not np.all(np.isfinite(a)):
            raise ValidationError("amplitudes must be finite")
        norm = float(np.vdot(a, a).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized: |psi|^2 = {norm!r}")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def normalized(cls, amplitudes) -> "TwoQubitState":
        a = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(a)
        if norm == 0:
            raise ValidationError("zero vector cannot be normalized")
        return cls(a / norm)

    @classmethod
    def from_coefficients(cls, a) -> "TwoQubitState":
        """Build from ``a0|00> + a1|10> + a2|01> + a3|11>``."""
        amp = np.zeros(4, dtype=complex)
        amp[list(COEFF_ORDER)] = np.asarray(a, dtype=complex)
        return cls(amp)

    def matrix(self) -> np.ndarray:
        """Amplitude matrix ``[[c00, c01], [c10, c11]]``."""
        return self.amplitudes.reshape(2, 2)


@dataclass(frozen=True)
class EntanglementVerdict:
    product: bool
    concurrence: float
    residual: float


def _det(s: TwoQubitState) -> float:
    # dividing by <psi|psi> makes the measure scale-free, so rounding in the
    # amplitudes (1/sqrt(2) squared is not 1/2) cancels
    c00, c01, c10, c11 = s.amplitudes
    return float(abs(c00 * c11 - c01 * c10) / np.vdot(s.amplitudes, s.amplitudes).real)


def concurrence(s: TwoQubitState) -> float:
    return 2.0 * _det(s)


def is_product(s: TwoQubitState, tol: float = OPERATOR_TOL) -> EntanglementVerdict:
    """Product iff ``|c00 c11 - c01 c10| <= tol``."""
    det = _det(s)
    return EntanglementVerdict(det <= tol, 2.0 * det, det)


@dataclass(frozen=True)
class Factorization:
    alice: np.ndarray | None
    bob: np.ndarray | None
    residual: float
    # c_i^A c_j^B - c_ij for (i, j) = (0,0), (1,1), (0,1), (1,0)
    equation_residuals: tuple[float, float, float, float]

    @property
    def ok(self) -> bool:
        return self.alice is not None


_EQUATIONS = ((0, 0), (1, 1), (0, 1), (1, 0))


def factorize(s: TwoQubitState, tol: float = OPERATOR_TOL) -> Factorization:
    """Split a product state into normalized single-qubit factors.

    The best rank-one fit ``u v^T`` of the amplitude matrix comes from its
    dominant row; Alice's first non-negligible amplitude is made real and
    positive. For an entangled state the factors are ``None`` and the
    residuals of the four equations ``c_i^A c_j^B = c_ij`` are returned.
    """
    m = s.matrix()
    k = int(np.argmax(np.linalg.norm(m, axis=1)))
    bob = m[k] / np.linalg.norm(m[k])
    alice = m @ bob.conj()
    lead = int(np.flatnonzero(np.abs(alice) > 1e-12)[0])
    phase = alice[lead] / abs(alice[lead])
    alice = alice / phase
    bob = bob * phase
    fit = np.outer(alice, bob)
    eq = tuple(float(abs(fit[i, j] - m[i, j])) for i, j in _EQUATIONS)
    res = float(np.linalg.norm(fit - m))
    if not is_product(s, tol).product:
        return Factorization(None, None, res, eq)
    return Factorization(alice, bob, res, eq)


def rbar_matrix(a) -> np.ndarray:
    """Linear map ``|00> -> a0|00>, |01> -> a3|10>, |10> -> a2|01>, |11> -> a1|11>``."""
    a0, a1, a2, a3 = np.asarray(a, dtype=complex)
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = a0
    r[2, 1] = a3
    r[1, 2] = a2
    r[3, 3] = a1
    return r


@dataclass(frozen=True)
class RbarReport:
    matrix: np.ndarray
    unitary: bool
    unitarity_residual: float
    image: np.ndarray
    uniform_image_verdict: EntanglementVerdict
    criterion_entangled: bool  # a0*a1 != a2*a3


def rbar_apply(a, state: TwoQubitState | None = None, tol: float = OPERATOR_TOL) -> RbarReport:
    """Apply the diagonal-permutation map and judge the image of ``z``.

    ``z`` is the uniform product state ``(|00>+|01>+|10>+|11>)/2``. The map
    is unitary only when every ``|a_k| = 1``; otherwise the failure is
    reported and the image of ``z`` is renormalized before judging it.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (4,):
        raise ValidationError("rbar_apply needs 4 coefficients a0..a3")
    r = rbar_matrix(a)
    v = verdict(r, "unitary", tol)
    uniform = np.full(4, 0.5, dtype=complex)
    image = r @ (uniform if state is None else state.amplitudes)
    z_image = r @ uniform
    if np.linalg.norm(z_image) == 0:
        raise ValidationError("map annihilates the uniform state")
    z_state = TwoQubitState.normalized(z_image)
    crit = abs(a[0] * a[1] - a[2] * a[3]) > tol
    return RbarReport(r, v.passed, v.residual, image, is_product(z_state, tol), bool(crit))
