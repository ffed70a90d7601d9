"""Yang-Baxter braiding gates on two qubits.

Covers the Bell-basis braid matrix, the CNOT = M R N factorization, the
eight-vertex braid-group representation ``b(+/-)``, its Yang-Baxterized
spectral form and the associated Hamiltonian.

Several printed matrices in the source material are faulty. Each
``printed_*`` function returns the literal form, and the unprefixed
function returns the minimal correction that restores the stated
properties. :func:`verify_suite` records which corrections it applied.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .entanglement import TwoQubitState, concurrence
from .linalg import (
    I2,
    OPERATOR_TOL,
    ValidationError,
    equal_up_to_global_phase,
    expm_series,
    hermitian_eigs,
    verdict,
)

SQRT2 = math.sqrt(2.0)
# permutation exchanging the two qubits of a 4x4 operator
P_SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]


@dataclass(frozen=True, eq=False)
class BraidCandidate:
    matrix: np.ndarray
    label: str
    unitary_residual: float
    unitary: bool


def _candidate(m: np.ndarray, label: str, tol: float = OPERATOR_TOL) -> BraidCandidate:
    v = verdict(m, "unitary", tol)
    return BraidCandidate(m, label, v.residual, v.passed)


def printed_bell_r() -> np.ndarray:
    """Literal braid matrix; rows 1 and 4 coincide, so it is singular."""
    return np.array(
        [[1, 0, 0, 1], [0, 1, -1, 0], [0, 1, 1, 0], [1, 0, 0, 1]], dtype=complex
    ) / SQRT2


def bell_r() -> BraidCandidate:
    """Unitary Bell-basis braid matrix (last row reads ``-1, 0, 0, 1``)."""
    r = printed_bell_r()
    r[3, 0] = -r[3, 0]
    return _candidate(r, "R (bell basis, last-row sign corrected)")


def check_braid(r) -> float:
    """Frobenius residual of ``(R x I)(I x R)(R x I) = (I x R)(R x I)(I x R)``."""
    r = np.asarray(r, dtype=complex)
    if r.shape != (4, 4):
        raise ValidationError("braid check needs a 4x4 matrix")
    a = np.kron(r, I2)
    b = np.kron(I2, r)
    return float(np.linalg.norm(a @ b @ a - b @ a @ b))


@dataclass(frozen=True)
class SignVariant:
    entry: tuple[int, int]
    unitary_residual: float
    braid_residual: float

    @property
    def passes(self) -> bool:
        return self.unitary_residual <= OPERATOR_TOL and self.braid_residual <= OPERATOR_TOL


def bell_r_sign_variants(last_row_only: bool = False) -> list[SignVariant]:
    """Flip one nonzero entry of the printed matrix at a time and test it."""
    printed = printed_bell_r()
    out = []
    for i, j in zip(*np.nonzero(printed)):
        if last_row_only and i != 3:
            continue
        m = printed.copy()
        m[i, j] = -m[i, j]
        out.append(SignVariant((int(i), int(j)), verdict(m, "unitary").residual, check_braid(m)))
    return out


# --- CNOT = M R N ----------------------------------------------------------

def printed_local_factors() -> dict[str, np.ndarray]:
    return {
        "M1": np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2,
        "M2": np.array([[-1, 1], [1j, 1j]], dtype=complex) / SQRT2,
        "N1": np.array([[1, 1j], [1, -1j]], dtype=complex) / SQRT2,
        "N2": -np.array([[1, 0], [0, 1j]], dtype=complex) / SQRT2,
    }


def _unitary_rescale(m: np.ndarray) -> np.ndarray:
    # a matrix proportional to a unitary: divide by the common singular value
    s = np.linalg.svd(m, compute_uv=False)
    return m / s.mean()


@dataclass
class CnotReport:
    factor_residuals: dict[str, float]
    rescaled: list[str]
    literal_residual: float
    variants: list[dict]
    chosen: tuple[int, int, int, int] | None
    phase: complex | None
    residual: float | None
    passed: bool
    corrections: list[str] = field(default_factory=list)


def cnot_decomposition(tol: float = OPERATOR_TOL) -> CnotReport:
    """Check ``CNOT = (M1 x M2) R (N1 x N2)`` up to a global phase.

    Local factors that fail the unitarity verdict but are proportional to
    a unitary are rescaled first. If the product still misses, all 16 sign
    patterns on the rows of ``M2`` and ``N2`` are tried; the first that
    passes is adopted.
    """
    factors = printed_local_factors()
    r = bell_r().matrix
    literal = np.kron(factors["M1"], factors["M2"]) @ r @ np.kron(factors["N1"], factors["N2"])
    literal_res = equal_up_to_global_phase(literal, CNOT, tol).residual

    residuals, rescaled, corrections = {}, [], []
    for name, m in factors.items():
        v = verdict(m, "unitary", tol)
        residuals[name] = v.residual
        if not v.passed:
            fixed = _unitary_rescale(m)
            if verdict(fixed, "unitary", tol).passed:
                factors[name] = fixed
                rescaled.append(name)
                scale = np.linalg.svd(m, compute_uv=False).mean()
                corrections.append(
                    f"{name}: printed prefactor rescaled by {1 / scale:.6g} to make it unitary"
                )
            else:
                raise ValidationError(f"{name} is not proportional to a unitary")

    variants, chosen, match = [], None, None
    for signs in itertools.product((1, -1), repeat=4):
        m2 = np.diag(signs[:2]) @ factors["M2"]
        n2 = np.diag(signs[2:]) @ factors["N2"]
        prod = np.kron(factors["M1"], m2) @ r @ np.kron(factors["N1"], n2)
        pm = equal_up_to_global_phase(prod, CNOT, tol)
        variants.append({"signs": list(signs), "residual": pm.residual, "equal": pm.equal,
                         "phase": [pm.phase.real, pm.phase.imag]})
        if pm.equal and chosen is None:
            chosen, match = signs, pm
    if chosen is not None and chosen != (1, 1, 1, 1):
        corrections.append(f"row signs of M2/N2 changed to {chosen}")
    return CnotReport(
        residuals, rescaled, literal_res, variants, chosen,
        None if match is None else match.phase,
        None if match is None else match.residual,
        chosen is not None, corrections,
    )


# --- eight-vertex BGR and Yang-Baxterization ---------------------------------

def _sign(sign) -> int:
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-"):
        return -1
    raise ValidationError(f"sign must be +1 or -1, got {sign!r}")


def bgr_generator(sign, phi: float) -> np.ndarray:
    """Off-diagonal part ``K`` of ``b = I + K``; ``K`` is anti-Hermitian with ``K^2 = -I``."""
    s = _sign(sign)
    q = np.exp(1j * phi)
    k = np.zeros((4, 4), dtype=complex)
    k[0, 3] = q
    k[1, 2] = s
    k[2, 1] = -s
    k[3, 0] = -1 / q
    return k


BGR_EIGENVALUES = np.array([1 - 1j, 1 - 1j, 1 + 1j, 1 + 1j])


def spectrum_residual(eigs, target) -> float:
    """Max distance between two eigenvalue multisets, matched by (imag, real) order."""
    eigs = np.asarray(eigs, dtype=complex)
    target = np.asarray(target, dtype=complex)
    a = eigs[np.lexsort((eigs.real, np.round(eigs.imag, 6)))]
    b = target[np.lexsort((target.real, np.round(target.imag, 6)))]
    return float(np.abs(a - b).max())


def eigenspace_dims(m, values=(1 + 1j, 1 - 1j), tol: float = 1e-9) -> list[int]:
    """Geometric multiplicity of each value in ``values``."""
    m = np.asarray(m, dtype=complex)
    dims = []
    for lam in values:
        s = np.linalg.svd(m - lam * np.eye(m.shape[0]), compute_uv=False)
        dims.append(int(np.sum(s <= tol)))
    return dims


def printed_bgr_b(sign, phi: float) -> np.ndarray:
    """Literal eight-vertex matrix, including the stray ``1`` at row 3, column 4."""
    b = np.eye(4, dtype=complex) + bgr_generator(sign, phi)
    b[2, 3] = 1.0
    return b


def bgr_b(sign, phi: float, normalized: bool = False) -> np.ndarray:
    """Eight-vertex braid matrix ``[[1,0,0,q],[0,1,s,0],[0,-s,1,0],[-1/q,0,0,1]]``.

    Its eigenvalues are ``1 + i`` and ``1 - i``. With ``normalized`` the
    matrix is divided by ``sqrt(2)``, which makes it unitary.
    """
    b = np.eye(4, dtype=complex) + bgr_generator(sign, phi)
    return b / SQRT2 if normalized else b


def printed_yang_baxterize(sign, phi: float, x: float) -> np.ndarray:
    r = yang_baxterize(sign, phi, x)
    r[2, 3] = 1.0
    return r


def yang_baxterize(sign, phi: float, x: float) -> np.ndarray:
    """Spectral braid matrix ``(1+x) I + (1-x) K``.

    This equals ``b + x L1 L2 b^-1`` with ``L1 L2 = (1+i)(1-i) = 2``.
    """
    return (1 + x) * np.eye(4, dtype=complex) + (1 - x) * bgr_generator(sign, phi)


def construction_residual(sign, phi: float, x: float) -> float:
    """``|| yang_baxterize(x) - (b + 2 x b^-1) ||`` for the unnormalized ``b``."""
    b = bgr_b(sign, phi)
    return float(np.linalg.norm(yang_baxterize(sign, phi, x) - (b + 2.0 * x * np.linalg.inv(b))))


def _embed(r: np.ndarray, pair: str) -> np.ndarray:
    if pair == "12":
        return np.kron(r, I2)
    if pair == "23":
        return np.kron(I2, r)
    if pair == "13":
        p23 = np.kron(I2, P_SWAP)
        return p23 @ np.kron(r, I2) @ p23
    raise ValueError(pair)


def spectral_qybe_residual(sign, phi: float, x: float, y: float, braid_form: bool = True) -> float:
    """Residual of ``R12(x) R13(xy) R23(y) = R23(y) R13(xy) R12(x)``.

    The Yang-Baxterized matrix is of braid type; the corresponding
    ``R`` is ``P_swap @ Rb``. With ``braid_form=False`` the braid matrix
    is plugged in unconverted, which does not satisfy the relation.
    """
    conv = P_SWAP if braid_form else np.eye(4)
    rx = conv @ yang_baxterize(sign, phi, x)
    ry = conv @ yang_baxterize(sign, phi, y)
    rxy = conv @ yang_baxterize(sign, phi, x * y)
    lhs = _embed(rx, "12") @ _embed(rxy, "13") @ _embed(ry, "23")
    rhs = _embed(ry, "23") @ _embed(rxy, "13") @ _embed(rx, "12")
    return float(np.linalg.norm(lhs - rhs))


def printed_r_theta(sign, phi: float, theta: float) -> np.ndarray:
    b = bgr_b(sign, phi, normalized=True)
    return theta * math.cos(theta) * b + math.sin(theta) * np.linalg.inv(b)


def r_theta(sign, phi: float, theta: float) -> np.ndarray:
    """``cos(theta) b + sin(theta) b^-1`` on the normalized ``b``; unitary.

    Proportional to ``yang_baxterize`` at ``x = tan(theta)``.
    """
    if not -1e-12 <= theta <= math.pi / 2 + 1e-12:
        raise ValidationError(f"theta must lie in [0, pi/2], got {theta}")
    b = bgr_b(sign, phi, normalized=True)
    return math.cos(theta) * b + math.sin(theta) * b.conj().T


def r_theta_proportionality(sign, phi: float, theta: float) -> float:
    """Residual of ``r_theta`` against ``cos(theta)/sqrt(2) * R(tan theta)``."""
    target = math.cos(theta) / SQRT2 * yang_baxterize(sign, phi, math.tan(theta))
    return float(np.linalg.norm(r_theta(sign, phi, theta) - target))


def printed_hamiltonian_h(sign, phi: float) -> np.ndarray:
    s = _sign(sign)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 3] = -np.exp(1j * phi)
    m[1, 2] = -s
    m[2, 1] = s
    m[3, 0] = np.exp(-1j * phi)
    return 0.5j * m


@dataclass(frozen=True, eq=False)
class HamiltonianReport:
    matrix: np.ndarray
    hermitian_residual: float
    eigenvalues: np.ndarray
    eigenvalue_residual: float
    square_relation_residual: float


def hamiltonian_h(sign, phi: float, tol: float = OPERATOR_TOL) -> HamiltonianReport:
    """The displayed Hamiltonian with its three consistency checks.

    Raises
    ------
    ValidationError
        If the matrix is not Hermitian, which would mean a transcription fault.
    """
    h = printed_hamiltonian_h(sign, phi)
    herm = verdict(h, "hermitian", tol)
    if not herm.passed:
        raise ValidationError(f"H is not Hermitian (residual {herm.residual:.3e})")
    w, _ = hermitian_eigs(h)
    eig_res = float(np.abs(w - np.array([-0.5, -0.5, 0.5, 0.5])).max())
    b = bgr_b(sign, phi, normalized=True)
    rel = float(np.linalg.norm(h - (-0.5j) * (b @ b)))
    return HamiltonianReport(h, herm.residual, w, eig_res, rel)


def evolution(sign, phi: float, t: float) -> np.ndarray:
    return expm_series(-1j * t * printed_hamiltonian_h(sign, phi))


def evolution_mapping(sign, phi: float, times, tol: float = OPERATOR_TOL) -> list[dict]:
    """Compare ``exp(-i H t)`` with ``r_theta`` at ``theta = t/2 + pi/4``.

    ``b_norm^2 = K`` and ``H = -(i/2) K`` give ``exp(-iHt) = cos(t/2) I -
    sin(t/2) K``, which is ``r_theta`` at that angle; ``t`` must lie in
    ``[-pi/2, pi/2]`` so that ``theta`` stays in range.
    """
    rows = []
    for t in times:
        theta = 0.5 * t + math.pi / 4
        pm = equal_up_to_global_phase(evolution(sign, phi, t), r_theta(sign, phi, theta), tol)
        rows.append({"t": float(t), "theta": theta, "residual": pm.residual,
                     "phase": [pm.phase.real, pm.phase.imag], "passed": pm.equal})
    return rows


# --- full verification report ----------------------------------------------

def _check(name: str, residual: float, tol: float, **extra) -> dict:
    return {"name": name, "residual": float(residual), "tolerance": tol,
            "passed": bool(residual <= tol), **extra}


def verify_suite(tol: float = OPERATOR_TOL, seed: int = 0, strict_paper: bool = False) -> dict:
    """Run every braid identity and return a JSON-ready report.

    ``corrections`` lists exactly the fixes that were adopted, each one
    triggered by a failing verdict on the literal form. With
    ``strict_paper`` the literal matrices are checked as printed and their
    failing verdicts are the checks of the report.
    """
    rng = np.random.default_rng(seed)
    phis = [float(p) for p in rng.uniform(0, 2 * math.pi, 10)]
    checks: list[dict] = []
    corrections: list[str] = []

    printed = printed_bell_r()
    pv = verdict(printed, "unitary", tol)
    det = abs(np.linalg.det(printed))
    literal = [_check("R printed: unitarity", pv.residual, tol, determinant=float(det))]
    literal.append(_check("R printed: braid relation", check_braid(printed), tol))
    # the stray entry keeps the characteristic polynomial but breaks
    # unitarity, the braid relation and diagonalizability
    lit_b = printed_bgr_b(+1, 0.7) / SQRT2
    literal.append(_check("b+ printed: normalized unitarity", verdict(lit_b, "unitary", tol).residual, tol))
    literal.append(_check("b+ printed: braid relation", check_braid(lit_b), tol,
                          eigenvector_rank=eigenspace_dims(printed_bgr_b(+1, 0.7))))
    literal.append(_check("R(x) printed: x=1 proportional to identity",
                          np.linalg.norm(printed_yang_baxterize(+1, 0.0, 1.0) - 2 * np.eye(4)), tol))
    literal.append(_check("R(theta) printed: unitarity at theta=pi/8",
                          verdict(printed_r_theta(+1, 0.0, math.pi / 8), "unitary", tol).residual, tol))
    lit_n2 = printed_local_factors()["N2"]
    literal.append(_check("N2 printed: unitarity", verdict(lit_n2, "unitary", tol).residual, tol))

    if strict_paper:
        return {"mode": "strict-paper", "checks": literal, "corrections": [],
                "passed": all(c["passed"] for c in literal)}

    r = bell_r()
    if not pv.passed and r.unitary:
        corrections.append("R: last-row entry (4,1) sign flipped from +1 to -1 (printed matrix is singular)")
    variants = bell_r_sign_variants(last_row_only=True)
    checks.append(_check("R corrected: unitarity", r.unitary_residual, tol))
    checks.append(_check("R corrected: braid relation", check_braid(r.matrix), 1e-12))
    checks.append(_check("R last-row sign variants passing", abs(sum(v.passes for v in variants) - 1), 0.0,
                         variants=[{"entry": list(v.entry), "unitary": v.unitary_residual,
                                    "braid": v.braid_residual} for v in variants]))

    cn = cnot_decomposition(tol)
    corrections.extend(cn.corrections)
    checks.append(_check("CNOT = M R N up to global phase",
                         cn.residual if cn.passed else cn.literal_residual, tol,
                         literal_residual=cn.literal_residual,
                         chosen_signs=list(cn.chosen) if cn.chosen else None,
                         phase=None if cn.phase is None else [cn.phase.real, cn.phase.imag],
                         variants=cn.variants))

    if not (literal[2]["passed"] or literal[3]["passed"]):
        corrections.append("b+/-: entry (3,4) changed from 1 to 0 (restores unitarity and the braid relation)")
    if literal[4]["passed"] is False:
        corrections.append("R+/-(x): entry (3,4) changed from 1 to 0 (same fault as b+/-)")
    if literal[5]["passed"] is False:
        corrections.append("R+/-(theta): stray leading factor theta dropped")

    for sign in (1, -1):
        tag = "+" if sign > 0 else "-"
        eig_res = braid_res = unit_res = 0.0
        for phi in phis:
            b = bgr_b(sign, phi)
            eig_res = max(eig_res, spectrum_residual(np.linalg.eigvals(b), BGR_EIGENVALUES))
            bn = bgr_b(sign, phi, normalized=True)
            braid_res = max(braid_res, check_braid(bn))
            unit_res = max(unit_res, verdict(bn, "unitary").residual)
        checks.append(_check(f"b{tag}: eigenvalues 1 +/- i", eig_res, 1e-12))
        checks.append(_check(f"b{tag} normalized: unitarity", unit_res, 1e-12))
        checks.append(_check(f"b{tag} normalized: braid relation", braid_res, 1e-12))

        grid = np.linspace(0.2, 2.0, 5)
        qybe = cons = 0.0
        for phi in (0.0, math.pi / 3, math.pi):
            for x in grid:
                cons = max(cons, construction_residual(sign, phi, x))
                for y in grid:
                    qybe = max(qybe, spectral_qybe_residual(sign, phi, x, y))
        checks.append(_check(f"R{tag}(x): spectral QYBE on 5x5 grid", qybe, 1e-10))
        checks.append(_check(f"R{tag}(x) = b + 2x b^-1", cons, 1e-12))

        thetas = np.linspace(0, math.pi / 2, 9)
        checks.append(_check(f"R{tag}(theta): unitarity",
                             max(verdict(r_theta(sign, 0.7, t), "unitary").residual for t in thetas), 1e-12))
        checks.append(_check(f"R{tag}(theta) proportional to R(tan theta)",
                             max(r_theta_proportionality(sign, 0.7, t) for t in thetas[:-1]), 1e-12))

        herm = eig = rel = 0.0
        for phi in phis:
            hr = hamiltonian_h(sign, phi, tol)
            herm = max(herm, hr.hermitian_residual)
            eig = max(eig, hr.eigenvalue_residual)
            rel = max(rel, hr.square_relation_residual)
        checks.append(_check(f"H{tag}: Hermitian", herm, 1e-12))
        checks.append(_check(f"H{tag}: eigenvalues +/- 1/2", eig, 1e-12))
        checks.append(_check(f"H{tag} = -(i/2) b_norm^2", rel, 1e-12))

        mapping = evolution_mapping(sign, 0.7, np.linspace(-math.pi / 2, math.pi / 2, 7), tol)
        checks.append(_check(f"exp(-i H{tag} t) ~ R{tag}(t/2 + pi/4)",
                             max(m["residual"] for m in mapping), tol, mapping=mapping))
        psi = evolution(sign, 0.7, math.pi / 2)[:, 0]
        checks.append(_check(f"exp(-i H{tag} pi/2)|00> concurrence 1",
                             abs(concurrence(TwoQubitState(psi)) - 1.0), 1e-12))

    return {
        "mode": "corrected",
        "checks": checks,
        "literal": literal,
        "corrections": corrections,
        "notes": [
            "spectral QYBE evaluated on P_swap @ R(x); the display is a braid-form matrix",
            "construction formula read as R(x) = b + x L1 L2 b^-1 with L1 L2 = 2",
        ],
        "passed": all(c["passed"] for c in checks),
    }
