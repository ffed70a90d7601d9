"""Supersymmetric quantum mechanics on a grid.

The factor ``A- = -d/dx + v`` is discretized on a staggered grid: wave
functions of the bosonic sector live on ``n`` interior nodes (Dirichlet
ends), the fermionic sector on the ``n + 1`` cell midpoints. ``A-`` is the
``(n+1) x n`` bidiagonal map between them and ``A+`` is its exact
transpose, so that

* ``H0 = A+ A-`` (n x n) and ``H1 = A- A+`` ((n+1) x (n+1)) share their
  nonzero spectrum exactly;
* ``H1`` carries exactly one zero mode (``A+`` has a one-dimensional
  kernel), the discrete image of the normalizable ``exp(-int v)``;
* every superalgebra identity holds to rounding error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sps
from scipy.sparse.linalg import norm as spnorm

from .linalg import ValidationError, X, tridiagonal_eigs


@dataclass(frozen=True)
class Superpotential:
    name: str
    v: Callable[[np.ndarray], np.ndarray]
    v_prime: Callable[[np.ndarray], np.ndarray] | None = None

    @classmethod
    def zero(cls) -> "Superpotential":
        return cls("zero", np.zeros_like, np.zeros_like)

    @classmethod
    def linear(cls) -> "Superpotential":
        return cls("linear", lambda x: np.asarray(x, dtype=float), np.ones_like)

    @classmethod
    def tanh(cls) -> "Superpotential":
        return cls("tanh", np.tanh, lambda x: 1.0 / np.cosh(x) ** 2)

    @classmethod
    def polynomial(cls, coeffs) -> "Superpotential":
        """``v(x) = c0 + c1 x + c2 x^2 + ...``."""
        p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
        dp = p.deriv()
        label = ",".join(f"{c:g}" for c in p.coef)
        return cls(f"poly:{label}", p, dp)

    @classmethod
    def parse(cls, spec: str) -> "Superpotential":
        """Parse ``zero``, ``linear``, ``tanh`` or ``poly:c0,c1,...``."""
        if spec in ("zero", "linear", "tanh"):
            return getattr(cls, spec)()
        if spec.startswith("poly:"):
            try:
                coeffs = [float(c) for c in spec[5:].split(",") if c.strip()]
            except ValueError as exc:
                raise ValidationError(f"bad polynomial coefficients in {spec!r}") from exc
            if not coeffs:
                raise ValidationError("poly: needs at least one coefficient")
            return cls.polynomial(coeffs)
        raise ValidationError(f"unknown potential {spec!r}")


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise ValidationError(f"grid needs n >= 16 interior points, got {self.n}")
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)) or self.x_min >= self.x_max:
            raise ValidationError(f"invalid interval [{self.x_min}, {self.x_max}]")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n + 1)

    def nodes(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(1, self.n + 1)

    def midpoints(self) -> np.ndarray:
        return self.x_min + self.h * (np.arange(self.n + 1) + 0.5)


@dataclass(frozen=True, eq=False)
class DiscretizedSSQM:
    potential: Superpotential
    grid: Grid
    a_minus: sps.csr_matrix
    a_plus: sps.csr_matrix
    h0: sps.csr_matrix
    h1: sps.csr_matrix

    @property
    def n0(self) -> int:
        return self.h0.shape[0]

    @property
    def n1(self) -> int:
        return self.h1.shape[0]

    def q_minus(self) -> sps.csr_matrix:
        return _block(self, lower=self.a_minus)

    def q_plus(self) -> sps.csr_matrix:
        return _block(self, upper=self.a_plus)

    def q(self) -> sps.csr_matrix:
        return _block(self, upper=self.a_plus, lower=self.a_minus)

    def hamiltonian(self) -> sps.csr_matrix:
        return sps.block_diag([self.h0, self.h1], format="csr")

    def grading(self) -> sps.csr_matrix:
        return sps.diags(np.r_[np.ones(self.n0), -np.ones(self.n1)], format="csr")

    def tridiagonals(self):
        """``(diag, offdiag)`` pairs for ``h0`` and ``h1``."""
        return (
            (self.h0.diagonal(), self.h0.diagonal(1)),
            (self.h1.diagonal(), self.h1.diagonal(1)),
        )


def _block(d: DiscretizedSSQM, upper=None, lower=None) -> sps.csr_matrix:
    n0, n1 = d.n0, d.n1
    return sps.bmat(
        [[sps.csr_matrix((n0, n0)), upper if upper is not None else sps.csr_matrix((n0, n1))],
         [lower if lower is not None else sps.csr_matrix((n1, n0)), sps.csr_matrix((n1, n1))]],
        format="csr",
    )


def build(sp: Superpotential, g: Grid) -> DiscretizedSSQM:
    """Assemble ``A-``, ``A+``, ``H0``, ``H1`` for a superpotential on a grid.

    Row ``k`` of ``A-`` sits at midpoint ``k`` and couples nodes ``k - 1``
    and ``k``: ``-(psi_right - psi_left)/h + v(mid) (psi_left + psi_right)/2``.
    """
    vm = np.asarray(sp.v(g.midpoints()), dtype=float)
    if vm.shape != (g.n + 1,) or not np.all(np.isfinite(vm)):
        raise ValidationError(f"superpotential {sp.name!r} is not finite on the grid")
    inv_h = 1.0 / g.h
    left = inv_h + 0.5 * vm[1:]  # row k, column k-1 (k = 1..n)
    right = -inv_h + 0.5 * vm[:-1]  # row k, column k (k = 0..n-1)
    a_minus = sps.diags([right, left], [0, -1], shape=(g.n + 1, g.n), format="csr")
    a_plus = a_minus.T.tocsr()
    h0 = (a_plus @ a_minus).tocsr()
    h1 = (a_minus @ a_plus).tocsr()
    return DiscretizedSSQM(sp, g, a_minus, a_plus, h0, h1)


def _vprime(sp: Superpotential, x: np.ndarray, h: float) -> np.ndarray:
    if sp.v_prime is not None:
        return np.asarray(sp.v_prime(x), dtype=float)
    return (sp.v(x + h) - sp.v(x - h)) / (2 * h)


def stencil_consistency(d: DiscretizedSSQM) -> dict:
    """Compare ``H0`` with the direct stencil ``-Laplacian + v^2 + v'``.

    Both act on a smooth bump centred in the interval; the relative
    difference of the results measures discretization error only.
    """
    g = d.grid
    x = g.nodes()
    h = g.h
    lap = sps.diags([np.full(g.n, 2.0), np.full(g.n - 1, -1.0), np.full(g.n - 1, -1.0)],
                    [0, 1, -1]) / h**2
    v = np.asarray(d.potential.v(x), dtype=float)
    direct = lap + sps.diags(v**2 + _vprime(d.potential, x, h))
    centre = 0.5 * (g.x_min + g.x_max)
    width = (g.x_max - g.x_min) / 10
    f = np.exp(-(((x - centre) / width) ** 2))
    ref = direct @ f
    diff = d.h0 @ f - ref
    return {"h": h, "relative_error": float(np.linalg.norm(diff) / np.linalg.norm(ref))}


def check_superalgebra(d: DiscretizedSSQM) -> dict:
    """Residuals of the superalgebra identities, with ``||H||_F`` for scale.

    Checked: ``Q+^2 = 0``, ``Q-^2 = 0``, ``{Q+, Q-} = H``, ``[H, Q+/-] = 0``,
    ``Q^2 = H``, ``{S, Q} = 0``, ``[S, H] = 0`` and both intertwining
    relations.
    """
    qp, qm, q = d.q_plus(), d.q_minus(), d.q()
    hh = d.hamiltonian()
    s = d.grading()
    res = {
        "q_plus_squared": spnorm(qp @ qp),
        "q_minus_squared": spnorm(qm @ qm),
        "anticommutator_equals_h": spnorm(qp @ qm + qm @ qp - hh),
        "q_squared_equals_h": spnorm(q @ q - hh),
        "commutator_h_q_plus": spnorm(hh @ qp - qp @ hh),
        "commutator_h_q_minus": spnorm(hh @ qm - qm @ hh),
        "anticommutator_s_q": spnorm(s @ q + q @ s),
        "commutator_s_h": spnorm(s @ hh - hh @ s),
        "intertwining_plus": spnorm(d.h0 @ d.a_plus - d.a_plus @ d.h1),
        "intertwining_minus": spnorm(d.a_minus @ d.h0 - d.h1 @ d.a_minus),
    }
    out = {k: float(v) for k, v in res.items()}
    out["h_norm"] = float(spnorm(hh))
    return out


@dataclass
class SpectrumReport:
    eigs_h0: np.ndarray
    eigs_h1: np.ndarray
    paired: list[tuple[float, float, float]]
    zero_modes: tuple[int, int]
    zero_threshold: float
    max_relative_gap: float
    intertwining: tuple[float, float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_relative_gap <= self.tolerance


def _spectral_bound(diag, off) -> float:
    # Gershgorin upper bound
    absoff = np.abs(off)
    rad = np.r_[absoff, 0.0] + np.r_[0.0, absoff]
    return float(np.max(diag + rad))


def partner_spectra(d: DiscretizedSSQM, k: int = 6, tol: float = 1e-8) -> SpectrumReport:
    """Lowest ``k`` levels of both partners, paired above the zero modes.

    Eigenvalues below ``1e-6`` times the spectral range count as zero
    modes and stay unpaired; the remaining positive levels are paired in
    ascending order and their relative gaps are reported.
    """
    if k < 1 or k > d.grid.n // 4:
        raise ValidationError(f"k must be in [1, n/4] = [1, {d.grid.n // 4}], got {k}")
    (d0, e0), (d1, e1) = d.tridiagonals()
    w0, _ = tridiagonal_eigs(d0, e0, k, vectors=False)
    w1, _ = tridiagonal_eigs(d1, e1, k, vectors=False)
    threshold = 1e-6 * max(_spectral_bound(d0, e0), _spectral_bound(d1, e1))
    pos0 = w0[w0 >= threshold]
    pos1 = w1[w1 >= threshold]
    paired = []
    for a, b in zip(pos0, pos1):
        paired.append((float(a), float(b), float(abs(a - b) / max(abs(a), abs(b)))))
    gap = max((p[2] for p in paired), default=0.0)
    inter = (
        float(spnorm(d.h0 @ d.a_plus - d.a_plus @ d.h1)),
        float(spnorm(d.a_minus @ d.h0 - d.h1 @ d.a_minus)),
    )
    return SpectrumReport(
        w0, w1, paired,
        (int(np.sum(w0 < threshold)), int(np.sum(w1 < threshold))),
        threshold, gap, inter, tol,
    )


SQRT_NOT = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])


def sqrt_not_check() -> dict:
    """Verify the square-root-of-NOT matrix against the bit flip."""
    sq = SQRT_NOT @ SQRT_NOT
    ket0 = np.array([1, 0], dtype=complex)
    ket1 = np.array([0, 1], dtype=complex)
    eye = np.eye(2)
    return {
        "square_equals_not": float(np.abs(sq - X).max()),
        "unitary": float(np.abs(SQRT_NOT.conj().T @ SQRT_NOT - eye).max()),
        "maps_0_to_1": float(np.abs(sq @ ket0 - ket1).max()),
        "maps_1_to_0": float(np.abs(sq @ ket1 - ket0).max()),
        "fourth_power_identity": float(np.abs(np.linalg.matrix_power(SQRT_NOT, 4) - eye).max()),
        "commutes_with_not": float(np.abs(SQRT_NOT @ X - X @ SQRT_NOT).max()),
    }


def supercharge_flip_demo(d: DiscretizedSSQM, level: int = 0) -> dict:
    """Carry a positive-energy ``H0`` eigenstate into the ``H1`` sector with ``Q``.

    Reports the overlap of the normalized image with the partner
    eigenvector, the grading anticommutation on that vector, and the
    ``Q^2 = E`` residual on the doublet.
    """
    (d0, e0), (d1, e1) = d.tridiagonals()
    kk = level + 2
    w0, v0 = tridiagonal_eigs(d0, e0, kk)
    w1, v1 = tridiagonal_eigs(d1, e1, kk + 1)
    threshold = 1e-6 * max(_spectral_bound(d0, e0), _spectral_bound(d1, e1))
    positive = np.flatnonzero(w0 >= threshold)
    if positive.size <= level:
        raise ValidationError("no positive paired level available")
    i0 = positive[level]
    energy = float(w0[i0])
    i1 = int(np.argmin(np.abs(w1 - energy)))
    if abs(w1[i1] - energy) > 1e-6 * energy:
        raise ValidationError("H1 has no partner level at this energy")

    psi = np.r_[v0[:, i0], np.zeros(d.n1)]
    q = d.q()
    s = d.grading()
    image = q @ psi
    upper = image[: d.n0]
    lower = image[d.n0:]
    overlap = abs(np.dot(v1[:, i1], lower)) / np.linalg.norm(lower)
    return {
        "energy": energy,
        "partner_energy": float(w1[i1]),
        "overlap": float(overlap),
        "image_in_upper_sector": float(np.linalg.norm(upper)),
        "grading_anticommutes": float(np.linalg.norm(s @ image + q @ (s @ psi))),
        "q_squared_residual": float(np.linalg.norm(q @ image - energy * psi)),
    }
