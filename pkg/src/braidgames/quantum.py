"""Quantized 2x2 games with a swap/twist correlation factor.

A joint strategy is ``J(gamma) (|alpha> x |beta>)`` with
``J(gamma) = exp(i g1 S / 2) exp(i g2 T / 2)``, where ``S`` swaps the two
qubits and ``T`` maps ``|i, j> -> |1-j, 1-i>``. Payoffs are expectation
values of diagonal operators built from the classical bimatrix.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .games import PayoffBimatrix
from .linalg import I2, OPERATOR_TOL, X, Z, ValidationError, expm_involution

TWO_PI = 2.0 * math.pi


def _basis_permutation(image) -> np.ndarray:
    """4x4 permutation sending basis index ``k`` to ``image(k)``."""
    p = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        p[image(k), k] = 1.0
    return p


def swap_operator() -> np.ndarray:
    """``S |i, j> = |j, i>``."""
    return _basis_permutation(lambda k: 2 * (k & 1) + (k >> 1))


def twist_operator() -> np.ndarray:
    """``T |i, j> = |1-j, 1-i>``."""
    return _basis_permutation(lambda k: 2 * (1 - (k & 1)) + (1 - (k >> 1)))


def convert_alice() -> np.ndarray:
    return np.kron(X, I2)


def convert_bob() -> np.ndarray:
    return np.kron(I2, X)


def convert_both() -> np.ndarray:
    return np.kron(X, X)


_S = swap_operator()
_T = twist_operator()
_CONVERTERS = {"A": convert_alice, "B": convert_bob, "C": convert_both}


@dataclass(frozen=True)
class QubitStrategy:
    """Unit ray ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValidationError("strategy angles must be finite")

    def vector(self) -> np.ndarray:
        return strategy_vectors(np.array([self.theta]), np.array([self.phi]))[0]

    def converted(self) -> "QubitStrategy":
        """Strategy ``X|alpha>`` with the global phase dropped."""
        return QubitStrategy(math.pi - self.theta, (-self.phi) % TWO_PI)

    def bloch(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


@dataclass(frozen=True)
class Correlation:
    gamma1: float = 0.0
    gamma2: float = 0.0

    def swapped(self) -> "Correlation":
        return Correlation(self.gamma2, self.gamma1)


def strategy_vectors(theta, phi) -> np.ndarray:
    """Stack of single-qubit amplitude vectors, shape ``(n, 2)``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.cos(theta / 2).astype(complex), np.exp(1j * phi) * np.sin(theta / 2)],
        axis=-1,
    )


def correlation_factor(c: Correlation) -> np.ndarray:
    return expm_involution(_S, c.gamma1) @ expm_involution(_T, c.gamma2)


@dataclass(frozen=True, eq=False)
class QuantumGame:
    """Payoff operators on the joint two-qubit space.

    ``from_bimatrix`` yields the diagonal operators with
    ``<i'j'|A|ij> = A_ij delta_i'i delta_j'j``; arbitrary Hermitian
    operators (e.g. after a gauge transformation) are also accepted.
    """

    payoff_A: np.ndarray
    payoff_B: np.ndarray
    source: PayoffBimatrix | None = None

    def __post_init__(self):
        for label in ("payoff_A", "payoff_B"):
            op = np.asarray(getattr(self, label), dtype=complex)
            if op.shape != (4, 4):
                raise ValidationError(f"{label} must be 4x4")
            if np.linalg.norm(op - op.conj().T) > OPERATOR_TOL:
                raise ValidationError(f"{label} is not Hermitian")
            op = op.copy()
            op.flags.writeable = False
            object.__setattr__(self, label, op)

    @classmethod
    def from_bimatrix(cls, g: PayoffBimatrix) -> "QuantumGame":
        return cls(np.diag(g.A.ravel()), np.diag(g.B.ravel()), g)

    def bimatrix(self) -> PayoffBimatrix:
        """Classical payoffs read off the diagonal."""
        name = self.source.name if self.source is not None else ""
        return PayoffBimatrix(
            np.diag(self.payoff_A).real.reshape(2, 2),
            np.diag(self.payoff_B).real.reshape(2, 2),
            name,
        )


def joint_state(alice: QubitStrategy, bob: QubitStrategy, c: Correlation) -> np.ndarray:
    return correlation_factor(c) @ np.kron(alice.vector(), bob.vector())


def _expectations(psi: np.ndarray, op: np.ndarray) -> np.ndarray:
    # psi has shape (..., 4)
    return np.einsum("...i,ij,...j->...", psi.conj(), op, psi).real


def payoffs(g: QuantumGame, alice: QubitStrategy, bob: QubitStrategy, c: Correlation) -> tuple[float, float]:
    psi = joint_state(alice, bob, c)
    return float(_expectations(psi, g.payoff_A)), float(_expectations(psi, g.payoff_B))


def _batch_states(j: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``J (a[k] x b[k])`` for each row ``k``."""
    prod = (a[:, :, None] * b[:, None, :]).reshape(-1, 4)
    return prod @ j.T


def _pair_states(j: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``J (a[k] x b[l])`` for all ``k, l``; row ``k * len(b) + l``."""
    prod = (a[:, None, :, None] * b[None, :, None, :]).reshape(-1, 4)
    return prod @ j.T


@dataclass(frozen=True)
class SymmetryCheck:
    symmetric: bool
    operator_residual: float
    relation_residual: float | None

    @property
    def residual(self) -> float:
        if self.relation_residual is None:
            return self.operator_residual
        return max(self.operator_residual, self.relation_residual)


def _random_strategies(rng: np.random.Generator, n: int) -> np.ndarray:
    theta = rng.uniform(0, math.pi, n)
    phi = rng.uniform(0, TWO_PI, n)
    return strategy_vectors(theta, phi)


def _check_symmetry(g, op, c, samples, rng, tol) -> SymmetryCheck:
    op_res = float(np.linalg.norm(g.payoff_B - op @ g.payoff_A @ op))
    if op_res > tol:
        return SymmetryCheck(False, op_res, None)
    rng = np.random.default_rng(rng)
    j = correlation_factor(c)
    a = _random_strategies(rng, samples)
    b = _random_strategies(rng, samples)
    prod = a[:, :, None] * b[:, None, :]
    psi = prod.reshape(-1, 4) @ j.T
    # S: (beta, alpha) is S|alpha, beta>; T: twisted pair is T|alpha, beta>
    relabeled = prod.reshape(-1, 4) @ op.T @ j.T
    diff = _expectations(relabeled, g.payoff_B) - _expectations(psi, g.payoff_A)
    return SymmetryCheck(True, op_res, float(np.abs(diff).max()))


def check_s_symmetry(g: QuantumGame, c: Correlation, samples: int = 100, rng=None, tol: float = OPERATOR_TOL) -> SymmetryCheck:
    """Check ``B = SAS``; if it holds, sample ``Pi_B(beta, alpha) = Pi_A(alpha, beta)``."""
    return _check_symmetry(g, _S, c, samples, rng, tol)


def check_t_symmetry(g: QuantumGame, c: Correlation, samples: int = 100, rng=None, tol: float = OPERATOR_TOL) -> SymmetryCheck:
    """Check ``B = TAT``; if it holds, sample the twisted payoff relation."""
    return _check_symmetry(g, _T, c, samples, rng, tol)


def converter(name: str) -> np.ndarray:
    try:
        return _CONVERTERS[name]()
    except KeyError:
        raise ValidationError(f"converter must be one of {sorted(_CONVERTERS)}, got {name!r}") from None


def dual_game(g: QuantumGame, conv: str | np.ndarray = "A") -> QuantumGame:
    """Conjugate both payoff operators by a converter (``"A"``, ``"B"``, ``"C"``) or a unitary."""
    u = converter(conv) if isinstance(conv, str) else np.asarray(conv, dtype=complex)
    ua = u @ g.payoff_A @ u.conj().T
    ub = u @ g.payoff_B @ u.conj().T
    dual = QuantumGame(ua, ub)
    if np.allclose(ua, np.diag(np.diag(ua))) and np.allclose(ub, np.diag(np.diag(ub))):
        dual = QuantumGame(ua, ub, dual.bimatrix())
    return dual


def dual_strategies(conv: str, alice: QubitStrategy, bob: QubitStrategy, c: Correlation):
    """Image of ``{alpha, beta; gamma}`` under a converter.

    ``C_A`` and ``C_B`` exchange S and T, so they also swap ``gamma``.
    """
    if conv == "A":
        return alice.converted(), bob, c.swapped()
    if conv == "B":
        return alice, bob.converted(), c.swapped()
    if conv == "C":
        return alice.converted(), bob.converted(), c
    raise ValidationError(f"unknown converter {conv!r}")


def gauge_audit(g: QuantumGame, u, c: Correlation, samples: int = 50, rng=None) -> float:
    """Max payoff mismatch between ``g`` and ``U g U^H`` under ``psi -> U psi``."""
    u = np.asarray(u, dtype=complex)
    if np.linalg.norm(u.conj().T @ u - np.eye(4)) > OPERATOR_TOL:
        raise ValidationError("gauge operator is not unitary")
    rng = np.random.default_rng(rng)
    dual = dual_game(g, u)
    psi = _batch_states(correlation_factor(c), _random_strategies(rng, samples), _random_strategies(rng, samples))
    moved = psi @ u.T
    res = 0.0
    for orig, new in ((g.payoff_A, dual.payoff_A), (g.payoff_B, dual.payoff_B)):
        res = max(res, float(np.abs(_expectations(psi, orig) - _expectations(moved, new)).max()))
    return res


_ALT_SIGN = np.kron(Z, Z)


def trace_invariants(g: QuantumGame) -> tuple[float, float]:
    """``(Tr A, tau(A))`` with ``tau(A) = sum (-1)^(i+j) A_ij``."""
    return float(np.trace(g.payoff_A).real), float(np.trace(_ALT_SIGN @ g.payoff_A).real)


# --- equilibrium search ---------------------------------------------------

REFINE_STOP = 1e-9
_TIE = 1e-12


def strategy_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened ``(theta, phi)`` grid, theta-major.

    ``theta`` spans ``[0, pi]`` inclusive; ``phi`` spans ``[0, 2 pi)``.
    """
    if n < 8:
        raise ValidationError(f"grid resolution must be >= 8, got {n}")
    th, ph = np.meshgrid(np.linspace(0, math.pi, n), np.arange(n) * TWO_PI / n, indexing="ij")
    return th.ravel(), ph.ravel()


def _responder_payoff(g, j, who, opp_vecs, theta, phi):
    """Payoff of ``who`` for strategies ``(theta[k], phi[k])`` vs ``opp_vecs[k]``."""
    own = strategy_vectors(theta, phi)
    if who == "A":
        prod = own[:, :, None] * opp_vecs[:, None, :]
        op = g.payoff_A
    else:
        prod = opp_vecs[:, :, None] * own[:, None, :]
        op = g.payoff_B
    return _expectations(prod.reshape(-1, 4) @ j.T, op)


def _first_max(values: np.ndarray) -> int:
    return int(np.flatnonzero(values >= values.max() - _TIE)[0])


def _refine(g, j, who, opp_vecs, theta, phi, value, d_theta, d_phi):
    """Batched coordinate ascent with step halving.

    Moves are accepted only on strict improvement, so a flat landscape
    leaves the grid optimum (and its tie-break) untouched.
    """
    theta, phi, value = theta.copy(), phi.copy(), value.copy()
    st = np.full(theta.shape, d_theta)
    sp = np.full(theta.shape, d_phi)
    active = np.ones(theta.shape, dtype=bool)
    while active.any():
        idx = np.flatnonzero(active)
        moved = np.zeros(idx.size, dtype=bool)
        for dth, dph in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            t_new = np.clip(theta[idx] + dth * st[idx], 0.0, math.pi)
            p_new = (phi[idx] + dph * sp[idx]) % TWO_PI
            v_new = _responder_payoff(g, j, who, opp_vecs[idx], t_new, p_new)
            better = v_new > value[idx] + 1e-15
            sel = idx[better]
            theta[sel], phi[sel], value[sel] = t_new[better], p_new[better], v_new[better]
            moved |= better
        stay = idx[~moved]
        st[stay] *= 0.5
        sp[stay] *= 0.5
        active[stay] = np.maximum(st[stay], sp[stay]) >= REFINE_STOP
    return theta, phi, value


def _best_responses(g, c, who, opp_theta, opp_phi, grid_n):
    j = correlation_factor(c)
    th, ph = strategy_grid(grid_n)
    opp = strategy_vectors(opp_theta, opp_phi)
    m = opp.shape[0]
    own = strategy_vectors(th, ph)
    if who == "A":
        vals = _expectations(_pair_states(j, own, opp), g.payoff_A).reshape(own.shape[0], m).T
    else:
        vals = _expectations(_pair_states(j, opp, own), g.payoff_B).reshape(m, own.shape[0])
    best = np.array([_first_max(row) for row in vals])
    th_r, ph_r, val_r = _refine(
        g, j, who, opp, th[best], ph[best], vals[np.arange(m), best],
        math.pi / (grid_n - 1), TWO_PI / grid_n,
    )
    return _polish(g, j, who, opp, th_r, ph_r, val_r)


def _polish(g, j, who, opp, theta, phi, value):
    """Jump to the exact optimum where coordinate ascent stalled.

    Against a fixed opponent the responder's payoff is ``<a|M|a>`` for a
    2x2 Hermitian ``M``, so its maximum is the top eigenvalue of ``M``.
    The jump is taken only on strict improvement, keeping tie-breaks.
    """
    e = np.eye(2)
    if who == "A":
        cols = [np.einsum("i,kj->kij", e[q], opp).reshape(-1, 4) @ j.T for q in (0, 1)]
        op = g.payoff_A
    else:
        cols = [np.einsum("ki,j->kij", opp, e[q]).reshape(-1, 4) @ j.T for q in (0, 1)]
        op = g.payoff_B
    w = np.stack(cols, axis=-1)  # (m, 4, 2)
    red = np.einsum("kia,ij,kjb->kab", w.conj(), op, w)
    lam, vec = np.linalg.eigh(red)
    top = vec[:, :, 1]
    t_new = 2.0 * np.arctan2(np.abs(top[:, 1]), np.abs(top[:, 0]))
    p_new = (np.angle(top[:, 1]) - np.angle(top[:, 0])) % TWO_PI
    v_new = _responder_payoff(g, j, who, opp, t_new, p_new)
    jump = v_new > value + 1e-12
    theta, phi, value = theta.copy(), phi.copy(), value.copy()
    theta[jump], phi[jump], value[jump] = t_new[jump], p_new[jump], v_new[jump]
    return theta, phi, value


def best_response(
    g: QuantumGame, opponent: QubitStrategy, c: Correlation, who: str = "A", grid_n: int = 32
) -> tuple[QubitStrategy, float]:
    """Responder's payoff-maximising strategy against a fixed opponent.

    Grid scan over ``grid_n x grid_n`` points, ties going to the smallest
    ``(theta, phi)``, followed by coordinate-ascent refinement to 1e-9.
    """
    if who not in ("A", "B"):
        raise ValidationError(f"who must be 'A' or 'B', got {who!r}")
    th, ph, val = _best_responses(g, c, who, np.array([opponent.theta]), np.array([opponent.phi]), grid_n)
    return QubitStrategy(float(th[0]), float(ph[0])), float(val[0])


@dataclass
class EquilibriumReport:
    profiles: list[tuple[QubitStrategy, QubitStrategy]]
    payoffs: list[tuple[float, float]]
    epsilon: float
    grid_resolution: int
    refined: bool = True
    saturated: bool = False
    candidates: int = 0
    max_gain: list[float] = field(default_factory=list)


def _bloch_batch(theta, phi) -> np.ndarray:
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _cluster(points: np.ndarray, radius: float) -> np.ndarray:
    n = points.shape[0]
    pairs = cKDTree(points).query_pairs(radius, output_type="ndarray")
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return labels


def nash_search(g: QuantumGame, c: Correlation, grid_n: int = 32, epsilon: float = 1e-6) -> EquilibriumReport:
    """epsilon-Nash profiles on the strategy grid, clustered on the Bloch sphere.

    A grid pair survives when neither player's refined best response beats
    the pair's payoff by more than ``epsilon``. Survivors are merged by
    single linkage in Bloch coordinates with a radius of one grid step, so
    points that are the same ray (any ``phi`` at ``theta`` = 0 or pi) or
    neighbours in a continuum collapse into one cluster. A cluster is
    reported through its lexicographically smallest member.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    th, ph = strategy_grid(grid_n)
    vecs = strategy_vectors(th, ph)
    m = th.size
    psi = _pair_states(correlation_factor(c), vecs, vecs)
    pa = _expectations(psi, g.payoff_A).reshape(m, m)  # [alice, bob]
    pb = _expectations(psi, g.payoff_B).reshape(m, m)
    # grid maxima bound the refined best response from below
    cand = (pa >= pa.max(axis=0)[None, :] - epsilon) & (pb >= pb.max(axis=1)[:, None] - epsilon)
    ia, ib = np.nonzero(cand)
    n_cand = ia.size
    if n_cand == 0:
        return EquilibriumReport([], [], epsilon, grid_n, candidates=0)

    bob_idx = np.unique(ib)
    alice_idx = np.unique(ia)
    br_a = np.full(m, np.nan)
    br_b = np.full(m, np.nan)
    br_a[bob_idx] = _best_responses(g, c, "A", th[bob_idx], ph[bob_idx], grid_n)[2]
    br_b[alice_idx] = _best_responses(g, c, "B", th[alice_idx], ph[alice_idx], grid_n)[2]
    gain_a = br_a[ib] - pa[ia, ib]
    gain_b = br_b[ia] - pb[ia, ib]
    ok = (gain_a <= epsilon) & (gain_b <= epsilon)
    ia, ib, gain = ia[ok], ib[ok], np.maximum(gain_a[ok], gain_b[ok])
    if ia.size == 0:
        return EquilibriumReport([], [], epsilon, grid_n, candidates=n_cand)

    saturated = ia.size == m * m
    if saturated:
        labels = np.zeros(ia.size, dtype=int)
    else:
        pts = np.hstack([_bloch_batch(th[ia], ph[ia]), _bloch_batch(th[ib], ph[ib])])
        step = max(math.pi / (grid_n - 1), TWO_PI / grid_n)
        radius = math.sqrt(2.0) * 2.0 * math.sin(step / 2) * 1.001
        labels = _cluster(pts, radius)

    reps = []
    for lab in np.unique(labels):
        members = np.flatnonzero(labels == lab)
        key = np.lexsort((ph[ib[members]], th[ib[members]], ph[ia[members]], th[ia[members]]))
        reps.append(members[key[0]])
    reps.sort(key=lambda k: (th[ia[k]], ph[ia[k]], th[ib[k]], ph[ib[k]]))

    profiles, pays, gains = [], [], []
    for k in reps:
        a, b = ia[k], ib[k]
        profiles.append((QubitStrategy(float(th[a]), float(ph[a])), QubitStrategy(float(th[b]), float(ph[b]))))
        pays.append((float(pa[a, b]), float(pb[a, b])))
        gains.append(float(max(gain[labels == labels[k]].max(), 0.0)))
    return EquilibriumReport(profiles, pays, epsilon, grid_n, True, saturated, n_cand, gains)


# --- gamma sweep ------------------------------------------------------------

SWEEP_COLUMNS = (
    "gamma1", "gamma2", "ne_count", "theta_a", "phi_a", "theta_b", "phi_b",
    "payoff_a", "payoff_b", "s_residual", "t_residual",
)


@dataclass(frozen=True)
class SweepRow:
    gamma1: float
    gamma2: float
    ne_count: int
    theta_a: float
    phi_a: float
    theta_b: float
    phi_b: float
    payoff_a: float
    payoff_b: float
    s_residual: float
    t_residual: float


def _sweep_cell(args) -> list[SweepRow]:
    g, c, grid_strategy, epsilon, samples, seed = args
    rep = nash_search(g, c, grid_strategy, epsilon)
    s_res = check_s_symmetry(g, c, samples, seed).residual
    t_res = check_t_symmetry(g, c, samples, seed).residual
    n = len(rep.profiles)
    if n == 0:
        nan = float("nan")
        return [SweepRow(c.gamma1, c.gamma2, 0, nan, nan, nan, nan, nan, nan, s_res, t_res)]
    return [
        SweepRow(c.gamma1, c.gamma2, n, a.theta, a.phi, b.theta, b.phi, pa, pb, s_res, t_res)
        for (a, b), (pa, pb) in zip(rep.profiles, rep.payoffs)
    ]


def gamma_grid(n: int) -> np.ndarray:
    if n < 8:
        raise ValidationError(f"gamma grid must be >= 8, got {n}")
    return np.arange(n) * TWO_PI / n


def gamma_sweep(
    g: QuantumGame,
    grid_gamma: int = 16,
    grid_strategy: int = 8,
    epsilon: float = 1e-6,
    samples: int = 20,
    seed: int = 0,
    workers: int = 1,
) -> list[SweepRow]:
    """Nash clusters and symmetry residuals over a uniform ``[0, 2 pi)^2`` grid.

    Cells are independent; with ``workers > 1`` they run in a process pool.
    Rows come back ordered by ``(gamma1, gamma2)`` grid index either way,
    and each cell seeds its own sampler, so output does not depend on
    scheduling.
    """
    gs = gamma_grid(grid_gamma)
    jobs = [
        (g, Correlation(float(g1), float(g2)), grid_strategy, epsilon, samples, seed)
        for g1 in gs
        for g2 in gs
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_sweep_cell, jobs))
    else:
        cells = [_sweep_cell(job) for job in jobs]
    return [row for cell in cells for row in cell]
