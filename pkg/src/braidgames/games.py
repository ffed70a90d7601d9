"""Classical 2x2 bimatrix games."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .linalg import ValidationError

PROFILES = tuple(product((0, 1), repeat=2))


def _payoff_matrix(m, name: str) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.shape != (2, 2):
        raise ValidationError(f"{name} must be 2x2, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    a = a.copy()
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PayoffBimatrix:
    """Payoffs ``A[i, j]`` (Alice) and ``B[i, j]`` (Bob) for joint move ``(i, j)``."""

    A: np.ndarray
    B: np.ndarray
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "A", _payoff_matrix(self.A, "A"))
        object.__setattr__(self, "B", _payoff_matrix(self.B, "B"))

    @classmethod
    def s_symmetric(cls, A, name: str = "") -> "PayoffBimatrix":
        """Complete ``A`` with ``B[j, i] = A[i, j]``."""
        A = _payoff_matrix(A, "A")
        return cls(A, A.T, name)

    @classmethod
    def t_symmetric(cls, A, name: str = "") -> "PayoffBimatrix":
        """Complete ``A`` with ``B[1-j, 1-i] = A[i, j]``."""
        A = _payoff_matrix(A, "A")
        return cls(A, A[::-1, ::-1].T, name)


@dataclass(frozen=True)
class MixedProfile:
    x: tuple[float, float]
    y: tuple[float, float]

    def __post_init__(self):
        for label, p in (("x", self.x), ("y", self.y)):
            if len(p) != 2 or min(p) < -1e-12 or abs(sum(p) - 1.0) > 1e-9:
                raise ValidationError(f"{label}={p} is not a probability vector")

    @classmethod
    def pure(cls, i: int, j: int) -> "MixedProfile":
        return cls((1.0 - i, float(i)), (1.0 - j, float(j)))


@dataclass(frozen=True)
class GameClassification:
    s_symmetric: bool
    t_symmetric: bool
    dominant_alice: int | None
    dominant_bob: int | None
    strict_alice: bool = False
    strict_bob: bool = False


@dataclass(frozen=True)
class MixedNashResult:
    profiles: list[MixedProfile] = field(default_factory=list)
    degenerate: bool = False


def _dominant(rows: np.ndarray) -> tuple[int | None, bool]:
    # rows[s] = payoffs of own strategy s against each opponent move
    for s in (0, 1):
        diff = rows[s] - rows[1 - s]
        if np.all(diff >= 0) and np.any(diff > 0):
            return s, bool(np.all(diff > 0))
    return None, False


def classify(g: PayoffBimatrix, tol: float = 0.0) -> GameClassification:
    """Symmetry flags plus weak dominance, with strictness flagged separately.

    A strategy counts as dominant only if it is never worse and somewhere
    strictly better, so an all-ties game reports no dominant strategy.
    """
    A, B = g.A, g.B
    s_sym = bool(np.all(np.abs(B.T - A) <= tol))
    t_sym = bool(np.all(np.abs(B[::-1, ::-1].T - A) <= tol))
    dom_a, strict_a = _dominant(A)
    dom_b, strict_b = _dominant(B.T)
    return GameClassification(s_sym, t_sym, dom_a, dom_b, strict_a, strict_b)


def expected_payoffs(g: PayoffBimatrix, p: MixedProfile) -> tuple[float, float]:
    x = np.asarray(p.x)
    y = np.asarray(p.y)
    return float(x @ g.A @ y), float(x @ g.B @ y)


def pure_nash(g: PayoffBimatrix) -> list[tuple[int, int]]:
    return [
        (i, j)
        for i, j in PROFILES
        if g.A[i, j] >= g.A[1 - i, j] and g.B[i, j] >= g.B[i, 1 - j]
    ]


def best_response_gain(g: PayoffBimatrix, p: MixedProfile) -> tuple[float, float]:
    """Largest unilateral improvement available to each player.

    For a bilinear payoff the best deviation is always pure, so checking
    both pure moves is exact.
    """
    x = np.asarray(p.x)
    y = np.asarray(p.y)
    pa, pb = expected_payoffs(g, p)
    gain_a = float(max(g.A @ y) - pa)
    gain_b = float(max(x @ g.B) - pb)
    return gain_a, gain_b


def mixed_nash_2x2(g: PayoffBimatrix, tol: float = 1e-12) -> MixedNashResult:
    """All isolated Nash equilibria: the pure ones plus an interior candidate.

    The interior point comes from the indifference conditions. A vanishing
    denominator means a continuum of equilibria may exist; that case is
    flagged as ``degenerate`` rather than enumerated.
    """
    A, B = g.A, g.B
    profiles = [MixedProfile.pure(i, j) for i, j in pure_nash(g)]
    den_x = B[0, 0] - B[0, 1] - B[1, 0] + B[1, 1]
    den_y = A[0, 0] - A[0, 1] - A[1, 0] + A[1, 1]
    degenerate = abs(den_x) <= tol or abs(den_y) <= tol
    if not degenerate:
        x0 = (B[1, 1] - B[1, 0]) / den_x
        y0 = (A[1, 1] - A[0, 1]) / den_y
        if tol < x0 < 1 - tol and tol < y0 < 1 - tol:
            cand = MixedProfile((x0, 1 - x0), (y0, 1 - y0))
            if max(best_response_gain(g, cand)) <= 1e-9:
                profiles.append(cand)
    return MixedNashResult(profiles, degenerate)


def pareto_optimal(g: PayoffBimatrix) -> list[tuple[int, int]]:
    """Cells maximising ``A + B``, ties included, in lexicographic order."""
    total = g.A + g.B
    best = total.max()
    return [(i, j) for i, j in PROFILES if total[i, j] == best]
