"""Scenario runners, game-definition files and run reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, is_dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .games import PayoffBimatrix
from .linalg import BIT_FLIP, HADAMARD, ValidationError
from .quantum import SWEEP_COLUMNS, SweepRow


class GameFileError(ValidationError):
    pass


BUNDLED_GAMES = ("pd", "bos", "zero")


def _matrix_field(doc: dict, key: str, source: str) -> list[list[float]]:
    value = doc[key]
    ok = (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(row, list) and len(row) == 2 for row in value)
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for row in value for v in row)
    )
    if not ok:
        raise GameFileError(f"{source}: field {key!r} must be a 2x2 array of numbers, got {value!r}")
    if not all(math.isfinite(v) for row in value for v in row):
        raise GameFileError(f"{source}: field {key!r} has non-finite entries")
    return value


def parse_game(text: str, source: str = "<string>") -> PayoffBimatrix:
    """Parse a game definition.

    Schema: ``{"name": str, "A": [[..], [..]], "B": [[..], [..]]}`` or,
    instead of ``B``, ``"symmetry_hint": "S" | "T"`` to derive Bob's
    payoffs from ``A``. Exactly one of ``B`` and ``symmetry_hint`` must be
    present.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise GameFileError(f"{source}: top level must be a JSON object")
    unknown = set(doc) - {"name", "A", "B", "symmetry_hint"}
    if unknown:
        raise GameFileError(f"{source}: unknown field(s) {sorted(unknown)}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise GameFileError(f"{source}: field 'name' must be a string")
    if "A" not in doc:
        raise GameFileError(f"{source}: missing field 'A'")
    A = _matrix_field(doc, "A", source)
    has_b, hint = "B" in doc, doc.get("symmetry_hint")
    if has_b == (hint is not None):
        raise GameFileError(f"{source}: exactly one of 'B' and 'symmetry_hint' is required")
    if has_b:
        return PayoffBimatrix(A, _matrix_field(doc, "B", source), name)
    if hint == "S":
        return PayoffBimatrix.s_symmetric(A, name)
    if hint == "T":
        return PayoffBimatrix.t_symmetric(A, name)
    raise GameFileError(f"{source}: field 'symmetry_hint' must be 'S' or 'T', got {hint!r}")


def load_game(path: str | Path) -> PayoffBimatrix:
    """Load a game file; bare names ``pd``, ``bos``, ``zero`` pick bundled fixtures."""
    p = Path(path)
    if p.exists():
        return parse_game(p.read_text(encoding="utf-8"), str(p))
    stem = p.name.removesuffix(".json")
    if p.parent == Path(".") and stem in BUNDLED_GAMES:
        text = resources.files("braidgames").joinpath("data", f"{stem}.json").read_text(encoding="utf-8")
        return parse_game(text, f"{stem}.json")
    raise GameFileError(f"{path}: no such file")


def game_to_dict(g: PayoffBimatrix) -> dict:
    return {"name": g.name, "A": g.A.tolist(), "B": g.B.tolist()}


# --- reports ---------------------------------------------------------------

def _jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_jsonable(float(obj.real)), _jsonable(float(obj.imag))]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict
    residuals: dict[str, float] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)
    corrections: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add(self, name: str, value: float, tol: float) -> None:
        self.residuals[name] = float(value)
        self.tolerances[name] = float(tol)

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.residuals.items() if not (v <= self.tolerances[k])]

    @property
    def passed(self) -> bool:
        return not self.failed

    def to_dict(self) -> dict:
        d = _jsonable(asdict(self))
        d["failed"] = self.failed
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


# --- penny flip ------------------------------------------------------------

def penny_flip(p: float) -> dict:
    """Quantum penny flip: Bob plays H, Alice flips with probability ``p``, Bob plays H.

    Alice's move is an incoherent mixture of identity and ``F = i sigma_x``.
    The classical baseline has Bob flip a fair coin on each of his turns.
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"flip probability must be in [0, 1], got {p}")
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    rho = HADAMARD @ rho @ HADAMARD.conj().T
    rho = (1 - p) * rho + p * (BIT_FLIP @ rho @ BIT_FLIP.conj().T)
    rho = HADAMARD @ rho @ HADAMARD.conj().T
    quantum = float(rho[0, 0].real)

    flip = lambda q: np.array([[1 - q, q], [q, 1 - q]])  # noqa: E731
    heads = flip(0.5) @ flip(p) @ flip(0.5) @ np.array([1.0, 0.0])
    return {"p": p, "bob_wins_quantum": quantum, "bob_wins_classical": float(heads[0])}


# --- sweep CSV -------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.6g}"


def sweep_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, col)) for col in SWEEP_COLUMNS])
    return buf.getvalue()
