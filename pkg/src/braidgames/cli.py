"""Command-line entry point: ``braidgames <command> ...``.

Every command writes a JSON run report (``--out`` or stdout) and exits
with status 0 only if all residual checks pass and no error occurred.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import braid, entanglement, games, quantum, ssqm
from .linalg import ValidationError
from .scenarios import RunReport, game_to_dict, load_game, penny_flip, sweep_csv

log = logging.getLogger("braidgames")

EXIT_FAIL = 1
EXIT_ERROR = 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON report here (default: stdout)")
    p.add_argument("--tol", type=float, default=1e-10, help="residual tolerance (default 1e-10)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized property sampling")


def cmd_pennyflip(args) -> RunReport:
    ps = [args.p] if args.p is not None else list(np.linspace(0, 1, args.samples))
    runs = [penny_flip(float(p)) for p in ps]
    rep = RunReport("pennyflip", {"p": ps}, {"runs": runs})
    rep.add("bob_wins_quantum", max(abs(r["bob_wins_quantum"] - 1.0) for r in runs), min(args.tol, 1e-12))
    rep.add("classical_baseline_half", max(abs(r["bob_wins_classical"] - 0.5) for r in runs), args.tol)
    return rep


def _classical_payload(g: games.PayoffBimatrix, tol: float, rep: RunReport) -> dict:
    cls = games.classify(g)
    pure = games.pure_nash(g)
    mixed = games.mixed_nash_2x2(g)
    for k, prof in enumerate(mixed.profiles):
        rep.add(f"nash_profile_{k}_best_response_gain", max(games.best_response_gain(g, prof)), max(tol, 1e-9))
    return {
        "classification": cls,
        "pure_nash": pure,
        "mixed_nash": [{"x": p.x, "y": p.y, "payoffs": games.expected_payoffs(g, p)} for p in mixed.profiles],
        "mixed_degenerate": mixed.degenerate,
        "pareto_optimal": games.pareto_optimal(g),
        "saturated": len(pure) == 4,
    }


def cmd_classical(args) -> RunReport:
    g = load_game(args.game)
    rep = RunReport("classical", {"game": game_to_dict(g)}, {})
    rep.results = _classical_payload(g, args.tol, rep)
    return rep


def _gamma(args) -> quantum.Correlation:
    for label, v in (("gamma1", args.gamma1), ("gamma2", args.gamma2)):
        if not 0.0 <= v < 2 * math.pi:
            raise ValidationError(f"{label}={v} outside [0, 2 pi)")
    return quantum.Correlation(args.gamma1, args.gamma2)


def _symmetry_block(qg, c, args, rep: RunReport) -> dict:
    out = {}
    for label, fn in (("s", quantum.check_s_symmetry), ("t", quantum.check_t_symmetry)):
        chk = fn(qg, c, args.samples, args.seed)
        out[f"{label}_symmetric"] = chk.symmetric
        out[f"{label}_operator_residual"] = chk.operator_residual
        if chk.symmetric:
            out[f"{label}_relation_residual"] = chk.relation_residual
            rep.add(f"{label}_symmetry_relation", chk.residual, args.tol)
    return out


def cmd_qgame(args) -> RunReport:
    g = load_game(args.game)
    qg = quantum.QuantumGame.from_bimatrix(g)
    inputs = {"game": game_to_dict(g), "action": args.action, "gamma1": args.gamma1,
              "gamma2": args.gamma2, "seed": args.seed, "samples": args.samples}
    rep = RunReport("qgame", inputs, {})
    if args.action == "sweep":
        inputs.update(gamma_grid=args.gamma_grid, grid=args.grid, epsilon=args.epsilon)
        rows = quantum.gamma_sweep(qg, args.gamma_grid, args.grid, args.epsilon,
                                   args.samples, args.seed, args.workers)
        cls = games.classify(g)
        text = sweep_csv(rows)
        if args.csv:
            Path(args.csv).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        rep.results = {"rows": len(rows), "csv": args.csv,
                       "cells_without_equilibrium": sum(r.ne_count == 0 for r in rows)}
        if cls.s_symmetric:
            rep.add("s_symmetry_relation", max(r.s_residual for r in rows), args.tol)
        if cls.t_symmetric:
            rep.add("t_symmetry_relation", max(r.t_residual for r in rows), args.tol)
        return rep

    c = _gamma(args)
    rep.results["symmetry"] = _symmetry_block(qg, c, args, rep)
    if args.action == "payoff":
        a = quantum.QubitStrategy(args.theta_a, args.phi_a)
        b = quantum.QubitStrategy(args.theta_b, args.phi_b)
        inputs.update(alice=a, bob=b)
        pa, pb = quantum.payoffs(qg, a, b, c)
        rep.results["payoffs"] = [pa, pb]
        if c.gamma1 == 0.0 and c.gamma2 == 0.0:
            x = (math.cos(a.theta / 2) ** 2, math.sin(a.theta / 2) ** 2)
            y = (math.cos(b.theta / 2) ** 2, math.sin(b.theta / 2) ** 2)
            ca, cb = games.expected_payoffs(g, games.MixedProfile(x, y))
            rep.add("classical_limit", max(abs(pa - ca), abs(pb - cb)), args.tol)
    else:
        inputs.update(grid=args.grid, epsilon=args.epsilon)
        er = quantum.nash_search(qg, c, args.grid, args.epsilon)
        rep.results["equilibria"] = {
            "profiles": [{"alice": a, "bob": b} for a, b in er.profiles],
            "payoffs": er.payoffs, "saturated": er.saturated,
            "candidates": er.candidates, "max_gain": er.max_gain,
        }
        if er.max_gain:
            rep.add("nash_audit_gain", max(er.max_gain), args.epsilon)
    return rep


def cmd_braid(args) -> RunReport:
    suite = braid.verify_suite(args.tol, args.seed, strict_paper=args.strict_paper)
    rep = RunReport("braid verify", {"strict_paper": args.strict_paper, "seed": args.seed},
                    {"checks": suite["checks"], "literal": suite.get("literal", []),
                     "notes": suite.get("notes", [])},
                    corrections=suite["corrections"])
    for chk in suite["checks"]:
        rep.add(chk["name"], chk["residual"], chk["tolerance"])
    if args.strict_paper:
        for chk in suite["checks"]:
            if not chk["passed"]:
                print(f"FAIL {chk['name']}: residual {chk['residual']:.3e} > {chk['tolerance']:.1e}",
                      file=sys.stderr)
    return rep


def cmd_ssqm(args) -> RunReport:
    sp = ssqm.Superpotential.parse(args.potential)
    grid = ssqm.Grid(args.xmin, args.xmax, args.n)
    d = ssqm.build(sp, grid)
    spec = ssqm.partner_spectra(d, args.levels, tol=1e-8)
    alg = ssqm.check_superalgebra(d)
    hn = alg.pop("h_norm")
    sq = ssqm.sqrt_not_check()
    rep = RunReport(
        "ssqm spectrum",
        {"potential": sp.name, "xmin": args.xmin, "xmax": args.xmax, "n": args.n, "levels": args.levels},
        {"spectrum": spec, "superalgebra": alg, "h_norm": hn, "sqrt_not": sq,
         "stencil_consistency": ssqm.stencil_consistency(d)},
    )
    rep.add("partner_relative_gap", spec.max_relative_gap, spec.tolerance)
    for k, v in alg.items():
        rep.add(f"superalgebra_{k}", v, 1e-12 * hn)
    for k, v in sq.items():
        rep.add(f"sqrt_not_{k}", v, 1e-15)
    return rep


def cmd_entangle(args) -> RunReport:
    vals = args.amplitudes
    if len(vals) != 8:
        raise ValidationError(f"entangle needs 8 reals (re, im for c00, c01, c10, c11), got {len(vals)}")
    amp = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    norm = float(np.linalg.norm(amp))
    if norm == 0.0:
        raise ValidationError("zero vector is not a state")
    warnings = []
    if abs(norm**2 - 1.0) > 1e-6:
        raise ValidationError(f"amplitudes not normalized (|psi|^2 = {norm**2:.8g})")
    if abs(norm**2 - 1.0) > 1e-12:
        warnings.append(f"renormalized input with |psi|^2 = {norm**2:.15g}")
        log.warning(warnings[-1])
    s = entanglement.TwoQubitState.normalized(amp)
    ver = entanglement.is_product(s, args.tol)
    fac = entanglement.factorize(s, args.tol)
    results = {"product": ver.product, "concurrence": ver.concurrence, "determinant": ver.residual}
    if fac.ok:
        results["factors"] = {"alice": fac.alice, "bob": fac.bob}
    else:
        results["equation_residuals"] = fac.equation_residuals
    rep = RunReport("entangle", {"amplitudes": vals}, results, warnings=warnings)
    if fac.ok:
        rep.add("factorization", fac.residual, args.tol)
    return rep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braidgames", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pennyflip", help="quantum penny flip versus the classical coin")
    _common(p)
    p.add_argument("--p", type=float, help="Alice's flip probability (default: sweep [0, 1])")
    p.add_argument("--samples", type=int, default=101, help="sweep size when --p is omitted")
    p.set_defaults(func=cmd_pennyflip)

    p = sub.add_parser("classical", help="classical 2x2 analysis of a game file")
    _common(p)
    p.add_argument("game", help="game JSON file, or bundled name pd/bos/zero")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("qgame", help="quantum game payoffs, Nash search, gamma sweep")
    _common(p)
    p.add_argument("action", choices=("payoff", "nash", "sweep"))
    p.add_argument("game", help="game JSON file, or bundled name pd/bos/zero")
    p.add_argument("--gamma1", type=float, default=0.0)
    p.add_argument("--gamma2", type=float, default=0.0)
    for who in ("a", "b"):
        p.add_argument(f"--theta-{who}", type=float, default=0.0)
        p.add_argument(f"--phi-{who}", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=32, help="strategy grid resolution")
    p.add_argument("--gamma-grid", type=int, default=16, help="gamma grid resolution (sweep)")
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--samples", type=int, default=100, help="random samples per symmetry check")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", help="sweep CSV path (default: stdout)")
    p.set_defaults(func=cmd_qgame)

    p = sub.add_parser("braid", help="Yang-Baxter gate verification")
    p.add_argument("action", choices=("verify",))
    _common(p)
    p.add_argument("--strict-paper", action="store_true", help="check the literal printed matrices")
    p.set_defaults(func=cmd_braid)

    p = sub.add_parser("ssqm", help="SSQM partner spectra")
    p.add_argument("action", choices=("spectrum",))
    _common(p)
    p.add_argument("--potential", default="linear", help="zero | linear | tanh | poly:c0,c1,...")
    p.add_argument("--xmin", type=float, default=-10.0)
    p.add_argument("--xmax", type=float, default=10.0)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--levels", type=int, default=6)
    p.set_defaults(func=cmd_ssqm)

    p = sub.add_parser("entangle", help="product/entangled verdict for a two-qubit state")
    _common(p)
    p.add_argument("amplitudes", nargs="+", type=float,
                   help="re/im pairs for c00 c01 c10 c11")
    p.set_defaults(func=cmd_entangle)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = rep.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    elif not (args.command == "qgame" and args.action == "sweep" and not args.csv):
        sys.stdout.write(text)
    return 0 if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
