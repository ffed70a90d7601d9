import csv
import io
import json
import math

import pytest

from braidgames.cli import EXIT_ERROR, EXIT_FAIL, main
from braidgames.scenarios import GameFileError, load_game, parse_game, penny_flip


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _report(capsys, *argv):
    code, out, _ = _run(capsys, *argv)
    return code, json.loads(out)


def test_pennyflip(capsys):
    code, rep = _report(capsys, "pennyflip", "--samples", "11")
    assert code == 0 and rep["passed"]
    assert len(rep["results"]["runs"]) == 11


def test_penny_flip_classical_baseline():
    for p in (0.0, 0.3, 1.0):
        res = penny_flip(p)
        assert abs(res["bob_wins_quantum"] - 1) < 1e-12
        assert res["bob_wins_classical"] == pytest.approx(0.5)


def test_classical_zero_game_saturates(capsys):
    code, rep = _report(capsys, "classical", "zero")
    assert code == 0
    assert rep["results"]["saturated"]


def test_classical_pd(capsys):
    _, rep = _report(capsys, "classical", "pd")
    assert rep["results"]["pure_nash"] == [[1, 1]]
    assert rep["results"]["pareto_optimal"] == [[0, 0]]


def test_qgame_payoff_classical_limit(capsys):
    code, rep = _report(capsys, "qgame", "payoff", "pd", "--theta-a", str(math.pi))
    assert code == 0
    assert rep["results"]["payoffs"] == pytest.approx([5, 0])
    assert "classical_limit" in rep["residuals"]
    assert "s_symmetry_relation" in rep["residuals"]


def test_qgame_rejects_gamma_out_of_range(capsys):
    code, _, err = _run(capsys, "qgame", "payoff", "pd", "--gamma1", "7")
    assert code == EXIT_ERROR
    assert "gamma1" in err


def test_qgame_nash_writes_out(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = _run(capsys, "qgame", "nash", "bos", "--grid", "16", "--out", str(out))
    assert code == 0 and stdout == ""
    rep = json.loads(out.read_text())
    assert len(rep["results"]["equilibria"]["profiles"]) == 2


def test_qgame_sweep_csv(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, _ = _report(capsys, "qgame", "sweep", "bos", "--gamma-grid", "8", "--grid", "8",
                      "--samples", "5", "--csv", str(path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert rows[0]["gamma1"] == "0" and rows[0]["gamma2"] == "0"
    assert {r["gamma1"] for r in rows} == {f"{k * math.pi / 4:.6g}" for k in range(8)}


def test_sweep_is_byte_identical(capsys):
    args = ("qgame", "sweep", "pd", "--gamma-grid", "8", "--grid", "8", "--samples", "3")
    main(list(args))
    a = capsys.readouterr().out
    main(list(args))
    assert capsys.readouterr().out == a


def test_braid_verify(capsys):
    code, rep = _report(capsys, "braid", "verify")
    assert code == 0 and rep["passed"]
    assert len(rep["corrections"]) == 5


def test_braid_strict_paper_fails(capsys):
    code, out, err = _run(capsys, "braid", "verify", "--strict-paper")
    assert code == EXIT_FAIL
    assert "R printed: unitarity" in err
    assert not json.loads(out)["passed"]


def test_ssqm_spectrum(capsys):
    code, rep = _report(capsys, "ssqm", "spectrum", "--potential", "tanh", "--n", "400", "--levels", "4")
    assert code == 0
    assert rep["results"]["spectrum"]["zero_modes"] == [0, 1]


def test_ssqm_rejects_bad_levels(capsys):
    code, _, err = _run(capsys, "ssqm", "spectrum", "--n", "40", "--levels", "30")
    assert code == EXIT_ERROR and "k must be" in err


def test_entangle(capsys):
    r = str(1 / math.sqrt(2))
    _, rep = _report(capsys, "entangle", r, "0", "0", "0", "0", "0", r, "0")
    assert rep["results"]["concurrence"] == 1.0
    assert not rep["results"]["product"]
    _, rep = _report(capsys, "entangle", *(["0.5", "0"] * 4))
    assert rep["results"]["product"]
    assert [re for re, _ in rep["results"]["factors"]["alice"]] == pytest.approx([0.5**0.5] * 2)


def test_entangle_normalization_rules(capsys):
    code, rep = _report(capsys, "entangle", "1.0000001", "0", "0", "0", "0", "0", "0", "0")
    assert code == 0 and rep["warnings"]
    code, _, err = _run(capsys, "entangle", "1.1", "0", "0", "0", "0", "0", "0", "0")
    assert code == EXIT_ERROR and "normalized" in err
    code, _, err = _run(capsys, "entangle", *(["0"] * 8))
    assert code == EXIT_ERROR and "zero vector" in err
    code, _, _ = _run(capsys, "entangle", "1", "0")
    assert code == EXIT_ERROR


def test_game_file_errors(tmp_path):
    with pytest.raises(GameFileError, match=r":1:"):
        parse_game("{bad", "f.json")
    with pytest.raises(GameFileError, match="exactly one"):
        parse_game('{"A": [[1, 0], [0, 1]]}')
    with pytest.raises(GameFileError, match="'A'"):
        parse_game('{"A": [[1, 0]], "symmetry_hint": "S"}')
    with pytest.raises(GameFileError, match="symmetry_hint"):
        parse_game('{"A": [[1, 0], [0, 1]], "symmetry_hint": "Q"}')
    with pytest.raises(GameFileError, match="no such file"):
        load_game(tmp_path / "missing.json")
    p = tmp_path / "g.json"
    p.write_text('{"name": "g", "A": [[1, 2], [3, 4]], "B": [[0, 0], [0, 0]]}')
    assert load_game(p).A.tolist() == [[1, 2], [3, 4]]


def test_bundled_games():
    assert load_game("bos").B.tolist() == [[1, 0], [0, 2]]
    assert load_game("pd.json").B.tolist() == [[3, 5], [0, 1]]
