import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidgames import ssqm
from braidgames.linalg import ValidationError

POTENTIALS = {
    "zero": ssqm.Superpotential.zero(),
    "linear": ssqm.Superpotential.linear(),
    "tanh": ssqm.Superpotential.tanh(),
    "cubic": ssqm.Superpotential.polynomial([0.2, 1.0, -0.1, 0.05]),
}


@pytest.mark.parametrize("name", sorted(POTENTIALS))
def test_superalgebra(name):
    d = ssqm.build(POTENTIALS[name], ssqm.Grid(-8, 8, 500))
    res = ssqm.check_superalgebra(d)
    hn = res.pop("h_norm")
    for key, v in res.items():
        assert v <= 1e-12 * hn, key


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=4), st.integers(16, 120))
def test_superalgebra_random_polynomials(coeffs, n):
    d = ssqm.build(ssqm.Superpotential.polynomial(coeffs), ssqm.Grid(-3, 3, n))
    res = ssqm.check_superalgebra(d)
    hn = res.pop("h_norm")
    assert max(res.values()) <= 1e-12 * hn


@pytest.mark.parametrize("name", sorted(POTENTIALS))
def test_spectra_match_dense_oracle(name):
    d = ssqm.build(POTENTIALS[name], ssqm.Grid(-6, 6, 200))
    rep = ssqm.partner_spectra(d, 8)
    assert np.allclose(rep.eigs_h0, np.linalg.eigvalsh(d.h0.toarray())[:8], rtol=1e-9, atol=1e-9)
    assert np.allclose(rep.eigs_h1, np.linalg.eigvalsh(d.h1.toarray())[:8], rtol=1e-9, atol=1e-9)
    assert rep.passed


def test_zero_modes_and_oscillator_levels():
    d = ssqm.build(ssqm.Superpotential.linear(), ssqm.Grid(-10, 10, 2000))
    rep = ssqm.partner_spectra(d, 6)
    assert rep.zero_modes == (0, 1)
    assert np.allclose(rep.eigs_h1, [0, 2, 4, 6, 8, 10], atol=5e-3)
    assert np.allclose(rep.eigs_h0, [2, 4, 6, 8, 10, 12], atol=5e-3)
    assert rep.max_relative_gap <= 1e-8


def test_free_case_pairs_all_levels():
    d = ssqm.build(ssqm.Superpotential.zero(), ssqm.Grid(-5, 5, 300))
    rep = ssqm.partner_spectra(d, 6)
    assert rep.zero_modes == (0, 1)
    assert rep.max_relative_gap <= 1e-8


def test_convergence_under_refinement():
    # the ground level of H0 is exact at every n, so look at level 4
    errs = []
    for n in (250, 500, 1000):
        d = ssqm.build(ssqm.Superpotential.linear(), ssqm.Grid(-10, 10, n))
        errs.append(abs(ssqm.partner_spectra(d, 6).eigs_h0[4] - 10))
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] > 3.0


def test_stencil_matches_continuum_operator():
    d = ssqm.build(ssqm.Superpotential.tanh(), ssqm.Grid(-8, 8, 800))
    assert ssqm.stencil_consistency(d)["relative_error"] < 1e-3


def test_supercharge_flip():
    d = ssqm.build(ssqm.Superpotential.linear(), ssqm.Grid(-10, 10, 800))
    demo = ssqm.supercharge_flip_demo(d, 1)
    assert abs(demo["overlap"] - 1) < 1e-9
    assert demo["image_in_upper_sector"] == 0.0
    assert demo["grading_anticommutes"] < 1e-12
    assert demo["q_squared_residual"] < 1e-8 * demo["energy"]


def test_sqrt_not():
    res = ssqm.sqrt_not_check()
    assert max(res.values()) <= 1e-15


def test_validation():
    with pytest.raises(ValidationError):
        ssqm.Grid(0, 1, 8)
    with pytest.raises(ValidationError):
        ssqm.Grid(1, 0, 100)
    with pytest.raises(ValidationError):
        ssqm.Superpotential.parse("cosh")
    with pytest.raises(ValidationError):
        ssqm.Superpotential.parse("poly:a,b")
    d = ssqm.build(ssqm.Superpotential.zero(), ssqm.Grid(0, 1, 40))
    with pytest.raises(ValidationError):
        ssqm.partner_spectra(d, 20)
    with pytest.raises(ValidationError), np.errstate(divide="ignore", invalid="ignore"):
        ssqm.build(ssqm.Superpotential("bad", lambda x: 1 / (x - x)), ssqm.Grid(0, 1, 40))


def test_parse_polynomial():
    sp = ssqm.Superpotential.parse("poly:0,1")
    assert np.allclose(sp.v(np.array([2.0])), [2.0])
