import math

import pytest

import peakon_lab as pl


def test_single_peakon_invariants():
    u = pl.PeakedField.peakon(3.0, 0.0)
    assert u(0.0) == pytest.approx(3.0)
    assert pl.energy(u) == pytest.approx(18.0, rel=1e-12)
    assert pl.moment_f(u) == pytest.approx(36.0, rel=1e-12)
    assert pl.h1_dist(u, u) == 0.0


def test_nodes_merge():
    u = pl.PeakedField([1.0, 2.0], [0.0, 0.0])
    assert len(u) == 1
    assert u.amps == [3.0]


def test_two_peakon_spectrum_matches_quadratic():
    d = 1.0
    s = pl.PeakonState([2.0, 1.0], [0.0, d])
    b, c = 3.0, 2.0 * (1.0 - math.exp(-d))
    big = 0.5 * (b + math.sqrt(b * b - 4 * c))
    lam = pl.spectrum(s)
    assert lam[0] == pytest.approx(c / big, rel=1e-12)
    assert lam[1] == pytest.approx(big, rel=1e-12)


def test_integration_conserves_energy():
    s = pl.PeakonState([3.0, 2.0, 1.0], [-15.0, 0.0, 15.0])
    tr = pl.integrate(s, 20.0, samples=21)
    e0 = tr["energy"][0]
    assert len(tr["t"]) == 21
    assert max(abs(e / e0 - 1.0) for e in tr["energy"]) < 1e-8


def test_invalid_state_raises():
    with pytest.raises(ValueError):
        pl.PeakonState([1.0, -1.0], [0.0, 1.0])


def test_identity_check():
    s = pl.PeakonState([2.0, 1.0], [-1.0, 1.0])
    r = pl.check_energy_identity(s, pl.WeightProfile.psi(4.0, 0.0), 1e-4)
    assert r["residual"] < 1e-5


def test_cli_round_trip():
    out = pl.run("spectrum", "--p", "2,1", "--q", "0,1")
    assert out["checks_ok"]
    assert len(out["json"]["lambda"]) == 2
    with pytest.raises(ValueError):
        pl.run("monotonicity", "--L", "400", "--K", "2")


def test_asymptotic_momenta_approach_eigenvalues():
    r = pl.run_asymptotics(pl.PeakonState([2.0, 1.0], [-10.0, 10.0]), 80.0)
    assert r["max_error"] < 1e-3


def test_short_stability_run():
    r = pl.run_stability([1.0, 2.0], 50.0, 0.01, seed=1, t_end=10.0, samples=5)
    assert len(r["d"]) == 5
    assert min(r["min_gap"]) > 25.0
