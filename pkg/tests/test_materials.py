import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasmonshape import materials
from plasmonshape.errors import DegenerateContrast, DegenerateLambda, DomainError, NoBracket
from plasmonshape.materials import DrudeParams, MaterialConfig


def test_lambda_resonant_disk():
    lam = materials.lambda_of_mu(1.0, -1 + 0.004j)
    # 0.004i / (2 (2 - 0.004i)) by hand
    assert lam == pytest.approx(0.004j / (2 * (2 - 0.004j)), abs=1e-16)
    assert lam.real == pytest.approx(-2.0e-6, abs=1e-9)
    assert lam.imag == pytest.approx(9.99996e-4, abs=1e-9)


def test_lambda_mu5():
    assert materials.lambda_of_mu(1.0, 5.0) == pytest.approx(-0.75, abs=1e-15)


def test_lambda_resonant_peach():
    lam = materials.lambda_of_mu(1.0, -0.7372 + 0.1521j)
    # 0.071260 + 0.050016i; the quoted 0.0712 is truncated, not rounded
    assert abs(lam - (0.0712 + 0.05j)) < 1e-4


def test_mu_of_lambda_examples():
    mu = materials.mu_of_lambda(1.0, 0.0393 + 0.001j)
    assert mu.real == pytest.approx(-0.85425, abs=5e-6)
    assert mu.imag == pytest.approx(0.003438, abs=5e-7)
    assert materials.mu_of_lambda(1.0, -0.75) == pytest.approx(5.0, abs=1e-14)
    mu2 = materials.mu_of_lambda(1.0, 0.1856 + 0.05j)
    assert mu2 == pytest.approx(-0.4508 + 0.1058j, abs=1e-4)


def test_degenerate():
    with pytest.raises(DegenerateContrast):
        materials.lambda_of_mu(1.0, 1.0)
    with pytest.raises(DegenerateLambda):
        materials.mu_of_lambda(1.0, -0.5)
    with pytest.raises(DegenerateContrast):
        MaterialConfig(mu_c=-1.0)
    with pytest.raises(DomainError):
        MaterialConfig(mu_c=-1 - 0.1j)
    with pytest.raises(DomainError):
        MaterialConfig(omega=0.0)


def test_wavenumbers():
    m = MaterialConfig(omega=0.01, mu_c=-1 + 0.004j, eps_c=2.0)
    assert m.k_m == pytest.approx(0.01)
    assert m.k_c == pytest.approx(0.01 * np.sqrt(2 * (-1 + 0.004j)))
    assert m.k_c.imag >= 0


def test_round_trip_bulk():
    rng = np.random.default_rng(0)
    lam = rng.uniform(-2, 2, 10_000) + 1j * rng.uniform(-2, 2, 10_000)
    lam = lam[np.abs(lam + 0.5) > 1e-3]
    mu = np.array([materials.mu_of_lambda(1.0, z) for z in lam])
    back = np.array([materials.lambda_of_mu(1.0, z) for z in mu])
    np.testing.assert_allclose(back, lam, rtol=1e-12, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_loss_sign_equivalence(re, im):
    mu_c = complex(re, im)
    if abs(mu_c - 1.0) < 1e-2 or abs(im) < 1e-9:
        return
    lam = materials.lambda_of_mu(1.0, mu_c)
    assert (lam.imag > 0) == (mu_c.imag > 0)


def test_drude_limits():
    assert materials.drude_mu(DrudeParams(filling=1e-14), 1.3) == pytest.approx(1.0, abs=1e-12)
    p = DrudeParams()
    assert materials.drude_mu(p, 1e7) == pytest.approx(p.mu_0 * (1 - p.filling), abs=1e-6)


def test_drude_passive():
    w = np.logspace(-4, 2, 400)
    assert np.all(materials.drude_mu(DrudeParams(), w).imag >= 0)


def test_drude_criterion_implies_negative_real_part():
    p = DrudeParams(filling=0.8, omega_0=1.0, tau=100.0)
    for w in (1.05, 1.2, 1.5, 2.0, 0.5):
        if materials.drude_negative_criterion(p, w):
            assert materials.drude_mu(p, w).real < 0
    assert materials.drude_negative_criterion(p, 1.05)
    assert materials.drude_mu(p, 1.05).real < 0


def _re_lambda(p, w):
    return materials.lambda_of_mu(1.0, materials.drude_mu(p, w)).real


def test_find_resonant_omega_grid_oracle():
    p = DrudeParams()
    grid = np.linspace(1.01, 2.2, 120)
    vals = np.array([_re_lambda(p, w) for w in grid])
    target = 0.1856
    i = np.flatnonzero(np.sign(vals[:-1] - target) != np.sign(vals[1:] - target))[0]
    w = materials.find_resonant_omega(p, 1.0, target, (grid[i], grid[i + 1]))
    assert grid[i] <= w <= grid[i + 1]
    assert abs(_re_lambda(p, w) - target) < 1e-8


def test_find_resonant_omega_endpoint_and_nobracket():
    p = DrudeParams()
    target = _re_lambda(p, 1.3)
    assert materials.find_resonant_omega(p, 1.0, target, (1.3, 2.0)) == 1.3
    with pytest.raises(NoBracket):
        materials.find_resonant_omega(p, 1.0, 10.0, (1.1, 1.2))
