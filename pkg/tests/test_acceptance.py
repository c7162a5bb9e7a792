"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""

import time

import numpy as np

from conftest import record
from plasmonshape import experiments, forward, geometry, inversion, laplace, materials, mie, np_spectrum, \
    sensitivity, special
from plasmonshape.forward import IncidentWave
from plasmonshape.inversion import InversionConfig
from plasmonshape.materials import MaterialConfig

ZETAS = (0.5, 2 / 3, 1.0, 1.1, 1.2)


def _ratios(v):
    v = np.asarray(v)
    return v[1:] / v[:-1]


def test_1_forward_matches_series():
    start = time.perf_counter()
    mat = MaterialConfig(omega=0.01, mu_c=5.0, eps_c=2.0)
    data = forward.near_field(geometry.disk(0.8), mat, IncidentWave(np.pi / 3), n=25, n_obs=50)
    ref = mie.mie_field(mie.mie_coefficients(0.8, mat, np.pi / 3), data.obs_points)
    err = np.max(np.abs(data.values - ref)) / np.max(np.abs(ref))
    elapsed = time.perf_counter() - start
    ok = err < 1e-8 and elapsed < 1.0
    assert record(1, ok, f"max rel diff {err:.2e}, {elapsed:.2f} s")


def _sup(shape, mu_c):
    return np.max(np.abs(forward.near_field(shape, MaterialConfig(omega=0.01, mu_c=mu_c)).values))


def test_2_resonance_amplification():
    start = time.perf_counter()
    base_disk = _sup(geometry.disk(0.8), 5.0)
    r_disk = _sup(geometry.disk(0.8), -1 + 0.004j) / base_disk
    peanut = experiments.example_peanut()
    r_peanut = _sup(peanut, -0.4508 + 0.1058j) / _sup(peanut, 5.0)
    r_closed = _sup(geometry.peanut(), -0.4508 + 0.1058j) / _sup(geometry.peanut(), 5.0)
    elapsed = time.perf_counter() - start
    ok = r_disk >= 10 and r_peanut >= 10 and elapsed < 5
    assert record(2, ok, f"disk x{r_disk:.1f}, peanut x{r_peanut:.2f} (closed form x{r_closed:.2f}), "
                         f"{elapsed:.2f} s")


def test_3_resonance_benefit():
    start = time.perf_counter()
    runs = experiments.table2_runs([0.0393 + 1e-3j, -0.75], [0.001], range(1, 11), n_samples=10_000)
    res = [r for r in runs if r[0] != -0.75]
    non = [r for r in runs if r[0] == -0.75]
    med_res = float(np.median([r[4] for r in res]))
    med_non = float(np.median([r[4] for r in non]))
    map_res = float(np.median([r[3] for r in res]))
    map_non = float(np.median([r[3] for r in non]))
    elapsed = time.perf_counter() - start
    ratio = med_res / med_non
    ok = med_res <= 0.05 and med_non >= 0.2 and ratio <= 1 / 3 and elapsed < 600
    assert record(3, ok, f"median e_gamma resonant {med_res:.4f} (MAP {map_res:.4f}), non-resonant {med_non:.4f} "
                         f"(MAP {map_non:.4f}), ratio {ratio:.2f}, {elapsed:.0f} s")


def test_4_jacobian_svd_trends():
    start = time.perf_counter()
    shape = experiments.example_peanut()
    inc = IncidentWave()
    reps = [experiments.svd_rows(shape, experiments.material_for_lambda(0.1856 + 1j * s), inc, 3, 25, 50, 1.5, 1e-6)
            for s in (1e-1, 1e-2, 1e-3, 1e-4)]
    non = experiments.svd_rows(shape, experiments.material_for_lambda(-0.75), inc, 3, 25, 50, 1.5, 1e-6)
    s_max = [r.s_max for r in reps]
    cond = [r.cond for r in reps]
    elapsed = time.perf_counter() - start
    ok = (np.all(np.diff(s_max) > 0) and np.all(np.diff(cond) > 0)
          and 2.9e2 <= s_max[2] <= 2.9e4 and 28 / 3 <= non.cond <= 28 * 3 and elapsed < 120)
    assert record(4, ok, "s_max " + ", ".join(f"{v:.3g}" for v in s_max) + "; cond "
                  + ", ".join(f"{v:.3g}" for v in cond) + f"; cond(-0.75) {non.cond:.1f}, {elapsed:.1f} s")


def test_5_ssf_scaling_ratios():
    start = time.perf_counter()
    detail, ok = [], True
    cases = (
        ("disk", geometry.disk(0.8), MaterialConfig(mu_c=experiments.RESONANT_DISK_MU), experiments.REFERENCE_TABLES[1]),
        ("peach", geometry.peach(), MaterialConfig(mu_c=experiments.RESONANT_PEACH_MU), experiments.REFERENCE_TABLES[4]),
    )
    for name, shape, mat, ref in cases:
        norms = [sensitivity.ssf(geometry.scale(shape, z), mat, h=geometry.h_linear()).ssf_norm for z in ZETAS]
        rel = _ratios(norms) / _ratios(ref["ssf_norm"])
        case_ok = bool(np.all(np.diff(norms) > 0) and np.all(np.abs(rel - 1) <= 0.25))
        ok &= case_ok
        detail.append(f"{name} ratio/reference " + ", ".join(f"{v:.3f}" for v in rel))
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    assert record(5, ok, "; ".join(detail) + f", {elapsed:.1f} s")


def test_6_np_spectrum():
    start = time.perf_counter()

    def spec(shape):
        return np_spectrum.spectrum(np_spectrum.assemble(geometry.discretize(shape, 100)))

    disk = spec(geometry.disk(0.8))
    disk_ok = abs(disk.lambda0 - 0.5) < 1e-8 and np.max(np.abs(disk.candidates)) < 1e-6
    ell = spec(geometry.ellipse(1.0, 0.5)).candidates
    ell_err = max(min(np.min(np.abs(ell - s * 0.5 / 3**n)) for s in (1, -1)) for n in range(1, 5))
    pea = spec(experiments.example_peanut()).resonant
    matched = [pea[np.argmin(np.abs(pea - v))] for v in (0.1856, 0.0393)]
    pea_err = max(abs(m - v) for m, v in zip(matched, (0.1856, 0.0393)))
    elapsed = time.perf_counter() - start
    ok = disk_ok and ell_err < 1e-6 and pea_err < 0.01 and elapsed < 30
    assert record(6, ok, f"disk max |candidate| {np.max(np.abs(disk.candidates)):.1e}, ellipse err {ell_err:.1e}, "
                         f"peanut {matched[0]:.4f}/{matched[1]:.4f}, {elapsed:.1f} s")


def test_7_property_suites():
    start = time.perf_counter()
    checks = {}
    # special functions
    w = max(abs(special.bessel_j(n, z) * special.bessel_y_prime(n, z) - special.bessel_j_prime(n, z)
                * special.bessel_y(n, z) - 2 / (np.pi * z)) * abs(np.pi * z / 2)
            for n in (0, 1, 4) for z in (0.008, 0.05 + 0.002j, 1.0))
    rec = max(abs(f(n - 1, z) + f(n + 1, z) - 2 * n / z * f(n, z)) / abs(f(n - 1, z) + f(n + 1, z))
              for f in (special.bessel_j, special.hankel1) for n in (1, 3, 8) for z in (0.02, 0.7 + 0.1j, 5.0))
    checks["special"] = w <= 1e-10 and rec <= 1e-10
    # forward spectral convergence
    mat = MaterialConfig(mu_c=5.0)
    a = forward.near_field(geometry.peanut(), mat, n=25).values
    b = forward.near_field(geometry.peanut(), mat, n=50).values
    checks["convergence"] = np.linalg.norm(a - b) / np.linalg.norm(b) <= 1e-8
    # Jacobian second-order check
    q = geometry.fit_trig_series(geometry.peanut(), 3)
    rmat = MaterialConfig(mu_c=materials.mu_of_lambda(1.0, 0.0393 + 1e-3j))
    G = sensitivity.jacobian(q, rmat, central=True)
    dq = np.random.default_rng(5).standard_normal(q.size)
    dq *= 1e-3 / np.linalg.norm(dq)
    F = lambda c: sensitivity.stacked(sensitivity.forward_map(c, rmat))
    f0 = F(q)
    fd_ratio = np.linalg.norm(F(q + dq) - f0 - G @ dq) / np.linalg.norm(F(q + dq / 2) - f0 - G @ dq / 2)
    checks["jacobian"] = 2.5 <= fd_ratio <= 6
    # noise norm
    noisy = forward.add_noise(forward.NearFieldData(*forward.observation_points(), a), 1e-3, seed=1)
    checks["noise"] = abs(np.linalg.norm(noisy.values - a) - 1e-3) <= 1e-14
    # eta update
    q6 = np.zeros(13)
    q6[0] = 0.8
    checks["eta"] = round(inversion.eta_update(q6, InversionConfig(m=6, alpha0=800, beta0=0.01)), 1) == 2440.9
    # Laplace covariance
    rng = np.random.default_rng(0)
    pg = laplace.build_gaussian(rng.standard_normal(7), rng.standard_normal((40, 7)), 0.05, 0.01)
    emp = np.cov(laplace.sample(pg, 10_000, seed=3).samples, rowvar=False)
    checks["laplace"] = np.linalg.norm(emp - pg.cov) / np.linalg.norm(pg.cov) < 0.05
    # determinism
    data = forward.add_noise(forward.near_field(geometry.disk(0.8), rmat, n=32), 0.01, seed=2)
    q1 = inversion.reconstruct(data, InversionConfig(), rmat).q
    q2 = inversion.reconstruct(forward.add_noise(forward.near_field(geometry.disk(0.8), rmat, n=32), 0.01, seed=2),
                               InversionConfig(), rmat).q
    checks["determinism"] = q1.tobytes() == q2.tobytes()
    elapsed = time.perf_counter() - start
    ok = all(checks.values()) and elapsed < 120
    failed = [k for k, v in checks.items() if not v]
    assert record(7, ok, f"{len(checks) - len(failed)}/{len(checks)} suites"
                         + (f", failed {failed}" if failed else "") + f", {elapsed:.1f} s")


def test_8_peach_credible_bands():
    start = time.perf_counter()
    shape = geometry.peach()
    mat = MaterialConfig(omega=0.01, mu_c=-0.7372 + 0.1521j)
    cfg = InversionConfig(m=3, eta0=1000.0, alpha0=1000.0, beta0=0.01)
    out = experiments.reconstruct_once(shape, mat, IncidentWave(), cfg, 32, 50, 1.5, 0.001, 1, 10_000)
    t = 2 * np.pi * np.arange(256) / 256
    lo, hi = out["samples"].band(t, 0.95)
    truth = shape.radius(t)
    coverage = float(np.mean((truth >= lo) & (truth <= hi)))
    elapsed = time.perf_counter() - start
    ok = coverage >= 0.9 and out["e_la"] < 0.08 and out["e_map"] < 0.08 and elapsed < 600
    assert record(8, ok, f"coverage {coverage:.3f}, e_gamma {out['e_la']:.4f} (MAP {out['e_map']:.4f}), "
                         f"{elapsed:.1f} s")
