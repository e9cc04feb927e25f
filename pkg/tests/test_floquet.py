from functools import reduce

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from pspin_ftc.classical import iterate_map
from pspin_ftc.floquet import (ModelParams, PowerSpectrum, TimeSeries, build_floquet, build_pspin_hamiltonian,
                               dominant_frequency, evolve, evolve_many, power_spectrum, wrap_phase)
from pspin_ftc.spectral import eigenphases
from pspin_ftc.spin import build_spin_algebra, coherent_state, dicke_state

from conftest import max_abs


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(p=1, Lambda=0.5)
    with pytest.raises(ValueError):
        ModelParams(p=2.5, Lambda=0.5)
    with pytest.raises(ValueError):
        ModelParams(p=2, Lambda=-0.1)
    m = ModelParams.from_alpha(3, 0.7, 2.0, h=0.05)
    assert m.alpha == pytest.approx(2.0)
    assert m.alpha_B == pytest.approx(1.95)
    assert m.T == 1


def test_wrap_phase_range():
    x = np.array([-np.pi, np.pi, 3 * np.pi, -3 * np.pi, 0.0, 7.0])
    y = wrap_phase(x)
    assert np.all(y > -np.pi) and np.all(y <= np.pi)
    assert np.allclose(np.exp(1j * x), np.exp(1j * y))


def test_hamiltonian_zero_and_p2(algebra_cache):
    a = algebra_cache(2)
    assert max_abs(build_pspin_hamiltonian(ModelParams(2, 0.0, 0.0), a)) == 0
    H = build_pspin_hamiltonian(ModelParams(2, 1.0, 0.0), a)
    assert np.allclose(H, np.diag([-0.5, 0, -0.5]))


def _symmetric_projector(n):
    # orthonormal basis of the symmetric subspace of n qubits, ordered by number of up spins
    dim = 2 ** n
    cols = []
    for k in range(n, -1, -1):
        v = np.zeros(dim)
        for idx in range(dim):
            if bin(idx).count("1") == n - k:  # bit 0 = up
                v[idx] = 1
        cols.append(v / np.linalg.norm(v))
    return np.array(cols).T


def test_hamiltonian_matches_tensor_product_oracle():
    n, p, h, Lam = 5, 3, 0.3, 0.9
    sx = np.array([[0, 1], [1, 0]]) / 2
    sz = np.diag([0.5, -0.5])
    I2 = np.eye(2)

    def site(op, j):
        return reduce(np.kron, [op if i == j else I2 for i in range(n)])

    Sx = sum(site(sx, j) for j in range(n))
    Sz = sum(site(sz, j) for j in range(n))
    S = n / 2
    H_full = -h * Sx - Lam / (p * S ** (p - 1)) * np.linalg.matrix_power(Sz, p)
    P = _symmetric_projector(n)
    H_sym = P.T @ H_full @ P
    H = build_pspin_hamiltonian(ModelParams(p, Lam, h), build_spin_algebra(n))
    assert max_abs(H - H_sym) < 1e-12


def test_hamiltonian_spectrum_two_solvers(algebra_cache):
    H = build_pspin_hamiltonian(ModelParams(4, 0.7, 0.1), algebra_cache(64))
    assert max_abs(H - H.conj().T) < 1e-12
    e1 = np.linalg.eigvalsh(H)
    e2 = np.sort(scipy.linalg.eigvals(H).real)
    assert np.allclose(e1, e2, atol=1e-10)


@given(p=st.integers(2, 6), Lam=st.floats(0, 3), alpha=st.floats(-4, 4), N=st.sampled_from([16, 128, 512]))
def test_kicked_unitarity(p, Lam, alpha, N):
    a = build_spin_algebra(N)
    U = build_floquet(ModelParams.from_alpha(p, Lam, alpha), a).U
    assert max_abs(U @ U.conj().T - np.eye(N + 1)) < 1e-10


def test_kicked_matches_expm_oracle(algebra_cache):
    a = algebra_cache(20)
    prm = ModelParams(3, 0.8, h=0.07, alpha_B=2.0)
    kappa = 0.8 / (3 * a.S ** 2)
    ref = scipy.linalg.expm(1j * prm.alpha * np.asarray(a.Sx)) @ scipy.linalg.expm(
        1j * kappa * np.linalg.matrix_power(np.asarray(a.Sz), 3))
    assert max_abs(build_floquet(prm, a).U - ref) < 1e-10


def test_kicked_pure_rotation_and_diagonal_kick(algebra_cache):
    a = algebra_cache(10)
    U = build_floquet(ModelParams.from_alpha(2, 0.0, 1.3), a).U
    assert max_abs(U - a.rotation_x(1.3)) < 1e-14
    U = build_floquet(ModelParams.from_alpha(3, 0.6, 0.0), a).U
    expected = np.exp(1j * 0.6 / (3 * a.S ** 2) * a.m_values ** 3)
    assert max_abs(U - np.diag(expected)) < 1e-13


def test_exact_drive_equals_kicked_at_zero_field(algebra_cache):
    a = algebra_cache(24)
    prm = ModelParams(4, 0.7, h=0.0, alpha_B=2.2)
    assert max_abs(build_floquet(prm, a, "exact-drive").U - build_floquet(prm, a, "kicked").U) < 1e-12


def test_exact_drive_oracle(algebra_cache):
    a = algebra_cache(12)
    prm = ModelParams(2, 0.7, h=0.1, alpha_B=np.pi)
    H = build_pspin_hamiltonian(prm, a)
    ref = scipy.linalg.expm(1j * np.pi * np.asarray(a.Sx)) @ scipy.linalg.expm(-1j * H)
    assert max_abs(build_floquet(prm, a, "exact-drive").U - ref) < 1e-10


def test_unknown_mode(algebra_cache):
    with pytest.raises(ValueError):
        build_floquet(ModelParams(2, 0.1), algebra_cache(2), mode="magnus")


def test_floquet_eig_cache(algebra_cache):
    F = build_floquet(ModelParams(2, 0.5), algebra_cache(8))
    mu, V = F.eig()
    assert F.eig()[0] is mu
    assert np.all(mu > -np.pi) and np.all(mu <= np.pi)


def test_evolve_rigid_rotation(algebra_cache):
    a = algebra_cache(32)
    alpha = 0.37
    U = build_floquet(ModelParams.from_alpha(2, 0.0, alpha), a)
    series = evolve(dicke_state(a.S, a), U, 50, np.asarray(a.Sz) / a.S)
    assert len(series.values) == 51 and series.T_max == 50
    assert np.allclose(series.values, np.cos(alpha * np.arange(51)), atol=1e-10)


def test_evolve_conserved_sz_without_kick(algebra_cache):
    a = algebra_cache(32)
    U = build_floquet(ModelParams.from_alpha(3, 1.5, 0.0), a)
    series = evolve(coherent_state(0.9, 0.4, a), U, 20, np.asarray(a.Sz) / a.S)
    assert np.allclose(series.values, series.values[0], atol=1e-12)


def test_evolve_errors(algebra_cache):
    a = algebra_cache(4)
    U = build_floquet(ModelParams(2, 0.1), a)
    with pytest.raises(ValueError):
        evolve(np.ones(3) / np.sqrt(3), U, 3, np.asarray(a.Sz))
    with pytest.raises(ValueError):
        evolve(dicke_state(2, a), U, 0, np.asarray(a.Sz))


def test_evolve_norm_drift_long_run(algebra_cache):
    a = algebra_cache(16)
    U = build_floquet(ModelParams(2, 0.7, 0.1), a)
    series = evolve(coherent_state(0.6, 0.0, a), U, 100_000, np.asarray(a.Sz) / a.S)
    assert series.renormalizations == 0
    assert np.all(np.abs(series.values) <= 1 + 1e-9)


def test_evolve_many_matches_evolve(algebra_cache):
    a = algebra_cache(20)
    U = build_floquet(ModelParams(3, 0.7, 0.05, 2 * np.pi / 3), a)
    states = np.column_stack([coherent_state(t, 0.0, a) for t in (0.1, 0.8, 2.0)])
    batch = evolve_many(states, U, 30, np.asarray(a.Sz))
    for j in range(3):
        single = evolve(states[:, j], U, 30, np.asarray(a.Sz)).values
        assert np.allclose(batch[:, j], single, atol=1e-12)


def test_period_doubling_sign_alternation(algebra_cache):
    a = algebra_cache(1024)
    U = build_floquet(ModelParams(2, 0.7, 0.1, np.pi), a)
    f = evolve(coherent_state(np.pi / 5, 0.0, a), U, 400, np.asarray(a.Sz) / a.S).values
    late = f[200:]
    assert np.all(np.sign(late[1:]) == -np.sign(late[:-1]))


def test_ehrenfest_correspondence_with_classical_map():
    a = build_spin_algebra(1024)
    alpha, Lam = np.pi + 0.1, 0.7
    theta = np.pi / 5
    U = build_floquet(ModelParams.from_alpha(2, Lam, alpha), a)
    fq = evolve(coherent_state(theta, 0.0, a), U, 10, np.asarray(a.Sz) / a.S).values
    orbit = iterate_map(np.array([np.sin(theta), 0.0, np.cos(theta)]), alpha, Lam, 2, 10)
    assert np.max(np.abs(fq - orbit[:, 2])) < 0.02


def test_power_spectrum_pure_tone():
    T = 1024
    spec = power_spectrum(np.cos(np.pi * np.arange(T)))
    assert spec.T_len == T
    assert len(spec.omega) == T // 2 + 1
    w, _ = dominant_frequency(spec)
    assert w == pytest.approx(np.pi)
    assert np.all(spec.power >= 0)
    assert spec.freq[-1] == pytest.approx(0.5)


def test_power_spectrum_constant():
    spec = power_spectrum(np.full(100, 0.3))
    assert spec.power[0] == pytest.approx(900.0)
    assert np.allclose(spec.power[1:], 0, atol=1e-20)
    w, _ = dominant_frequency(spec, exclude_dc=False)
    assert w == 0.0


def test_power_spectrum_transient_and_normalize():
    x = np.r_[np.full(50, 5.0), np.cos(2 * np.pi * np.arange(300) / 3)]
    spec = power_spectrum(TimeSeries(x), drop_transient=50, normalize=True)
    assert spec.T_len == 300 and spec.drop_transient == 50
    assert spec.power.max() == pytest.approx(1.0)
    assert dominant_frequency(spec)[0] == pytest.approx(2 * np.pi / 3)
    with pytest.raises(ValueError):
        spec.full_sum()
    with pytest.raises(ValueError):
        power_spectrum(x, drop_transient=len(x))


@given(st.lists(st.floats(-1, 1), min_size=2, max_size=200))
def test_parseval(values):
    f = np.array(values)
    spec = power_spectrum(f)
    lhs = float(np.sum(f * f))
    rhs = spec.full_sum() / spec.T_len
    assert rhs == pytest.approx(lhs, rel=1e-8, abs=1e-12)


def test_dominant_frequency_tie_breaks_to_smaller_omega():
    l = np.arange(1200)
    spec = power_spectrum(np.cos(np.pi * l / 2) + np.cos(2 * np.pi * l / 3))
    assert dominant_frequency(spec)[0] == pytest.approx(np.pi / 2)


def test_nyquist_tone_is_not_split():
    # cos(pi l) sits on the self-conjugate bin, so it carries 4x the power of an
    # equal-amplitude interior tone and wins outright
    l = np.arange(1024)
    spec = power_spectrum(np.cos(np.pi * l) + np.cos(np.pi * l / 2))
    assert dominant_frequency(spec)[0] == pytest.approx(np.pi)


def test_dominant_frequency_reproducible_for_seeded_noise():
    out = []
    for _ in range(2):
        rng = np.random.default_rng(1234)
        out.append(dominant_frequency(power_spectrum(rng.normal(size=512))))
    assert out[0] == out[1]


def test_eigenphases_power_spectral_mapping(algebra_cache):
    a = algebra_cache(40)
    U = build_floquet(ModelParams(3, 0.9, 0.05, 2 * np.pi / 3), a)
    mu = U.eig()[0]
    for q in (2, 3):
        fast = eigenphases(U, q).phases
        assert np.allclose(np.sort(wrap_phase(q * mu)), fast, atol=1e-12)
