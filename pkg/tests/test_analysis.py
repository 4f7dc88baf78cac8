import math

import numpy as np
import pytest

from zerocap import analysis, channels, families, matcore
from zerocap.analysis import OptimizerConfig
from zerocap.errors import DimensionError, NormalizationError, NotPositiveError, ParameterDomainError


def ic_maximally_mixed_depolarizing(d, x):
    """I_c(I/d) = log2 d - S(J/d) with J the depolarizing Choi matrix.

    J/d has eigenvalue (1-x) + x/d^2 once and x/d^2 with multiplicity d^2 - 1.
    """
    a = (1 - x) + x / d**2
    b = x / d**2
    s = -a * math.log2(a) - (d * d - 1) * (b * math.log2(b) if b > 0 else 0.0)
    return math.log2(d) - s


def test_ppt_spectrum_examples():
    assert abs(analysis.ppt_spectrum(families.depolarizing(2 / 3, 2))[0]) < 1e-12
    assert np.allclose(analysis.ppt_spectrum(channels.identity_channel(2)), [-1, 1, 1, 1])
    assert analysis.ppt_spectrum(families.depolarizing(0.5, 3))[0] == pytest.approx(-1 / 3, abs=1e-12)
    assert np.allclose(analysis.ppt_spectrum(families.depolarizing(0.5, 2)), [-0.25, 0.75, 0.75, 0.75])


def test_ppt_spectrum_requires_square():
    with pytest.raises(DimensionError):
        analysis.ppt_spectrum(families.depolarizing_complement(0.5, 2))


def test_analytic_spectrum_examples():
    s = analysis.analytic_ppt_spectrum(0.0, 2)
    assert (s.sym_value, s.antisym_value) == (1.0, -1.0)
    assert np.array_equal(s.eigenvalues, [-1, 1, 1, 1])
    s = analysis.analytic_ppt_spectrum(0.75, 3)
    assert s.antisym_value == pytest.approx(0, abs=1e-15)
    assert s.sym_value == pytest.approx(0.5)
    assert (s.antisym_multiplicity, s.sym_multiplicity) == (3, 6)
    for d in range(2, 8):
        s = analysis.analytic_ppt_spectrum(0.3, d)
        assert s.sym_multiplicity + s.antisym_multiplicity == d * d == len(s.eigenvalues)


@pytest.mark.parametrize("d", range(2, 7))
def test_analytic_matches_numeric(d):
    for x in np.linspace(0, 1, 21):
        num = analysis.ppt_spectrum(families.depolarizing(x, d))
        assert np.max(np.abs(num - analysis.analytic_ppt_spectrum(x, d).eigenvalues)) < 1e-10


@pytest.mark.parametrize("d", range(2, 7))
def test_ppt_sign_change_at_threshold(d):
    t = analysis.ppt_threshold(d)
    assert analysis.ppt_spectrum(families.depolarizing(t - 1e-6, d))[0] < 0
    assert analysis.ppt_spectrum(families.depolarizing(t + 1e-6, d))[0] >= 0
    assert not analysis.is_ppt(families.depolarizing(t - 1e-6, d))
    assert analysis.is_ppt(families.depolarizing(t, d))


def test_ppt_threshold_values():
    assert analysis.ppt_threshold(2) == pytest.approx(2 / 3)
    assert analysis.ppt_threshold(3) == pytest.approx(3 / 4)
    ts = [analysis.ppt_threshold(d) for d in range(2, 200)]
    assert all(t > 0.5 for t in ts)
    assert all(a < b for a, b in zip(ts, ts[1:]))
    assert 1 - ts[-1] < 0.01


def test_residual():
    assert analysis.antidegradability_residual(0.5, 2) < 1e-10
    assert analysis.antidegradability_residual(0.9, 5) < 1e-10
    with pytest.raises(ParameterDomainError):
        analysis.antidegradability_residual(0.3, 3)


def test_coherent_information_examples(rng):
    ident = channels.identity_channel(3)
    rho = matcore.random_density_matrix(3, rng)
    assert analysis.coherent_information(ident, rho) == pytest.approx(
        matcore.von_neumann_entropy(rho), abs=1e-12
    )
    assert analysis.coherent_information(families.depolarizing(0.0, 2), np.eye(2) / 2) == pytest.approx(1.0)
    assert analysis.coherent_information(families.depolarizing(0.5, 2), np.eye(2) / 2) < 0


@pytest.mark.parametrize("d,x", [(2, 0.05), (2, 0.5), (3, 0.2), (4, 0.9)])
def test_coherent_information_against_purification_oracle(d, x):
    val = analysis.coherent_information(families.depolarizing(x, d), np.eye(d) / d)
    assert val == pytest.approx(ic_maximally_mixed_depolarizing(d, x), abs=1e-12)


def test_coherent_information_rejects_bad_states():
    ch = families.depolarizing(0.3, 2)
    with pytest.raises(NormalizationError):
        analysis.coherent_information(ch, np.eye(2))
    with pytest.raises(NotPositiveError):
        analysis.coherent_information(ch, np.diag([1.5, -0.5]))
    with pytest.raises(DimensionError):
        analysis.coherent_information(ch, np.eye(3) / 3)


def test_pure_input_has_zero_coherent_information(rng):
    ch = channels.random_channel(3, 3, 2, rng)
    psi = matcore.random_density_matrix(3, rng, rank=1)
    assert abs(analysis.coherent_information(ch, psi)) < 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    d = 2 + seed % 2
    ch = families.depolarizing(rng.uniform(0.05, 0.95), d) if seed < 6 else channels.random_channel(d, d, 2, rng)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    g = analysis.coherent_info_gradient(ch, a)
    fd = analysis.coherent_info_gradient(ch, a, method="fd", h=1e-5)
    assert np.linalg.norm(g - fd) / np.linalg.norm(fd) < 1e-4


def test_optimizer_noiseless():
    r = analysis.maximize_coherent_information(families.depolarizing(0.0, 2))
    assert r.value == pytest.approx(1.0, abs=1e-6)
    assert r.restarts_used == 20


def test_optimizer_antidegradable_region():
    r = analysis.maximize_coherent_information(families.depolarizing(0.6, 2))
    assert r.value <= 1e-7


def test_optimizer_low_noise_positive():
    x = 0.05
    r = analysis.maximize_coherent_information(families.depolarizing(x, 2))
    lower = ic_maximally_mixed_depolarizing(2, x)
    assert lower > 0
    assert r.value >= lower - 1e-9
    state = r.optimizer_state
    assert abs(np.trace(state) - 1) < 1e-12
    assert matcore.eigvalsh(state)[0] > -1e-12


def test_optimizer_deterministic_and_parallel_agree():
    ch = families.depolarizing(0.2, 3)
    cfg = OptimizerConfig(restarts=6, seed=7)
    a = analysis.maximize_coherent_information(ch, cfg)
    b = analysis.maximize_coherent_information(ch, cfg)
    c = analysis.maximize_coherent_information(ch, OptimizerConfig(restarts=6, seed=7, workers=3))
    assert a.value == b.value == c.value
    assert a.restart_values == c.restart_values
    assert np.array_equal(a.optimizer_state, c.optimizer_state)


def test_restart_monotonicity():
    ch = families.depolarizing(0.15, 2)
    values = [
        analysis.maximize_coherent_information(ch, OptimizerConfig(restarts=n, seed=3)).value
        for n in range(1, 7)
    ]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_fd_optimizer_mode():
    cfg = OptimizerConfig(restarts=2, gradient="fd", max_iter=200)
    r = analysis.maximize_coherent_information(families.depolarizing(0.05, 2), cfg)
    assert r.value == pytest.approx(ic_maximally_mixed_depolarizing(2, 0.05), abs=1e-6)


def test_optimizer_cost_guard():
    with pytest.raises(DimensionError):
        analysis.maximize_coherent_information(families.depolarizing(0.5, 9))


def test_contaminated_random_channel_witness(rng):
    lam = channels.random_channel(2, 2, 3, rng)
    r = analysis.maximize_coherent_information(families.contaminate(lam, 0.7), OptimizerConfig(restarts=5))
    assert r.value <= 1e-7
