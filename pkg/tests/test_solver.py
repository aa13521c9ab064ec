import numpy as np
import pytest

from magnetodisk import (
    ModelParams,
    Profile,
    build_grid,
    euler_residual,
    l2_norm,
    minimize,
    random_profile,
    verify_trivial_uniqueness,
)

from conftest import smooth_profile


def test_subcritical_runs_return_the_exact_trivial_profile(grid256, pair256):
    p = ModelParams(mu=1.0)
    rng = np.random.default_rng(4)
    inits = [None, random_profile(grid256, rng), smooth_profile(grid256, [0.9, -0.3])]
    for init in inits:
        rep = minimize(grid256, p, init=init, eigenpair=pair256)
        assert rep.converged
        assert rep.trivial
        assert rep.energy == 0.0
        assert np.all(rep.minimizer.values == 0.0)
        assert rep.residual == 0.0


def test_supercritical_minimizer_lands_on_the_positive_branch(grid256, pair256):
    mu = pair256.gamma0 / 2.0 + 0.2
    rep = minimize(grid256, ModelParams(mu=mu), eigenpair=pair256)
    assert rep.converged
    assert not rep.trivial
    assert rep.energy < -1e-6
    assert rep.residual <= 1e-8
    vals = rep.minimizer.values
    assert vals[0] == 0.0
    assert np.all(vals[1:] > 0.0)
    assert np.all(vals[1:] <= np.pi / 2.0)


def test_minimizer_satisfies_the_strong_equation(minimizer512):
    g = build_grid(1024, 2.0)
    p = ModelParams(mu=2.0)
    rep = minimize(g, p)
    assert rep.converged
    assert euler_residual(rep.minimizer, p) <= 1e-6  # measured 6.7e-7
    assert rep.bc_residual <= 1e-6
    assert euler_residual(rep.minimizer, p) < euler_residual(minimizer512.minimizer, p)


def test_energy_history_is_monotone(grid256, pair256):
    for mu in (1.2, 2.3):
        rep = minimize(grid256, ModelParams(mu=mu), eigenpair=pair256)
        hist = np.asarray(rep.energy_history)
        assert np.all(np.diff(hist) <= 0.0)
        assert hist[-1] == rep.energy or rep.trivial


def test_descent_is_sign_equivariant_without_folding(grid256, pair256):
    # with folding disabled every operation in the loop is odd, so negating
    # the start negates the whole trajectory bitwise
    p = ModelParams(mu=2.0)
    plus = minimize(grid256, p, init=Profile(grid256, 0.1 * pair256.phi0.values),
                    fold_iterates=False)
    minus = minimize(grid256, p, init=Profile(grid256, -0.1 * pair256.phi0.values),
                     fold_iterates=False)
    assert plus.converged and minus.converged
    assert abs(plus.energy - minus.energy) <= 1e-12  # measured 0.0
    assert l2_norm(grid256, plus.minimizer.values + minus.minimizer.values) <= 1e-8
    assert np.all(minus.minimizer.values <= 0.0)
    assert minus.fold_applied == 0


def test_minimizer_is_stable_under_refinement(minimizer256, minimizer512):
    # every other fine node coincides with a coarse node exactly, so the two
    # solutions can be compared nodewise
    coarse = minimizer256.minimizer
    fine = minimizer512.minimizer
    assert np.array_equal(fine.grid.nodes[::2], coarse.grid.nodes)
    diff = fine.values[::2] - coarse.values
    assert l2_norm(coarse.grid, diff) <= (2.0 / 256.0) ** 2  # measured 8.5e-6


def test_minimal_energy_is_nonincreasing_in_mu(grid256, pair256):
    energies = []
    for mu in (1.8, 2.0, 2.4, 3.0):
        rep = minimize(grid256, ModelParams(mu=mu), eigenpair=pair256)
        assert rep.converged
        energies.append(rep.energy)
    assert all(a > b for a, b in zip(energies, energies[1:]))
    assert energies[0] < 0.0


def test_multistart_certifies_trivial_uniqueness_below_threshold(grid256, pair256):
    thr = pair256.gamma0 / 2.0
    for mu in (0.0, thr - 0.05):
        out = verify_trivial_uniqueness(grid256, ModelParams(mu=mu), trials=8, seed=0)
        assert out["passed"]
        assert out["n_nontrivial"] == 0
        assert out["worst_norm"] <= 1e-8


def test_multistart_flags_nontrivial_minimizers_above_threshold(grid256, pair256):
    thr = pair256.gamma0 / 2.0
    out = verify_trivial_uniqueness(grid256, ModelParams(mu=thr + 0.1), trials=8, seed=0)
    assert not out["passed"]
    assert out["n_nontrivial"] >= 1
    assert out["worst_energy"] < -1e-9


def test_iteration_cap_reports_honest_failure(grid256, pair256):
    rep = minimize(grid256, ModelParams(mu=2.5, max_iter=3), eigenpair=pair256)
    assert not rep.converged
    assert rep.iterations == 3
    assert rep.energy < 0.0  # best-so-far is still returned


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nonfinite_initial_energy_is_rejected(grid256):
    # the overflow on the way to inf is the point of the test
    huge = Profile(grid256, 1e200 * grid256.nodes)
    with pytest.raises(ValueError, match="non-finite"):
        minimize(grid256, ModelParams(mu=2.0), init=huge)


def test_init_on_wrong_grid_is_rejected(grid256):
    other = build_grid(128, 2.0)
    init = Profile(other, np.zeros(129))
    with pytest.raises(ValueError, match="different grid"):
        minimize(grid256, ModelParams(mu=2.0), init=init)


def test_random_profile_contract(grid256):
    a = random_profile(grid256, np.random.default_rng(42), amplitude=1.3)
    b = random_profile(grid256, np.random.default_rng(42), amplitude=1.3)
    assert np.array_equal(a.values, b.values)
    assert a.values[0] == 0.0
    assert np.abs(a.values).max() <= 1.3 + 1e-12
