import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bangbang.decoupling import CycleSchedule, PulseGroup, close_group, simulate_cycle, symmetrize
from bangbang.empirical import (
    BBProblem,
    PulseFamily,
    chi_tilde,
    control_loop,
    distance,
    solve,
)
from bangbang.encodings import build_dfs
from bangbang.operators import (
    dagger,
    embed,
    expand_in_basis,
    expm_hamiltonian,
    pauli,
    pauli_basis,
    random_hermitian,
    random_unitary,
    state_fidelity,
    trace_out_last,
)
from bangbang.process import Channel

seeds = st.integers(0, 2**32 - 1)
B1 = pauli_basis(1)
B2 = pauli_basis(2)
DFS = build_dfs(1)
Z_GRID = tuple(k * math.pi / 4 for k in range(8))


def test_chi_tilde_z_flips_x():
    assert np.allclose(chi_tilde([1, 0, 0], close_group([pauli("Z")]), B1), 0)


def test_chi_tilde_trivial_group():
    v = np.array([0.3, -0.2, 0.9])
    g = PulseGroup([np.eye(2)], [], True)
    assert np.allclose(chi_tilde(v, g, B1), v)


def test_chi_tilde_pauli_twirl():
    assert np.allclose(chi_tilde([0.4, 1.1, -2.0], close_group([pauli("X"), pauli("Z")]), B1), 0)


def test_chi_tilde_length_check():
    with pytest.raises(ValueError):
        chi_tilde([1, 0], close_group([pauli("Z")]), B1)


@pytest.mark.parametrize("a, b, d", [([1, 2, 3], [1, 2, 3], 0.0), ([1, 0, 0], [0, 0, 0], 1.0), ([3, 4, 0], [0, 0, 0], 5.0)])
def test_distance(a, b, d):
    assert distance(a, b) == pytest.approx(d)


@given(seeds)
def test_chi_tilde_matches_symmetrization(seed):
    r = np.random.default_rng(seed)
    v = random_unitary(4, r)
    base = [pauli("ZZ")] if r.random() < 0.5 else [pauli("XI"), pauli("IZ")]
    g = close_group([dagger(v) @ u @ v for u in base])
    h = random_hermitian(4, r)
    coeffs = expand_in_basis(h, B2).real[1:]
    direct = expand_in_basis(symmetrize(h, g), B2).real[1:]
    assert np.max(np.abs(chi_tilde(coeffs, g, B2) - direct)) < 1e-10


def _z_family(grid=Z_GRID):
    return PulseFamily(pauli("Z"), grid, name="Z")


def test_solve_finds_z_kick():
    prob = BBProblem([0.7, -0.4, 0.0], np.zeros(3), B1, [_z_family()], max_pulses=2)
    sol = solve(prob)
    assert sol.distance < 1e-8
    assert sol.choices == ((0, math.pi / 2),)


def test_solve_z_component_untouchable():
    prob = BBProblem([0.7, -0.4, 0.25], np.zeros(3), B1, [_z_family()], max_pulses=2)
    sol = solve(prob)
    assert sol.distance == pytest.approx(0.25, abs=1e-12)


def test_solve_do_nothing_optimum():
    v = np.array([0.1, 0.2, 0.3])
    sol = solve(BBProblem(v, v, B1, [_z_family()], max_pulses=1))
    assert sol.choices == () and sol.distance == 0 and len(sol.pulses) == 1


def _brute_force(chi_bar, chi_hat, hamiltonian, grid, max_pulses):
    # independent oracle: average the generator operator directly
    basis = pauli_basis(int(round(math.log2(hamiltonian.shape[0]))))
    h = np.tensordot(np.concatenate([[0.0], chi_bar]), basis.elements, axes=1)
    best = None
    for m in range(max_pulses):
        for angles in itertools.combinations_with_replacement(grid, m):
            us = [np.eye(basis.dim)] + [expm_hamiltonian(hamiltonian, a) for a in angles]
            avg = sum(dagger(u) @ h @ u for u in us) / len(us)
            d = float(np.linalg.norm(expand_in_basis(avg, basis).real[1:] - chi_hat))
            if best is None or d < best[0] - 1e-12 or (abs(d - best[0]) <= 1e-12 and (m, angles) < best[1:]):
                best = (d, m, angles)
    return best


@given(seeds, st.integers(2, 3), st.sampled_from(["X", "Y", "Z"]))
def test_solve_matches_exhaustive_oracle(seed, max_pulses, axis):
    r = np.random.default_rng(seed)
    chi_bar = r.normal(size=3)
    chi_hat = r.normal(size=3) * 0.3
    grid = tuple(k * math.pi / 3 for k in range(6))
    prob = BBProblem(chi_bar, chi_hat, B1, [PulseFamily(pauli(axis), grid)], max_pulses=max_pulses)
    sol = solve(prob)
    d, _, angles = _brute_force(chi_bar, chi_hat, pauli(axis), grid, max_pulses)
    assert sol.distance == pytest.approx(d, abs=1e-12)
    assert tuple(a for _, a in sol.choices) == angles


def test_solve_continuous_family():
    coeffs = expand_in_basis(0.3 * pauli("XI"), B2).real[1:]
    fam = PulseFamily(DFS.logical_ops["X1"], (0.0, 2 * math.pi), continuous=True)
    sol = solve(BBProblem(coeffs, np.zeros(15), B2, [fam]), seed=0)
    assert sol.distance < 1e-8
    (_, angle), = sol.choices
    assert abs(angle - math.pi) < 1e-6


def test_solve_is_deterministic():
    coeffs = expand_in_basis(0.3 * pauli("XI"), B2).real[1:]
    fam = PulseFamily(DFS.logical_ops["X1"], (0.0, 2 * math.pi), continuous=True)
    a = solve(BBProblem(coeffs, np.zeros(15), B2, [fam]), seed=4)
    b = solve(BBProblem(coeffs, np.zeros(15), B2, [fam]), seed=4)
    assert a.choices == b.choices and a.distance == b.distance


def test_spacing_limits_set_size():
    prob = BBProblem([1.0, 0, 0], np.zeros(3), B1, [_z_family()], max_pulses=4, min_spacing=0.5)
    assert prob.max_feasible_size() == 2
    with pytest.raises(ValueError):
        solve(BBProblem([1.0, 0, 0], np.zeros(3), B1, [_z_family()], max_pulses=4, min_spacing=2.0))


def test_problem_json_round_trip():
    prob = BBProblem([0.7, -0.4, 0.1], np.zeros(3), B1, [_z_family()], max_pulses=3)
    back = BBProblem.from_json(prob.to_json())
    assert np.array_equal(back.chi_bar, prob.chi_bar)
    assert np.allclose(back.pulse_family[0].hamiltonian, pauli("Z"))
    assert back.pulse_family[0].angles == Z_GRID
    assert solve(back).choices == solve(prob).choices


def test_family_validation():
    with pytest.raises(ValueError):
        PulseFamily(pauli("Z"), (0.0, 1.0, 2.0), continuous=True)
    with pytest.raises(ValueError):
        PulseFamily(pauli("Z"), ())


def _plant(strength=0.3):
    h = strength * pauli("XI")
    return lambda tau: Channel.unitary(expm_hamiltonian(h, tau))


def _template():
    fam = PulseFamily(DFS.logical_ops["X1"], (0.0, 2 * math.pi), continuous=True)
    return BBProblem(np.zeros(15), np.zeros(15), B2, [fam])


def test_control_loop_finds_parity_kick():
    sol, history = control_loop(_plant(), _template(), rounds=3)
    assert sol.distance < 1e-6
    assert len([h for h in history if h.accepted]) <= 3
    (_, angle), = sol.choices
    assert abs((angle - math.pi + math.pi) % (2 * math.pi) - math.pi) < 1e-6


def test_control_loop_identity_plant():
    sol, history = control_loop(lambda tau: Channel.identity(4), _template())
    assert sol.choices == () and len(sol.pulses) == 1 and len(history) == 1


def test_control_loop_rejects_zero_rounds():
    with pytest.raises(ValueError):
        control_loop(_plant(), _template(), rounds=0)


def test_control_loop_noise_plateau():
    sigma = 1e-3
    finals = []
    for seed in range(20):
        sol, history = control_loop(_plant(), _template(), rounds=3, noise=sigma, seed=seed)
        accepted = [h.measured_distance for h in history if h.accepted]
        assert all(b <= a for a, b in zip(accepted, accepted[1:]))
        finals.append(sol.distance)
    # empirical constant: final distance stays well below sigma
    assert max(finals) / sigma < 0.5


def test_found_pulses_help_storage():
    sol, _ = control_loop(_plant(), _template())
    g = close_group(sol.pulses.elements)
    h = np.kron(0.3 * pauli("XI"), pauli("X")) + embed({3: "Z"}, 3)
    psi = DFS.encode(np.array([1, 1]) / math.sqrt(2))
    rho0 = np.kron(np.outer(psi, psi.conj()), np.eye(2) / 2)
    with_bb = simulate_cycle(h, CycleSchedule(0.01), g, rho0, 10).states[-1]
    without = simulate_cycle(h, CycleSchedule(0.01), close_group([np.eye(4)]), rho0, 10).states[-1]
    f_bb = state_fidelity(trace_out_last(with_bb, 4), psi)
    f_free = state_fidelity(trace_out_last(without, 4), psi)
    assert 1 - f_bb < 1 - f_free
