import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bangbang.decoupling import (
    CycleSchedule,
    PulseGroup,
    adjoint_rep,
    close_group,
    cycle_propagator,
    free_trajectory,
    parity_kick_check,
    pulse_hamiltonian,
    residual_coupling,
    scaling_exponent,
    simulate_cycle,
    symmetrize,
    trivial_group,
)
from bangbang.encodings import build_dfs, collective_dephasing_operator, leakage_basis
from bangbang.operators import (
    commutator,
    dagger,
    embed,
    equal_up_to_phase,
    expm_hamiltonian,
    pauli,
    pauli_basis,
    random_hermitian,
    random_unitary,
    state_fidelity,
    trace_out_last,
)

seeds = st.integers(0, 2**32 - 1)
DFS = build_dfs(1)
XBAR, YBAR = DFS.logical_ops["X1"], DFS.logical_ops["Y1"]
KICK = expm_hamiltonian(XBAR, math.pi)
PARITY = close_group([KICK])


def _brute_force_closure(gens, tol=1e-8):
    # repeated products until nothing new appears, compared up to phase
    elems = [np.eye(gens[0].shape[0], dtype=complex)]
    changed = True
    while changed:
        changed = False
        for a in list(elems):
            for g in gens:
                c = g @ a
                if not any(equal_up_to_phase(c, e, tol) for e in elems):
                    elems.append(c)
                    changed = True
    return elems


def test_close_single_z():
    g = close_group([pauli("Z")])
    assert len(g) == 2 and g.closed


def test_close_x_z_gives_paulis():
    g = close_group([pauli("X"), pauli("Z")])
    assert len(g) == 4
    for p in "IXYZ":
        assert g.index_of(pauli(p)) is not None


def test_close_dfs_logical_group():
    gens = [expm_hamiltonian(XBAR, math.pi / 2), expm_hamiltonian(YBAR, math.pi / 2)]
    g = close_group(gens)
    assert len(g) == len(_brute_force_closure(gens)) <= 16
    p = DFS.projector
    q = np.eye(4) - p
    # some element is -1 on the code and +1 off it, or the reverse
    assert any(
        np.allclose(u, -p + q) or np.allclose(u, p - q) for u in g
    )


def test_close_group_identity_first_and_closed():
    g = close_group([random_unitary(2, seed=0) @ pauli("X") @ dagger(random_unitary(2, seed=0))])
    assert np.allclose(g[0], np.eye(2))
    assert g.check_closed()


def test_close_group_overflow():
    with pytest.raises(ValueError, match="group too large"):
        close_group([expm_hamiltonian(pauli("X"), 0.1)], max_size=16)


def test_symmetrize_parity_kick_examples():
    g = close_group([pauli("ZZ")])
    assert np.allclose(symmetrize(pauli("XI"), g), 0)
    assert np.allclose(symmetrize(pauli("ZI"), g), pauli("ZI"))


@given(seeds)
def test_pauli_twirl(seed):
    h = random_hermitian(2, seed=seed)
    g = close_group([pauli("X"), pauli("Z")])
    assert np.allclose(symmetrize(h, g), np.trace(h) / 2 * np.eye(2))


def test_symmetrize_requires_closed():
    g = PulseGroup.from_pulses([pauli("X")])
    g.closed = False
    with pytest.raises(ValueError):
        symmetrize(pauli("Z"), g)


GROUPS = [
    close_group([pauli("ZZ")]),
    close_group([pauli("XI"), pauli("ZI"), pauli("IX"), pauli("IZ")]),
    close_group([expm_hamiltonian(XBAR, math.pi / 2), expm_hamiltonian(YBAR, math.pi / 2)]),
]


@given(seeds, st.sampled_from(range(len(GROUPS))))
def test_symmetrize_projects_onto_centralizer(seed, k):
    g = GROUPS[k]
    h = random_hermitian(4, seed=seed)
    hs = symmetrize(h, g)
    assert np.max(np.abs(symmetrize(hs, g) - hs)) < 1e-10
    for u in g:
        assert np.max(np.abs(commutator(hs, u))) < 1e-10


def test_adjoint_of_x():
    b = pauli_basis(1)
    r = adjoint_rep(close_group([pauli("X")]), b).matrices[1]
    assert np.allclose(r, np.diag([1, 1, -1, -1]))


def test_adjoint_of_identity():
    r = adjoint_rep(trivial_group(4), pauli_basis(2)).matrices[0]
    assert np.allclose(r, np.eye(16))


@given(seeds)
def test_adjoint_random_unitary_orthogonal(seed):
    b = pauli_basis(2)
    u = random_unitary(4, seed=seed)
    g = PulseGroup([np.eye(4), u], [], False)
    r = adjoint_rep(g, b).matrices[1]
    assert np.allclose(r @ r.T, np.eye(16), atol=1e-12)
    assert r[0, 0] == pytest.approx(1) and np.allclose(r[0, 1:], 0) and np.allclose(r[1:, 0], 0)
    # rows reproduce the conjugated basis elements
    for a in range(16):
        lhs = np.tensordot(r[a], b.elements, axes=1)
        assert np.allclose(lhs, dagger(u) @ b.elements[a] @ u, atol=1e-12)


def test_parity_kick_leakage_basis():
    report = parity_kick_check(leakage_basis(), KICK)
    assert [e.classification for e in report] == ["anticommutes"] * 8
    assert max(e.anticommutator_norm for e in report) < 1e-12


def test_parity_kick_leaves_collective_dephasing():
    assert parity_kick_check([collective_dephasing_operator(2)], KICK)[0].classification == "commutes"


def test_half_kick_commutes_with_xbar_only():
    half = expm_hamiltonian(XBAR, math.pi / 2)
    assert parity_kick_check([XBAR], half)[0].classification == "commutes"


def test_pulse_hamiltonian_inverts_exponential():
    u = random_unitary(4, seed=3)
    assert np.allclose(expm_hamiltonian(pulse_hamiltonian(u), 1.0), u)


def test_cycle_time_counts_real_pulses():
    assert CycleSchedule(0.1).cycle_time(PARITY) == pytest.approx(0.2)
    assert CycleSchedule(0.1, pulse_width=0.01).cycle_time(PARITY) == pytest.approx(0.22)


def test_schedule_validation():
    with pytest.raises(ValueError):
        CycleSchedule(0.0)
    with pytest.raises(ValueError):
        CycleSchedule(0.1, pulse_width=-1.0)
    with pytest.raises(ValueError):
        CycleSchedule(0.1, sequence=(0, 5)).indices(PARITY)


def _leak_h():
    return embed({1: "X", 3: "X"}, 3) + embed({3: "Z"}, 3)


def _encoded(psi_logical, bath=None):
    psi = DFS.encode(np.asarray(psi_logical, dtype=complex) / np.linalg.norm(psi_logical))
    bath = np.eye(2) / 2 if bath is None else bath
    return psi, np.kron(np.outer(psi, psi.conj()), bath)


def test_parity_kick_beats_free_evolution():
    h = _leak_h()
    psi, rho0 = _encoded([1, 1])
    dt = 0.1 / np.linalg.norm(h, 2)
    # a one-qubit bath revives coherently, so stay within the first quarter period
    traj = simulate_cycle(h, CycleSchedule(dt), PARITY, rho0, 5)
    free = free_trajectory(h, rho0, traj.times)
    f_bb, f_free = traj.fidelities(psi, 4), free.fidelities(psi, 4)
    assert np.all(f_bb[1:] > f_free[1:])


def test_bb_matches_explicit_oracle():
    # one cycle of the parity kick written out by hand
    h = _leak_h()
    dt = 0.05
    p = np.kron(KICK, np.eye(2))
    step = expm_hamiltonian(h, dt)
    oracle = dagger(p) @ step @ p @ step
    u = cycle_propagator(h, CycleSchedule(dt), PARITY)
    assert equal_up_to_phase(u, oracle, 1e-12)


@given(st.floats(0.01, 100.0), seeds)
def test_collective_dephasing_harmless(strength, seed):
    bath_op = random_hermitian(2, seed=seed)
    h = strength * np.kron(collective_dephasing_operator(2), bath_op)
    psi, rho0 = _encoded([0.6, 0.8j])
    traj = simulate_cycle(h, CycleSchedule(0.1), PARITY, rho0, 30)
    assert np.max(np.abs(traj.fidelities(psi, 4) - 1)) < 1e-12


def test_zero_hamiltonian_constant():
    psi, rho0 = _encoded([1, 0])
    traj = simulate_cycle(np.zeros((8, 8)), CycleSchedule(0.1), PARITY, rho0, 5)
    assert all(np.allclose(s, rho0) for s in traj.states)


def test_first_order_convergence():
    h = _leak_h()
    hbar = symmetrize(h, PARITY.tensor_identity(2), require_closed=False)
    errs = []
    for dt in (0.02, 0.01):
        sched = CycleSchedule(dt)
        u = cycle_propagator(h, sched, PARITY)
        target = expm_hamiltonian(hbar, sched.cycle_time(PARITY))
        errs.append(np.linalg.norm(u - target, 2))
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.05)


def test_scaling_slope_two():
    _, rho0 = _encoded([1, 0])
    fit = scaling_exponent(_leak_h(), np.geomspace(1e-3, 1e-2, 5), PARITY, rho0, 1.0)
    assert fit.slope == pytest.approx(2.0, abs=0.2)
    assert not fit.warnings


def test_scaling_zero_hamiltonian_degenerate():
    _, rho0 = _encoded([1, 0])
    fit = scaling_exponent(np.zeros((8, 8)), np.geomspace(1e-3, 1e-2, 4), PARITY, rho0, 1.0)
    assert "degenerate" in fit.warnings and math.isnan(fit.slope)


def test_scaling_commuting_error_not_suppressed():
    h = embed({1: "Z", 3: "X"}, 3) + embed({3: "Z"}, 3)
    _, rho0 = _encoded([1, 1])
    fit = scaling_exponent(h, np.geomspace(1e-3, 1e-2, 5), PARITY, rho0, 1.0)
    assert "not suppressed" in fit.warnings
    assert abs(fit.slope) < 0.2
    assert residual_coupling(h, PARITY) > 0


def test_scaling_needs_a_decade():
    _, rho0 = _encoded([1, 0])
    with pytest.raises(ValueError):
        scaling_exponent(_leak_h(), np.linspace(1e-3, 2e-3, 5), PARITY, rho0, 1.0)
    with pytest.raises(ValueError):
        scaling_exponent(_leak_h(), [1e-3, 1e-2, 5e-3], PARITY, rho0, 1.0)


def test_finite_width_costs_fidelity():
    h = _leak_h()
    psi, rho0 = _encoded([1, 1])
    ideal = simulate_cycle(h, CycleSchedule(0.01), PARITY, rho0, 50)
    wide = simulate_cycle(h, CycleSchedule(0.01, pulse_width=0.005), PARITY, rho0, 50)
    assert wide.times[-1] > ideal.times[-1]
    f_wide = state_fidelity(trace_out_last(wide.states[-1], 4), psi)
    f_ideal = state_fidelity(trace_out_last(ideal.states[-1], 4), psi)
    assert f_wide < f_ideal
