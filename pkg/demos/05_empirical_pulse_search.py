"""
Finding decoupling pulses from measurements alone.

The plant is a black box: a DFS pair with an unknown leakage field. A
closed loop runs simulated tomography at a few short times, extracts the
generator, searches the available pulse family (rotations about Xbar) for
the set that cancels it, and checks the result with another measurement.
"""

import math

import numpy as np

from bangbang.empirical import BBProblem, PulseFamily, control_loop, solve
from bangbang.encodings import build_dfs
from bangbang.operators import expand_in_basis, expm_hamiltonian, pauli, pauli_basis
from bangbang.process import Channel

code = build_dfs(1)
basis = pauli_basis(2)
hidden = 0.3 * pauli("XI")


def plant(tau):
    return Channel.unitary(expm_hamiltonian(hidden, tau))


zero = np.zeros(len(basis) - 1)
family = PulseFamily(code.logical_ops["X1"], (0.0, 2 * math.pi), continuous=True, name="Xbar")
template = BBProblem(zero, zero, basis, [family], max_pulses=2)

for sigma in (0.0, 1e-3):
    sol, history = control_loop(plant, template, rounds=3, noise=sigma, seed=0)
    print(f"noise {sigma:g}: angles {[round(a, 9) for _, a in sol.choices]}, distance {sol.distance:.2e}")
    for k, h in enumerate(history):
        print(f"    round {k}: measured {h.measured_distance:.3e} accepted={h.accepted}")

# %% On a discrete grid the search is exhaustive
grid = tuple(2 * math.pi * k / 16 for k in range(16))
coeffs = expand_in_basis(hidden, basis).real[1:]
sol = solve(BBProblem(coeffs, zero, basis, [PulseFamily(code.logical_ops["X1"], grid)]))
print("grid optimum:", sol.choices, f"distance {sol.distance:.1e}, {sol.iterations} evaluations")
