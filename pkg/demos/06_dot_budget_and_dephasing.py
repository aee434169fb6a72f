"""
How many pulses fit inside the bath memory of a quantum-dot qubit.

With correlation time tau_c and gate time tau_g, about tau_c / tau_g pulses
fit before the bath forgets, and the residual error of a two-pulse cycle
scales as (2 tau_g / tau_c)**2. The dephasing models give T2 estimates to
set tau_c from.
"""

import numpy as np

from bangbang.noise import NoiseScenario, OUDephasing, dot_budget, estimate_t2

for t2_ns in (1, 10, 100):
    b = dot_budget(t2_ns * 1e-9, 50e-12)
    print(f"T2 = {t2_ns:>3} ns: {b.n_pulses:>5} pulses, correction {b.correction:.0e}")

# %% T2 from the models
t = np.linspace(0, 400e-9, 4001)
print("\nenvelope T2:", estimate_t2(NoiseScenario("analytic_envelope", 100e-9), t))

# Ornstein-Uhlenbeck frequency noise in the motional-narrowing regime (units of 1/g)
ou = NoiseScenario("stochastic_dephasing", tau_c=0.05, g=1.0, seed=0)
grid = np.linspace(0, 60, 121)
print("OU T2 (1/e):", estimate_t2(ou, grid, n_trajectories=2000, convention="1/e"), "vs 1/(g^2 tau_c) = 20")
print("OU T2 (half):", estimate_t2(ou, grid, n_trajectories=2000))
exact = OUDephasing(1.0, 0.05).exact_coherence(grid)
print("exact half-decay:", np.interp(0.5, exact[::-1], grid[::-1]))
