"""
Reading a Hamiltonian off process tomography.

Simulated tomography reconstructs the chi matrix of any black-box map. For
short times the first column of chi is linear in the evolution time; its
slope recovers the generator, here a weak X + Z field on one qubit.
"""

import numpy as np

from bangbang.operators import expm_hamiltonian, pauli, pauli_basis, random_density_matrix, random_kraus
from bangbang.process import Channel, apply_chi, commutator_form, short_time_generator, tomography

basis = pauli_basis(1)

# %% Round trip for a random channel
channel = Channel(kraus=random_kraus(2, 3, seed=0))
chi = tomography(channel, basis)
rho = random_density_matrix(2, seed=1)
print("round-trip error:", np.max(np.abs(apply_chi(chi, rho) - channel(rho))))
print("smallest chi eigenvalue:", chi.min_eigenvalue())

# %% Short-time generator of a unitary family
h = 0.8 * pauli("X") + 0.3 * pauli("Z")


def family(tau):
    return tomography(Channel.unitary(expm_hamiltonian(h, tau)), basis, time=tau)


gen = short_time_generator(family, [1e-3, 2e-3, 3e-3])
print("\nchi_bar (X, Y, Z):", gen.chi_bar)
print("expected -H tau:  ", -np.array([0.8, 0.0, 0.3]) * 1e-3)

# %% The commutator form carries the same information
s, dissipator = commutator_form(family(1e-3))
print("\nS from the commutator form:\n", np.round(s, 6))
print("dissipator block size:", np.max(np.abs(dissipator)))
