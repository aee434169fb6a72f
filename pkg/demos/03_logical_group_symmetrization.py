"""
Averaging over the logical gate group isolates the encoded qubit.

The pulses exp(-i pi/2 Xbar) and exp(-i pi/2 Ybar) generate a finite group
once global phases are ignored. Averaging any Hamiltonian over that group
leaves something that is a multiple of the identity on the code and has no
leakage block, so the encoded qubit stops evolving.
"""

import math

import numpy as np

from bangbang.decoupling import close_group, symmetrize
from bangbang.encodings import build_dfs, classify_error, theorem1_check
from bangbang.operators import expm_hamiltonian, pauli, random_hermitian

code = build_dfs(1)
gens = [expm_hamiltonian(code.logical_ops[k], math.pi / 2) for k in ("X1", "Y1")]
group = close_group(gens)
print("group size:", len(group))

# %% One random Hamiltonian before and after
h = random_hermitian(4, seed=5)
hs = symmetrize(h, group)
print("code block before:\n", np.round(code.restrict(h), 3))
print("code block after:\n", np.round(code.restrict(hs), 3))

# %% The four error classes
for label in ("ZI", "XI", "XX", "ZZ"):
    norms = classify_error(pauli(label), code).norms
    print(f"{label}:", {k: round(v, 3) for k, v in norms.items()})

# %% Statistics over many draws, and the trivial group as a control
print(theorem1_check(code, gens, trials=50, seed=0))
print(theorem1_check(code, [np.eye(4)], trials=50, seed=0))
