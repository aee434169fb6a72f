"""
Bang-bang decoupling toolkit.

Submodules
----------
operators   Pauli algebra, operator basis, states and random ensembles.
process     Process (chi) matrices, simulated tomography, short-time generators.
decoupling  Pulse groups, symmetrization, cycle simulation, scaling fits.
encodings   Decoherence-free subspace, error classes, bit-flip code with pulses.
empirical   Pulse search from measured generators and the closed control loop.
noise       System-bath models, dephasing-time estimates, pulse budgets.
cli         Batch runner (``bangbang`` console script).
"""

__version__ = "0.1.0"
