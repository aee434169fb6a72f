"""
Process-matrix (chi) representation of open-system evolution.

A process acts as ``rho -> sum_ab chi[a, b] K_a rho K_b^dag`` over a fixed
operator basis. Superoperators act on row-major vectorized density matrices,
``vec(A rho B) = kron(A, B.T) @ vec(rho)``.

Sign convention for the short-time generator: for a unitary family
``exp(-i H tau)`` the extracted generator is ``S(tau) = -H tau``, and the
first-order evolution reads ``rho(tau) ~ rho(0) + i [S(tau), rho(0)]``.
``commutator_form`` returns the complementary ``S(t)`` for which
``rho(t) = rho(0) - i [S(t), rho(0)] + dissipator``; the two differ by sign,
``S_commutator = -S_short``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .operators import (
    TOL,
    OperatorBasis,
    _rng,
    dagger,
    from_coefficients,
    is_hermitian,
    pauli_basis,
)


@dataclass
class ChiProcess:
    """Process matrix over ``basis`` at evolution time ``time`` (seconds)."""

    basis: OperatorBasis
    chi: np.ndarray
    time: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.chi = np.asarray(self.chi, dtype=complex)
        n = len(self.basis)
        if self.chi.shape != (n, n):
            raise ValueError(f"chi has shape {self.chi.shape}, basis needs {(n, n)}")

    @property
    def n_qubits(self) -> int:
        return self.basis.n_qubits

    def is_hermitian(self, tol: float = TOL) -> bool:
        return is_hermitian(self.chi, tol)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh((self.chi + dagger(self.chi)) / 2).min())

    def is_cp(self, tol: float = TOL) -> bool:
        return self.is_hermitian(tol) and self.min_eigenvalue() > -tol

    def tp_residual(self) -> float:
        """``max |sum_ab chi_ab K_b^dag K_a - I|``."""
        K = self.basis.elements
        m = np.einsum("ab,bji,ajk->ik", self.chi, K.conj(), K)
        return float(np.max(np.abs(m - np.eye(self.basis.dim))))

    def is_trace_preserving(self, tol: float = TOL) -> bool:
        return self.tp_residual() < tol

    def superoperator(self) -> np.ndarray:
        K = self.basis.elements
        d = self.basis.dim
        s = np.einsum("ab,aik,bjl->ijkl", self.chi, K, K.conj())
        return s.reshape(d * d, d * d)

    def kraus(self, tol: float = 1e-14) -> list[np.ndarray]:
        """Kraus operators from the eigendecomposition of ``chi``."""
        w, v = np.linalg.eigh((self.chi + dagger(self.chi)) / 2)
        ops = []
        for lam, vec in zip(w, v.T):
            if lam > tol:
                ops.append(np.sqrt(lam) * from_coefficients(vec, self.basis))
        return ops

    def to_json(self) -> str:
        """``{n_qubits, basis: "pauli", time, chi: [[re, im], ...]}`` in row-major order."""
        flat = self.chi.reshape(-1)
        return json.dumps(
            {
                "n_qubits": self.n_qubits,
                "basis": "pauli",
                "time": float(self.time),
                "chi": [[float(z.real), float(z.imag)] for z in flat],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ChiProcess":
        data = json.loads(text)
        if data.get("basis") != "pauli":
            raise ValueError(f"unsupported basis {data.get('basis')!r}")
        basis = pauli_basis(int(data["n_qubits"]))
        entries = np.array([complex(re, im) for re, im in data["chi"]])
        n = len(basis)
        if entries.size != n * n:
            raise ValueError(f"chi has {entries.size} entries, expected {n * n}")
        return cls(basis, entries.reshape(n, n), float(data["time"]))


def apply_chi(p: ChiProcess, rho: np.ndarray, tol: float = TOL) -> np.ndarray:
    """``sum_ab chi_ab K_a rho K_b^dag``.

    ``rho`` must be a density matrix of matching dimension (unit trace, Hermitian).
    """
    rho = np.asarray(rho, dtype=complex)
    d = p.basis.dim
    if rho.shape != (d, d):
        raise ValueError(f"state shape {rho.shape} does not match process dimension {d}")
    if abs(np.trace(rho) - 1) > tol or not is_hermitian(rho, tol):
        raise ValueError("input is not a density matrix")
    return _apply_chi_unchecked(p, rho)


def _apply_chi_unchecked(p: ChiProcess, rho: np.ndarray) -> np.ndarray:
    K = p.basis.elements
    left = np.einsum("aij,jk->aik", K, rho)
    return np.einsum("ab,aik,blk->il", p.chi, left, K.conj())


class Channel:
    """A linear map on density matrices given by Kraus operators or a superoperator.

    Calling the channel applies it; ``superoperator`` uses the package's
    row-major vectorization.
    """

    def __init__(self, kraus: Sequence[np.ndarray] | None = None, superoperator: np.ndarray | None = None):
        if (kraus is None) == (superoperator is None):
            raise ValueError("give exactly one of kraus or superoperator")
        if kraus is not None:
            self.kraus = [np.asarray(k, dtype=complex) for k in kraus]
            d = self.kraus[0].shape[0]
            self._super = sum(np.kron(k, k.conj()) for k in self.kraus)
        else:
            self.kraus = None
            self._super = np.asarray(superoperator, dtype=complex)
            d = int(round(np.sqrt(self._super.shape[0])))
        self.dim = d

    @classmethod
    def unitary(cls, u: np.ndarray) -> "Channel":
        return cls(kraus=[u])

    @classmethod
    def identity(cls, d: int) -> "Channel":
        return cls(kraus=[np.eye(d, dtype=complex)])

    @property
    def superoperator(self) -> np.ndarray:
        return self._super

    def kraus_completeness(self) -> float:
        """``max |sum_i K_i^dag K_i - I|`` (trace-preservation residual)."""
        if self.kraus is None:
            raise ValueError("channel was built from a superoperator")
        m = sum(dagger(k) @ k for k in self.kraus)
        return float(np.max(np.abs(m - np.eye(self.dim))))

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        d = self.dim
        return (self._super @ np.asarray(rho, dtype=complex).reshape(-1)).reshape(d, d)

    def mix(self, other: "Channel", weight: float) -> "Channel":
        """``weight * self + (1 - weight) * other``."""
        return Channel(superoperator=weight * self._super + (1 - weight) * other._super)


def probe_states(d: int) -> list[tuple[tuple[int, int], np.ndarray, np.ndarray]]:
    """Superposition probes ``(|j> + |k>)/sqrt2`` and ``(|j> + i|k>)/sqrt2`` for ``j != k``.

    Together with the computational basis states they synthesize every matrix
    unit ``|j><k|`` by linearity.
    """
    basis = np.eye(d, dtype=complex)
    out = []
    for j in range(d):
        for k in range(d):
            if j == k:
                continue
            plus = (basis[j] + basis[k]) / np.sqrt(2)
            iplus = (basis[j] + 1j * basis[k]) / np.sqrt(2)
            out.append(((j, k), np.outer(plus, plus.conj()), np.outer(iplus, iplus.conj())))
    return out


def _reconstruct_superoperator(channel: Callable[[np.ndarray], np.ndarray], d: int) -> np.ndarray:
    pure = [channel(np.outer(e, e.conj())) for e in np.eye(d, dtype=complex)]
    s = np.zeros((d, d, d, d), dtype=complex)
    for j in range(d):
        s[:, :, j, j] = pure[j]
    for (j, k), plus, iplus in probe_states(d):
        # |j><k| = P+ + i Pi+ - (1 + i)/2 (|j><j| + |k><k|)
        s[:, :, j, k] = channel(plus) + 1j * channel(iplus) - (1 + 1j) / 2 * (pure[j] + pure[k])
    return s.reshape(d * d, d * d)


def chi_from_superoperator(s: np.ndarray, basis: OperatorBasis, cond_limit: float = 1e12) -> np.ndarray:
    """Solve ``S = sum_ab chi_ab kron(K_a, conj(K_b))`` for ``chi``.

    The normal equations factor as ``kron(G, conj(G)) chi = c`` with ``G`` the
    basis Gram matrix, so only a ``d**2 x d**2`` Gram matrix is formed.
    """
    d = basis.dim
    K = basis.elements
    s4 = np.asarray(s).reshape(d, d, d, d)
    c = np.einsum("aik,bjl,ijkl->ab", K.conj(), K, s4)
    gram = np.einsum("aji,bji->ab", K.conj(), K)
    if np.linalg.cond(gram) > cond_limit:
        raise RuntimeError("operator basis is singular; cannot invert the representation change")
    ginv = np.linalg.inv(gram)
    # c = G chi G (G is Hermitian)
    return ginv @ c @ ginv


def tomography(
    channel: Callable[[np.ndarray], np.ndarray],
    basis: OperatorBasis,
    noise: float = 0.0,
    seed=None,
    time: float = 0.0,
    tol: float = 1e-8,
) -> ChiProcess:
    """Simulated quantum process tomography of a black-box linear map.

    Parameters
    ----------
    channel : callable
        Maps a ``d x d`` density matrix to its image.
    basis : OperatorBasis
        Basis for the returned chi matrix.
    noise : float
        Standard deviation of additive Gaussian noise on the real and
        imaginary part of every reconstructed superoperator entry.
    seed
        Seed or ``numpy.random.Generator`` for the noise.
    time : float
        Evolution time recorded on the result.
    tol : float
        Trace-preservation tolerance for the warning flag.

    Returns
    -------
    ChiProcess
        ``warnings`` contains ``"not trace preserving"`` if the map fails
        the trace-preservation check.
    """
    if noise < 0:
        raise ValueError("noise standard deviation must be non-negative")
    d = basis.dim
    s = _reconstruct_superoperator(channel, d)
    if noise > 0:
        rng = _rng(seed)
        s = s + noise * (rng.normal(size=s.shape) + 1j * rng.normal(size=s.shape))
    chi = chi_from_superoperator(s, basis)
    if noise > 0:
        chi = (chi + dagger(chi)) / 2
    p = ChiProcess(basis, chi, time)
    if not p.is_trace_preserving(tol):
        p.warnings.append("not trace preserving")
    return p


def chi_from_kraus(kraus: Sequence[np.ndarray], basis: OperatorBasis, time: float = 0.0) -> ChiProcess:
    """Direct construction ``chi = sum_i c_i c_i^dag`` with ``c_i`` the basis coefficients of ``K_i``."""
    d = basis.dim
    coeffs = np.array([np.einsum("kji,ji->k", basis.elements.conj(), k) / d for k in kraus])
    return ChiProcess(basis, coeffs.T @ coeffs.conj(), time)


@dataclass
class ShortTimeGenerator:
    """First-order generator ``S(tau) = sum_{a>=1} chi_bar[a-1] K_a``."""

    basis: OperatorBasis
    chi_bar: np.ndarray  # real, indexed by basis elements 1..d**2-1
    tau: float
    residual: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def operator(self) -> np.ndarray:
        return np.tensordot(self.chi_bar, self.basis.elements[1:], axes=1)


def short_time_generator(
    family: Callable[[float], ChiProcess],
    tau_points: Sequence[float],
    residual_threshold: float = 1e-2,
) -> ShortTimeGenerator:
    """Extract ``chi_bar_a = Im(chi_a0^(1)(tau))`` from small-time process matrices.

    ``chi_a0(tau)`` is fitted by least squares through the origin; the
    returned vector is ``Im(slope) * tau_points[0]``. The relative fit
    residual is reported, and a warning is attached when it exceeds
    ``residual_threshold`` (curvature means the points are not small enough).
    """
    taus = np.asarray(tau_points, dtype=float)
    if taus.size < 2:
        raise ValueError("need at least two tau points")
    if np.any(taus <= 0):
        raise ValueError("tau points must be positive")
    procs = [family(float(t)) for t in taus]
    basis = procs[0].basis
    col = np.array([p.chi[1:, 0] for p in procs])  # (n_tau, d**2-1)
    slope = taus @ col / (taus @ taus)
    fit = np.outer(taus, slope)
    scale = np.linalg.norm(col.imag)
    resid = float(np.linalg.norm((col - fit).imag) / scale) if scale > 0 else 0.0
    gen = ShortTimeGenerator(basis, slope.imag * taus[0], float(taus[0]), resid)
    if resid > residual_threshold:
        gen.warnings.append("first-order fit residual above threshold; tau points too large")
    return gen


def commutator_form(p: ChiProcess) -> tuple[np.ndarray, np.ndarray]:
    """``S(t) = (i/2) sum_{a>=1} [chi_a0 K_a - chi_0a K_a^dag]`` and the ``a, b >= 1`` block of chi."""
    K = p.basis.elements[1:]
    chi = p.chi
    s = 0.5j * (
        np.tensordot(chi[1:, 0], K, axes=1) - np.tensordot(chi[0, 1:], K.conj().transpose(0, 2, 1), axes=1)
    )
    return s, chi[1:, 1:].copy()


def apply_commutator_form(
    s: np.ndarray, dissipator: np.ndarray, basis: OperatorBasis, rho: np.ndarray
) -> np.ndarray:
    """``rho - i[S, rho] + 1/2 sum_{a,b>=1} chi_ab ([K_a, rho K_b^dag] + [K_a rho, K_b^dag])``.

    Equals the full process action for trace-preserving maps.
    """
    K = basis.elements[1:]
    Kd = K.conj().transpose(0, 2, 1)
    out = rho - 1j * (s @ rho - rho @ s)
    left = np.einsum("aij,jk->aik", K, rho)
    sandwich = np.einsum("ab,aik,bkl->il", dissipator, left, Kd)
    prod = np.einsum("ab,bij,ajk->ik", dissipator, Kd, K)
    out = out + sandwich - 0.5 * (prod @ rho + rho @ prod)
    return out
