"""
Dense operator and Pauli-string algebra for few-qubit Hilbert spaces.

Operators are plain complex ``numpy.ndarray`` objects of shape ``(d, d)``
with ``d = 2**n``. Qubit 1 is the leftmost (most significant) tensor factor
everywhere in the package, so ``pauli("XZ", 2) == kron(X, Z)`` and the
computational basis index of ``|q1 q2 ... qn>`` is the binary number
``q1 q2 ... qn``.

The operator basis used for process matrices is the unnormalized Pauli
basis: ``tr(K_a^dag K_b) = d * delta_ab`` with ``K_0`` the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI_MATRICES = {"I": I2, "X": X, "Y": Y, "Z": Z}

# single-qubit products: (a, b) -> (phase, letter) with a @ b = phase * letter
_PAULI_TABLE = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_PHASES = (1, -1, 1j, -1j)


def _check_label(label: str) -> None:
    bad = set(label) - set("IXYZ")
    if bad:
        raise ValueError(f"invalid Pauli letters {sorted(bad)} in {label!r}")


def pauli(label: str, n: int | None = None) -> np.ndarray:
    """Tensor product of single-qubit Pauli matrices.

    Parameters
    ----------
    label : str
        Letters from ``IXYZ``, qubit 1 first.
    n : int, optional
        Expected number of qubits. A mismatch with ``len(label)`` raises.

    Returns
    -------
    numpy.ndarray
        The ``2**n x 2**n`` matrix.
    """
    if n is not None and len(label) != n:
        raise ValueError(f"label {label!r} has length {len(label)}, expected {n}")
    if not label:
        raise ValueError("empty Pauli label")
    _check_label(label)
    return reduce(np.kron, (PAULI_MATRICES[c] for c in label))


def embed(label_positions: dict[int, str], n: int) -> np.ndarray:
    """Pauli string with the given letters on 1-based qubit positions, identity elsewhere."""
    letters = ["I"] * n
    for q, c in label_positions.items():
        if not 1 <= q <= n:
            raise ValueError(f"qubit {q} out of range 1..{n}")
        letters[q - 1] = c
    return pauli("".join(letters), n)


@dataclass(frozen=True)
class PauliString:
    """A Pauli string with a phase in ``{+1, -1, +i, -i}``.

    ``PauliString("XZ") * PauliString("ZZ")`` multiplies qubit by qubit with
    the single-qubit table and accumulates the phase.
    """

    letters: str
    phase: complex = 1

    def __post_init__(self):
        _check_label(self.letters)
        if not any(self.phase == p for p in _PHASES):
            raise ValueError(f"phase must be one of +-1, +-i, got {self.phase}")
        object.__setattr__(self, "phase", complex(self.phase))

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        """Parse labels such as ``"XZI"``, ``"-YY"``, ``"+iZ"`` or ``"-iX"``."""
        text = text.strip()
        phase: complex = 1
        for prefix, p in (("-i", -1j), ("+i", 1j), ("i", 1j), ("-", -1), ("+", 1)):
            if text.startswith(prefix):
                phase, text = p, text[len(prefix):]
                break
        return cls(text, phase)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if len(self.letters) != len(other.letters):
            raise ValueError("Pauli strings act on different numbers of qubits")
        phase = self.phase * other.phase
        out = []
        for a, b in zip(self.letters, other.letters):
            p, c = _PAULI_TABLE[(a, b)]
            phase *= p
            out.append(c)
        return PauliString("".join(out), _snap_phase(phase))

    def __neg__(self) -> "PauliString":
        return PauliString(self.letters, -self.phase)

    def commutes_with(self, other: "PauliString") -> bool:
        # strings anticommute iff they differ non-trivially on an odd number of qubits
        clashes = sum(
            1 for a, b in zip(self.letters, other.letters) if a != "I" and b != "I" and a != b
        )
        return clashes % 2 == 0

    def to_matrix(self) -> np.ndarray:
        return self.phase * pauli(self.letters)

    def __str__(self) -> str:
        sign = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}[_snap_phase(self.phase)]
        return f"{sign}{self.letters}"


def _snap_phase(phase: complex) -> complex:
    for p in _PHASES:
        if abs(phase - p) < 1e-12:
            return p
    raise ValueError(f"phase {phase} is not a fourth root of unity")


def n_qubits_of(a: np.ndarray) -> int:
    """Number of qubits of a square ``2**n`` operator."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"operator must be square, got shape {a.shape}")
    d = a.shape[0]
    n = d.bit_length() - 1
    if d < 2 or 2**n != d:
        raise ValueError(f"dimension {d} is not a power of two")
    return n


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def is_hermitian(a: np.ndarray, tol: float = TOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - dagger(a))) < tol


def is_unitary(a: np.ndarray, tol: float = TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return np.max(np.abs(dagger(a) @ a - np.eye(a.shape[0]))) < tol


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if np.shape(a) != np.shape(b):
        raise ValueError(f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def anticommutes(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    """True iff ``||ab + ba||_max < tol``."""
    _same_shape(a, b)
    return float(np.max(np.abs(anticommutator(a, b)))) < tol


def commutes(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    _same_shape(a, b)
    return float(np.max(np.abs(commutator(a, b)))) < tol


def expm_hamiltonian(h: np.ndarray, angle: float = 1.0, tol: float = TOL) -> np.ndarray:
    """``exp(-i * angle * h)`` for Hermitian ``h`` via eigendecomposition.

    The result is unitary to machine precision, which keeps group closure
    and phase comparisons downstream exact.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, tol):
        raise ValueError("expm_hamiltonian requires a Hermitian operator")
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return (v * np.exp(-1j * angle * w)) @ dagger(v)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    """True if ``a = exp(i theta) b`` for some real theta."""
    _same_shape(a, b)
    ov = np.vdot(b, a)
    nb = np.vdot(b, b).real
    if nb < tol**2:
        return np.max(np.abs(a)) < tol
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return np.max(np.abs(a - phase * b)) < tol


@dataclass(frozen=True)
class OperatorBasis:
    """Ordered Hermitian operator basis with ``K_0 = I``.

    Elements satisfy ``tr(K_a^dag K_b) = d * delta_ab``.
    """

    n_qubits: int
    labels: tuple[str, ...]
    elements: np.ndarray  # shape (d**2, d, d)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, key: int | str) -> np.ndarray:
        if isinstance(key, str):
            key = self.labels.index(key)
        return self.elements[key]

    def index(self, label: str) -> int:
        return self.labels.index(label)


_BASIS_CACHE: dict[int, OperatorBasis] = {}


def pauli_basis(n: int) -> OperatorBasis:
    """All ``4**n`` Pauli strings in lexicographic ``IXYZ`` order (``I...I`` first)."""
    if n < 1:
        raise ValueError("need at least one qubit")
    if n not in _BASIS_CACHE:
        labels = tuple("".join(p) for p in itertools.product("IXYZ", repeat=n))
        elements = np.array([pauli(lab) for lab in labels])
        elements.setflags(write=False)
        _BASIS_CACHE[n] = OperatorBasis(n, labels, elements)
    return _BASIS_CACHE[n]


def expand_in_basis(a: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    """Coefficients ``c_a = tr(K_a^dag a) / d``; ``sum_a c_a K_a`` reconstructs ``a``."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (basis.dim, basis.dim):
        raise ValueError(f"operator shape {a.shape} does not match basis dimension {basis.dim}")
    return np.einsum("kji,ji->k", basis.elements.conj(), a) / basis.dim


def from_coefficients(coeffs: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (len(basis),):
        raise ValueError(f"expected {len(basis)} coefficients, got {coeffs.shape}")
    return np.tensordot(coeffs, basis.elements, axes=1)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``tr(a^dag b)``."""
    return complex(np.vdot(a, b))


def hs_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


# --- states -----------------------------------------------------------------


def ket(bits: str) -> np.ndarray:
    """Computational basis vector, e.g. ``ket("01")``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def is_density_matrix(rho: np.ndarray, tol: float = TOL) -> bool:
    if not is_hermitian(rho, tol):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return np.linalg.eigvalsh((rho + dagger(rho)) / 2).min() > -tol


def partial_trace(rho: np.ndarray, keep: Sequence[int], n: int) -> np.ndarray:
    """Reduced state on the 1-based qubits in ``keep`` of an ``n``-qubit operator."""
    keep = sorted(keep)
    if any(not 1 <= q <= n for q in keep):
        raise ValueError("qubit index out of range")
    t = np.asarray(rho).reshape([2] * (2 * n))
    traced = [q - 1 for q in range(1, n + 1) if q not in keep]
    # trace out from the highest axis so earlier indices stay valid
    cur = n
    for ax in sorted(traced, reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + cur)
        cur -= 1
    dk = 2 ** len(keep)
    return t.reshape(dk, dk)


def trace_out_last(rho: np.ndarray, d_keep: int) -> np.ndarray:
    """Trace out the trailing tensor factor, keeping the leading ``d_keep`` dimensions."""
    d = rho.shape[0]
    if d % d_keep:
        raise ValueError(f"{d_keep} does not divide {d}")
    d_env = d // d_keep
    return np.einsum("iaja->ij", rho.reshape(d_keep, d_env, d_keep, d_env))


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    return (v * np.sqrt(np.clip(w, 0, None))) @ dagger(v)


def state_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``.

    Either argument may be a state vector, in which case the overlap form is used.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.ndim == 1 and sigma.ndim == 1:
        return float(abs(np.vdot(rho, sigma)) ** 2)
    if rho.ndim == 1:
        return float(np.real(np.vdot(rho, sigma @ rho)))
    if sigma.ndim == 1:
        return float(np.real(np.vdot(sigma, rho @ sigma)))
    s = psd_sqrt(rho)
    w = np.linalg.eigvalsh(s @ sigma @ s)
    return float(np.sum(np.sqrt(np.clip(w, 0, None))) ** 2)


# --- random instances ---------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_hermitian(d: int, seed=None, scale: float = 1.0) -> np.ndarray:
    rng = _rng(seed)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (a + dagger(a)) / 2


def random_unitary(d: int, seed=None) -> np.ndarray:
    return unitary_group.rvs(d, random_state=_rng(seed))


def random_density_matrix(d: int, seed=None, rank: int | None = None) -> np.ndarray:
    rng = _rng(seed)
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho)


def random_kraus(d: int, n_ops: int, seed=None) -> list[np.ndarray]:
    """Kraus set of a random CPTP map (Stinespring slice of a Haar isometry)."""
    rng = _rng(seed)
    u = random_unitary(d * n_ops, rng)
    iso = u[:, :d]
    return [iso[k * d:(k + 1) * d, :] for k in range(n_ops)]
