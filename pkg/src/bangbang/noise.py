"""
Phenomenological system-environment models with a tunable correlation time.

Kinds
-----
collective_dephasing
    ``g * S_z (x) B`` with ``S_z = sum_i Z_i`` and ``B = sum_b X_b`` on the
    environment qubits.
spin_bath
    Random ``Z_i (x) (bath Pauli)`` couplings of scale ``g`` plus a bath
    self-Hamiltonian whose spectrum spans exactly ``1/tau_c``.
stochastic_dephasing
    Classical Ornstein-Uhlenbeck frequency noise per qubit, correlation
    time ``tau_c`` and rms ``g`` (rad/s).
analytic_envelope
    Dephasing channel with coherence factor ``1 / (1 + (t/tau_c)**2)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .operators import _rng, dagger, embed, pauli, trace_out_last
from .process import Channel

KINDS = ("collective_dephasing", "spin_bath", "stochastic_dephasing", "analytic_envelope")
MAX_DIM = 64


@dataclass
class NoiseScenario:
    kind: str
    tau_c: float
    g: float = 1.0
    n_bath_qubits: int = 1
    c_of_T: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not self.tau_c > 0:
            raise ValueError("tau_c must be positive")
        if self.kind == "spin_bath" and not 1 <= self.n_bath_qubits <= 3:
            raise ValueError("spin_bath supports 1 to 3 bath qubits")

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "NoiseScenario":
        data = json.loads(text)
        unknown = set(data) - {"kind", "tau_c", "g", "n_bath_qubits", "c_of_T", "seed"}
        if unknown:
            raise ValueError(f"unknown fields {sorted(unknown)}")
        return cls(**data)


class OUDephasing:
    """Per-qubit classical frequency noise ``delta_omega(t)`` of Ornstein-Uhlenbeck type.

    ``<delta_omega(t) delta_omega(0)> = g**2 exp(-|t|/tau_c)``; each qubit
    accumulates the phase ``phi(t) = int_0^t delta_omega``.
    """

    def __init__(self, g: float, tau_c: float, n_qubits: int = 1, seed=0, steps_per_tau: int = 20):
        self.g = g
        self.tau_c = tau_c
        self.n_qubits = n_qubits
        self.seed = seed
        self.steps_per_tau = steps_per_tau

    def phases(self, t_grid, n_trajectories: int) -> np.ndarray:
        """Accumulated phases, shape ``(n_trajectories, n_qubits, len(t_grid))``."""
        t = np.asarray(t_grid, dtype=float)
        if t[0] != 0 or np.any(np.diff(t) <= 0):
            raise ValueError("t_grid must start at 0 and increase")
        rng = _rng(self.seed)
        shape = (n_trajectories, self.n_qubits)
        x = self.g * rng.normal(size=shape)
        phi = np.zeros(shape)
        out = np.zeros(shape + (t.size,))
        h_max = self.tau_c / self.steps_per_tau
        for j in range(1, t.size):
            span = t[j] - t[j - 1]
            m = max(1, math.ceil(span / h_max))
            h = span / m
            decay = math.exp(-h / self.tau_c)
            kick = self.g * math.sqrt(1 - decay**2)
            for _ in range(m):
                x_new = x * decay + kick * rng.normal(size=shape)
                phi += 0.5 * h * (x + x_new)
                x = x_new
            out[..., j] = phi
        return out

    def coherence(self, t_grid, n_trajectories: int, qubit: int = 0) -> np.ndarray:
        """Ensemble coherence ``|<exp(-i phi)>|`` of one qubit."""
        phi = self.phases(t_grid, n_trajectories)[:, qubit, :]
        return np.abs(np.mean(np.exp(-1j * phi), axis=0))

    def exact_coherence(self, t) -> np.ndarray:
        """Gaussian-phase result ``exp(-g^2 tau_c^2 (t/tau_c - 1 + exp(-t/tau_c)))``."""
        t = np.asarray(t, dtype=float)
        s = t / self.tau_c
        return np.exp(-(self.g * self.tau_c) ** 2 * (s - 1 + np.exp(-s)))


class EnvelopeDephasing:
    """Independent dephasing of each qubit with coherence ``1 / (1 + (t/tau_c)**2)``."""

    def __init__(self, tau_c: float, n_qubits: int = 1):
        self.tau_c = tau_c
        self.n_qubits = n_qubits

    def coherence(self, t) -> np.ndarray:
        return 1.0 / (1.0 + (np.asarray(t, dtype=float) / self.tau_c) ** 2)

    def channel(self, t: float) -> Channel:
        c = float(self.coherence(t))
        single = [math.sqrt((1 + c) / 2) * pauli("I"), math.sqrt((1 - c) / 2) * pauli("Z")]
        kraus = single
        for _ in range(self.n_qubits - 1):
            kraus = [np.kron(a, b) for a in kraus for b in single]
        return Channel(kraus=kraus)


def _spread_normalized(h: np.ndarray, spread: float) -> np.ndarray:
    w = np.linalg.eigvalsh(h)
    return h * (spread / (w[-1] - w[0]))


def build_hamiltonian(s: NoiseScenario, n_system_qubits: int):
    """Joint Hamiltonian (system first, environment last) or a stochastic/analytic model.

    Returns an ``ndarray`` for ``collective_dephasing`` and ``spin_bath``,
    an ``OUDephasing`` for ``stochastic_dephasing`` and an
    ``EnvelopeDephasing`` for ``analytic_envelope``.
    """
    n_s, n_b = n_system_qubits, s.n_bath_qubits
    if s.kind == "stochastic_dephasing":
        return OUDephasing(s.g, s.tau_c, n_s, s.seed)
    if s.kind == "analytic_envelope":
        return EnvelopeDephasing(s.tau_c, n_s)
    if 2 ** (n_s + n_b) > MAX_DIM:
        raise ValueError(f"joint dimension 2**{n_s + n_b} exceeds {MAX_DIM}")
    d_s = 2**n_s
    eye_s = np.eye(d_s)
    sz = sum(embed({i: "Z"}, n_s) for i in range(1, n_s + 1))
    if s.kind == "collective_dephasing":
        b = sum(embed({j: "X"}, n_b) for j in range(1, n_b + 1))
        return s.g * np.kron(sz, b)
    rng = _rng(s.seed)
    # spin bath: random couplings to random bath Paulis, bath spectrum spanning 1/tau_c
    h = np.zeros((2 ** (n_s + n_b),) * 2, dtype=complex)
    for i in range(1, n_s + 1):
        for j in range(1, n_b + 1):
            letter = "XYZ"[rng.integers(3)]
            h += s.g * rng.uniform(-1, 1) * np.kron(embed({i: "Z"}, n_s), embed({j: letter}, n_b))
    hb = sum(rng.uniform(-1, 1) * embed({j: "Z"}, n_b) for j in range(1, n_b + 1))
    for j in range(1, n_b):
        hb = hb + rng.uniform(-1, 1) * embed({j: "X", j + 1: "X"}, n_b)
    hb = hb + 0.5 * rng.uniform(-1, 1) * embed({1: "X"}, n_b)
    h += np.kron(eye_s, _spread_normalized(hb, 1.0 / s.tau_c))
    return h


def hamiltonian_coherence(h: np.ndarray, t_grid, probe: np.ndarray | None = None) -> np.ndarray:
    """Normalized ``|rho_01(t)|`` of a one-qubit system coupled to a maximally mixed environment."""
    d_env = h.shape[0] // 2
    probe = np.array([1, 1], dtype=complex) / np.sqrt(2) if probe is None else np.asarray(probe, dtype=complex)
    rho0 = np.kron(np.outer(probe, probe.conj()), np.eye(d_env) / d_env)
    w, v = np.linalg.eigh(h)
    rho_e = dagger(v) @ rho0 @ v
    out = []
    for t in np.asarray(t_grid, dtype=float):
        ph = np.exp(-1j * w * t)
        rho = v @ (ph[:, None] * rho_e * ph.conj()[None, :]) @ dagger(v)
        out.append(abs(trace_out_last(rho, 2)[0, 1]))
    out = np.array(out)
    return out / out[0]


def estimate_t2(
    s: NoiseScenario,
    t_grid,
    probe: np.ndarray | None = None,
    n_trajectories: int = 200,
    convention: str = "half",
) -> float:
    """Dephasing time from the decay of a single-qubit probe coherence.

    ``convention="half"`` returns the first time the normalized coherence
    reaches 1/2; ``"1/e"`` uses ``exp(-1)``. Linear interpolation between
    grid points. Raises ``ValueError("grid too short")`` if the level is not
    reached.
    """
    levels = {"half": 0.5, "1/e": math.exp(-1)}
    if convention not in levels:
        raise ValueError(f"unknown convention {convention!r}")
    t = np.asarray(t_grid, dtype=float)
    model = build_hamiltonian(s, 1)
    if isinstance(model, OUDephasing):
        if n_trajectories < 100:
            raise ValueError("stochastic estimates need at least 100 trajectories")
        c = model.coherence(t, n_trajectories)
    elif isinstance(model, EnvelopeDephasing):
        c = model.coherence(t)
    else:
        c = hamiltonian_coherence(model, t, probe)
    c = c / c[0]
    return _crossing(t, c, levels[convention])


def _crossing(t: np.ndarray, c: np.ndarray, level: float) -> float:
    below = np.nonzero(c <= level)[0]
    if below.size == 0:
        raise ValueError("grid too short")
    j = int(below[0])
    if j == 0:
        return float(t[0])
    t0, t1, c0, c1 = t[j - 1], t[j], c[j - 1], c[j]
    return float(t0 + (c0 - level) * (t1 - t0) / (c0 - c1))


@dataclass
class DotBudget:
    """Pulse budget for a quantum-dot qubit.

    ``tau_c = T2 / c_of_T``; ``n_pulses = floor(tau_c / gate_time)``;
    ``correction = (T_c / tau_c)**2`` with the parity-kick cycle
    ``T_c = 2 * gate_time``.
    """

    T2: float
    gate_time: float
    c_of_T: float
    tau_c: float
    n_pulses: int
    correction: float


def dot_budget(T2: float, gate_time: float, c_of_T: float = 1.0) -> DotBudget:
    if min(T2, gate_time, c_of_T) <= 0:
        raise ValueError("T2, gate_time and c_of_T must be positive")
    tau_c = T2 / c_of_T
    ratio = tau_c / gate_time
    # guard against 19.999999999999996-style round-off
    n_pulses = int(math.floor(ratio * (1 + 1e-12)))
    # 15 significant digits drop the last-bit noise of the division
    correction = float(f"{(2 * gate_time / tau_c) ** 2:.15g}")
    return DotBudget(T2, gate_time, c_of_T, tau_c, n_pulses, correction)

