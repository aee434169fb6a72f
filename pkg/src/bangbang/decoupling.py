"""
Bang-bang decoupling: pulse groups, symmetrization, adjoint action and
time-domain cycle simulation on system (x) bath.

One decoupling cycle over a pulse set ``{U_0 = I, U_1, ..., U_{N-1}}`` is
``prod_k U_k^dag F U_k`` with ``F = exp(-i H dt)``: the system is rotated
into the frame of ``U_k``, evolves freely for ``dt``, and is rotated back.
Adjacent rotations merge into single physical pulses, so the two-element
set ``{I, U}`` reproduces the parity kick ``free, U, free, U^dag``.
To first order in ``dt`` the cycle generates the symmetrized Hamiltonian
``(1/N) sum_k U_k^dag H U_k``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import schur

from .operators import (
    TOL,
    OperatorBasis,
    anticommutator,
    commutator,
    dagger,
    expm_hamiltonian,
    is_hermitian,
    is_unitary,
    state_fidelity,
    trace_out_last,
)


def canonical_phase(u: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Rescale ``u`` by a global phase so its first non-negligible entry is real positive."""
    flat = u.reshape(-1)
    idx = int(np.argmax(np.abs(flat) > tol))
    z = flat[idx]
    if abs(z) <= tol:
        return u.copy()
    return u * (abs(z) / z)


@dataclass
class PulseGroup:
    """Ordered set of unitary pulses with the identity as element 0.

    ``closed`` records whether the set is closed under multiplication up to
    global phase. Block-relative phases are kept: ``-I_code + I_rest`` and
    ``I`` are different elements.
    """

    elements: list[np.ndarray]
    generated_from: list[int] = field(default_factory=list)
    closed: bool = False

    def __post_init__(self):
        self.elements = [np.asarray(u, dtype=complex) for u in self.elements]
        if not self.elements:
            raise ValueError("pulse group needs at least the identity")
        for u in self.elements:
            if not is_unitary(u, 1e-8):
                raise ValueError("pulse group elements must be unitary")
        if not _same_up_to_phase(self.elements[0], np.eye(self.dim)):
            raise ValueError("element 0 must be the identity (up to global phase)")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k: int) -> np.ndarray:
        return self.elements[k]

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @classmethod
    def from_pulses(cls, pulses: Sequence[np.ndarray]) -> "PulseGroup":
        """Pulse set ``{I} + pulses`` with ``closed`` determined by checking products."""
        d = np.asarray(pulses[0]).shape[0] if len(pulses) else None
        if d is None:
            raise ValueError("from_pulses needs at least one pulse; use trivial_group")
        elems = [np.eye(d, dtype=complex)] + [np.asarray(p, dtype=complex) for p in pulses]
        g = cls(elems, list(range(1, len(elems))))
        g.closed = g.check_closed()
        return g

    def index_of(self, u: np.ndarray, tol: float = 1e-8) -> int | None:
        for k, e in enumerate(self.elements):
            if _same_up_to_phase(u, e, tol):
                return k
        return None

    def check_closed(self, tol: float = 1e-8) -> bool:
        return all(self.index_of(a @ b, tol) is not None for a in self.elements for b in self.elements)

    def tensor_identity(self, d_env: int) -> "PulseGroup":
        """The same group acting as ``U (x) I_env``."""
        eye = np.eye(d_env)
        return PulseGroup([np.kron(u, eye) for u in self.elements], list(self.generated_from), self.closed)


def trivial_group(d: int) -> PulseGroup:
    return PulseGroup([np.eye(d, dtype=complex)], [], True)


def _same_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    return np.max(np.abs(canonical_phase(a, tol) - canonical_phase(b, tol))) < tol


def close_group(generators: Sequence[np.ndarray], max_size: int = 256, tol: float = 1e-8) -> PulseGroup:
    """Breadth-first closure of ``generators`` under multiplication, modulo global phase.

    Raises ``ValueError("group too large")`` if more than ``max_size``
    distinct elements appear.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    d = gens[0].shape[0]
    for g in gens:
        if g.shape != (d, d) or not is_unitary(g, tol):
            raise ValueError("generators must be unitary and of equal dimension")
    elements = [np.eye(d, dtype=complex)]
    keys = [canonical_phase(elements[0], tol)]
    gen_idx: list[int] = []

    def find(u):
        cu = canonical_phase(u, tol)
        for k, key in enumerate(keys):
            if np.max(np.abs(cu - key)) < tol:
                return k, cu
        return None, cu

    for g in gens:
        k, cg = find(g)
        if k is None:
            elements.append(cg)
            keys.append(cg)
            k = len(elements) - 1
        gen_idx.append(k)
    if len(elements) > max_size:
        raise ValueError("group too large")
    queue = deque(range(len(elements)))
    while queue:
        i = queue.popleft()
        for g in gens:
            k, cu = find(elements[i] @ g)
            if k is None:
                elements.append(cu)
                keys.append(cu)
                if len(elements) > max_size:
                    raise ValueError("group too large")
                queue.append(len(elements) - 1)
    return PulseGroup(elements, gen_idx, True)


def symmetrize(h: np.ndarray, g: PulseGroup, require_closed: bool = True) -> np.ndarray:
    """Group average ``(1/N) sum_k U_k^dag h U_k``.

    The ``1/N`` normalization makes the map a projection onto the
    centralizer of a closed group.
    """
    h = np.asarray(h, dtype=complex)
    if require_closed and not g.closed:
        raise ValueError("symmetrization requires a closed group")
    if h.shape != (g.dim, g.dim):
        raise ValueError(f"operator shape {h.shape} does not match group dimension {g.dim}")
    return sum(dagger(u) @ h @ u for u in g) / len(g)


@dataclass
class AdjointRep:
    """Matrices with ``sum_b R[k][a, b] K_b = U_k^dag K_a U_k``."""

    basis: OperatorBasis
    matrices: np.ndarray  # (N, d**2, d**2), real


def adjoint_matrix(u: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    """Complex ``tr(K_b^dag U^dag K_a U) / d`` for a single unitary."""
    K = basis.elements
    conj = np.einsum("ji,ajk,kl->ail", u.conj(), K, u)
    return np.einsum("bji,aji->ab", K.conj(), conj) / basis.dim


def adjoint_rep(g: PulseGroup, basis: OperatorBasis, tol: float = TOL) -> AdjointRep:
    """``R[k][a, b] = tr(K_b^dag U_k^dag K_a U_k) / d``; real and orthogonal for a Hermitian basis."""
    if g.dim != basis.dim:
        raise ValueError(f"group dimension {g.dim} does not match basis dimension {basis.dim}")
    mats = []
    for u in g:
        r = adjoint_matrix(u, basis)
        if np.max(np.abs(r.imag)) > tol:
            raise ValueError("adjoint matrix has an imaginary part; basis not Hermitian?")
        mats.append(r.real)
    return AdjointRep(basis, np.array(mats))


@dataclass
class ParityKickEntry:
    index: int
    classification: str  # "anticommutes", "commutes" or "neither"
    anticommutator_norm: float
    commutator_norm: float


def parity_kick_check(errors: Sequence[np.ndarray], pulse: np.ndarray, tol: float = 1e-12) -> list[ParityKickEntry]:
    """Classify each error by whether the pulse flips its sign, leaves it alone, or neither."""
    report = []
    for i, e in enumerate(errors):
        e = np.asarray(e, dtype=complex)
        if e.shape != pulse.shape:
            raise ValueError("error and pulse dimensions differ")
        an = float(np.linalg.norm(anticommutator(e, pulse), 2))
        cn = float(np.linalg.norm(commutator(e, pulse), 2))
        if an < tol:
            kind = "anticommutes"
        elif cn < tol:
            kind = "commutes"
        else:
            kind = "neither"
        report.append(ParityKickEntry(i, kind, an, cn))
    return report


def pulse_hamiltonian(u: np.ndarray) -> np.ndarray:
    """Hermitian ``h`` with ``exp(-i h) = u`` (principal branch)."""
    t, z = schur(np.asarray(u, dtype=complex), output="complex")
    phases = np.angle(np.diag(t))
    return (z * -phases) @ dagger(z)


@dataclass
class CycleSchedule:
    """Timing of one decoupling cycle.

    Parameters
    ----------
    delta_t : float
        Free-evolution time per segment.
    pulse_width : float
        Duration of each non-identity physical pulse; 0 means ideal
        instantaneous pulses.
    sequence : sequence of int, optional
        Group element indices visited per cycle, default all elements in order.
    """

    delta_t: float
    pulse_width: float = 0.0
    sequence: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.delta_t > 0:
            raise ValueError("delta_t must be positive")
        if self.pulse_width < 0:
            raise ValueError("pulse_width must be non-negative")
        if self.sequence is not None:
            self.sequence = tuple(int(k) for k in self.sequence)

    def indices(self, g: PulseGroup) -> tuple[int, ...]:
        seq = tuple(range(len(g))) if self.sequence is None else self.sequence
        if any(not 0 <= k < len(g) for k in seq):
            raise ValueError("schedule references pulses outside the group")
        if not seq:
            raise ValueError("empty pulse sequence")
        return seq

    def physical_pulses(self, g: PulseGroup) -> list[np.ndarray]:
        """Merged pulses applied after each free segment, in time order."""
        seq = self.indices(g)
        out = []
        for pos, k in enumerate(seq):
            nxt = g[seq[pos + 1]] if pos + 1 < len(seq) else g[seq[0]]
            out.append(nxt @ dagger(g[k]))
        return out

    def cycle_time(self, g: PulseGroup) -> float:
        seq = self.indices(g)
        n_real = sum(1 for p in self._all_pulses(g) if not _same_up_to_phase(p, np.eye(g.dim)))
        return len(seq) * self.delta_t + n_real * self.pulse_width

    def _all_pulses(self, g: PulseGroup) -> list[np.ndarray]:
        seq = self.indices(g)
        return [g[seq[0]]] + self.physical_pulses(g)[:-1] + [dagger(g[seq[-1]])]


def cycle_propagator(h_total: np.ndarray, schedule: CycleSchedule, g: PulseGroup) -> np.ndarray:
    """Unitary of one full cycle on system (x) environment; pulses act on the system factor."""
    h_total = np.asarray(h_total, dtype=complex)
    if not is_hermitian(h_total):
        raise ValueError("h_total must be Hermitian")
    D = h_total.shape[0]
    if D % g.dim:
        raise ValueError("group dimension does not divide the joint dimension")
    d_env = D // g.dim
    eye_env = np.eye(d_env)
    free = expm_hamiltonian(h_total, schedule.delta_t)
    pulses = [np.kron(p, eye_env) for p in schedule._all_pulses(g)]
    seq = schedule.indices(g)

    def apply_pulse(u, p):
        if _same_up_to_phase(p, np.eye(D)):
            return p @ u
        if schedule.pulse_width == 0:
            return p @ u
        hp = pulse_hamiltonian(p)
        return expm_hamiltonian(h_total + hp / schedule.pulse_width, schedule.pulse_width) @ u

    u = np.eye(D, dtype=complex)
    u = apply_pulse(u, pulses[0])
    for i in range(len(seq)):
        u = free @ u
        u = apply_pulse(u, pulses[i + 1])
    return u


@dataclass
class Trajectory:
    """Joint states sampled at cycle boundaries."""

    times: np.ndarray
    states: np.ndarray  # (n_samples, D, D)

    def reduced(self, d_system: int) -> np.ndarray:
        return np.array([trace_out_last(r, d_system) for r in self.states])

    def fidelities(self, target: np.ndarray, d_system: int) -> np.ndarray:
        """Fidelity of each reduced system state with ``target`` (vector or density matrix)."""
        return np.array([state_fidelity(r, target) for r in self.reduced(d_system)])


def simulate_cycle(
    h_total: np.ndarray,
    schedule: CycleSchedule,
    g: PulseGroup,
    rho0: np.ndarray,
    n_cycles: int,
) -> Trajectory:
    """Evolve ``rho0`` through ``n_cycles`` decoupling cycles.

    Returns the joint state at ``t = 0, T_c, 2 T_c, ...``.
    """
    if n_cycles < 0:
        raise ValueError("n_cycles must be non-negative")
    u = cycle_propagator(h_total, schedule, g)
    rho = np.asarray(rho0, dtype=complex)
    if rho.shape != u.shape:
        raise ValueError("rho0 does not match the joint dimension")
    tc = schedule.cycle_time(g)
    states = [rho]
    ud = dagger(u)
    for _ in range(n_cycles):
        rho = u @ rho @ ud
        states.append(rho)
    return Trajectory(tc * np.arange(n_cycles + 1), np.array(states))


def free_trajectory(h_total: np.ndarray, rho0: np.ndarray, times: Sequence[float]) -> Trajectory:
    """Unpulsed evolution sampled at ``times``."""
    h = np.asarray(h_total, dtype=complex)
    w, v = np.linalg.eigh(h)
    rho_e = dagger(v) @ rho0 @ v
    states = []
    for t in times:
        ph = np.exp(-1j * w * t)
        states.append(v @ (ph[:, None] * rho_e * ph.conj()[None, :]) @ dagger(v))
    return Trajectory(np.asarray(times, dtype=float), np.array(states))


@dataclass
class ScalingFit:
    slope: float
    intercept: float
    residual: float
    cycle_times: np.ndarray
    infidelities: np.ndarray
    warnings: list[str] = field(default_factory=list)


def residual_coupling(h_total: np.ndarray, g: PulseGroup) -> float:
    """Norm of what survives symmetrization beyond a pure environment term ``I (x) B``."""
    D = h_total.shape[0]
    d_env = D // g.dim
    hs = symmetrize(h_total, g.tensor_identity(d_env), require_closed=False)
    env = np.einsum("aiaj->ij", hs.reshape(g.dim, d_env, g.dim, d_env)) / g.dim
    return float(np.linalg.norm(hs - np.kron(np.eye(g.dim), env), 2))


def scaling_exponent(
    h_total: np.ndarray,
    delta_ts: Sequence[float],
    g: PulseGroup,
    rho0: np.ndarray,
    total_time: float,
    pulse_width: float = 0.0,
    floor: float = 1e-10,
) -> ScalingFit:
    """Fit the power law of the decoupling error against the cycle time.

    For each ``dt`` the state is propagated for the integer number of cycles
    closest to ``total_time``; the error is the infidelity of the reduced
    system state with its initial value (the ideal, fully decoupled storage
    result). ``log(infidelity)`` is fitted linearly against ``log(T_c)``.

    Warnings: ``"degenerate"`` when every infidelity is below ``floor``,
    ``"not suppressed"`` when the symmetrized Hamiltonian still acts on the
    system, ``"non-monotone"`` when the error does not grow with ``T_c``.
    """
    dts = np.asarray(sorted(delta_ts), dtype=float)
    if dts.size < 4:
        raise ValueError("need at least four delta_t values")
    if dts[-1] / dts[0] < 10 * (1 - 1e-9):
        raise ValueError("delta_t values must span at least one decade")
    h_total = np.asarray(h_total, dtype=complex)
    d_sys = g.dim
    ref = trace_out_last(np.asarray(rho0, dtype=complex), d_sys)
    tcs, infs = [], []
    for dt in dts:
        sched = CycleSchedule(float(dt), pulse_width)
        tc = sched.cycle_time(g)
        n = max(1, int(round(total_time / tc)))
        u = np.linalg.matrix_power(cycle_propagator(h_total, sched, g), n)
        rho = u @ rho0 @ dagger(u)
        infs.append(max(0.0, 1.0 - state_fidelity(trace_out_last(rho, d_sys), ref)))
        tcs.append(tc)
    tcs = np.array(tcs)
    infs = np.array(infs)
    warnings = []
    if residual_coupling(h_total, g) > 1e-10:
        warnings.append("not suppressed")
    if np.all(infs < floor):
        warnings.append("degenerate")
        return ScalingFit(float("nan"), float("nan"), float("nan"), tcs, infs, warnings)
    logs_t = np.log(tcs)
    logs_e = np.log(np.maximum(infs, floor))
    (slope, intercept), res, *_ = np.polyfit(logs_t, logs_e, 1, full=True)
    rms = float(np.sqrt(res[0] / len(tcs))) if len(res) else 0.0
    if np.any(np.diff(infs) < -0.05 * infs[:-1]):
        warnings.append("non-monotone")
    return ScalingFit(float(slope), float(intercept), rms, tcs, infs, warnings)
