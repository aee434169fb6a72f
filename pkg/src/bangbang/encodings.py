"""
Code subspaces and their interplay with decoupling pulses.

Two codes are provided:

* the two-qubit-per-block decoherence-free subspace ``|0_L> = |01>``,
  ``|1_L> = |10>``, immune to collective dephasing, with the exchange-type
  logical Hamiltonians ``Xbar = (XX + YY)/2``, ``Zbar = (Z1 - Z2)/2``;
* the three-qubit bit-flip code, whose phase-flip stabilizer set
  ``{X1X2, X2X3, X1X3}`` doubles as a parity-kick pulse set against
  single-qubit dephasing.

Logical ``Ybar`` is normalized so that it restricts to the Pauli ``Y`` on
the code space, ``Ybar = -(i/2) [Zbar, Xbar]``. The unnormalized commutator
``i[Zbar, Xbar]`` equals ``-2 Ybar`` and ``(X1Y2 - Y1X2)/2`` equals ``-Ybar``;
see ``dfs_y_relations``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .decoupling import CycleSchedule, PulseGroup, close_group, cycle_propagator, symmetrize
from .operators import (
    TOL,
    PauliString,
    _rng,
    commutator,
    dagger,
    embed,
    expand_in_basis,
    expm_hamiltonian,
    hs_inner,
    hs_norm,
    ket,
    pauli,
    pauli_basis,
    random_hermitian,
    state_fidelity,
    trace_out_last,
)


@dataclass
class CodeSpace:
    """Isometry ``V`` from logical to physical space plus named logical operators.

    ``invariant_ops`` are physical operators the code is designed to be
    immune to (besides the identity); they define the "invariant" class of
    ``classify_error``.
    """

    n_physical: int
    n_logical: int
    isometry: np.ndarray
    logical_ops: dict[str, np.ndarray]
    invariant_ops: list[np.ndarray] = field(default_factory=list)

    @property
    def projector(self) -> np.ndarray:
        return self.isometry @ dagger(self.isometry)

    @property
    def dim(self) -> int:
        return 2**self.n_physical

    def restrict(self, op: np.ndarray) -> np.ndarray:
        """``V^dag op V``."""
        return dagger(self.isometry) @ op @ self.isometry

    def encode(self, psi: np.ndarray) -> np.ndarray:
        return self.isometry @ np.asarray(psi, dtype=complex)

    def leaks(self, op: np.ndarray, tol: float = TOL) -> bool:
        """True if ``op`` maps code states outside the code space."""
        p = self.projector
        return float(np.max(np.abs((np.eye(self.dim) - p) @ op @ p))) > tol

    def isometry_residual(self) -> float:
        v = self.isometry
        return float(np.max(np.abs(dagger(v) @ v - np.eye(v.shape[1]))))

    def to_json(self) -> str:
        basis = pauli_basis(self.n_physical)

        def pauli_map(op):
            c = expand_in_basis(op, basis)
            return {lab: [float(z.real), float(z.imag)] for lab, z in zip(basis.labels, c) if abs(z) > 1e-14}

        return json.dumps(
            {
                "n_physical": self.n_physical,
                "n_logical": self.n_logical,
                "codewords": [[[float(z.real), float(z.imag)] for z in col] for col in self.isometry.T],
                "logical_ops": {k: pauli_map(v) for k, v in self.logical_ops.items()},
            }
        )


def _dfs_block_states(n_blocks: int) -> np.ndarray:
    cols = []
    for bits in range(2**n_blocks):
        logical = format(bits, f"0{n_blocks}b")
        physical = "".join("01" if b == "0" else "10" for b in logical)
        cols.append(ket(physical))
    return np.array(cols).T


def build_dfs(n_blocks: int = 1) -> CodeSpace:
    """Decoherence-free subspace with ``n_blocks`` logical qubits in pairs of physical qubits.

    Logical operators are stored as ``"X1", "Y1", "Z1", ...`` and the
    inter-block coupling ``Z_{2i} Z_{2i+1}`` as ``"ZZ1"`` (blocks 1 and 2).
    """
    if n_blocks < 1:
        raise ValueError("n_blocks must be at least 1")
    n = 2 * n_blocks
    ops: dict[str, np.ndarray] = {}
    for i in range(1, n_blocks + 1):
        a, b = 2 * i - 1, 2 * i
        xbar = (embed({a: "X", b: "X"}, n) + embed({a: "Y", b: "Y"}, n)) / 2
        zbar = (embed({a: "Z"}, n) - embed({b: "Z"}, n)) / 2
        ops[f"X{i}"] = xbar
        ops[f"Z{i}"] = zbar
        ops[f"Y{i}"] = -0.5j * commutator(zbar, xbar)
    for i in range(1, n_blocks):
        ops[f"ZZ{i}"] = embed({2 * i: "Z", 2 * i + 1: "Z"}, n)
    collective = [embed({2 * i - 1: "Z"}, n) + embed({2 * i: "Z"}, n) for i in range(1, n_blocks + 1)]
    return CodeSpace(n, n_blocks, _dfs_block_states(n_blocks), ops, collective)


def collective_dephasing_operator(n: int) -> np.ndarray:
    """``S_z = sum_i Z_i`` on ``n`` qubits."""
    return sum(embed({i: "Z"}, n) for i in range(1, n + 1))


def leakage_basis() -> list[np.ndarray]:
    """The eight two-qubit operators that couple the DFS to its complement."""
    return [pauli(lab) for lab in ("XI", "IX", "YI", "IY", "XZ", "ZX", "YZ", "ZY")]


def dfs_y_relations(code: CodeSpace | None = None) -> dict[str, complex]:
    """Scalars relating alternative ``Ybar`` expressions to the stored ``Y1``.

    Returns ``{"i[Z,X]": c1, "(XY-YX)/2": c2}`` with ``expr = c * Y1``.
    """
    code = code or build_dfs(1)
    y = code.logical_ops["Y1"]
    x, z = code.logical_ops["X1"], code.logical_ops["Z1"]
    n = code.n_physical
    alt = {
        "i[Z,X]": 1j * commutator(z, x),
        "(XY-YX)/2": (embed({1: "X", 2: "Y"}, n) - embed({1: "Y", 2: "X"}, n)) / 2,
    }
    return {k: hs_inner(y, v) / hs_inner(y, y) for k, v in alt.items()}


@dataclass
class ErrorClassification:
    """Hilbert-Schmidt orthogonal split of an operator by its action on a code.

    * invariant: projection of the code-trivial sector onto
      ``span{I, invariant_ops}`` (no effect on encoded information);
    * outside: rest of the code-trivial sector, acting only outside the
      code or as a multiple of the identity on it;
    * logical: traceless part of ``P e P``;
    * leakage: ``P e Q + Q e P``.
    """

    invariant_part: np.ndarray
    outside_part: np.ndarray
    logical_part: np.ndarray
    leakage_part: np.ndarray

    @property
    def parts(self) -> dict[str, np.ndarray]:
        return {
            "invariant": self.invariant_part,
            "outside": self.outside_part,
            "logical": self.logical_part,
            "leakage": self.leakage_part,
        }

    @property
    def norms(self) -> dict[str, float]:
        return {k: hs_norm(v) for k, v in self.parts.items()}

    def kind(self, tol: float = 1e-10) -> str | None:
        """Name of the single nonzero class, or None if mixed."""
        nz = [k for k, v in self.norms.items() if v > tol]
        return nz[0] if len(nz) == 1 else None


def _invariant_frame(code: CodeSpace) -> list[np.ndarray]:
    p = code.projector
    q = np.eye(code.dim) - p
    k = 2**code.n_logical
    frame: list[np.ndarray] = []
    for op in [np.eye(code.dim, dtype=complex)] + list(code.invariant_ops):
        on_code = code.restrict(op)
        off = on_code - np.trace(on_code) / k * np.eye(k)
        if np.max(np.abs(p @ op @ q)) > TOL or np.max(np.abs(off)) > TOL:
            raise ValueError("invariant operators must act trivially on the code space")
        v = np.asarray(op, dtype=complex)
        for f in frame:
            v = v - hs_inner(f, v) * f
        nv = hs_norm(v)
        if nv > 1e-12:
            frame.append(v / nv)
    return frame


def classify_error(e: np.ndarray, code: CodeSpace) -> ErrorClassification:
    """Split ``e`` into invariant, outside, logical and leakage parts."""
    e = np.asarray(e, dtype=complex)
    if e.shape != (code.dim, code.dim):
        raise ValueError(f"operator shape {e.shape} does not match code dimension {code.dim}")
    p = code.projector
    q = np.eye(code.dim) - p
    k = 2**code.n_logical
    leakage = p @ e @ q + q @ e @ p
    pep = p @ e @ p
    logical = pep - np.trace(code.restrict(e)) / k * p
    trivial = e - leakage - logical
    invariant = sum(hs_inner(f, trivial) * f for f in _invariant_frame(code))
    return ErrorClassification(invariant, trivial - invariant, logical, leakage)


@dataclass
class Theorem1Report:
    group_size: int
    code_residual: float
    leakage_residual: float
    separates_blocks: bool
    passed: bool


def theorem1_check(
    code: CodeSpace,
    logical_gate_generators: Sequence[np.ndarray],
    trials: int = 50,
    seed=0,
    tol: float = 1e-10,
    hamiltonians: Sequence[np.ndarray] | None = None,
    max_group_size: int = 256,
) -> Theorem1Report:
    """Symmetrize random Hermitian operators over the closed logical gate group.

    Checks that each symmetrized operator is proportional to the identity on
    the code space and has no leakage block. ``hamiltonians`` replaces the
    random draws when given.
    """
    for u in logical_gate_generators:
        if code.leaks(u):
            raise ValueError("generator does not preserve the code space")
    g = close_group(logical_gate_generators, max_size=max_group_size)
    if hamiltonians is None:
        rng = _rng(seed)
        hamiltonians = [random_hermitian(code.dim, rng) for _ in range(trials)]
    p = code.projector
    q = np.eye(code.dim) - p
    k = 2**code.n_logical
    code_res = leak_res = 0.0
    for h in hamiltonians:
        hs = symmetrize(h, g)
        block = code.restrict(hs)
        code_res = max(code_res, float(np.max(np.abs(block - np.trace(block) / k * np.eye(k)))))
        leak_res = max(leak_res, float(np.max(np.abs(p @ hs @ q))))
    return Theorem1Report(
        len(g), code_res, leak_res, _separates_blocks(g, code), code_res < tol and leak_res < tol
    )


def _separates_blocks(g: PulseGroup, code: CodeSpace) -> bool:
    # some element acts as c1 on the code and c2 != c1 on its complement
    v = code.isometry
    p = code.projector
    q = np.eye(code.dim) - p
    k = v.shape[1]
    for u in g:
        on = code.restrict(u)
        c1 = np.trace(on) / k
        if np.max(np.abs(on - c1 * np.eye(k))) > 1e-8:
            continue
        rest = q @ u @ q
        dq = code.dim - k
        if dq == 0:
            continue
        c2 = np.trace(rest) / dq
        if np.max(np.abs(rest - c2 * q)) < 1e-8 and abs(c1 - c2) > 1e-8:
            return True
    return False


# --- stabilizer codes ---------------------------------------------------------


@dataclass
class StabilizerCode:
    """Stabilizer code with syndrome table and a stabilizer-derived pulse set."""

    n_physical: int
    stabilizer_generators: list[PauliString]
    logical_ops: dict[str, PauliString]
    codewords: list[np.ndarray]
    syndrome_table: dict[tuple[int, ...], PauliString]
    bb_pulses: list[PauliString] = field(default_factory=list)

    def syndrome_of(self, error: PauliString) -> tuple[int, ...]:
        """Syndrome of a Pauli error: -1 where it anticommutes with a generator."""
        return tuple(1 if s.commutes_with(error) else -1 for s in self.stabilizer_generators)

    def detects(self, error: PauliString) -> bool:
        return any(v == -1 for v in self.syndrome_of(error))

    def code_space(self) -> CodeSpace:
        v = np.array(self.codewords).T
        ops = {k: p.to_matrix() for k, p in self.logical_ops.items()}
        return CodeSpace(self.n_physical, 1, v, ops)

    def pulse_group(self) -> PulseGroup:
        return close_group([p.to_matrix() for p in self.bb_pulses])

    def measure_syndrome(
        self, rho: np.ndarray, rng: np.random.Generator, d_env: int = 1
    ) -> tuple[tuple[int, ...], np.ndarray]:
        """Sequential projective measurement of the generators with Born-rule sampling."""
        eye_env = np.eye(d_env)
        d = 2**self.n_physical
        outcomes = []
        for s in self.stabilizer_generators:
            sm = np.kron(s.to_matrix(), eye_env)
            plus = (np.eye(d * d_env) + sm) / 2
            p_plus = float(np.clip(np.real(np.trace(plus @ rho)), 0.0, 1.0))
            if rng.random() < p_plus:
                outcomes.append(1)
                proj, prob = plus, p_plus
            else:
                outcomes.append(-1)
                proj, prob = np.eye(d * d_env) - plus, 1.0 - p_plus
            rho = proj @ rho @ proj / prob
        return tuple(outcomes), rho

    def recover(self, rho: np.ndarray, syndrome: tuple[int, ...], d_env: int = 1) -> np.ndarray:
        r = np.kron(self.syndrome_table[syndrome].to_matrix(), np.eye(d_env))
        return r @ rho @ dagger(r)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_physical": self.n_physical,
                "stabilizer_generators": [str(s) for s in self.stabilizer_generators],
                "logical_ops": {k: str(v) for k, v in self.logical_ops.items()},
                "codewords": [[[float(z.real), float(z.imag)] for z in c] for c in self.codewords],
                "syndrome_table": {"".join("+" if v == 1 else "-" for v in k): str(r) for k, r in self.syndrome_table.items()},
                "bb_pulses": [str(p) for p in self.bb_pulses],
            }
        )


def build_bitflip_code() -> StabilizerCode:
    """Three-qubit bit-flip code with the phase-flip stabilizers as decoupling pulses."""
    gens = [PauliString("ZZI"), PauliString("IZZ")]
    logical = {"X": PauliString("XXX"), "Y": PauliString("YYY", -1), "Z": PauliString("ZZZ")}
    table = {
        (1, 1): PauliString("III"),
        (-1, 1): PauliString("XII"),
        (-1, -1): PauliString("IXI"),
        (1, -1): PauliString("IIX"),
    }
    pulses = [PauliString("XXI"), PauliString("IXX"), PauliString("XIX")]
    return StabilizerCode(3, gens, logical, [ket("000"), ket("111")], table, pulses)


WINDOWS = ("free", "measurement", "recovery")


@dataclass
class QECCSchedule:
    """Timing of one error-correction round with interleaved decoupling.

    ``pulse_windows`` lists the phases of the round during which pulses may
    fire. Pulses anticommute with the recovery operations, so ``"recovery"``
    is rejected.
    """

    delta_t: float
    cycles_per_round: int = 1
    pulse_windows: tuple[str, ...] = ("free", "measurement")

    def __post_init__(self):
        if not self.delta_t > 0:
            raise ValueError("delta_t must be positive")
        if self.cycles_per_round < 1:
            raise ValueError("cycles_per_round must be at least 1")
        bad = set(self.pulse_windows) - set(WINDOWS)
        if bad:
            raise ValueError(f"unknown pulse windows {sorted(bad)}")
        if "recovery" in self.pulse_windows:
            raise ValueError("decoupling pulses cannot be applied during recovery")


@dataclass
class QECCTrace:
    fidelity_bb: np.ndarray
    fidelity_nobb: np.ndarray
    syndromes_bb: list[tuple[int, ...]]
    syndromes_nobb: list[tuple[int, ...]]


def qecc_bb_cycle(
    code: StabilizerCode,
    noise: np.ndarray,
    schedule: QECCSchedule,
    n_rounds: int,
    seed=0,
    logical_state: np.ndarray | None = None,
    env_state: np.ndarray | None = None,
) -> QECCTrace:
    """Rounds of {evolution, syndrome measurement, recovery} with and without stabilizer pulses.

    Both branches evolve for the same physical time per round and draw
    measurement outcomes from identically seeded generators. Fidelity is
    that of the reduced code state with the encoded ``logical_state``
    (default ``|+_L>``) after each round.
    """
    noise = np.asarray(noise, dtype=complex)
    d = 2**code.n_physical
    if noise.shape[0] % d:
        raise ValueError("noise Hamiltonian does not contain the code qubits")
    d_env = noise.shape[0] // d
    cs = code.code_space()
    psi = np.array([1, 1], dtype=complex) / np.sqrt(2) if logical_state is None else np.asarray(logical_state)
    psi_phys = cs.encode(psi)
    env = np.eye(d_env, dtype=complex) / d_env if env_state is None else np.asarray(env_state, dtype=complex)
    rho0 = np.kron(np.outer(psi_phys, psi_phys.conj()), env)

    g = code.pulse_group()
    sched = CycleSchedule(schedule.delta_t)
    t_round = schedule.cycles_per_round * sched.cycle_time(g)
    u_bb = np.linalg.matrix_power(cycle_propagator(noise, sched, g), schedule.cycles_per_round)
    u_free = expm_hamiltonian(noise, t_round)

    def run(u, rng):
        rho = rho0
        fids, syns = [], []
        for _ in range(n_rounds):
            rho = u @ rho @ dagger(u)
            syn, rho = code.measure_syndrome(rho, rng, d_env)
            rho = code.recover(rho, syn, d_env)
            fids.append(state_fidelity(trace_out_last(rho, d), psi_phys))
            syns.append(syn)
        return np.array(fids), syns

    use_pulses = "free" in schedule.pulse_windows
    f_bb, s_bb = run(u_bb if use_pulses else u_free, _rng(seed))
    f_no, s_no = run(u_free, _rng(seed))
    return QECCTrace(f_bb, f_no, s_bb, s_no)


def hybrid_noise_hamiltonian(
    strength_x: float,
    strength_z: float,
    env_frequency: float,
    seed=0,
    n_physical: int = 3,
) -> np.ndarray:
    """Seeded random single-qubit bit- and phase-flip couplings to a one-qubit environment.

    ``sum_i a_i X_i (x) B_i + b_i Z_i (x) B'_i + env_frequency * I (x) Z_env`` with
    ``a_i, b_i`` uniform in ``[0.5, 1] * strength`` and ``B, B'`` random unit
    combinations of environment Paulis.
    """
    rng = _rng(seed)
    n = n_physical
    d = 2**n

    def env_op():
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        return v[0] * pauli("X") + v[1] * pauli("Y") + v[2] * pauli("Z")

    h = env_frequency * np.kron(np.eye(d), pauli("Z"))
    for i in range(1, n + 1):
        a = strength_x * rng.uniform(0.5, 1.0)
        b = strength_z * rng.uniform(0.5, 1.0)
        h = h + a * np.kron(embed({i: "X"}, n), env_op()) + b * np.kron(embed({i: "Z"}, n), env_op())
    return h
