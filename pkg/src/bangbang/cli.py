"""
Batch runner for the decoupling scenarios.

A run is described by one JSON document::

    {"scenario": "dot_budget", "seed": 0, "params": {"T2_ns": 1.0, "gate_ps": 50.0}}

Physical parameters carry their unit in the name (``_ns``, ``_ps``,
``_rad``, ``_rad_per_ns``). Energies are angular frequencies in rad/ns so
that ``H * t`` is dimensionless for ``t`` in ns.

Usage::

    bangbang run config.json [--seed N] [--out DIR]
    bangbang list-scenarios

Exit codes: 0 on success, 2 for configuration errors (nothing is written),
1 for failures during the simulation (``results.json`` carries the error).
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .decoupling import (
    CycleSchedule,
    PulseGroup,
    close_group,
    free_trajectory,
    scaling_exponent,
    simulate_cycle,
    symmetrize,
)
from .empirical import BBProblem, PulseFamily, chi_tilde, control_loop, distance, solve
from .encodings import (
    QECCSchedule,
    build_bitflip_code,
    build_dfs,
    collective_dephasing_operator,
    hybrid_noise_hamiltonian,
    leakage_basis,
    qecc_bb_cycle,
    theorem1_check,
)
from .noise import dot_budget
from .operators import (
    _rng,
    anticommutator,
    commutator,
    dagger,
    embed,
    expand_in_basis,
    expm_hamiltonian,
    pauli,
    pauli_basis,
    random_unitary,
    random_density_matrix,
    random_hermitian,
    random_kraus,
    state_fidelity,
    trace_out_last,
)
from .process import Channel, apply_chi, tomography


class ConfigError(ValueError):
    """Invalid configuration; ``line`` points into the config file."""

    def __init__(self, message: str, line: int = 1):
        super().__init__(message)
        self.line = line


@dataclass
class Param:
    default: Any
    kind: type
    help: str
    minimum: float | None = None
    strict: bool = False


@dataclass
class Result:
    metrics: dict
    curves: dict[str, tuple[list[str], list[list]]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


@dataclass
class Scenario:
    name: str
    summary: str
    params: dict[str, Param]
    run: Callable[[dict, int], Result]
    check: Callable[[dict], None] | None = None


# --- scenarios ------------------------------------------------------------------


def _dfs_bath_hamiltonian(leak: float, dephase: float, bath: float) -> np.ndarray:
    """DFS pair plus one bath qubit: ``leak X1 Xb + dephase (Z1+Z2) Zb + bath Zb``."""
    n = 3
    return (
        leak * embed({1: "X", 3: "X"}, n)
        + dephase * (embed({1: "Z", 3: "Z"}, n) + embed({2: "Z", 3: "Z"}, n))
        + bath * embed({3: "Z"}, n)
    )


def _parity_group() -> PulseGroup:
    code = build_dfs(1)
    return close_group([expm_hamiltonian(code.logical_ops["X1"], math.pi)])


def run_dfs_leakage(p: dict, seed: int) -> Result:
    code = build_dfs(1)
    kick = expm_hamiltonian(code.logical_ops["X1"], math.pi)
    sz = collective_dephasing_operator(2)
    anti = max(float(np.linalg.norm(anticommutator(kick, e))) for e in leakage_basis())
    comm = float(np.linalg.norm(commutator(kick, sz)))

    # immunity: collective dephasing coupled to a random bath, stepped trajectory
    rng = _rng(seed)
    h_imm = p["dephasing_rad_per_ns"] * np.kron(sz, random_hermitian(2, rng)) + np.kron(
        np.eye(4), random_hermitian(2, rng)
    )
    psi = code.encode(np.array([1, 1j]) / math.sqrt(2))
    rho = np.kron(np.outer(psi, psi.conj()), random_density_matrix(2, rng))
    step = expm_hamiltonian(h_imm, p["delta_t_ns"])
    worst = 0.0
    for _ in range(p["immunity_steps"]):
        rho = step @ rho @ dagger(step)
        worst = max(worst, abs(1.0 - state_fidelity(trace_out_last(rho, 4), psi)))

    # leakage suppression by the parity kick
    h = _dfs_bath_hamiltonian(p["leak_rad_per_ns"], p["dephasing_rad_per_ns"], p["bath_rad_per_ns"])
    g = _parity_group()
    plus = code.encode(np.array([1, 1]) / math.sqrt(2))
    rho0 = np.kron(np.outer(plus, plus.conj()), np.eye(2) / 2)
    sched = CycleSchedule(p["delta_t_ns"])
    traj_bb = simulate_cycle(h, sched, g, rho0, p["n_cycles"])
    traj_free = free_trajectory(h, rho0, traj_bb.times)
    f_bb = traj_bb.fidelities(plus, 4)
    f_free = traj_free.fidelities(plus, 4)
    margin = float(np.min(f_bb - f_free))
    warnings = []
    if margin < -1e-12:
        warnings.append("decoupled fidelity below free fidelity")
    rows = [[t, a, b] for t, a, b in zip(traj_bb.times, f_bb, f_free)]
    return Result(
        {
            "leakage_anticommutator_max": anti,
            "dephasing_commutator": comm,
            "immunity_max_deviation": worst,
            "min_fidelity_margin": margin,
            "final_fidelity_bb": float(f_bb[-1]),
            "final_fidelity_nobb": float(f_free[-1]),
            "cycle_time_ns": sched.cycle_time(g),
        },
        {"fidelity": (["t_ns", "fidelity_bb", "fidelity_nobb"], rows)},
        warnings,
    )


def run_parity_kick_scaling(p: dict, seed: int) -> Result:
    h = _dfs_bath_hamiltonian(p["leak_rad_per_ns"], 0.0, p["bath_rad_per_ns"])
    code = build_dfs(1)
    zero = code.isometry[:, 0]
    rho0 = np.kron(np.outer(zero, zero.conj()), np.eye(2) / 2)
    dts = np.geomspace(p["delta_t_min_ns"], p["delta_t_max_ns"], p["n_points"])
    fit = scaling_exponent(
        h, dts, _parity_group(), rho0, p["total_time_ns"], pulse_width=p["pulse_width_ps"] * 1e-3
    )
    rows = [[t, e] for t, e in zip(fit.cycle_times, fit.infidelities)]
    return Result(
        {"slope": fit.slope, "intercept": fit.intercept, "fit_residual": fit.residual},
        {"scaling": (["cycle_time_ns", "infidelity"], rows)},
        list(fit.warnings),
    )


def run_theorem1(p: dict, seed: int) -> Result:
    code = build_dfs(1)
    gens = [
        expm_hamiltonian(code.logical_ops["X1"], math.pi / 2),
        expm_hamiltonian(code.logical_ops["Y1"], math.pi / 2),
    ]
    report = theorem1_check(code, gens, trials=p["trials"], seed=seed)
    control = theorem1_check(code, [np.eye(4)], trials=p["trials"], seed=seed)

    # pulse-averaged generator against direct symmetrization
    rng = _rng(seed)
    basis = pauli_basis(2)
    groups = [
        close_group(gens),
        _parity_group(),
        close_group([pauli("XI"), pauli("ZI"), pauli("IX"), pauli("IZ")]),
        close_group([pauli("XX"), pauli("ZZ")]),
    ]
    cross = 0.0
    for k in range(p["trials"]):
        # a random change of frame keeps the group closed
        v = random_unitary(4, rng)
        group = close_group([dagger(v) @ u @ v for u in groups[k % len(groups)].elements])
        h = random_hermitian(4, rng)
        coeffs = expand_in_basis(h, basis).real[1:]
        direct = expand_in_basis(symmetrize(h, group), basis).real[1:]
        cross = max(cross, float(np.max(np.abs(chi_tilde(coeffs, group, basis) - direct))))
    warnings = [] if report.passed else ["decoupling check failed"]
    if control.passed:
        warnings.append("identity control unexpectedly passed")
    return Result(
        {
            "group_size": report.group_size,
            "code_residual": report.code_residual,
            "leakage_residual": report.leakage_residual,
            "separates_blocks": report.separates_blocks,
            "passed": report.passed,
            "identity_control_passed": control.passed,
            "identity_control_code_residual": control.code_residual,
            "cross_module_residual": cross,
        },
        warnings=warnings,
    )


def _qecc_schedule(p: dict) -> QECCSchedule:
    return QECCSchedule(p["delta_t_ns"], p["cycles_per_round"], tuple(p["pulse_windows"]))


def run_qecc_hybrid(p: dict, seed: int) -> Result:
    code = build_bitflip_code()
    sched = _qecc_schedule(p)
    rows, wins = [], 0
    for trial in range(p["n_trials"]):
        s = seed * 100_003 + trial
        h = hybrid_noise_hamiltonian(p["strength_x_rad_per_ns"], p["strength_z_rad_per_ns"], p["env_rad_per_ns"], s)
        tr = qecc_bb_cycle(code, h, sched, p["n_rounds"], seed=s)
        fb, fn = float(tr.fidelity_bb[-1]), float(tr.fidelity_nobb[-1])
        wins += fb > fn
        rows.append([trial, fb, fn])
    frac = wins / p["n_trials"]
    warnings = [] if frac >= 0.95 else ["pulsed protocol won fewer than 95% of trials"]
    return Result(
        {
            "win_fraction": frac,
            "mean_fidelity_bb": float(np.mean([r[1] for r in rows])),
            "mean_fidelity_nobb": float(np.mean([r[2] for r in rows])),
        },
        {"trials": (["trial", "fidelity_bb", "fidelity_nobb"], rows)},
        warnings,
    )


def _leaky_plant(strength: float):
    h = strength * embed({1: "X"}, 2)

    def plant(tau):
        return Channel.unitary(expm_hamiltonian(h, tau))

    return plant


def _grid_oracle(problem: BBProblem) -> tuple[float, tuple[float, ...]]:
    """Brute-force search by explicit averaging of the generator."""
    basis = problem.basis
    h = np.tensordot(np.concatenate([[0.0], problem.chi_bar]), basis.elements, axes=1)
    fam = problem.pulse_family[0]
    best = None
    for m in range(problem.max_pulses):
        for angles in itertools.combinations_with_replacement(fam.angles, m):
            us = [np.eye(basis.dim)] + [fam.pulse(a) for a in angles]
            avg = sum(dagger(u) @ h @ u for u in us) / len(us)
            d = distance(expand_in_basis(avg, basis).real[1:], problem.chi_hat)
            key = (d, m, angles)
            if best is None or d < best[0] - 1e-12 or (abs(d - best[0]) <= 1e-12 and key[1:] < best[1:]):
                best = key
    return best[0], best[2]


def run_empirical_bb(p: dict, seed: int) -> Result:
    code = build_dfs(1)
    basis = pauli_basis(2)
    zero = np.zeros(len(basis) - 1)
    lo, hi = p["angle_low_rad"], p["angle_high_rad"]
    fam = PulseFamily(code.logical_ops["X1"], (lo, hi), continuous=True, name="X")
    template = BBProblem(zero, zero, basis, [fam], max_pulses=p["max_pulses"])
    sol, history = control_loop(
        _leaky_plant(p["leak_rad_per_ns"]), template, rounds=p["rounds"], noise=p["tomography_noise"], seed=seed
    )
    angles = [a for _, a in sol.choices]
    err = min((abs((a - math.pi + math.pi) % (2 * math.pi) - math.pi) for a in angles), default=float("nan"))

    # discrete grid: search result against brute force
    grid = tuple(2 * math.pi * k / p["grid_points"] for k in range(p["grid_points"]))
    coeffs = expand_in_basis(p["leak_rad_per_ns"] * embed({1: "X"}, 2), basis).real[1:]
    gprob = BBProblem(coeffs, zero, basis, [PulseFamily(code.logical_ops["X1"], grid)], max_pulses=p["max_pulses"])
    gsol = solve(gprob, seed=seed)
    odist, oangles = _grid_oracle(gprob)
    match = abs(gsol.distance - odist) <= 1e-12 and tuple(a for _, a in gsol.choices) == oangles

    warnings = []
    if sol.distance >= p["tolerance"]:
        warnings.append("loop did not reach the tolerance")
    if not match:
        warnings.append("grid search disagrees with brute force")
    rows = [[k, h.measured_distance, int(h.accepted), h.n_pulses] for k, h in enumerate(history)]
    return Result(
        {
            "final_distance": sol.distance,
            "converged": sol.distance < p["tolerance"],
            "rounds_used": len(history),
            "pulse_angles_rad": angles,
            "angle_error_rad": err,
            "grid_distance": gsol.distance,
            "oracle_distance": odist,
            "grid_matches_oracle": match,
        },
        {"loop": (["round", "measured_distance", "accepted", "set_size"], rows)},
        warnings,
    )


def run_dot_budget(p: dict, seed: int) -> Result:
    values = p["T2_ns"] if isinstance(p["T2_ns"], list) else [p["T2_ns"]]
    rows = []
    for t2 in values:
        b = dot_budget(t2 * 1e-9, p["gate_ps"] * 1e-12, p["c_of_T"])
        rows.append([t2, b.tau_c * 1e9, b.n_pulses, b.correction])
    if isinstance(p["T2_ns"], list):
        metrics = {"n_pulses": [r[2] for r in rows], "correction": [r[3] for r in rows]}
    else:
        metrics = {"n_pulses": rows[0][2], "correction": rows[0][3]}
    return Result(metrics, {"budget": (["T2_ns", "tau_c_ns", "n_pulses", "correction"], rows)})


def run_tomography_roundtrip(p: dict, seed: int) -> Result:
    rng = _rng(seed)
    rows = []
    for k in range(p["n_channels"]):
        n = 1 + k % p["max_qubits"]
        d = 2**n
        ch = Channel(kraus=random_kraus(d, 1 + int(rng.integers(d * d)), rng))
        chi = tomography(ch, pauli_basis(n), noise=p["noise"], seed=rng)
        err = 0.0
        for _ in range(p["n_states"]):
            rho = random_density_matrix(d, rng)
            err = max(err, float(np.max(np.abs(apply_chi(chi, rho) - ch(rho)))))
        herm = float(np.max(np.abs(chi.chi - dagger(chi.chi))))
        rows.append([k, n, err, chi.min_eigenvalue(), herm])
    return Result(
        {
            "max_action_error": max(r[2] for r in rows),
            "min_chi_eigenvalue": min(r[3] for r in rows),
            "max_hermiticity_error": max(r[4] for r in rows),
        },
        {"channels": (["channel", "n_qubits", "action_error", "min_eigenvalue", "hermiticity_error"], rows)},
    )


def _check_qecc(p: dict) -> None:
    _qecc_schedule(p)


def _check_scaling(p: dict) -> None:
    if p["n_points"] < 4:
        raise ValueError("n_points must be at least 4")
    if p["delta_t_max_ns"] < 10 * p["delta_t_min_ns"] * (1 - 1e-9):
        raise ValueError("delta_t range must span a decade")


SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in [
        Scenario(
            "dfs_leakage",
            "parity kick on the two-qubit DFS: leakage removal and dephasing immunity",
            {
                "leak_rad_per_ns": Param(1.0, float, "X1 (x) Xb leakage coupling"),
                "dephasing_rad_per_ns": Param(0.5, float, "collective Z coupling"),
                "bath_rad_per_ns": Param(1.0, float, "bath self-energy"),
                "delta_t_ns": Param(0.01, float, "free time per pulse interval", 0.0, strict=True),
                "n_cycles": Param(50, int, "cycles in the fidelity curve", 1),
                "immunity_steps": Param(1000, int, "steps of the dephasing-only trajectory", 1),
            },
            run_dfs_leakage,
        ),
        Scenario(
            "parity_kick_scaling",
            "power law of the residual leakage error against the cycle time",
            {
                "leak_rad_per_ns": Param(1.0, float, "X1 (x) Xb leakage coupling"),
                "bath_rad_per_ns": Param(1.0, float, "bath self-energy"),
                "delta_t_min_ns": Param(0.001, float, "smallest pulse interval", 0.0, strict=True),
                "delta_t_max_ns": Param(0.01, float, "largest pulse interval", 0.0, strict=True),
                "n_points": Param(5, int, "sweep points (log spaced)", 4),
                "total_time_ns": Param(1.0, float, "storage time", 0.0, strict=True),
                "pulse_width_ps": Param(0.0, float, "finite pulse width", 0.0),
            },
            run_parity_kick_scaling,
            _check_scaling,
        ),
        Scenario(
            "theorem1",
            "symmetrization over the logical gate group of the DFS",
            {"trials": Param(50, int, "random Hermitian operators", 1)},
            run_theorem1,
        ),
        Scenario(
            "qecc_hybrid",
            "bit-flip code with stabilizer pulses against simultaneous X and Z noise",
            {
                "n_trials": Param(100, int, "seeded noise realizations", 1),
                "n_rounds": Param(1, int, "correction rounds per trial", 1),
                "delta_t_ns": Param(0.01, float, "free time per pulse interval", 0.0, strict=True),
                "cycles_per_round": Param(25, int, "decoupling cycles per round", 1),
                "strength_x_rad_per_ns": Param(0.05, float, "bit-flip coupling scale"),
                "strength_z_rad_per_ns": Param(0.05, float, "phase-flip coupling scale"),
                "env_rad_per_ns": Param(1.0, float, "environment self-energy"),
                "pulse_windows": Param(["free", "measurement"], list, "round phases that may carry pulses"),
            },
            run_qecc_hybrid,
            _check_qecc,
        ),
        Scenario(
            "empirical_bb",
            "closed-loop pulse search from simulated tomography",
            {
                "leak_rad_per_ns": Param(0.3, float, "X1 leakage generator of the plant"),
                "rounds": Param(3, int, "control-loop rounds", 1),
                "max_pulses": Param(2, int, "largest pulse set, identity included", 1),
                "angle_low_rad": Param(0.0, float, "lower end of the pulse angle range"),
                "angle_high_rad": Param(2 * math.pi, float, "upper end of the pulse angle range"),
                "grid_points": Param(16, int, "angles in the discrete comparison grid", 1),
                "tomography_noise": Param(0.0, float, "Gaussian noise on reconstructed maps", 0.0),
                "tolerance": Param(1e-6, float, "target distance", 0.0, strict=True),
            },
            run_empirical_bb,
        ),
        Scenario(
            "dot_budget",
            "pulse count and error correction size for a quantum-dot qubit",
            {
                "T2_ns": Param([1.0, 100.0], float, "dephasing time; a number or a list", 0.0, strict=True),
                "gate_ps": Param(50.0, float, "gate time", 0.0, strict=True),
                "c_of_T": Param(1.0, float, "ratio T2 / tau_c", 0.0, strict=True),
            },
            run_dot_budget,
        ),
        Scenario(
            "tomography_roundtrip",
            "reconstruct random channels through chi and compare their action",
            {
                "n_channels": Param(20, int, "random channels", 1),
                "n_states": Param(20, int, "test states per channel", 1),
                "max_qubits": Param(2, int, "channels alternate between 1..max_qubits", 1),
                "noise": Param(0.0, float, "Gaussian noise on reconstructed maps", 0.0),
            },
            run_tomography_roundtrip,
        ),
    ]
}


# --- configuration ----------------------------------------------------------------


def _line_of(text: str, key: str) -> int:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else 1


def _coerce(name: str, spec: Param, value, text: str):
    def bad(why):
        return ConfigError(f"parameter {name!r}: {why}", _line_of(text, name))

    def scalar(v):
        if isinstance(v, bool):
            raise bad("booleans are not accepted")
        if spec.kind is int:
            if not isinstance(v, int):
                raise bad("expected an integer")
        elif spec.kind is float:
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise bad("expected a finite number")
            v = float(v)
        if spec.minimum is not None and (v < spec.minimum or (spec.strict and v == spec.minimum)):
            raise bad(f"must be {'greater than' if spec.strict else 'at least'} {spec.minimum}")
        return v

    if spec.kind is list:
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise bad("expected a list of strings")
        return list(value)
    if isinstance(value, list) and isinstance(spec.default, list):
        if not value:
            raise bad("empty list")
        return [scalar(v) for v in value]
    return scalar(value)


def load_config(path: str | Path, seed: int | None = None) -> tuple[Scenario, dict, int, str | None]:
    """Parse and validate a config file; raises ``ConfigError``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - {"scenario", "params", "seed", "output_dir"}
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown top-level key {key!r}", _line_of(text, key))
    name = data.get("scenario")
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}", _line_of(text, "scenario"))
    scenario = SCENARIOS[name]
    raw = data.get("params", {})
    if not isinstance(raw, dict):
        raise ConfigError("params must be an object", _line_of(text, "params"))
    for key in raw:
        if key not in scenario.params:
            raise ConfigError(f"unknown parameter {key!r} for {name}", _line_of(text, key))
    params = {k: _coerce(k, spec, raw.get(k, spec.default), text) for k, spec in scenario.params.items()}
    if seed is None:
        seed = data.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            raise ConfigError("seed must be a non-negative integer", _line_of(text, "seed"))
    if scenario.check is not None:
        try:
            scenario.check(params)
        except ValueError as exc:
            raise ConfigError(str(exc), _line_of(text, "params")) from None
    out = data.get("output_dir")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output_dir must be a string", _line_of(text, "output_dir"))
    return scenario, params, seed, out


# --- output ---------------------------------------------------------------------


def _plain(x):
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_outputs(out_dir: Path, payload: dict, curves: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "results.json").write_text(json.dumps(_plain(payload), indent=2) + "\n")
    for name, (header, rows) in curves.items():
        with open(out_dir / f"{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_cell(v) for v in r])


def run(config_path: str | Path, seed: int | None = None, out: str | Path | None = None) -> int:
    """Run one scenario; returns the process exit code."""
    try:
        scenario, params, seed, out_cfg = load_config(config_path, seed)
    except ConfigError as exc:
        print(f"{config_path}:{exc.line}: error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(out if out is not None else (out_cfg or "results"))
    payload = {"scenario": scenario.name, "seed": seed, "params": params}
    try:
        res = scenario.run(params, seed)
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        payload.update(metrics={}, warnings=[], error={"type": type(exc).__name__, "message": str(exc)})
        write_outputs(out_dir, payload, {})
        print(f"error: {exc}", file=sys.stderr)
        return 1
    payload.update(metrics=res.metrics, warnings=res.warnings)
    write_outputs(out_dir, payload, res.curves)
    return 0


def list_scenarios() -> str:
    lines = []
    for s in SCENARIOS.values():
        lines.append(f"{s.name}: {s.summary}")
        for k, spec in s.params.items():
            lines.append(f"    {k:<24} default={json.dumps(spec.default):<24} {spec.help}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bangbang", description="Run decoupling scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the scenario described by a JSON config")
    p_run.add_argument("config", help="path to the JSON config")
    p_run.add_argument("--seed", type=int, default=None, help="override the seed in the config")
    p_run.add_argument("--out", default=None, help="output directory (default: config output_dir or ./results)")
    sub.add_parser("list-scenarios", help="show scenarios and their parameters")
    args = parser.parse_args(argv)
    if args.command == "list-scenarios":
        sys.stdout.write(list_scenarios())
        return 0
    return run(args.config, args.seed, args.out)


if __name__ == "__main__":
    sys.exit(main())
