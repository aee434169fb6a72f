"""
Empirical determination of decoupling pulses from process tomography.

A measured first-order generator ``chi_bar`` (coefficients over the
non-identity basis elements) is mapped by a pulse set ``{U_k}`` to

    chi_tilde_b = (1/N) sum_k sum_a chi_bar_a R[k][a, b],

with ``R`` the adjoint matrices of the pulses. ``solve`` searches the pulse
sets realizable with an available family of pulse Hamiltonians for the one
whose ``chi_tilde`` is closest to a target ``chi_hat`` (zero for storage).
``control_loop`` closes the loop around a simulated plant.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .decoupling import PulseGroup, adjoint_matrix, adjoint_rep
from .operators import (
    OperatorBasis,
    _rng,
    dagger,
    expand_in_basis,
    expm_hamiltonian,
    pauli_basis,
)
from .process import short_time_generator, tomography

EXHAUSTIVE_CAP = 100_000


def chi_tilde(chi_bar: np.ndarray, g: PulseGroup, basis: OperatorBasis) -> np.ndarray:
    """Pulse-averaged generator coefficients over the non-identity basis elements."""
    chi_bar = np.asarray(chi_bar, dtype=float)
    if chi_bar.shape != (len(basis) - 1,):
        raise ValueError(f"chi_bar has length {chi_bar.size}, basis needs {len(basis) - 1}")
    rep = adjoint_rep(g, basis)
    mean_r = rep.matrices.mean(axis=0)
    return chi_bar @ mean_r[1:, 1:]


def distance(chi_tilde: np.ndarray, chi_hat: np.ndarray) -> float:
    a = np.asarray(chi_tilde, dtype=float)
    b = np.asarray(chi_hat, dtype=float)
    if a.shape != b.shape:
        raise ValueError("vectors differ in length")
    return float(np.linalg.norm(a - b))


@dataclass
class PulseFamily:
    """A pulse Hamiltonian with its allowed rotation angles (radians).

    ``angles`` is either a finite grid (sequence of floats) or, when
    ``continuous`` is true, an interval ``(low, high)``.
    """

    hamiltonian: np.ndarray
    angles: tuple[float, ...]
    continuous: bool = False
    name: str = ""

    def __post_init__(self):
        self.hamiltonian = np.asarray(self.hamiltonian, dtype=complex)
        self.angles = tuple(float(a) for a in self.angles)
        if self.continuous and len(self.angles) != 2:
            raise ValueError("a continuous family needs an interval (low, high)")
        if not self.angles:
            raise ValueError("empty angle set")

    def pulse(self, angle: float) -> np.ndarray:
        return expm_hamiltonian(self.hamiltonian, angle)

    @property
    def bounds(self) -> tuple[float, float]:
        return min(self.angles), max(self.angles)


@dataclass
class BBProblem:
    """Target-matching problem for the pulse search.

    ``min_spacing`` is the shortest free-evolution time between pulses as
    a fraction of the environment correlation time; a pulse set of size
    ``N`` is feasible only if ``N * min_spacing <= 1`` so that one cycle
    fits inside the correlation time.
    """

    chi_bar: np.ndarray
    chi_hat: np.ndarray
    basis: OperatorBasis
    pulse_family: list[PulseFamily]
    max_pulses: int = 2
    min_spacing: float = 0.0

    def __post_init__(self):
        self.chi_bar = np.asarray(self.chi_bar, dtype=float)
        self.chi_hat = np.asarray(self.chi_hat, dtype=float)
        n = len(self.basis) - 1
        if self.chi_bar.shape != (n,) or self.chi_hat.shape != (n,):
            raise ValueError(f"chi vectors must have length {n}")
        if self.max_pulses < 1:
            raise ValueError("max_pulses must be at least 1")

    def max_feasible_size(self) -> int:
        if self.min_spacing <= 0:
            return self.max_pulses
        return min(self.max_pulses, int(math.floor(1.0 / self.min_spacing + 1e-12)))

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_qubits": self.basis.n_qubits,
                "chi_bar": self.chi_bar.tolist(),
                "chi_hat": self.chi_hat.tolist(),
                "pulse_family": [_family_to_dict(f, self.basis) for f in self.pulse_family],
                "max_pulses": self.max_pulses,
                "min_spacing": self.min_spacing,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "BBProblem":
        data = json.loads(text)
        basis = pauli_basis(int(data["n_qubits"]))
        return cls(
            np.array(data["chi_bar"], dtype=float),
            np.array(data["chi_hat"], dtype=float),
            basis,
            [_family_from_dict(f, basis) for f in data["pulse_family"]],
            int(data["max_pulses"]),
            float(data["min_spacing"]),
        )


def _family_to_dict(f: PulseFamily, basis: OperatorBasis) -> dict:
    c = expand_in_basis(f.hamiltonian, basis)
    return {
        "name": f.name,
        "generator": [[float(z.real), float(z.imag)] for z in c],
        "angles": list(f.angles),
        "continuous": f.continuous,
    }


def _family_from_dict(d: dict, basis: OperatorBasis) -> PulseFamily:
    coeffs = np.array([complex(re, im) for re, im in d["generator"]])
    h = np.tensordot(coeffs, basis.elements, axes=1)
    return PulseFamily(h, tuple(d["angles"]), bool(d["continuous"]), d.get("name", ""))


@dataclass
class BBSolution:
    """Best pulse set found: identity plus ``choices`` as ``(family index, angle)``."""

    pulses: PulseGroup
    choices: tuple[tuple[int, float], ...]
    chi_bar: np.ndarray
    chi_tilde: np.ndarray
    distance: float
    iterations: int
    trace: list[float] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "choices": [[int(i), float(a)] for i, a in self.choices],
                "chi_bar": self.chi_bar.tolist(),
                "chi_tilde": self.chi_tilde.tolist(),
                "distance": self.distance,
                "iterations": self.iterations,
                "closed": self.pulses.closed,
                "trace": list(self.trace),
            }
        )


def pulse_set(problem: BBProblem, choices: Sequence[tuple[int, float]]) -> PulseGroup:
    d = problem.basis.dim
    if not choices:
        return PulseGroup([np.eye(d, dtype=complex)], [], True)
    return PulseGroup.from_pulses([problem.pulse_family[i].pulse(a) for i, a in choices])


class _Evaluator:
    """Caches per-pulse adjoint matrices so candidates cost one small matmul."""

    def __init__(self, problem: BBProblem):
        self.problem = problem
        self.basis = problem.basis
        self._cache: dict[tuple[int, float], np.ndarray] = {}
        self.evaluations = 0

    def adjoint(self, fam: int, angle: float) -> np.ndarray:
        key = (fam, angle)
        r = self._cache.get(key)
        if r is None:
            u = self.problem.pulse_family[fam].pulse(angle)
            r = adjoint_matrix(u, self.basis).real[1:, 1:]
            if len(self._cache) < 50_000:
                self._cache[key] = r
        return r

    def chi_tilde(self, choices: Sequence[tuple[int, float]]) -> np.ndarray:
        cb = self.problem.chi_bar
        total = cb.copy()
        for fam, a in choices:
            total = total + cb @ self.adjoint(fam, a)
        return total / (len(choices) + 1)

    def score(self, choices) -> float:
        self.evaluations += 1
        return distance(self.chi_tilde(choices), self.problem.chi_hat)


def _better(cand, best, tie_tol=1e-12) -> bool:
    # cand/best: (distance, n_pulses, angle tuple)
    if best is None:
        return True
    if cand[0] < best[0] - tie_tol:
        return True
    if cand[0] > best[0] + tie_tol:
        return False
    return (cand[1], cand[2]) < (best[1], best[2])


def _candidate_count(problem: BBProblem, n_max: int) -> float:
    sizes = [len(f.angles) for f in problem.pulse_family]
    options = sum(sizes)
    # multisets of m pulses drawn from `options` choices
    return sum(math.comb(options + m - 1, m) for m in range(n_max))


def solve(problem: BBProblem, seed=0, restarts: int = 10) -> BBSolution:
    """Search pulse sets ``{I} + pulses`` of size at most ``max_pulses``.

    Finite angle grids with at most ``EXHAUSTIVE_CAP`` candidate sets are
    enumerated exhaustively. Otherwise angles are optimized with
    Nelder-Mead from ``restarts`` seeded random starting points for every
    assignment of families to pulse slots (grid families then snap to their
    nearest grid angle). Ties prefer fewer pulses, then the smaller angle
    tuple.
    """
    if not problem.pulse_family:
        raise ValueError("empty pulse family")
    n_max = problem.max_feasible_size()
    if n_max < 1:
        raise ValueError("no pulse set satisfies the spacing constraint")
    ev = _Evaluator(problem)
    all_discrete = not any(f.continuous for f in problem.pulse_family)
    if all_discrete and _candidate_count(problem, n_max) <= EXHAUSTIVE_CAP:
        best = _solve_exhaustive(problem, ev, n_max)
    else:
        best = _solve_local(problem, ev, n_max, _rng(seed), restarts)
    choices = best[3]
    g = pulse_set(problem, choices)
    ct = ev.chi_tilde(choices)
    return BBSolution(g, tuple(choices), problem.chi_bar.copy(), ct, best[0], ev.evaluations)


def _solve_exhaustive(problem: BBProblem, ev: _Evaluator, n_max: int):
    options = [(i, a) for i, f in enumerate(problem.pulse_family) for a in f.angles]
    best = None
    for m in range(n_max):
        for combo in itertools.combinations_with_replacement(options, m):
            cand = (ev.score(combo), m, tuple(a for _, a in combo), combo)
            if _better(cand, best):
                best = cand
    return best


def _solve_local(problem: BBProblem, ev: _Evaluator, n_max: int, rng: np.random.Generator, restarts: int):
    fams = problem.pulse_family
    scale = max(np.linalg.norm(problem.chi_bar), np.linalg.norm(problem.chi_hat), 1e-300)
    best = (ev.score(()), 0, (), ())
    for m in range(1, n_max):
        for assign in itertools.combinations_with_replacement(range(len(fams)), m):
            lo = np.array([fams[i].bounds[0] for i in assign])
            hi = np.array([fams[i].bounds[1] for i in assign])

            def objective(x):
                return ev.score(tuple(zip(assign, np.clip(x, lo, hi)))) / scale

            for _ in range(restarts):
                x0 = lo + (hi - lo) * rng.random(m)
                res = minimize(
                    objective,
                    x0,
                    method="Nelder-Mead",
                    bounds=list(zip(lo, hi)) if np.all(hi > lo) else None,
                    options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000 * m, "maxfev": 8000 * m},
                )
                x = np.clip(res.x, lo, hi)
                x = np.array([_snap(fams[i], a) for i, a in zip(assign, x)])
                combo = tuple(zip(assign, (float(a) for a in x)))
                cand = (ev.score(combo), m, tuple(float(a) for a in x), combo)
                if _better(cand, best):
                    best = cand
    return best


def _snap(f: PulseFamily, angle: float) -> float:
    if f.continuous:
        return float(angle)
    grid = np.array(f.angles)
    return float(grid[np.argmin(np.abs(grid - angle))])


# --- closed control loop ------------------------------------------------------


def bb_modified_channel(
    plant: Callable[[float], Callable[[np.ndarray], np.ndarray]],
    g: PulseGroup,
    tau: float,
) -> Callable[[np.ndarray], np.ndarray]:
    """Black box for one pulsed cycle of total time ``tau`` (``tau / N`` per free segment)."""
    n = len(g)
    step = plant(tau / n)

    def channel(rho):
        for u in g:
            rho = dagger(u) @ step(u @ rho @ dagger(u)) @ u
        return rho

    return channel


@dataclass
class LoopRound:
    measured_distance: float
    accepted: bool
    n_pulses: int


def control_loop(
    plant: Callable[[float], Callable[[np.ndarray], np.ndarray]],
    template: BBProblem,
    rounds: int = 3,
    noise: float = 0.0,
    seed=0,
    tau_points: Sequence[float] = (1e-3, 2e-3, 3e-3),
    tol: float = 1e-6,
) -> tuple[BBSolution, list[LoopRound]]:
    """Measure, solve, update: iterate pulse-set refinement around a plant.

    Each round runs simulated tomography of the plant under the current
    pulse set at every ``tau_points`` entry, extracts the residual
    generator, and stops once it is within ``tol`` of the template target.
    Otherwise the pulse search runs on the residual and the found set is
    composed with the current one (``{V_j U_k}``). A candidate is kept only
    if the next measurement improves on the current distance, so the
    recorded distance never increases. ``template.chi_bar`` is ignored.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    rng = _rng(seed)
    basis = template.basis
    d = basis.dim
    current = PulseGroup([np.eye(d, dtype=complex)], [], True)
    current_choices: tuple[tuple[int, float], ...] = ()

    def measure(g: PulseGroup) -> np.ndarray:
        def family(tau):
            return tomography(bb_modified_channel(plant, g, tau), basis, noise=noise, seed=rng, time=tau)

        return short_time_generator(family, tau_points).chi_bar

    measured = measure(current)
    bare = measured.copy()
    dist = distance(measured, template.chi_hat)
    history: list[LoopRound] = []
    iterations = 0
    for _ in range(rounds):
        history.append(LoopRound(dist, True, len(current)))
        if dist < tol:
            break
        prob = BBProblem(
            measured, template.chi_hat, basis, template.pulse_family, template.max_pulses, template.min_spacing
        )
        sol = solve(prob, seed=rng)
        iterations += sol.iterations
        if not sol.choices:
            break
        candidate = _compose(current, sol.pulses)
        cand_measured = measure(candidate)
        cand_dist = distance(cand_measured, template.chi_hat)
        if cand_dist < dist:
            current, measured, dist = candidate, cand_measured, cand_dist
            current_choices = current_choices + sol.choices
        else:
            history.append(LoopRound(cand_dist, False, len(candidate)))
            break
    else:
        history.append(LoopRound(dist, True, len(current)))
    ct = chi_tilde(bare, current, basis)
    solution = BBSolution(current, current_choices, bare, ct, dist, iterations, [h.measured_distance for h in history if h.accepted])
    return solution, history


def _compose(outer: PulseGroup, inner: PulseGroup) -> PulseGroup:
    if len(outer) == 1:
        return inner
    elems = [u @ v for v in inner for u in outer]
    g = PulseGroup(elems, [], False)
    g.closed = g.check_closed()
    return g
