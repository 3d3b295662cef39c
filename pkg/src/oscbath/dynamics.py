"""Covariance equations of motion: full Lyapunov form and the block decomposition.

In the collective-mode basis the drift matrix is block diagonal with a 2x2
block per mode; only the last (symmetric) mode carries time-dependent damping,
frequency shift, and diffusion. The second moments therefore close into small
independent subsystems: one 3x3 damped block, N-1 free 3x3 blocks, N-1 damped
4x4 cross blocks, and (N-1)(N-2)/2 free 4x4 cross blocks. The element-to-block
map is derived here by expanding the Lyapunov equation element-wise and
pattern-matching the coefficients against the small-matrix templates, then the
block path is integrated as an independent engine and checked against the full
form.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _backend
from .bath import CoefficientTable
from .errors import BasisMismatch, NonPhysicalWarning, StepTooLarge
from .model import EffectiveFrequencies, SystemParams, symplectic_form

TRANSFORMED = "transformed"
BARE = "bare"

# Heisenberg-bound violations below this are integration noise and ignored.
PHYSICALITY_TOL = 1e-9


@dataclass(frozen=True)
class CovarianceState:
    """Symmetric 2N x 2N covariance matrix at one instant, with a basis tag.

    Phase-space ordering is (q1, p1, ..., qN, pN); the vacuum is 0.5 * identity.
    """
    time: float
    matrix: np.ndarray
    basis: str = TRANSFORMED

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError(f"covariance must be 2N x 2N, got {m.shape}")
        if np.max(np.abs(m - m.T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise ValueError("covariance matrix is not symmetric")
        if self.basis not in (TRANSFORMED, BARE):
            raise ValueError(f"unknown basis {self.basis!r}")

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def min_physical_eig(self) -> float:
        """Smallest eigenvalue of V + (i/2) sigma; negative beyond tolerance
        means the Heisenberg bound is violated."""
        sig = symplectic_form(self.n_modes)
        h = self.matrix + 0.5j * sig
        return float(np.linalg.eigvalsh(h)[0].real)

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        return self.min_physical_eig() >= -tol


@dataclass(frozen=True)
class Trajectory:
    """Integrated covariance trajectory on a uniform time grid."""
    times: np.ndarray
    matrices: np.ndarray
    basis: str
    physical: bool = True
    worst_violation: float = 0.0

    def __len__(self) -> int:
        return len(self.times)

    def state(self, k: int) -> CovarianceState:
        return CovarianceState(time=float(self.times[k]),
                               matrix=self.matrices[k], basis=self.basis)

    def __iter__(self) -> Iterator[CovarianceState]:
        return (self.state(k) for k in range(len(self.times)))

    @property
    def final(self) -> CovarianceState:
        return self.state(len(self.times) - 1)


@dataclass(frozen=True)
class FreeBlockSolution:
    """Closed-form orbit of one relaxation-free mode's second moments.

    v_plus is conserved; (v_minus, v12) rotate at twice the free frequency.
    """
    v_plus: float
    v_minus_0: float
    v12_0: float
    omega_f: float

    def at(self, t: float) -> tuple[float, float]:
        return analytic_free_block(t, self.v_minus_0, self.v12_0, self.omega_f)


def drift_matrix(t: float, n_modes: int, freqs: EffectiveFrequencies,
                 table: CoefficientTable, mass: float = 1.0,
                 include_frequency_shift: bool = False) -> np.ndarray:
    """Block-diagonal drift A(t) in the collective basis.

    Free modes: [[0, 1/M], [-M omega_f^2, 0]]. Collective mode:
    [[0, 1/M], [-M (omega_n^2 + shift(t)), -2 gamma_n(t)]]. The frequency
    shift is omitted from the drift by default: at Gaussian-cutoff defaults
    its plateau (about -2 gamma0 cutoff / sqrt(pi)) overwhelms omega_n^2 and
    inverts the collective oscillator, so it is treated as renormalized into
    the bare frequency; pass include_frequency_shift=True to keep it.
    """
    shift, gamma_n, _, _ = table.evaluate(t)
    a = np.zeros((2 * n_modes, 2 * n_modes))
    of2 = freqs.omega_f ** 2
    for i in range(n_modes - 1):
        a[2 * i, 2 * i + 1] = 1.0 / mass
        a[2 * i + 1, 2 * i] = -mass * of2
    on2 = freqs.omega_n ** 2 + (shift if include_frequency_shift else 0.0)
    a[-2, -1] = 1.0 / mass
    a[-1, -2] = -mass * on2
    a[-1, -1] = -2.0 * gamma_n
    return a


def diffusion_matrix(t: float, table: CoefficientTable, n_modes: int) -> np.ndarray:
    """Inhomogeneous term: -f_n on the collective q-p entries, 2 d_n on p-p."""
    _, _, d_n, f_n = table.evaluate(t)
    dm = np.zeros((2 * n_modes, 2 * n_modes))
    dm[-2, -1] = dm[-1, -2] = -f_n
    dm[-1, -1] = 2.0 * d_n
    return dm


# --- block decomposition ----------------------------------------------------

A1, A2, A3, A4, A5 = "A1", "A2", "A3", "A4", "A5"


@dataclass(frozen=True)
class Block:
    """One decoupled subsystem: its kind and the covariance elements it evolves."""
    kind: str
    elements: tuple[tuple[int, int], ...]
    inhom: tuple[tuple[int, float], ...] = ()


@dataclass(frozen=True)
class BlockSystem:
    """Ordered direct sum of the decoupled second-moment subsystems."""
    n_modes: int
    blocks: tuple[Block, ...]

    @property
    def dimension(self) -> int:
        return sum(len(b.elements) for b in self.blocks)

    @property
    def elements(self) -> tuple[tuple[int, int], ...]:
        return tuple(e for b in self.blocks for e in b.elements)


def _block_template(kind: str, mass: float, of2: float, on2: float,
                    gamma: float) -> np.ndarray:
    """Coefficient matrix of one subsystem in its canonical element order."""
    m = mass
    if kind == A1:
        return np.array([[0.0, 2.0 / m, 0.0],
                         [-m * of2, 0.0, 1.0 / m],
                         [0.0, -2.0 * m * of2, 0.0]])
    if kind == A2:
        return np.array([[0.0, 2.0 / m, 0.0],
                         [-m * on2, -gamma, 1.0 / m],
                         [0.0, -2.0 * m * on2, -2.0 * gamma]])
    if kind == A3:
        return np.array([[0.0, 1.0 / m, 1.0 / m, 0.0],
                         [-m * on2, -gamma, 0.0, 1.0 / m],
                         [-m * of2, 0.0, 0.0, 1.0 / m],
                         [0.0, -m * of2, -m * on2, -gamma]])
    if kind == A4:
        return np.array([[0.0, 1.0 / m, 1.0 / m, 0.0],
                         [-m * of2, 0.0, 0.0, 1.0 / m],
                         [-m * of2, 0.0, 0.0, 1.0 / m],
                         [0.0, -m * of2, -m * of2, 0.0]])
    raise ValueError(f"no template for kind {kind!r}")


def block_template(kind: str, mass: float, of2: float, on2: float,
                   gamma: float) -> np.ndarray:
    """Public view of the subsystem coefficient matrices."""
    return _block_template(kind, mass, of2, on2, gamma)


def _element_generator(a: np.ndarray, elements: list[tuple[int, int]]) -> np.ndarray:
    """Element-wise expansion of V' = A V + V A^T over the given element list."""
    n_el = len(elements)
    index = {e: k for k, e in enumerate(elements)}
    gen = np.zeros((n_el, n_el))
    dim = a.shape[0]
    for col, (g, d) in enumerate(elements):
        basis = np.zeros((dim, dim))
        basis[g, d] = 1.0
        basis[d, g] = 1.0
        k = a @ basis
        k = k + k.T
        for (i, j), row in index.items():
            gen[row, col] = k[i, j]
    return gen


def build_block_system(params: SystemParams, freqs: EffectiveFrequencies,
                       table: CoefficientTable) -> BlockSystem:
    """Derive the block structure by pattern matching, not by assumption.

    The Lyapunov form is expanded element-wise at generic probe coefficients,
    the connectivity graph is split into components, and each component is
    matched (over row permutations) against the small-matrix templates. The
    probe values are arbitrary distinct constants so that degenerate
    parameters cannot merge structurally different patterns.
    """
    n = params.n_modes
    mass, of2, on2, gamma = 1.37, 0.713, 1.931, 0.417
    probe = np.zeros((2 * n, 2 * n))
    for i in range(n - 1):
        probe[2 * i, 2 * i + 1] = 1.0 / mass
        probe[2 * i + 1, 2 * i] = -mass * of2
    probe[-2, -1] = 1.0 / mass
    probe[-1, -2] = -mass * on2
    probe[-1, -1] = -gamma

    elements = [(i, j) for i in range(2 * n) for j in range(i, 2 * n)]
    gen = _element_generator(probe, elements)

    # connected components of the coupling graph
    n_el = len(elements)
    adj = (np.abs(gen) > 1e-14) | (np.abs(gen.T) > 1e-14)
    unseen = set(range(n_el))
    components = []
    while unseen:
        stack = [min(unseen)]
        unseen.discard(stack[0])
        comp = []
        while stack:
            k = stack.pop()
            comp.append(k)
            for k2 in np.nonzero(adj[k])[0]:
                if k2 in unseen:
                    unseen.discard(int(k2))
                    stack.append(int(k2))
        components.append(sorted(comp))

    kinds = {3: (A1, A2), 4: (A3, A4)}
    blocks = []
    for comp in components:
        sub = gen[np.ix_(comp, comp)]
        size = len(comp)
        match = None
        for kind in kinds[size]:
            tmpl = _block_template(kind, mass, of2, on2, gamma)
            for perm in itertools.permutations(range(size)):
                p = list(perm)
                if np.max(np.abs(sub[np.ix_(p, p)] - tmpl)) < 1e-12:
                    match = (kind, [comp[k] for k in p])
                    break
            if match:
                break
        if match is None:
            raise RuntimeError("block pattern does not match any template; "
                               "the decomposition assumption failed")
        kind, ordered = match
        els = tuple(elements[k] for k in ordered)
        inhom = ()
        if kind == A2:
            # canonical order (qq, qp, pp): inhomogeneous vector (0, -f, 2 d)
            inhom = ((1, -1.0), (2, 2.0))
        blocks.append(Block(kind=kind, elements=els, inhom=inhom))

    def sort_key(b: Block) -> tuple:
        modes = sorted({i // 2 for e in b.elements for i in e})
        if b.kind == A2:
            return (n, 3, 0)
        if b.kind == A1:
            return (modes[0], 0, 0)
        if b.kind == A4:
            return (modes[0], 1, modes[1])
        return (modes[0], 2, 0)  # A3

    blocks.sort(key=sort_key)
    system = BlockSystem(n_modes=n, blocks=tuple(blocks))
    assert system.dimension == n * (2 * n + 1)
    return system


def _linear_system_parts(system: BlockSystem, mass: float, of2: float):
    """Stack the block templates into element-space matrices B(t) = B0 + on2*Bw + gamma*Bg."""
    n_el = system.dimension
    b0 = np.zeros((n_el, n_el))
    bw = np.zeros((n_el, n_el))
    bg = np.zeros((n_el, n_el))
    e_f = np.zeros(n_el)
    e_d = np.zeros(n_el)
    off = 0
    for blk in system.blocks:
        size = len(blk.elements)
        t0 = _block_template(blk.kind, mass, of2, 0.0, 0.0)
        tw = _block_template(blk.kind, mass, of2, 1.0, 0.0) - t0
        tg = _block_template(blk.kind, mass, of2, 0.0, 1.0) - t0
        sl = slice(off, off + size)
        b0[sl, sl] = t0
        bw[sl, sl] = tw
        bg[sl, sl] = tg
        for row, scale in blk.inhom:
            if scale == -1.0:
                e_f[off + row] = -1.0
            else:
                e_d[off + row] = scale
        off += size
    return b0, bw, bg, e_f, e_d


# --- integration ------------------------------------------------------------

def _stage_coefficients(table: CoefficientTable, t_grid: np.ndarray,
                        include_frequency_shift: bool, omega_n: float):
    """Coefficient curves at RK4 stage times: grid ends and midpoints."""
    table._check_time(float(t_grid[0]))
    table._check_time(float(t_grid[-1]))
    dt = t_grid[1] - t_grid[0]
    halves = t_grid[:-1] + 0.5 * dt
    t_end = table._dense["t_end"]
    sh, ga, dn, fn = table._dense["splines"]

    def batch(tarr):
        tc = np.minimum(np.maximum(tarr, 0.0), t_end)
        if include_frequency_shift:
            on2 = omega_n ** 2 + sh(tc)
        else:
            on2 = np.full(len(tarr), omega_n ** 2)
        return (np.ascontiguousarray(on2, dtype=np.float64),
                np.ascontiguousarray(2.0 * ga(tc), dtype=np.float64),
                np.ascontiguousarray(dn(tc), dtype=np.float64),
                np.ascontiguousarray(fn(tc), dtype=np.float64))

    return batch(t_grid), batch(halves)


def evolve(v0: CovarianceState, t_grid: np.ndarray, table: CoefficientTable,
           method: str = "lyapunov", *, freqs: EffectiveFrequencies,
           mass: float = 1.0, include_frequency_shift: bool = False,
           system: BlockSystem | None = None,
           check_physical: bool = True) -> Trajectory:
    """Integrate the covariance matrix over t_grid with fixed-step RK4.

    t_grid must be uniform and start at v0.time; its spacing is the RK4 step.
    ``method`` selects the full Lyapunov form or the decoupled block system;
    the two agree to integration accuracy. A Heisenberg-bound violation at
    the final state beyond 1e-9 emits NonPhysicalWarning and marks the
    trajectory; smaller violations are integration noise and ignored.
    """
    if v0.basis != TRANSFORMED:
        raise BasisMismatch("evolve expects the transformed basis")
    t_grid = np.asarray(t_grid, dtype=float)
    if len(t_grid) < 2:
        raise ValueError("t_grid needs at least two points")
    dt = float(t_grid[1] - t_grid[0])
    steps = np.diff(t_grid)
    if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, 1.0):
        raise ValueError("t_grid must be uniform")
    if abs(float(t_grid[0]) - v0.time) > 1e-12:
        raise ValueError(f"t_grid starts at {t_grid[0]:g}, state is at {v0.time:g}")
    bound = 0.05 / max(freqs.omega_n, freqs.omega_f)
    if dt > bound * (1.0 + 1e-12):
        raise StepTooLarge(f"dt={dt:g} exceeds stability bound {bound:g}")

    n = v0.n_modes
    ends, halves = _stage_coefficients(table, t_grid, include_frequency_shift,
                                       freqs.omega_n)
    of2 = freqs.omega_f ** 2

    if method == "lyapunov":
        mats = _backend.active().evolve_lyapunov(
            np.ascontiguousarray(v0.matrix, dtype=np.float64), n, mass, of2,
            ends, halves, dt)
    elif method == "block":
        if system is None:
            system = build_block_system(
                SystemParams(n_modes=n, mass=mass), freqs, table)
        b0, bw, bg, e_f, e_d = _linear_system_parts(system, mass, of2)
        els = system.elements
        rows = np.array([e[0] for e in els])
        cols = np.array([e[1] for e in els])
        u0 = np.ascontiguousarray(v0.matrix[rows, cols], dtype=np.float64)
        us = _backend.active().evolve_linear(u0, b0, bw, bg, e_f, e_d,
                                             ends, halves, dt)
        mats = np.zeros((len(t_grid), 2 * n, 2 * n))
        mats[:, rows, cols] = us
        mats[:, cols, rows] = us
    else:
        raise ValueError(f"unknown method {method!r}")

    physical = True
    worst = 0.0
    if check_physical:
        final = CovarianceState(time=float(t_grid[-1]), matrix=mats[-1],
                                basis=TRANSFORMED)
        low = final.min_physical_eig()
        if low < -PHYSICALITY_TOL:
            physical = False
            worst = low
            warnings.warn(f"Heisenberg bound violated by {low:.3e} at "
                          f"t={final.time:g}", NonPhysicalWarning, stacklevel=2)
    return Trajectory(times=t_grid, matrices=mats, basis=TRANSFORMED,
                      physical=physical, worst_violation=worst)


def constants_of_motion(v: CovarianceState, freqs: EffectiveFrequencies,
                        mass: float = 1.0) -> np.ndarray:
    """The (N-1)^2 conserved moment combinations of the relaxation-free sector.

    Per free mode i: M omega_f^2 Vqq + Vpp / M. Per free pair i < j: the
    analogous cross combination and the antisymmetric q-p difference.
    """
    if v.basis != TRANSFORMED:
        raise BasisMismatch("constants are defined in the transformed basis")
    n = v.n_modes
    m = v.matrix
    k = mass * freqs.omega_f ** 2
    out = []
    for i in range(n - 1):
        out.append(k * m[2 * i, 2 * i] + m[2 * i + 1, 2 * i + 1] / mass)
    for i in range(n - 1):
        for j in range(i + 1, n - 1):
            out.append(k * m[2 * i, 2 * j] + m[2 * i + 1, 2 * j + 1] / mass)
            out.append(m[2 * i, 2 * j + 1] - m[2 * i + 1, 2 * j])
    return np.array(out)


def analytic_free_block(t: float, v_minus_0: float, v12_0: float,
                        omega_f: float) -> tuple[float, float]:
    """Closed-form free-mode moment rotation at twice the free frequency."""
    c = np.cos(2.0 * omega_f * t)
    s = np.sin(2.0 * omega_f * t)
    v_minus = v_minus_0 * c + 2.0 * omega_f * v12_0 * s
    v12 = v12_0 * c - v_minus_0 / (2.0 * omega_f) * s
    return float(v_minus), float(v12)


def free_block_solution(v: CovarianceState, freqs: EffectiveFrequencies,
                        mass: float = 1.0, mode: int = 0) -> FreeBlockSolution:
    """Closed-form view of one free mode's (v_minus, v12) orbit."""
    if v.basis != TRANSFORMED:
        raise BasisMismatch("free-block view is defined in the transformed basis")
    if not 0 <= mode < v.n_modes - 1:
        raise ValueError(f"mode {mode} is not a relaxation-free mode")
    m = v.matrix
    k = mass * freqs.omega_f ** 2
    qq = m[2 * mode, 2 * mode]
    pp = m[2 * mode + 1, 2 * mode + 1]
    qp = m[2 * mode, 2 * mode + 1]
    return FreeBlockSolution(v_plus=k * qq + pp / mass,
                             v_minus_0=k * qq - pp / mass,
                             v12_0=qp, omega_f=freqs.omega_f)


def write_trajectory_csv(traj: Trajectory, path, every: int = 1) -> None:
    """Dump the trajectory as CSV: t, then upper-triangle elements V_ij (1-based)."""
    n2 = traj.matrices.shape[1]
    pairs = [(i, j) for i in range(n2) for j in range(i, n2)]
    if n2 <= 9:
        names = [f"V_{i + 1}{j + 1}" for i, j in pairs]
    else:
        names = [f"V_{i + 1}_{j + 1}" for i, j in pairs]
    header = "t," + ",".join(names)
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for k in range(0, len(traj.times), every):
            row = [repr(float(traj.times[k]))]
            row += [repr(float(traj.matrices[k][i, j])) for i, j in pairs]
            fh.write(",".join(row) + "\n")
