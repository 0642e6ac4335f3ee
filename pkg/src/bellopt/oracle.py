"""Brute-force maximization of the Bell function over all 8 angles.

This is the independent certification route: it never touches the closed-form
eigenvalues or angle formulas.  A coarse grid over every measurement direction
is followed by derivative-free compass refinement from the best grid point and
from seeded random restarts.  Randomness comes from a self-contained splitmix64
generator so results are reproducible bit for bit across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import AngleSettings
from .states import DensityMatrix4, pauli_correlation_matrix

MAX_COARSE_EVALS = 1_000_000_000

_MASK64 = (1 << 64) - 1


class BudgetExceeded(ValueError):
    pass


class Splitmix64:
    """splitmix64: state += 0x9E3779B97F4A7C15; output is the state mixed by
    two xor-shift-multiply rounds (x ^= x>>30, *0xBF58476D1CE4E5B9;
    x ^= x>>27, *0x94D049BB133111EB; x ^= x>>31), all mod 2^64."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        # 53-bit mantissa in [0, 1)
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * u


@dataclass(frozen=True)
class OracleConfig:
    grid_n: int = 8
    refine_iters: int = 500
    restarts: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.grid_n < 4:
            raise ValueError("grid_n must be >= 4")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not (0 <= self.seed <= _MASK64):
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class OracleResult:
    bmax_est: float
    thetas: tuple[float, float, float, float]
    phis: tuple[float, float, float, float]
    evaluations: int

    def __post_init__(self):
        if not (0.0 <= self.bmax_est <= 2.0 * math.sqrt(2.0) + 1e-6):
            raise ValueError(f"bmax_est out of range: {self.bmax_est!r}")


def _bell_values(t: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Bell values for a (k, 8) batch of raw angles, via E(a,b) = b.(T a).

    Angle order per row: (theta1, theta1', theta2, theta2', phi1, phi1',
    phi2, phi2').  Mathematically identical to the direct-trace evaluator.
    """
    th = angles[:, :4]
    ph = angles[:, 4:]
    st = np.sin(th)
    dirs = np.stack([st * np.cos(ph), st * np.sin(ph), np.cos(th)], axis=-1)
    ta = dirs[:, 0] @ t.T
    tap = dirs[:, 1] @ t.T
    e_ab = np.einsum("kj,kj->k", dirs[:, 2], ta)
    e_abp = np.einsum("kj,kj->k", dirs[:, 3], ta)
    e_apb = np.einsum("kj,kj->k", dirs[:, 2], tap)
    e_apbp = np.einsum("kj,kj->k", dirs[:, 3], tap)
    return np.abs(e_ab + e_abp + e_apb - e_apbp)


def _grid_angles(grid_n: int) -> tuple[np.ndarray, np.ndarray]:
    thetas = np.linspace(0.0, math.pi, grid_n)
    phis = -math.pi + 2.0 * math.pi * np.arange(1, grid_n + 1) / grid_n
    return thetas, phis


def _coarse_grid_best(t: np.ndarray, grid_n: int) -> tuple[float, np.ndarray]:
    """Exhaustive max over the grid_n^8 angle grid.

    E(a, b) is bilinear in the direction vectors, so the 8-dimensional sweep
    reduces to per-(a, a') extrema over b and b' of E[b,a] +/- E[b,a'] while
    still covering every grid combination exactly.
    """
    thetas, phis = _grid_angles(grid_n)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    st = np.sin(tt)
    dirs = np.stack([st * np.cos(pp), st * np.sin(pp), np.cos(tt)], axis=-1)
    e = dirs @ t @ dirs.T  # e[b, a] = b . (T a)

    plus = e[:, :, None] + e[:, None, :]   # (b, a, a')
    minus = e[:, :, None] - e[:, None, :]
    max_p, min_p = plus.max(axis=0), plus.min(axis=0)
    max_m, min_m = minus.max(axis=0), minus.min(axis=0)
    pos = max_p + max_m
    neg = -(min_p + min_m)

    best_pos = np.unravel_index(np.argmax(pos), pos.shape)
    best_neg = np.unravel_index(np.argmax(neg), neg.shape)
    if pos[best_pos] >= neg[best_neg]:
        a_i, ap_i = best_pos
        b_i = int(plus[:, a_i, ap_i].argmax())
        bp_i = int(minus[:, a_i, ap_i].argmax())
        value = float(pos[best_pos])
    else:
        a_i, ap_i = best_neg
        b_i = int(plus[:, a_i, ap_i].argmin())
        bp_i = int(minus[:, a_i, ap_i].argmin())
        value = float(neg[best_neg])
    idx = (a_i, ap_i, b_i, bp_i)
    start = np.array([tt[idx[0]], tt[idx[1]], tt[idx[2]], tt[idx[3]],
                      pp[idx[0]], pp[idx[1]], pp[idx[2]], pp[idx[3]]])
    return value, start


def _compass_search(t: np.ndarray, start: np.ndarray, initial_step: float,
                    max_iters: int) -> tuple[float, np.ndarray, int]:
    """Coordinate-wise compass search with geometric step decay (factor 0.5),
    stopping at step < 1e-8 or after max_iters polls."""
    current = start.astype(float).copy()
    value = float(_bell_values(t, current[None, :])[0])
    step = initial_step
    evals = 1
    steps = np.vstack([np.eye(8), -np.eye(8)])
    for _ in range(max_iters):
        if step < 1e-8:
            break
        batch = current[None, :] + step * steps
        vals = _bell_values(t, batch)
        evals += len(vals)
        k = int(vals.argmax())
        if vals[k] > value:
            value = float(vals[k])
            current = batch[k]
        else:
            step *= 0.5
    return value, current, evals


def brute_force_bmax(rho: DensityMatrix4, cfg: OracleConfig) -> OracleResult:
    """Grid-then-refine maximization of the Bell function over all settings.

    Deterministic for a fixed cfg (including the seed); restarts are
    independent and merged by max.
    """
    if cfg.grid_n ** 8 > MAX_COARSE_EVALS:
        raise BudgetExceeded(
            f"coarse grid needs {cfg.grid_n ** 8} evaluations (limit {MAX_COARSE_EVALS})"
        )
    t = pauli_correlation_matrix(rho).t
    evaluations = cfg.grid_n ** 8
    best_value, grid_start = _coarse_grid_best(t, cfg.grid_n)
    best_angles = grid_start

    rng = Splitmix64(cfg.seed)
    starts = [grid_start]
    for _ in range(cfg.restarts):
        starts.append(np.array(
            [rng.uniform(0.0, math.pi) for _ in range(4)]
            + [rng.uniform(-math.pi, math.pi) for _ in range(4)]
        ))
    initial_step = math.pi / cfg.grid_n
    for start in starts:
        value, angles, evals = _compass_search(t, start, initial_step,
                                               cfg.refine_iters)
        evaluations += evals
        if value > best_value:
            best_value, best_angles = value, angles
    return OracleResult(
        bmax_est=best_value,
        thetas=tuple(float(v) for v in best_angles[:4]),
        phis=tuple(float(v) for v in best_angles[4:]),
        evaluations=evaluations,
    )


def certify_settings(rho: DensityMatrix4, s: AngleSettings,
                     cfg: OracleConfig) -> float:
    """Best Bell improvement found by a seeded random walk around `s`.

    Two stages of hill climbing (perturbation radius pi/8, then pi/64, each
    for max(refine_iters, 64) steps).  A return value <= 1e-6 certifies that
    `s` is a local maximum; a clearly positive value exhibits better settings
    nearby.
    """
    t = pauli_correlation_matrix(rho).t
    base_angles = np.array(list(s.thetas) + list(s.phis))
    base = float(_bell_values(t, base_angles[None, :])[0])
    rng = Splitmix64(cfg.seed)
    steps = max(cfg.refine_iters, 64)
    best = base
    current = base_angles.copy()
    for radius in (math.pi / 8.0, math.pi / 64.0):
        for _ in range(steps):
            proposal = current + np.array(
                [rng.uniform(-radius, radius) for _ in range(8)]
            )
            value = float(_bell_values(t, proposal[None, :])[0])
            if value > best:
                best = value
                current = proposal
    return best - base
