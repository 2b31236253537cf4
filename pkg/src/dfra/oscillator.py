"""Spectrum and Gaussian statistics of the two-sector isotropic oscillator.

The x-sector is a D-dimensional oscillator in the shifted coordinate X with
frequency omega; the theta-sector adds D(D-1)/2 modes of frequency Omega and
stiffness parameter Lambda (units length^-3).  The theta ground state is a
Gaussian whose square is the weight function W used to average over
noncommutativity; every closed-form moment here is cross-checked by an
independent quadrature / Monte Carlo oracle.

Conventions: theta_{ij} theta^{ij} = 2 sum_{i<j} (theta^{ij})^2, and
theta^2 denotes half that contraction, i.e. the sum over the independent
components.  With the ground-state weight this gives a variance of
1/(2 Lambda Omega) per independent component, hence

    <theta^2> = D(D-1)/(4 Lambda Omega),
    <theta^{ij} theta^{kl}> = delta^{ij,kl} / (2 Lambda Omega)
                            = (2/(D(D-1))) delta^{ij,kl} <theta^2>.

For D = 2 this reduces to the commonly quoted scalar <theta^2> =
1/(2 Lambda Omega); for D > 2 the quoted scalar is the per-component
variance, not the full contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, NamedTuple

import numpy as np


class QuadratureUnsupportedError(ValueError):
    """Tensor quadrature is limited to <= 3 theta components (D <= 3)."""


@dataclass(frozen=True)
class OscillatorConfig:
    m: float = 1.0
    omega: float = 1.0
    Lambda: float = 1.0
    Omega: float = 1.0
    D: int = 3

    def __post_init__(self):
        if min(self.m, self.omega, self.Lambda, self.Omega) <= 0:
            raise ValueError("oscillator parameters must be positive")
        if self.D < 2:
            raise ValueError("D must be >= 2")

    @property
    def n_modes(self) -> int:
        """Independent theta components."""
        return self.D * (self.D - 1) // 2

    @property
    def mode_pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(1, self.D + 1), 2))


@dataclass(frozen=True)
class Occupation:
    n_x: tuple[int, ...]
    n_theta: tuple[int, ...]

    def __post_init__(self):
        if any(n < 0 for n in self.n_x + self.n_theta):
            raise ValueError("occupation numbers must be non-negative")


def energy(cfg: OscillatorConfig, occ: Occupation) -> float:
    """E = omega (sum n_x + D/2) + Omega (sum n_theta + D(D-1)/4)."""
    if len(occ.n_x) != cfg.D or len(occ.n_theta) != cfg.n_modes:
        raise ValueError("occupation does not match configuration")
    return cfg.omega * (sum(occ.n_x) + cfg.D / 2.0) + cfg.Omega * (
        sum(occ.n_theta) + cfg.D * (cfg.D - 1) / 4.0
    )


def vacuum_shift(cfg: OscillatorConfig) -> float:
    """Ground-state energy added by the theta sector: D(D-1) Omega / 4."""
    return cfg.D * (cfg.D - 1) * cfg.Omega / 4.0


def level_degeneracy(D: int, n: int) -> int:
    """Number of x-sector states with sum n_x = n (unchanged by the shift)."""
    return math.comb(n + D - 1, D - 1)


def ground_wavefunction(cfg: OscillatorConfig, theta_values, t: float = 0.0) -> complex:
    """theta-sector ground state at the given independent components.

    (Lambda Omega / pi)^{D(D-1)/8} exp(-(Lambda Omega/4) theta.theta)
    exp(-i D(D-1) Omega t / 4), where theta.theta is the doubled pair
    contraction.
    """
    theta = np.asarray(theta_values, dtype=float)
    if theta.shape != (cfg.n_modes,):
        raise ValueError(f"expected {cfg.n_modes} theta components")
    lo = cfg.Lambda * cfg.Omega
    amp = (lo / math.pi) ** (cfg.D * (cfg.D - 1) / 8.0) * math.exp(
        -0.5 * lo * float(theta @ theta)
    )
    return amp * complex(math.cos(vacuum_shift(cfg) * t), -math.sin(vacuum_shift(cfg) * t))


def weight_function(cfg: OscillatorConfig, theta_values) -> float:
    """W(theta) = (Lambda Omega/pi)^{D(D-1)/4} exp(-Lambda Omega theta.theta / 2).

    Normalized Gaussian over the independent components; equals
    |ground_wavefunction|^2 at t = 0.
    """
    theta = np.asarray(theta_values, dtype=float)
    if theta.shape != (cfg.n_modes,):
        raise ValueError(f"expected {cfg.n_modes} theta components")
    lo = cfg.Lambda * cfg.Omega
    return (lo / math.pi) ** (cfg.D * (cfg.D - 1) / 4.0) * math.exp(
        -lo * float(theta @ theta)
    )


def _pair_delta(i, j, k, l) -> int:
    return (1 if (i, j) == (k, l) else 0) - (1 if (i, j) == (l, k) else 0)


def moment(cfg: OscillatorConfig, which: str, indices: tuple[int, ...] | None = None):
    """Closed-form ground-state expectation values over W.

    which = "one":                <1> = 1
    which = "theta_ij":           <theta^{ij}> = 0
    which = "theta2":             <theta^2> = D(D-1)/(4 Lambda Omega)
    which = "theta_ij_theta_kl":  delta^{ij,kl}/(2 Lambda Omega); with
        indices=(i, j, k, l) the delta (including sign) is evaluated,
        otherwise the diagonal value is returned.
    """
    lo = cfg.Lambda * cfg.Omega
    if which == "one":
        return 1.0
    if which == "theta_ij":
        return 0.0
    if which == "theta2":
        return cfg.D * (cfg.D - 1) / (4.0 * lo)
    if which == "theta_ij_theta_kl":
        if indices is None:
            return 1.0 / (2.0 * lo)
        i, j, k, l = indices
        return _pair_delta(i, j, k, l) / (2.0 * lo)
    raise ValueError(f"unknown moment {which!r}")


def x2_expectation(cfg: OscillatorConfig, X2: float, p2: float) -> float:
    """<x^2> = <X^2> + (2/D) <theta^2> <p^2>.

    X2 and p2 are ordinary-oscillator expectation values supplied by the
    caller for the chosen x-sector state; the noncommutative correction uses
    the theta2 moment of this configuration.
    """
    return X2 + (2.0 / cfg.D) * moment(cfg, "theta2") * p2


class MomentEstimate(NamedTuple):
    value: float
    error: float
    method: str
    samples: int


def monomial(exponents: tuple[int, ...]) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized monomial prod theta_c^{e_c} over the component axis."""

    def f(theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.ones(theta.shape[:-1])
        for c, e in enumerate(exponents):
            if e:
                out = out * theta[..., c] ** e
        return out

    return f


def moment_oracle(
    cfg: OscillatorConfig,
    f: Callable[[np.ndarray], np.ndarray],
    method: str = "quadrature",
    samples: int = 1_000_000,
    seed: int = 0,
    nodes: int = 24,
) -> MomentEstimate:
    """Independent estimate of int W(theta) f(theta) dtheta.

    f must be vectorized over a trailing component axis: it maps arrays of
    shape (..., n_modes) to shape (...).  Quadrature (tensor Gauss-Hermite,
    exact for polynomials up to degree 2*nodes-1) supports n_modes <= 3;
    Monte Carlo works in any dimension, in deterministic seeded chunks.
    """
    M = cfg.n_modes
    lo = cfg.Lambda * cfg.Omega
    if method == "quadrature":
        if M > 3:
            raise QuadratureUnsupportedError(
                f"quadrature supports <= 3 theta components, got {M} (D = {cfg.D})"
            )
        value = _hermite_tensor(f, M, lo, nodes)
        check = _hermite_tensor(f, M, lo, nodes + 8)
        return MomentEstimate(value, abs(value - check) + 1e-15, "quadrature", 0)
    if method == "monte-carlo":
        sigma = 1.0 / math.sqrt(2.0 * lo)
        chunk = 262_144
        seq = np.random.SeedSequence(seed)
        total = 0.0
        total_sq = 0.0
        done = 0
        children = seq.spawn(max(1, -(-samples // chunk)))
        for child in children:
            n = min(chunk, samples - done)
            rng = np.random.default_rng(child)
            theta = rng.normal(0.0, sigma, size=(n, M))
            vals = np.asarray(f(theta), dtype=float)
            total += float(vals.sum())
            total_sq += float((vals * vals).sum())
            done += n
        mean = total / done
        var = max(total_sq / done - mean * mean, 0.0)
        stderr = math.sqrt(var / done)
        return MomentEstimate(mean, stderr, "monte-carlo", done)
    raise ValueError(f"unknown method {method!r}")


def _hermite_tensor(f, M: int, lo: float, nodes: int) -> float:
    # substitute theta_c = u_c / sqrt(lo):  int W f = pi^{-M/2} int e^{-u.u} f
    x, w = np.polynomial.hermite.hermgauss(nodes)
    scale = 1.0 / math.sqrt(lo)
    grids = np.meshgrid(*([x] * M), indexing="ij")
    theta = np.stack([g * scale for g in grids], axis=-1)
    weights = np.ones_like(grids[0])
    for axis in range(M):
        shape = [1] * M
        shape[axis] = nodes
        weights = weights * w.reshape(shape)
    vals = np.asarray(f(theta), dtype=float)
    return float((weights * vals).sum() / math.pi ** (M / 2.0))
