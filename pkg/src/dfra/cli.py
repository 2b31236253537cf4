"""Command-line front end: named verification suites and expression eval.

    dfra run --suite all --format json --out report.json
    dfra eval "[x[1], pi[1,2]]" --table dfra --set D=3

Each suite re-drives the library's own operations and emits one record per
check: name, reference tag, pass/fail, residual, tolerance, runtime.  The
reference tags resolve through the REFERENCES registry below, mapping each
check to the piece of structure it verifies ("plumbing" marks pure artifact
checks).  Reports are deterministic for a fixed seed apart from the
generated-at timestamp and the per-check runtimes.

Exit codes: 0 all checks pass, 1 at least one failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import tempfile
import time
import warnings
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import __version__, algebra, clifford, constraints, field, oscillator, reps
from .symcore import (
    Expression,
    GaussRat,
    I,
    ParseError,
    SymError,
    bracket,
    format_expression,
    normal_form,
    parse_expression,
)

REPORT_SCHEMA = "dfra-report/v1"

REFERENCES = {
    "dfra-commutators": "defining commutator table of the extended algebra",
    "dfra-jacobi": "Jacobi identity over all generator triples",
    "shifted-coordinate": "commuting shifted coordinate X and its brackets",
    "so-closure": "SO(D) closure of the total angular momentum J",
    "little-l-obstruction": "theta p p non-closure terms of the naive angular momentum",
    "rotation-transforms": "infinitesimal rotations generated by J",
    "lorentz-generator": "extended Lorentz generator M and its algebra",
    "quantum-conditions": "Planck-scale constraints on the theta eigenvalue matrix",
    "poisson-structure": "canonical Poisson brackets of the enlarged phase space",
    "constraint-matrix": "second-class constraint matrix block form",
    "dirac-brackets": "Dirac bracket table from the second-class constraints",
    "dirac-constraint-surface": "vanishing Dirac brackets with the constraints",
    "dirac-quantization": "i times Dirac table equals the commutator table",
    "classical-so-closure": "classical SO(D) closure of J under Dirac brackets",
    "hamiltonian-flow": "decoupled oscillator flow of the standard Hamiltonian",
    "rep-homomorphism": "group law of the extended-Poincare matrix representations",
    "rep-infinitesimal": "commutator closure of infinitesimal transformations",
    "casimirs": "invariance of the quadratic Casimir evaluations",
    "scalar-transform": "scalar field transformation law on sampled grids",
    "clifford-anticommutators": "macro-index Clifford algebra relations",
    "spinor-generator": "spinor Lorentz generator closure and covariance",
    "dirac-operator": "generalized Dirac operator squaring to the quadratic form",
    "spinor-boost": "finite spinor transformations intertwining the vector action",
    "oscillator-spectrum": "two-sector oscillator spectrum and vacuum shift",
    "oscillator-moments": "Gaussian theta-sector moments against oracles",
    "weight-function": "normalized weight function from the ground state",
    "coordinate-spread": "noncommutative enlargement of the coordinate spread",
    "dispersion": "frequency of plane waves in the extended space",
    "propagator": "momentum-space Green's function and its poles",
    "kg-lattice": "lattice wave operator consistency and convergence",
    "greens-solve": "spectral source inversion residual",
    "noether-charges": "conserved lattice charges of the free field",
    "moyal-product": "star-product commutator and associativity",
    "plumbing": "artifact-internal consistency",
}


@dataclass
class CheckResult:
    name: str
    paper_ref: str
    status: str
    residual: float
    tolerance: float
    runtime: float

    @staticmethod
    def build(name, ref, residual, tolerance, started) -> "CheckResult":
        if ref not in REFERENCES:
            raise ValueError(f"unregistered reference tag {ref!r}")
        ok = residual <= tolerance
        return CheckResult(
            name=name,
            paper_ref=ref,
            status="pass" if ok else "fail",
            residual=float(residual),
            tolerance=float(tolerance),
            runtime=round(time.perf_counter() - started, 6),
        )


class _Suite:
    def __init__(self):
        self.checks: list[CheckResult] = []

    def record(self, name, ref, residual, tolerance, started):
        self.checks.append(CheckResult.build(name, ref, residual, tolerance, started))


# ---------------------------------------------------------------------------
# parameter handling

PARAMS = {
    "D": (int, 3),
    "lambda": (float, 1.0),
    "m": (float, 1.0),
    "omega": (float, 1.0),
    "Lambda": (float, 1.0),
    "Omega": (float, 1.0),
    "seed": (int, 12345),
    "samples": (int, 1_000_000),
    "steps": (int, 1000),
    "nt": (int, 24),
    "nx": (int, 32),
    "ntheta": (int, 16),
}


class UsageError(Exception):
    pass


def parse_params(pairs: list[str], config_file: str | None = None) -> dict:
    values = {k: d for k, (_, d) in PARAMS.items()}
    merged: list[tuple[str, str]] = []
    if config_file:
        try:
            with open(config_file) as fh:
                for line in fh:
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    if "=" not in line:
                        raise UsageError(f"bad config line {line!r}")
                    k, _, v = line.partition("=")
                    merged.append((k.strip(), v.strip()))
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from exc
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"--set needs key=value, got {pair!r}")
        k, _, v = pair.partition("=")
        merged.append((k.strip(), v.strip()))
    for key, raw in merged:
        if key not in PARAMS:
            raise UsageError(f"unknown parameter {key!r}")
        typ, _ = PARAMS[key]
        try:
            values[key] = typ(raw)
        except ValueError as exc:
            raise UsageError(f"parameter {key} needs a {typ.__name__}") from exc
    return values


# ---------------------------------------------------------------------------
# suites


def _zero_expr_residual(exprs) -> float:
    return float(sum(0 if e.is_zero() else 1 for e in exprs))


def algebra_suite(p: dict) -> list[CheckResult]:
    s = _Suite()
    D = p["D"]

    t0 = time.perf_counter()
    alg = algebra.build(D)
    failures = sum(0 if r.is_zero() else 1 for *_, r in algebra.jacobi_suite(alg))
    s.record(f"jacobi-exhaustive-D{D}", "dfra-jacobi", failures, 0, t0)

    t0 = time.perf_counter()
    rel = algebra.build(3, relativistic=True)
    failures = sum(0 if r.is_zero() else 1 for *_, r in algebra.jacobi_suite(rel))
    s.record("jacobi-exhaustive-relativistic-4d", "dfra-jacobi", failures, 0, t0)

    t0 = time.perf_counter()
    bad = []
    for i in alg.indices:
        X = algebra.shifted_coordinate(alg, i)
        for j in alg.indices:
            expect = Expression.scalar(I) if i == j else Expression.zero()
            bad.append(bracket(X, alg.p(j), alg.table) - expect)
            bad.append(bracket(X, algebra.shifted_coordinate(alg, j), alg.table))
    s.record(f"shifted-coordinate-D{D}", "shifted-coordinate",
             _zero_expr_residual(bad), 0, t0)

    t0 = time.perf_counter()
    idx = list(alg.indices)
    residuals = [
        algebra.so_closure_residual(alg, i, j, k, l)
        for i in idx for j in idx for k in idx for l in idx
        if i != j and k != l
    ]
    s.record(f"j-closure-D{D}", "so-closure", _zero_expr_residual(residuals), 0, t0)

    t0 = time.perf_counter()
    diffs = []
    for (i, j, k, l) in [(1, 2, 2, 1), (1, 2, 2, 3)] if D >= 3 else [(1, 2, 2, 1)]:
        got = algebra.little_l_residual(alg, i, j, k, l)
        expect = algebra.little_l_theta_terms(alg, i, j, k, l)
        diffs.append(got - expect)
    s.record(f"little-l-residual-D{D}", "little-l-obstruction",
             _zero_expr_residual(diffs), 0, t0)

    t0 = time.perf_counter()
    eps = [[Fraction(0)] * D for _ in range(D)]
    eps[0][1], eps[1][0] = Fraction(1), Fraction(-1)
    bad = [
        algebra.rotate(alg, eps, alg.x(1)) - normal_form(alg.x(2), alg.table),
        algebra.rotate(alg, eps, alg.p(1)) - normal_form(alg.p(2), alg.table),
        algebra.rotate(alg, eps, Expression.scalar(1)),
    ]
    s.record(f"rotation-transforms-D{D}", "rotation-transforms",
             _zero_expr_residual(bad), 0, t0)

    t0 = time.perf_counter()
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    bad = []
    for (m1, n1) in pairs:
        for (r1, s1) in pairs:
            M = lambda a, b: algebra.lorentz_generator(rel, a, b)
            lhs = bracket(M(m1, n1), M(r1, s1), rel.table)
            rhs = (
                rel.metric(m1, s1) * M(r1, n1)
                - rel.metric(n1, s1) * M(r1, m1)
                - rel.metric(m1, r1) * M(s1, n1)
                + rel.metric(n1, r1) * M(s1, m1)
            ) * I
            bad.append(normal_form(lhs - rhs, rel.table))
    s.record("lorentz-generator-closure", "lorentz-generator",
             _zero_expr_residual(bad), 0, t0)

    t0 = time.perf_counter()
    lp = 1.0
    theta = np.zeros((4, 4))
    theta[0, 1] = theta[2, 3] = lp**2
    theta -= theta.T
    r1, r2 = algebra.quantum_conditions(theta, lp)
    s.record("quantum-conditions-selfdual", "quantum-conditions",
             abs(r1) + abs(r2), 1e-12, t0)
    return s.checks


def constraints_suite(p: dict) -> list[CheckResult]:
    s = _Suite()
    D = p["D"]
    ps = constraints.build_phase_space(D)
    cs = constraints.dfra_constraints(ps)

    t0 = time.perf_counter()
    delta = constraints.constraint_matrix(ps, cs).scalar_matrix()
    mism = 0
    for a in range(2 * D):
        for b in range(2 * D):
            expect = 1 if b == a + D else (-1 if a == b + D else 0)
            mism += delta[a][b] != GaussRat(expect)
    ok = constraints.classify(ps, cs) == "second-class"
    s.record(f"constraint-matrix-D{D}", "constraint-matrix",
             mism + (0 if ok else 1), 0, t0)

    t0 = time.perf_counter()
    db = constraints.DiracBracket(ps, cs)
    alg = algebra.build(D)
    mism = 0
    qgens, cgens = alg.generators(), ps.core_generators()
    for qa, ca in zip(qgens, cgens):
        for qb, cb in zip(qgens, cgens):
            mapped = Expression({w: c * I for w, c in db(ca, cb).terms.items()})
            if bracket(qa, qb, alg.table) != normal_form(mapped, alg.table):
                mism += 1
    s.record(f"dirac-quantization-D{D}", "dirac-quantization", mism, 0, t0)

    t0 = time.perf_counter()
    rng = random.Random(p["seed"])
    gens = [g for e in ps.generators() for g in e.generators()]
    bad = 0
    for _ in range(200):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            word = tuple(sorted((rng.choice(gens) for _ in range(rng.randint(0, 2))),
                                key=lambda g: g.sort_key))
            terms[word] = GaussRat(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                                   Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        A = normal_form(Expression(terms), ps.table)
        for xi in cs.constraints:
            if not db(A, xi).is_zero():
                bad += 1
    s.record(f"dirac-constraint-surface-D{D}", "dirac-constraint-surface",
             bad, 0, t0)

    t0 = time.perf_counter()
    idx = list(ps.indices)
    residuals = [
        constraints.classical_j_closure_residual(db, i, j, k, l)
        for i in idx for j in idx for k in idx for l in idx
        if i != j and k != l
    ]
    s.record(f"classical-j-closure-D{D}", "classical-so-closure",
             _zero_expr_residual(residuals), 0, t0)

    t0 = time.perf_counter()
    H = constraints.standard_hamiltonian(ps, m=1, omega=1, Lambda=1, Omega=1)
    bad = [
        constraints.hamiltonian_flow(ps, cs, H, constraints.shifted_coordinate(ps, 1))
        - ps.p(1),
        constraints.hamiltonian_flow(ps, cs, H, ps.theta(1, 2)) - ps.pi(1, 2),
        constraints.hamiltonian_flow(ps, cs, H, H),
    ]
    s.record(f"hamiltonian-flow-D{D}", "hamiltonian-flow",
             _zero_expr_residual([normal_form(b, ps.table) for b in bad]), 0, t0)

    t0 = time.perf_counter()
    psr = constraints.build_phase_space(3, relativistic=True)
    csr = constraints.dfra_constraints(psr)
    deltar = constraints.constraint_matrix(psr, csr).scalar_matrix()
    n = 4
    mism = 0
    for a in range(n):
        for b in range(n):
            mism += deltar[a][b + n] != GaussRat(psr.metric(a, b))
            mism += deltar[a + n][b] != GaussRat(-psr.metric(a, b))
    s.record("constraint-matrix-relativistic", "constraint-matrix", mism, 0, t0)
    return s.checks


def reps_suite(p: dict) -> list[CheckResult]:
    s = _Suite()
    rng = random.Random(p["seed"])

    t0 = time.perf_counter()
    mism = 0
    for _ in range(100):
        g1 = reps.random_exact_element(rng)
        g2 = reps.random_exact_element(rng)
        g12 = reps.compose(g1, g2)
        for rep in (reps.d1, reps.d2, reps.d3, reps.d4, reps.d5):
            lhs = rep(g1).dot(rep(g2))
            rhs = rep(g12)
            if any(a != b for a, b in zip(lhs.flat, rhs.flat)):
                mism += 1
    s.record("rep-homomorphism-100", "rep-homomorphism", mism, 0, t0)

    t0 = time.perf_counter()
    mism = 0
    for _ in range(25):
        e1 = _random_infinitesimal(rng)
        e2 = _random_infinitesimal(rng)
        e3 = reps.compose_infinitesimal(e1, e2)
        g1, g2, g3 = map(reps.generator_matrix, (e1, e2, e3))
        diff = g1.dot(g2) - g2.dot(g1) - g3
        if any(x != 0 for x in diff.flat):
            mism += 1
    s.record("infinitesimal-closure-25", "rep-infinitesimal", mism, 0, t0)

    t0 = time.perf_counter()
    nrng = np.random.default_rng(p["seed"])
    k = np.array([2.0, 0.3, -0.5, 0.1])
    K = reps.vec_to_mat(nrng.normal(0, 1, 6))
    c1, _, c3, _ = reps.casimirs(k, K)
    worst = 0.0
    for _ in range(100):
        lam = reps.random_float_lorentz(nrng)
        c1b, _, c3b, _ = reps.casimirs(lam.dot(k), lam.dot(K).dot(lam.T))
        worst = max(worst, abs(c1b - c1), abs(c3b - c3))
    s.record("casimir-invariance-100", "casimirs", worst, 1e-10, t0)

    t0 = time.perf_counter()
    resid = _scalar_transform_commutator_residual()
    s.record("scalar-transform-commutator", "scalar-transform", resid, 1e-9, t0)
    return s.checks


def _random_infinitesimal(rng: random.Random):
    w_up = np.array([[Fraction(0)] * 4 for _ in range(4)], dtype=object)
    b = np.array([[Fraction(0)] * 4 for _ in range(4)], dtype=object)
    for mu, nu in reps.PAIRS:
        v = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        w_up[mu, nu], w_up[nu, mu] = v, -v
        u = Fraction(rng.randint(-4, 4), rng.randint(1, 2))
        b[mu, nu], b[nu, mu] = u, -u
    a = np.array([Fraction(rng.randint(-5, 5), 2) for _ in range(4)], dtype=object)
    return reps.InfinitesimalElement.from_antisymmetric(w_up, a, b)


def _scalar_transform_commutator_residual() -> float:
    xs = np.linspace(-1.0, 1.0, 9)
    shape = [1] * 10
    origin = [0.0] * 10
    spacing = [1.0] * 10
    grids = []
    for axis, use in enumerate([True, True, False, False, True, True] + [False] * 4):
        n = 9 if use else 1
        shape[axis] = n
        origin[axis] = xs[0] if use else 0.0
        spacing[axis] = xs[1] - xs[0] if use else 1.0
        c = origin[axis] + spacing[axis] * np.arange(n)
        view = [1] * 10
        view[axis] = n
        grids.append(c.reshape(view))
    g = grids
    values = (g[0] ** 2 + 2 * g[0] * g[1] + g[1] * g[4] + g[4] * g[5]
              + g[5] ** 2 + 0.5 * g[0] * g[5])
    values = np.broadcast_to(values, shape).astype(float).copy()
    f = reps.SampledField(values, tuple(origin), tuple(spacing))
    w_up = np.zeros((4, 4))
    w_up[0, 1], w_up[1, 2] = 0.3, -0.2
    w_up -= w_up.T
    e1 = reps.InfinitesimalElement.from_antisymmetric(w_up)
    e2 = reps.InfinitesimalElement(
        np.zeros((4, 4)), np.array([0.7, -0.4, 0.0, 0.0]),
        reps.vec_to_mat([0.5, -0.3, 0, 0, 0, 0]),
    )
    e3 = reps.compose_infinitesimal(e1, e2)

    def apply(e, vals):
        return reps.scalar_field_transform(
            e, reps.SampledField(vals, f.origin, f.spacing)
        )

    comm = apply(e1, apply(e2, f.values)) - apply(e2, apply(e1, f.values))
    return float(np.abs(comm - apply(e3, f.values)).max())


def clifford_suite(p: dict) -> list[CheckResult]:
    s = _Suite()
    gs = clifford.build_gammas()
    sg = clifford.spinor_generator(gs)

    t0 = time.perf_counter()
    s.record("anticommutators-100", "clifford-anticommutators",
             clifford.anticommutator_residual(gs), 1e-12, t0)

    t0 = time.perf_counter()
    s.record("spinor-lorentz-closure", "spinor-generator",
             clifford.lorentz_closure_residual(sg), 1e-12, t0)

    t0 = time.perf_counter()
    resid = max(clifford.vector_covariance_residual(gs, sg),
                clifford.pair_covariance_residual(gs, sg))
    s.record("covariance-commutators", "spinor-generator", resid, 1e-12, t0)

    t0 = time.perf_counter()
    rng = np.random.default_rng(p["seed"])
    worst = 0.0
    for _ in range(100):
        k = rng.normal(0, 1, 4)
        K = reps.vec_to_mat(rng.normal(0, 1, 6))
        lam = rng.uniform(0.1, 2.0)
        m = rng.uniform(0.1, 2.0)
        worst = max(worst, clifford.dirac_square_residual(gs, k, K, lam, m))
    s.record("dirac-square-scalar-100", "dirac-operator", worst, 1e-12, t0)

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(10):
        omega = reps.vec_to_mat(rng.normal(0, 0.2, 6))
        worst = max(worst, clifford.intertwining_residual(gs, omega))
    s.record("boost-intertwining-10", "spinor-boost", worst, 1e-10, t0)

    t0 = time.perf_counter()
    omega = np.zeros((4, 4))
    omega[1, 2] = 2.0 * np.pi
    omega -= omega.T
    S = clifford.spinor_boost(gs, omega)
    s.record("two-pi-rotation-minus-identity", "spinor-boost",
             float(np.abs(S + np.eye(32)).max()), 1e-10, t0)
    return s.checks


def oscillator_suite(p: dict) -> list[CheckResult]:
    s = _Suite()
    quad_tol = 1e-8

    for D in (2, 3):
        cfg = oscillator.OscillatorConfig(
            m=p["m"], omega=p["omega"], Lambda=p["Lambda"], Omega=p["Omega"], D=D
        )
        t0 = time.perf_counter()
        worst = 0.0
        M = cfg.n_modes
        est = oscillator.moment_oracle(cfg, oscillator.monomial((0,) * M))
        worst = max(worst, abs(est.value - 1.0))
        for c in range(M):
            e1 = [0] * M
            e1[c] = 1
            est = oscillator.moment_oracle(cfg, oscillator.monomial(tuple(e1)))
            worst = max(worst, abs(est.value - 0.0))
            e1[c] = 2
            est = oscillator.moment_oracle(cfg, oscillator.monomial(tuple(e1)))
            worst = max(worst, abs(est.value - oscillator.moment(cfg, "theta_ij_theta_kl")))
        est = oscillator.moment_oracle(cfg, lambda th: (th * th).sum(axis=-1))
        worst = max(worst, abs(est.value - oscillator.moment(cfg, "theta2")))
        s.record(f"moments-vs-quadrature-D{D}", "oscillator-moments", worst, quad_tol, t0)

        t0 = time.perf_counter()
        mc = oscillator.moment_oracle(
            cfg, oscillator.monomial((2,) + (0,) * (M - 1)),
            "monte-carlo", samples=p["samples"], seed=p["seed"],
        )
        dev = abs(mc.value - oscillator.moment(cfg, "theta_ij_theta_kl"))
        s.record(f"moments-vs-monte-carlo-D{D}", "oscillator-moments",
                 dev, 3.0 * mc.error, t0)

        t0 = time.perf_counter()
        shift = oscillator.vacuum_shift(cfg)
        s.record(f"vacuum-shift-D{D}", "oscillator-spectrum",
                 abs(shift - D * (D - 1) * cfg.Omega / 4.0), 0, t0)

        t0 = time.perf_counter()
        rng = np.random.default_rng(p["seed"])
        worst = 0.0
        for _ in range(20):
            theta = rng.normal(0, 1, cfg.n_modes)
            w = oscillator.weight_function(cfg, theta)
            psi2 = abs(oscillator.ground_wavefunction(cfg, theta, 0.0)) ** 2
            worst = max(worst, abs(w - psi2))
        s.record(f"weight-is-wavefunction-squared-D{D}", "weight-function",
                 worst, 1e-12, t0)

    t0 = time.perf_counter()
    cfg2 = oscillator.OscillatorConfig(Lambda=p["Lambda"], Omega=p["Omega"], D=2)
    theta2 = oscillator.moment(cfg2, "theta2")
    s.record("theta2-closed-form-D2", "oscillator-moments",
             abs(theta2 - 1.0 / (2.0 * p["Lambda"] * p["Omega"])), 0, t0)

    # moment table records: the evaluated values ride in the record names
    for D in (2, 3):
        cfg = oscillator.OscillatorConfig(
            m=p["m"], omega=p["omega"], Lambda=p["Lambda"], Omega=p["Omega"], D=D
        )
        for label, which in (("theta2", "theta2"),
                             ("pair-moment", "theta_ij_theta_kl")):
            t0 = time.perf_counter()
            value = oscillator.moment(cfg, which)
            oracle = oscillator.moment_oracle(
                cfg,
                (lambda th: (th * th).sum(axis=-1))
                if which == "theta2"
                else oscillator.monomial((2,) + (0,) * (cfg.n_modes - 1)),
            )
            s.record(f"moment-{label}-D{D} = {value:g}", "oscillator-moments",
                     abs(value - oracle.value), quad_tol, t0)

    t0 = time.perf_counter()
    cfg3 = oscillator.OscillatorConfig(D=3)
    x2 = oscillator.x2_expectation(cfg3, 1.5, 1.5)
    s.record("x2-spread-ground-state-D3", "coordinate-spread",
             0.0 if x2 >= 1.5 else 1.0, 0, t0)
    return s.checks


def field_suite(p: dict) -> list[CheckResult]:
    s = _Suite()
    lam, m = p["lambda"], p["m"]

    t0 = time.perf_counter()
    residuals = []
    for n in (12, 24, 48):
        dx = 2.0 * np.pi / n
        f = field.plane_wave_mode((n, n, n), 1.0 / n, dx, dx, lam, m)
        residuals.append(float(np.abs(field.kg_apply(f)).max()))
    slopes = [math.log2(residuals[i] / residuals[i + 1]) for i in range(2)]
    worst = max(abs(sl - 2.0) for sl in slopes)
    s.record("kg-residual-order-2", "kg-lattice", worst, 0.1, t0)

    t0 = time.perf_counter()
    shape = (p["nt"], p["nx"], p["ntheta"])
    J = np.zeros(shape, dtype=complex)
    J[shape[0] // 3, shape[1] // 2, shape[2] // 2] = 1.0
    src = field.SourceTerm(J, 0.11, 0.37, 0.41, lam, m)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", field.IllConditionedWarning)
        phi = field.greens_solve(src)
    resid = np.abs(field.kg_apply(phi) - src.values[1:-1, 1:-1, 1:-1]).max()
    s.record("greens-residual", "greens-solve",
             float(resid / np.abs(J).max()), 1e-6, t0)

    t0 = time.perf_counter()
    nx, nq = p["nx"], p["ntheta"]
    dx = 2.0 * np.pi / nx
    dq = 2.0 * np.pi / nq
    dt = 0.5 * field.max_stable_dt(dx, dq, lam, m)
    phi0, phidot0, _ = field.discrete_mode_initial((nx, nq), dt, dx, dq, lam, m)
    *_, series = field.evolve_leapfrog(
        phi0, phidot0, p["steps"], dt, dx, dq, lam, m, record_every=max(1, p["steps"] // 10)
    )
    first = series[0][2]
    drift = 0.0
    for _, _, ch in series[1:]:
        for name_ in field.Charges._fields:
            ref = getattr(first, name_)
            scale = max(abs(ref), first.P0)
            drift = max(drift, abs(getattr(ch, name_) - ref) / scale)
    s.record(f"charge-drift-{p['steps']}-steps", "noether-charges", drift, 1e-6, t0)

    t0 = time.perf_counter()
    from scipy.optimize import brentq

    kvec = np.array([0.4, 0.0, 0.0])
    k2 = np.zeros((4, 4))
    k2[1, 2], k2[2, 1] = 0.6, -0.6
    w = field.dispersion(kvec, k2, lam, m)
    worst = 0.0
    for sign in (+1, -1):
        root = brentq(
            lambda k0: field.ExtendedMomentum(
                np.array([k0, *kvec]), k2, lam
            ).squared() + m**2,
            sign * w - 0.5, sign * w + 0.5,
        )
        worst = max(worst, abs(root - sign * w))
    s.record("propagator-poles-at-dispersion", "propagator", worst, 1e-10, t0)

    t0 = time.perf_counter()
    sym = field.kg_symbol((16, 12, 10), 0.05, 0.2, 0.25, lam, m)
    worst = 0.0
    for j in [(0, 1, 0), (1, 0, 1), (2, 1, 1)]:
        w_eff = 2.0 / 0.05 * math.sin(math.pi * j[0] / 16)
        kx_eff = 2.0 / 0.2 * math.sin(math.pi * j[1] / 12)
        kq_eff = 2.0 / 0.25 * math.sin(math.pi * j[2] / 10)
        K = field.ExtendedMomentum(
            np.array([-w_eff, kx_eff, 0.0, 0.0]),
            np.array([[0, 0, 0, 0], [0, 0, kq_eff, 0], [0, -kq_eff, 0, 0], [0, 0, 0, 0]]),
            lam,
        )
        worst = max(worst, abs(sym[j] - (1.0 / field.propagator(K, m)).real))
    s.record("symbol-matches-propagator", "propagator", worst, 1e-9, t0)

    t0 = time.perf_counter()
    rng = random.Random(p["seed"])
    theta = [[Fraction(0), Fraction(2, 5)], [Fraction(-2, 5), Fraction(0)]]
    x1 = field.CommutingPoly.coordinate(2, 0)
    x2 = field.CommutingPoly.coordinate(2, 1)
    comm = field.star_commutator(x1, x2, theta, 6)
    mism = 0 if comm == field.CommutingPoly(
        2, {(0, 0): GaussRat(0, Fraction(2, 5))}
    ) else 1
    for _ in range(10):
        f_, g_, h_ = (_random_cpoly(rng) for _ in range(3))
        lhs = field.moyal_star(field.moyal_star(f_, g_, theta, 6), h_, theta, 6)
        rhs = field.moyal_star(f_, field.moyal_star(g_, h_, theta, 6), theta, 6)
        mism += lhs != rhs
    s.record("moyal-commutator-and-associativity", "moyal-product", mism, 0, t0)
    return s.checks


def _random_cpoly(rng: random.Random):
    terms = {}
    for _ in range(rng.randint(2, 5)):
        while True:
            exps = (rng.randint(0, 3), rng.randint(0, 3))
            if sum(exps) <= 3:
                break
        terms[exps] = GaussRat(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                               Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    return field.CommutingPoly(2, terms)


SUITES = {
    "algebra": algebra_suite,
    "constraints": constraints_suite,
    "reps": reps_suite,
    "clifford": clifford_suite,
    "oscillator": oscillator_suite,
    "field": field_suite,
}


def run_suite(suite: str, params: dict) -> dict:
    checks: list[CheckResult] = []
    if suite == "all":
        for D in (2, 3, 4):
            checks += algebra_suite({**params, "D": D})
        for name in ("constraints", "reps", "clifford", "oscillator", "field"):
            checks += SUITES[name](params)
    elif suite in SUITES:
        checks += SUITES[suite](params)
    else:
        raise UsageError(f"unknown suite {suite!r}")
    passed = sum(c.status == "pass" for c in checks)
    return {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "suite": suite,
        "seed": params["seed"],
        "params": {k: params[k] for k in sorted(params)},
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "checks": [asdict(c) for c in checks],
        "summary": {"total": len(checks), "passed": passed,
                    "failed": len(checks) - passed},
    }


def format_report_text(report: dict) -> str:
    lines = [
        f"suite {report['suite']}  (toolkit {report['version']}, "
        f"seed {report['seed']})"
    ]
    for c in report["checks"]:
        lines.append(
            f"[{c['status'].upper():4s}] {c['name']:42s} ref={c['paper_ref']:28s}"
            f" residual={c['residual']:.3e} tol={c['tolerance']:.1e}"
            f" t={c['runtime']:.2f}s"
        )
    s = report["summary"]
    lines.append(f"{s['passed']}/{s['total']} checks passed")
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".report-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# entry points


def _cmd_run(args) -> int:
    params = parse_params(args.set or [], args.config)
    report = run_suite(args.suite, params)
    text = (
        json.dumps(report, indent=2, sort_keys=True) + "\n"
        if args.format == "json"
        else format_report_text(report)
    )
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["failed"] == 0 else 1


def _cmd_eval(args) -> int:
    params = parse_params(args.set or [], None)
    if args.table == "dfra":
        table = algebra.build(params["D"]).table
    elif args.table == "dfra-relativistic":
        table = algebra.build(params["D"], relativistic=True).table
    elif args.table == "poisson":
        table = constraints.build_phase_space(params["D"]).table
    else:
        raise UsageError(f"unknown table {args.table!r}")
    expr = parse_expression(args.expression, table)
    sys.stdout.write(format_expression(normal_form(expr, table)) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfra",
        description="verification suites for the extended noncommutative phase space",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    prun = sub.add_parser("run", help="run a named verification suite")
    prun.add_argument("--suite", default="all",
                      choices=[*SUITES.keys(), "all"])
    prun.add_argument("--set", action="append", metavar="KEY=VALUE",
                      help="override a parameter (repeatable)")
    prun.add_argument("--format", default="text", choices=["text", "json"])
    prun.add_argument("--out", help="write the report to this path (atomic)")
    prun.add_argument("--seed", type=int, help="shorthand for --set seed=N")
    prun.add_argument("--samples", type=int,
                      help="shorthand for --set samples=N")
    prun.add_argument("--config", help="flat key=value parameter file")
    prun.set_defaults(func=_cmd_run)

    peval = sub.add_parser("eval", help="normalize an expression or bracket")
    peval.add_argument("expression")
    peval.add_argument("--table", default="dfra",
                       choices=["dfra", "dfra-relativistic", "poisson"])
    peval.add_argument("--set", action="append", metavar="KEY=VALUE")
    peval.set_defaults(func=_cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if getattr(args, "seed", None) is not None:
        args.set = (args.set or []) + [f"seed={args.seed}"]
    if getattr(args, "samples", None) is not None:
        args.set = (args.set or []) + [f"samples={args.samples}"]
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ParseError, SymError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
