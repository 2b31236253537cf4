"""The DFRA commutator algebra and its derived operators.

Builds the bracket table for the extended phase space (x, p, theta, pi) in
arbitrary spatial dimension D, or its relativistic variant over spacetime
indices 0..D with metric diag(-1, 1, ..., 1), and exposes the shifted
coordinate X, the angular momenta l/L/J, the Lorentz generator M, and the
Planck-scale quantum conditions on a numeric theta matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .symcore import (
    BracketTable,
    Expression,
    Generator,
    GaussRat,
    I,
    bracket,
    normal_form,
)


@dataclass(frozen=True)
class DfraAlgebra:
    D: int
    relativistic: bool
    table: BracketTable

    @property
    def indices(self) -> range:
        return range(0 if self.relativistic else 1, self.D + 1)

    def metric(self, mu: int, nu: int) -> Fraction:
        if mu != nu:
            return Fraction(0)
        if self.relativistic and mu == 0:
            return Fraction(-1)
        return Fraction(1)

    def _check_index(self, mu: int) -> None:
        if mu not in self.indices:
            raise IndexError(f"index {mu} outside range {self.indices}")

    # generator expressions, with antisymmetric pairs normalized

    def x(self, mu: int) -> Expression:
        self._check_index(mu)
        return Expression.generator(Generator("x", (mu,)))

    def p(self, mu: int) -> Expression:
        self._check_index(mu)
        return Expression.generator(Generator("p", (mu,)))

    def theta(self, mu: int, nu: int) -> Expression:
        self._check_index(mu)
        self._check_index(nu)
        if mu == nu:
            return Expression.zero()
        if mu > nu:
            return -Expression.generator(Generator("theta", (nu, mu)))
        return Expression.generator(Generator("theta", (mu, nu)))

    def pi(self, mu: int, nu: int) -> Expression:
        self._check_index(mu)
        self._check_index(nu)
        if mu == nu:
            return Expression.zero()
        if mu > nu:
            return -Expression.generator(Generator("pi", (nu, mu)))
        return Expression.generator(Generator("pi", (mu, nu)))

    def generators(self) -> list[Expression]:
        """All generators as expressions, one per independent component."""
        gens = [self.x(mu) for mu in self.indices]
        gens += [self.p(mu) for mu in self.indices]
        gens += [self.theta(mu, nu) for mu, nu in combinations(self.indices, 2)]
        gens += [self.pi(mu, nu) for mu, nu in combinations(self.indices, 2)]
        return gens


def build(D: int, relativistic: bool = False) -> DfraAlgebra:
    """Bracket table for the extended algebra in D spatial dimensions.

    Nonzero relations: [x, p] = i delta, [x, x] = i theta,
    [theta, pi] = i delta-pair, and [x, pi] = -(i/2) delta-pair p.
    Everything else commutes.
    """
    if D < 2:
        raise ValueError("D must be >= 2: theta has no components below D = 2")
    idx = range(0 if relativistic else 1, D + 1)
    universe = []
    for mu in idx:
        universe.append(Generator("x", (mu,)))
        universe.append(Generator("p", (mu,)))
    pairs = list(combinations(idx, 2))
    for mu, nu in pairs:
        universe.append(Generator("theta", (mu, nu)))
        universe.append(Generator("pi", (mu, nu)))

    entries: dict[tuple[Generator, Generator], Expression] = {}
    for mu in idx:
        entries[(Generator("x", (mu,)), Generator("p", (mu,)))] = Expression.scalar(I)
    for mu, nu in pairs:
        entries[(Generator("x", (mu,)), Generator("x", (nu,)))] = Expression(
            {(Generator("theta", (mu, nu)),): I}
        )
        entries[(Generator("theta", (mu, nu)), Generator("pi", (mu, nu)))] = (
            Expression.scalar(I)
        )
        # [x^mu, pi_{ab}] = -(i/2) (delta^mu_a p_b - delta^mu_b p_a)
        entries[(Generator("x", (mu,)), Generator("pi", (mu, nu)))] = Expression(
            {(Generator("p", (nu,)),): GaussRat(0, Fraction(-1, 2))}
        )
        entries[(Generator("x", (nu,)), Generator("pi", (mu, nu)))] = Expression(
            {(Generator("p", (mu,)),): GaussRat(0, Fraction(1, 2))}
        )

    table = BracketTable(D, universe, entries, mode="commutator")
    return DfraAlgebra(D=D, relativistic=relativistic, table=table)


def shifted_coordinate(alg: DfraAlgebra, mu: int) -> Expression:
    """X^mu = x^mu + (1/2) theta^{mu nu} p_nu; commutes with itself and pi."""
    alg._check_index(mu)
    out = alg.x(mu)
    for nu in alg.indices:
        out = out + alg.theta(mu, nu) * alg.p(nu) * Fraction(1, 2)
    return normal_form(out, alg.table)


def angular_momentum(alg: DfraAlgebra, i: int, j: int, variant: str = "J") -> Expression:
    """Angular momentum over spatial indices.

    variant "little-l": x^i p^j - x^j p^i (does not close in SO(D));
    variant "L": X^i p^j - X^j p^i;
    variant "J": L^{ij} - theta^{il} pi_l^j + theta^{jl} pi_l^i, the total
    angular momentum that generates rotations on every sector.
    """
    if i == j:
        raise ValueError("angular momentum needs i != j")
    alg._check_index(i)
    alg._check_index(j)
    if variant == "little-l":
        base_i, base_j = alg.x(i), alg.x(j)
    elif variant in ("L", "J"):
        base_i, base_j = shifted_coordinate(alg, i), shifted_coordinate(alg, j)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    out = base_i * _p_upper(alg, j) - base_j * _p_upper(alg, i)
    if variant == "J":
        out = out - _theta_pi_term(alg, i, j) + _theta_pi_term(alg, j, i)
    return normal_form(out, alg.table)


def _p_upper(alg: DfraAlgebra, mu: int) -> Expression:
    return alg.p(mu) * alg.metric(mu, mu)


def _theta_pi_term(alg: DfraAlgebra, mu: int, nu: int) -> Expression:
    """theta^{mu sigma} pi_sigma^nu, index raised with the algebra metric."""
    out = Expression.zero()
    for sigma in alg.indices:
        out = out + alg.theta(mu, sigma) * alg.pi(sigma, nu) * alg.metric(nu, nu)
    return out


def lorentz_generator(alg: DfraAlgebra, mu: int, nu: int) -> Expression:
    """M^{mu nu} = X^mu p^nu - X^nu p^mu - theta^{mu s} pi_s^nu + theta^{nu s} pi_s^mu."""
    if not alg.relativistic:
        raise ValueError("Lorentz generator needs a relativistic algebra")
    alg._check_index(mu)
    alg._check_index(nu)
    out = (
        shifted_coordinate(alg, mu) * _p_upper(alg, nu)
        - shifted_coordinate(alg, nu) * _p_upper(alg, mu)
        - _theta_pi_term(alg, mu, nu)
        + _theta_pi_term(alg, nu, mu)
    )
    return normal_form(out, alg.table)


def rotate(alg: DfraAlgebra, epsilon, e: Expression) -> Expression:
    """Infinitesimal rotation delta e = (i/2) eps_{kl} [e, J^{kl}].

    epsilon is an antisymmetric D x D matrix of exact rationals indexed by
    the spatial indices 1..D.
    """
    eps = [[Fraction(v) for v in row] for row in epsilon]
    if len(eps) != alg.D or any(len(row) != alg.D for row in eps):
        raise ValueError(f"epsilon must be {alg.D}x{alg.D}")
    for a in range(alg.D):
        for b in range(alg.D):
            if eps[a][b] != -eps[b][a]:
                raise ValueError("epsilon must be antisymmetric")
    out = Expression.zero()
    for a in range(1, alg.D + 1):
        for b in range(1, alg.D + 1):
            if a == b or eps[a - 1][b - 1] == 0:
                continue
            J = angular_momentum(alg, a, b, "J")
            out = out + bracket(e, J, alg.table) * eps[a - 1][b - 1]
    return normal_form(out * GaussRat(0, Fraction(1, 2)), alg.table)


def lorentz_transform(alg: DfraAlgebra, omega, e: Expression) -> Expression:
    """Infinitesimal Lorentz transformation delta e = (i/2) w_{mu nu} [e, M^{mu nu}].

    omega is the antisymmetric lower-index parameter matrix over spacetime
    indices, with exact rational entries.  On the generators this produces
    the mixed-index patterns delta x^mu = w^mu_nu x^nu,
    delta p_mu = w_mu^nu p_nu, and the two-index tensor action on theta, pi.
    """
    if not alg.relativistic:
        raise ValueError("Lorentz transformations need a relativistic algebra")
    n = alg.D + 1
    w = [[Fraction(v) for v in row] for row in omega]
    if len(w) != n or any(len(row) != n for row in w):
        raise ValueError(f"omega must be {n}x{n}")
    for a in range(n):
        for b in range(n):
            if w[a][b] != -w[b][a]:
                raise ValueError("omega must be antisymmetric")
    out = Expression.zero()
    for mu in range(n):
        for nu in range(n):
            if w[mu][nu] == 0:
                continue
            out = out + bracket(e, lorentz_generator(alg, mu, nu), alg.table) * w[mu][nu]
    return normal_form(out * GaussRat(0, Fraction(1, 2)), alg.table)


def so_closure_residual(alg: DfraAlgebra, i: int, j: int, k: int, l: int) -> Expression:
    """[J^{ij}, J^{kl}] minus the SO(D) pattern; zero certifies closure."""
    J = lambda a, b: angular_momentum(alg, a, b, "J") if a != b else Expression.zero()
    lhs = bracket(J(i, j), J(k, l), alg.table)
    rhs = (
        alg.metric(i, l) * J(k, j)
        - alg.metric(j, l) * J(k, i)
        - alg.metric(i, k) * J(l, j)
        + alg.metric(j, k) * J(l, i)
    ) * I
    return normal_form(lhs - rhs, alg.table)


def little_l_residual(alg: DfraAlgebra, i: int, j: int, k: int, l: int) -> Expression:
    """[l^{ij}, l^{kl}] minus the SO(D) pattern: the theta p p obstruction."""
    ll = lambda a, b: (
        angular_momentum(alg, a, b, "little-l") if a != b else Expression.zero()
    )
    lhs = bracket(ll(i, j), ll(k, l), alg.table)
    rhs = (
        alg.metric(i, l) * ll(k, j)
        - alg.metric(j, l) * ll(k, i)
        - alg.metric(i, k) * ll(l, j)
        + alg.metric(j, k) * ll(l, i)
    ) * I
    return normal_form(lhs - rhs, alg.table)


def little_l_theta_terms(alg: DfraAlgebra, i: int, j: int, k: int, l: int) -> Expression:
    """-i th^{il} p^k p^j + i th^{jl} p^k p^i + i th^{ik} p^l p^j - i th^{jk} p^l p^i."""
    pu = lambda m: _p_upper(alg, m)
    out = (
        -alg.theta(i, l) * pu(k) * pu(j)
        + alg.theta(j, l) * pu(k) * pu(i)
        + alg.theta(i, k) * pu(l) * pu(j)
        - alg.theta(j, k) * pu(l) * pu(i)
    ) * I
    return normal_form(out, alg.table)


def jacobi_suite(alg: DfraAlgebra):
    """Yield (a, b, c, residual) for every unordered generator triple."""
    from .symcore import jacobi_residual

    gens = alg.generators()
    for a, b, c in combinations(gens, 3):
        yield a, b, c, jacobi_residual(a, b, c, alg.table)


# ---------------------------------------------------------------------------
# quantum conditions on a numeric eigenvalue matrix


def _levi_civita_4() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm, sign in (
        ((0, 1, 2, 3), 1), ((0, 2, 3, 1), 1), ((0, 3, 1, 2), 1),
        ((1, 0, 3, 2), 1), ((1, 2, 0, 3), 1), ((1, 3, 2, 0), 1),
        ((2, 0, 1, 3), 1), ((2, 1, 3, 0), 1), ((2, 3, 0, 1), 1),
        ((3, 0, 2, 1), 1), ((3, 1, 0, 2), 1), ((3, 2, 1, 0), 1),
        ((0, 1, 3, 2), -1), ((0, 2, 1, 3), -1), ((0, 3, 2, 1), -1),
        ((1, 0, 2, 3), -1), ((1, 2, 3, 0), -1), ((1, 3, 0, 2), -1),
        ((2, 0, 3, 1), -1), ((2, 1, 0, 3), -1), ((2, 3, 1, 0), -1),
        ((3, 0, 1, 2), -1), ((3, 1, 2, 0), -1), ((3, 2, 0, 1), -1),
    ):
        eps[perm] = sign
    return eps


_EPS4 = _levi_civita_4()
_ETA4 = np.diag([-1.0, 1.0, 1.0, 1.0])


def quantum_conditions(theta: np.ndarray, planck_length: float) -> tuple[float, float]:
    """Residuals of the Planck-scale conditions on a numeric theta matrix.

    Returns (theta_{mu nu} theta^{mu nu},
             ((1/4) *theta^{mu nu} theta_{mu nu})^2 - lambda_P^8)
    with *theta_{mu nu} = (1/2) eps_{mu nu rho sigma} theta^{rho sigma} and
    eps_{0123} = +1.  Both vanish iff the conditions hold.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (4, 4):
        raise ValueError("theta must be 4x4")
    if not np.allclose(theta, -theta.T, atol=1e-12):
        raise ValueError("theta must be antisymmetric")
    if planck_length <= 0:
        raise ValueError("planck_length must be positive")
    theta_lower = _ETA4 @ theta @ _ETA4
    first = float(np.einsum("mn,mn->", theta_lower, theta))
    dual_lower = 0.5 * np.einsum("mnrs,rs->mn", _EPS4, theta)
    dual_upper = _ETA4 @ dual_lower @ _ETA4
    pseudo = 0.25 * float(np.einsum("mn,mn->", dual_upper, theta_lower))
    second = pseudo**2 - planck_length**8
    return first, second
