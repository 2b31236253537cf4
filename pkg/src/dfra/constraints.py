"""Constrained Hamiltonian engine on the enlarged classical phase space.

The phase space carries canonical pairs (x, p), (theta, pi), (Z, K) with the
standard Poisson structure.  Second-class constraint sets produce a constraint
matrix, inverted exactly over Gaussian rationals, and Dirac brackets

    {A, B}_D = {A, B} - {A, Xi^a} Dinv_{ab} {Xi^b, B}.

Quantizing {., .}_D -> (1/i)[., .] reproduces the commutator algebra of
`dfra.algebra` on matching pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .symcore import (
    BracketTable,
    Expression,
    GaussRat,
    Generator,
    bracket,
    format_expression,
    normal_form,
    parse_expression,
)


class ConstraintError(Exception):
    pass


class FieldDependentMatrixError(ConstraintError):
    """Constraint matrix entries are not scalars; classification deferred."""


class NotSecondClassError(ConstraintError):
    pass


@dataclass(frozen=True)
class PhaseSpace:
    """Canonical variables {x, p, theta, pi, Z, K} with Poisson structure."""

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

    def _vector(self, name: str, mu: int) -> Expression:
        self._check_index(mu)
        return Expression.generator(Generator(name, (mu,)))

    def _pair(self, name: str, mu: int, nu: int) -> Expression:
        self._check_index(mu)
        self._check_index(nu)
        if mu == nu:
            return Expression.zero()
        if mu > nu:
            return -Expression.generator(Generator(name, (nu, mu)))
        return Expression.generator(Generator(name, (mu, nu)))

    def x(self, mu):
        return self._vector("x", mu)

    def p(self, mu):
        return self._vector("p", mu)

    def Z(self, mu):
        return self._vector("Z", mu)

    def K(self, mu):
        return self._vector("K", mu)

    def theta(self, mu, nu):
        return self._pair("theta", mu, nu)

    def pi(self, mu, nu):
        return self._pair("pi", mu, nu)

    def generators(self) -> list[Expression]:
        gens = []
        for name in ("x", "p", "Z", "K"):
            gens += [self._vector(name, mu) for mu in self.indices]
        for name in ("theta", "pi"):
            gens += [self._pair(name, mu, nu) for mu, nu in combinations(self.indices, 2)]
        return gens

    def core_generators(self) -> list[Expression]:
        """The (x, p, theta, pi) sector shared with the quantum algebra."""
        gens = [self._vector("x", mu) for mu in self.indices]
        gens += [self._vector("p", mu) for mu in self.indices]
        gens += [self._pair("theta", mu, nu) for mu, nu in combinations(self.indices, 2)]
        gens += [self._pair("pi", mu, nu) for mu, nu in combinations(self.indices, 2)]
        return gens

    @property
    def num_variables(self) -> int:
        n = len(self.indices)
        return 2 * n + n * (n - 1) + 2 * n


def build_phase_space(D: int, relativistic: bool = False) -> PhaseSpace:
    """Poisson table: {x,p} = delta, {theta,pi} = delta-pair, {Z,K} = delta."""
    if D < 2:
        raise ValueError("D must be >= 2")
    idx = range(0 if relativistic else 1, D + 1)
    universe = []
    entries: dict[tuple[Generator, Generator], Expression] = {}
    one = Expression.scalar(1)
    for mu in idx:
        for name in ("x", "p", "Z", "K"):
            universe.append(Generator(name, (mu,)))
        entries[(Generator("x", (mu,)), Generator("p", (mu,)))] = one
        entries[(Generator("Z", (mu,)), Generator("K", (mu,)))] = one
    for mu, nu in combinations(idx, 2):
        universe.append(Generator("theta", (mu, nu)))
        universe.append(Generator("pi", (mu, nu)))
        entries[(Generator("theta", (mu, nu)), Generator("pi", (mu, nu)))] = one
    table = BracketTable(D, universe, entries, mode="poisson")
    return PhaseSpace(D=D, relativistic=relativistic, table=table)


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple[Expression, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.constraints) != len(self.labels):
            raise ValueError("labels must match constraints")
        for label, c in zip(self.labels, self.constraints):
            if c.degree() > 2:
                raise ValueError(f"constraint {label} has degree > 2")

    def __len__(self):
        return len(self.constraints)


def dfra_constraints(
    ps: PhaseSpace,
    alpha: Fraction | int = 0,
    beta: Fraction | int = Fraction(-1, 2),
    gamma: Fraction | int = 0,
    rho: Fraction | int = -1,
    sigma: Fraction | int = 0,
    lam: Fraction | int = 0,
) -> ConstraintSet:
    """The dimensionless-parameter constraint ansatz

        Psi^i  = Z^i + alpha x^i + beta theta^{ij} p_j + gamma theta^{ij} K_j
        Phi_i  = K_i + rho p_i + sigma pi_{ij} x^j + lam pi_{ij} Z^j

    with defaults selecting Psi^i = Z^i - (1/2) theta^{ij} p_j and
    Phi_i = K_i - p_i, the choice whose Dirac brackets quantize to the DFRA
    commutators.  In the relativistic case the Phi constraints are used with
    the index raised, so the constraint matrix comes out in eta blocks.
    """
    alpha, beta, gamma = Fraction(alpha), Fraction(beta), Fraction(gamma)
    rho, sigma, lam = Fraction(rho), Fraction(sigma), Fraction(lam)
    psis, phis, psi_labels, phi_labels = [], [], [], []
    for i in ps.indices:
        psi = ps.Z(i) + alpha * ps.x(i)
        for j in ps.indices:
            psi = psi + beta * ps.theta(i, j) * ps.p(j)
            psi = psi + gamma * ps.theta(i, j) * ps.K(j)
        psis.append(normal_form(psi, ps.table))
        psi_labels.append(f"Psi[{i}]")
        phi = ps.K(i) + rho * ps.p(i)
        for j in ps.indices:
            phi = phi + sigma * ps.pi(i, j) * ps.x(j)
            phi = phi + lam * ps.pi(i, j) * ps.Z(j)
        if ps.relativistic:
            phi = ps.metric(i, i) * phi
            phi_labels.append(f"Phi^[{i}]")
        else:
            phi_labels.append(f"Phi[{i}]")
        phis.append(normal_form(phi, ps.table))
    return ConstraintSet(tuple(psis + phis), tuple(psi_labels + phi_labels))


def constraint_set_from_text(ps: PhaseSpace, lines: list[str]) -> ConstraintSet:
    """Constraints from the textual expression syntax, one per line."""
    constraints, labels = [], []
    for k, line in enumerate(lines):
        if "=" in line:
            label, _, body = line.partition("=")
            label = label.strip()
        else:
            label, body = f"Xi[{k}]", line
        constraints.append(normal_form(parse_expression(body, ps.table), ps.table))
        labels.append(label)
    return ConstraintSet(tuple(constraints), tuple(labels))


@dataclass(frozen=True)
class ConstraintMatrix:
    entries: tuple[tuple[Expression, ...], ...]
    labels: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_scalar(self) -> bool:
        return all(e.is_scalar() for row in self.entries for e in row)

    def scalar_matrix(self) -> list[list[GaussRat]]:
        if not self.is_scalar():
            raise FieldDependentMatrixError(
                "constraint matrix has field-dependent entries"
            )
        return [[e.scalar_part() for e in row] for row in self.entries]

    def inverse(self) -> list[list[GaussRat]]:
        """Exact inverse of the scalar constraint matrix (Gauss-Jordan)."""
        m = self.scalar_matrix()
        n = self.size
        aug = [row[:] + [GaussRat(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if aug[r][col]), None)
            if pivot is None:
                raise NotSecondClassError("constraint matrix is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv_p = GaussRat(1) / aug[col][col]
            aug[col] = [v * inv_p for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        return [row[n:] for row in aug]

    def dump(self) -> str:
        lines = []
        for la, row in zip(self.labels, self.entries):
            for lb, e in zip(self.labels, row):
                if not e.is_zero():
                    lines.append(f"{{{la}, {lb}}} = {format_expression(e)}")
        return "\n".join(lines) + "\n"


def constraint_matrix(ps: PhaseSpace, cs: ConstraintSet) -> ConstraintMatrix:
    """Delta^{ab} = {Xi^a, Xi^b}."""
    rows = []
    for a in cs.constraints:
        rows.append(tuple(bracket(a, b, ps.table) for b in cs.constraints))
    return ConstraintMatrix(tuple(rows), cs.labels)


def classify(ps: PhaseSpace, cs: ConstraintSet) -> str:
    """'second-class' iff the (scalar) constraint matrix is invertible."""
    delta = constraint_matrix(ps, cs)
    if delta.size == 0:
        return "not-second-class"
    try:
        delta.inverse()
    except NotSecondClassError:
        return "not-second-class"
    return "second-class"


class DiracBracket:
    """Dirac bracket for a fixed second-class constraint set.

    Precomputes the inverse constraint matrix once; instances are immutable
    and safe to share.
    """

    def __init__(self, ps: PhaseSpace, cs: ConstraintSet):
        self.ps = ps
        self.cs = cs
        delta = constraint_matrix(ps, cs)
        if delta.size == 0:
            raise NotSecondClassError("empty constraint set")
        self.delta_inv = delta.inverse()

    def __call__(self, A: Expression, B: Expression) -> Expression:
        t = self.ps.table
        out = bracket(A, B, t)
        a_side = [bracket(A, xi, t) for xi in self.cs.constraints]
        b_side = [bracket(xi, B, t) for xi in self.cs.constraints]
        for a, row in enumerate(self.delta_inv):
            if a_side[a].is_zero():
                continue
            for b, coeff in enumerate(row):
                if coeff and not b_side[b].is_zero():
                    out = out - a_side[a] * b_side[b] * coeff
        return normal_form(out, t)


def dirac_bracket(
    ps: PhaseSpace, cs: ConstraintSet, A: Expression, B: Expression
) -> Expression:
    """{A, B}_D = {A, B} - {A, Xi^a} Dinv_{ab} {Xi^b, B}, exact."""
    return DiracBracket(ps, cs)(A, B)


def dirac_table_dump(ps: PhaseSpace, cs: ConstraintSet) -> str:
    """Golden-file text of all nonzero Dirac brackets among generators."""
    db = DiracBracket(ps, cs)
    gens = ps.generators()
    lines = []
    for i, a in enumerate(gens):
        for b in gens[i + 1 :]:
            val = db(a, b)
            if not val.is_zero():
                lines.append(
                    f"{{{format_expression(a)}, {format_expression(b)}}}_D"
                    f" = {format_expression(val)}"
                )
    return "\n".join(lines) + "\n"


def classical_J(ps: PhaseSpace, i: int, j: int) -> Expression:
    """J^{ij} = X^i p^j - X^j p^i - theta^{il} pi_l^j + theta^{jl} pi_l^i."""
    if i == j:
        raise ValueError("J needs i != j")
    X = lambda m: shifted_coordinate(ps, m)
    pu = lambda m: ps.p(m) * ps.metric(m, m)
    out = X(i) * pu(j) - X(j) * pu(i)
    for l in ps.indices:
        out = out - ps.theta(i, l) * ps.pi(l, j) * ps.metric(j, j)
        out = out + ps.theta(j, l) * ps.pi(l, i) * ps.metric(i, i)
    return normal_form(out, ps.table)


def shifted_coordinate(ps: PhaseSpace, i: int) -> Expression:
    """Classical X^i = x^i + (1/2) theta^{ij} p_j."""
    out = ps.x(i)
    for j in ps.indices:
        out = out + Fraction(1, 2) * ps.theta(i, j) * ps.p(j)
    return normal_form(out, ps.table)


def classical_j_closure_residual(
    db: DiracBracket, i: int, j: int, k: int, l: int
) -> Expression:
    """{J^{ij}, J^{kl}}_D minus the classical SO(D) pattern."""
    ps = db.ps
    J = lambda a, b: classical_J(ps, a, b) if a != b else Expression.zero()
    lhs = db(J(i, j), J(k, l))
    rhs = (
        ps.metric(i, l) * J(k, j)
        - ps.metric(j, l) * J(k, i)
        - ps.metric(i, k) * J(l, j)
        + ps.metric(j, k) * J(l, i)
    )
    return normal_form(lhs - rhs, ps.table)


def classical_rotate(db: DiracBracket, epsilon, A: Expression) -> Expression:
    """delta A = -(1/2) eps_{kl} {A, J^{kl}}_D."""
    ps = db.ps
    eps = [[Fraction(v) for v in row] for row in epsilon]
    n = ps.D
    if len(eps) != n or any(len(row) != n for row in eps):
        raise ValueError(f"epsilon must be {n}x{n}")
    for a in range(n):
        for b in range(n):
            if eps[a][b] != -eps[b][a]:
                raise ValueError("epsilon must be antisymmetric")
    out = Expression.zero()
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a == b or eps[a - 1][b - 1] == 0:
                continue
            out = out + db(A, classical_J(ps, a, b)) * eps[a - 1][b - 1]
    return normal_form(out * Fraction(-1, 2), ps.table)


def standard_hamiltonian(
    ps: PhaseSpace,
    m: Fraction | int = 1,
    omega: Fraction | int = 1,
    Lambda: Fraction | int = 1,
    Omega: Fraction | int = 1,
) -> Expression:
    """H = p^2/2m + m w^2 X^2/2 + pi^2/2L + L W^2 theta^2/2.

    Pair contractions use theta^2 = (1/2) theta_{ij} theta^{ij}, i.e. the sum
    over independent components, so the (X, p) and (theta, pi) sectors are two
    independent isotropic oscillators.
    """
    m, omega = Fraction(m), Fraction(omega)
    Lambda, Omega = Fraction(Lambda), Fraction(Omega)
    H = Expression.zero()
    for i in ps.indices:
        X = shifted_coordinate(ps, i)
        H = H + Fraction(1, 2) / m * ps.p(i) * ps.p(i)
        H = H + m * omega**2 * Fraction(1, 2) * X * X
    for i, j in combinations(ps.indices, 2):
        H = H + Fraction(1, 2) / Lambda * ps.pi(i, j) * ps.pi(i, j)
        H = H + Lambda * Omega**2 * Fraction(1, 2) * ps.theta(i, j) * ps.theta(i, j)
    return normal_form(H, ps.table)


def hamiltonian_flow(
    ps: PhaseSpace, cs: ConstraintSet, H: Expression, A: Expression
) -> Expression:
    """Adot = {A, H}_D.

    H must be quadratic in the decoupled variables (X, p, theta, pi); the
    X^2 term expands to phase-space word degree 4, which is the bound
    enforced here.
    """
    if H.degree() > 4:
        raise ValueError("Hamiltonian must be quadratic in (X, p, theta, pi)")
    return dirac_bracket(ps, cs, A, H)


def mass_shell_constraint(ps: PhaseSpace, m: Fraction | int) -> Expression:
    """chi = p^2 + m^2 (recorded for the relativistic free particle)."""
    if not ps.relativistic:
        raise ValueError("mass shell constraint is relativistic")
    out = Expression.scalar(Fraction(m) ** 2)
    for mu in ps.indices:
        out = out + ps.metric(mu, mu) * ps.p(mu) * ps.p(mu)
    return normal_form(out, ps.table)
