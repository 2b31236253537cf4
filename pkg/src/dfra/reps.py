"""Dense-matrix representations of the extended Poincare group.

The group element (Lambda, A, B) carries a Lorentz matrix, an x-translation
and an antisymmetric theta-translation.  Representations:

    d1  4x4    vector
    d2  6x6    antisymmetric product acting on theta 6-vectors
    d3  5x5    Poincare on (X, 1)
    d4  7x7    theta-sector affine group on (theta, 1)
    d5  11x11  the full product on (X, theta, 1)

Matrices are built from whatever the entries of the input are: exact
Fraction matrices stay exact (closure proofs), float matrices go through
numpy doubles.  The antisymmetric basis fixes pair order
(0,1),(0,2),(0,3),(1,2),(1,3),(2,3); d2 rows/columns are the plain
antisymmetrized product Lambda^mu_a Lambda^nu_b - Lambda^mu_b Lambda^nu_a
restricted to that basis (no 1/2), which is the unique normalization whose
6-vector action matches the full-sum transform of an antisymmetric tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# canonical antisymmetric-pair basis
PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_SLOT = {p: s for s, p in enumerate(PAIRS)}

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
ETA_EXACT = np.array(
    [[Fraction(-1 if i == 0 else (1 if i == j else 0)) if i == j else Fraction(0)
      for j in range(4)] for i in range(4)],
    dtype=object,
)


def _eta_like(mat: np.ndarray) -> np.ndarray:
    return ETA_EXACT if mat.dtype == object else ETA


def pair_slot(mu: int, nu: int) -> tuple[int, int]:
    """(basis slot, sign) for an ordered index pair; round-trip bijective."""
    if mu == nu:
        raise ValueError("pair indices must differ")
    if mu < nu:
        return _SLOT[(mu, nu)], 1
    return _SLOT[(nu, mu)], -1


def mat_to_vec(b: np.ndarray) -> np.ndarray:
    """Antisymmetric 4x4 to 6-vector over the canonical basis."""
    return np.array([b[mu, nu] for mu, nu in PAIRS])


def vec_to_mat(v) -> np.ndarray:
    """6-vector back to an antisymmetric 4x4."""
    v = np.asarray(v)
    out = np.zeros((4, 4), dtype=v.dtype)
    for s, (mu, nu) in enumerate(PAIRS):
        out[mu, nu] = v[s]
        out[nu, mu] = -v[s]
    return out


def _check_antisymmetric(m: np.ndarray, label: str) -> None:
    if m.shape != (4, 4):
        raise ValueError(f"{label} must be 4x4")
    if m.dtype == object:
        if any(m[i, j] != -m[j, i] for i in range(4) for j in range(4)):
            raise ValueError(f"{label} must be antisymmetric")
    elif not np.allclose(m, -m.T, atol=1e-12):
        raise ValueError(f"{label} must be antisymmetric")


def _check_lorentz(lam: np.ndarray) -> None:
    if lam.shape != (4, 4):
        raise ValueError("lambda must be 4x4")
    eta = _eta_like(lam)
    resid = lam.T.dot(eta).dot(lam) - eta
    if lam.dtype == object:
        if any(x != 0 for x in resid.flat):
            raise ValueError("lambda does not preserve the metric")
    elif not np.allclose(resid, 0.0, atol=1e-12):
        raise ValueError("lambda does not preserve the metric")


@dataclass(frozen=True)
class GroupElement:
    """(Lambda, A, B): Lorentz matrix, x-translation, theta-translation."""

    lam: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lam", np.asarray(self.lam))
        object.__setattr__(self, "a", np.asarray(self.a))
        object.__setattr__(self, "b", np.asarray(self.b))
        _check_lorentz(self.lam)
        if self.a.shape != (4,):
            raise ValueError("a must be a 4-vector")
        _check_antisymmetric(self.b, "b")

    @staticmethod
    def identity() -> "GroupElement":
        return GroupElement(np.eye(4), np.zeros(4), np.zeros((4, 4)))

    @staticmethod
    def pure_lorentz(lam) -> "GroupElement":
        lam = np.asarray(lam)
        if lam.dtype == object:
            zero_v = np.array([Fraction(0)] * 4, dtype=object)
            zero_m = np.array([[Fraction(0)] * 4 for _ in range(4)], dtype=object)
            return GroupElement(lam, zero_v, zero_m)
        return GroupElement(lam, np.zeros(4), np.zeros((4, 4)))


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Group law: (L1 L2, L1 A2 + A1, D2(L1) B2 + B1)."""
    lam = g1.lam.dot(g2.lam)
    a = g1.lam.dot(g2.a) + g1.a
    b = g1.lam.dot(g2.b).dot(g1.lam.T) + g1.b
    return GroupElement(lam, a, b)


def d1(g: GroupElement) -> np.ndarray:
    return g.lam.copy()


def d2(g: GroupElement) -> np.ndarray:
    lam = g.lam
    out = np.empty((6, 6), dtype=lam.dtype)
    for r, (mu, nu) in enumerate(PAIRS):
        for c, (al, be) in enumerate(PAIRS):
            out[r, c] = lam[mu, al] * lam[nu, be] - lam[mu, be] * lam[nu, al]
    return out


def d3(g: GroupElement) -> np.ndarray:
    out = _block_identity(5, g.lam.dtype)
    out[:4, :4] = g.lam
    out[:4, 4] = g.a
    return out


def d4(g: GroupElement) -> np.ndarray:
    out = _block_identity(7, g.lam.dtype)
    out[:6, :6] = d2(g)
    out[:6, 6] = mat_to_vec(g.b)
    return out


def d5(g: GroupElement) -> np.ndarray:
    out = _block_identity(11, g.lam.dtype)
    out[:4, :4] = g.lam
    out[4:10, 4:10] = d2(g)
    out[:4, 10] = g.a
    out[4:10, 10] = mat_to_vec(g.b)
    return out


def _block_identity(n: int, dtype) -> np.ndarray:
    if dtype == object:
        out = np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n)


# ---------------------------------------------------------------------------
# infinitesimal elements


@dataclass(frozen=True)
class InfinitesimalElement:
    """(omega, a, b) with omega in the mixed-index convention omega^mu_nu.

    omega^{mu nu} = omega^mu_rho eta^{rho nu} must be antisymmetric.
    """

    omega: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "omega", np.asarray(self.omega))
        object.__setattr__(self, "a", np.asarray(self.a))
        object.__setattr__(self, "b", np.asarray(self.b))
        if self.omega.shape != (4, 4) or self.a.shape != (4,):
            raise ValueError("omega must be 4x4 and a a 4-vector")
        eta = _eta_like(self.omega)
        _check_antisymmetric(self.omega.dot(eta), "omega^{mu nu}")
        _check_antisymmetric(self.b, "b")

    @staticmethod
    def zero() -> "InfinitesimalElement":
        return InfinitesimalElement(np.zeros((4, 4)), np.zeros(4), np.zeros((4, 4)))

    @staticmethod
    def from_antisymmetric(omega_upper, a=None, b=None) -> "InfinitesimalElement":
        """Build from antisymmetric omega^{mu nu}, lowering the second index."""
        omega_upper = np.asarray(omega_upper)
        eta = _eta_like(omega_upper)
        a = np.zeros(4) if a is None else a
        b = np.zeros((4, 4)) if b is None else b
        return InfinitesimalElement(omega_upper.dot(eta), a, b)


def compose_infinitesimal(
    e1: InfinitesimalElement, e2: InfinitesimalElement
) -> InfinitesimalElement:
    """Parameters of [delta_2, delta_1] = delta_3.

    omega_3 = omega_1 omega_2 - omega_2 omega_1 (mixed indices),
    a_3 = omega_1 a_2 - omega_2 a_1, and b_3 is the antisymmetrized
    omega_1 b_2 - omega_2 b_1.
    """
    omega3 = e1.omega.dot(e2.omega) - e2.omega.dot(e1.omega)
    a3 = e1.omega.dot(e2.a) - e2.omega.dot(e1.a)
    raw = e1.omega.dot(e2.b) - e2.omega.dot(e1.b)
    b3 = raw - raw.T
    return InfinitesimalElement(omega3, a3, b3)


def d2_first_order(omega: np.ndarray) -> np.ndarray:
    """Derivative of d2 at the identity in direction omega (mixed indices)."""
    out = np.zeros((6, 6), dtype=omega.dtype)
    if omega.dtype == object:
        out = np.array([[Fraction(0)] * 6 for _ in range(6)], dtype=object)
    delta = _block_identity(4, omega.dtype)
    for r, (mu, nu) in enumerate(PAIRS):
        for c, (al, be) in enumerate(PAIRS):
            out[r, c] = (
                omega[mu, al] * delta[nu, be]
                + delta[mu, al] * omega[nu, be]
                - omega[mu, be] * delta[nu, al]
                - delta[mu, be] * omega[nu, al]
            )
    return out


def generator_matrix(e: InfinitesimalElement) -> np.ndarray:
    """First-order d5 action: delta y = G y on the 11-vector (X, theta, 1)."""
    n = 11
    if e.omega.dtype == object:
        out = np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)
    else:
        out = np.zeros((n, n))
    out[:4, :4] = e.omega
    out[4:10, 4:10] = d2_first_order(e.omega)
    out[:4, 10] = e.a
    out[4:10, 10] = mat_to_vec(e.b)
    return out


# ---------------------------------------------------------------------------
# exact Lorentz elements

_PYTHAGOREAN = ((Fraction(3, 5), Fraction(4, 5)),
                (Fraction(5, 13), Fraction(12, 13)),
                (Fraction(8, 17), Fraction(15, 17)),
                (Fraction(7, 25), Fraction(24, 25)))


def exact_rotation(i: int, j: int, cos_sin: tuple[Fraction, Fraction]) -> np.ndarray:
    """Rational rotation in the spatial (i, j) plane, i, j in {1, 2, 3}."""
    c, s = cos_sin
    if c * c + s * s != 1:
        raise ValueError("cos^2 + sin^2 must equal 1 exactly")
    lam = _block_identity(4, np.dtype(object))
    lam[i, i] = c
    lam[j, j] = c
    lam[i, j] = -s
    lam[j, i] = s
    return lam


def exact_boost(axis: int, t: Fraction) -> np.ndarray:
    """Rational boost along a spatial axis, rapidity parameter |t| < 1."""
    t = Fraction(t)
    if abs(t) >= 1:
        raise ValueError("|t| must be < 1")
    ch = (1 + t * t) / (1 - t * t)
    sh = 2 * t / (1 - t * t)
    lam = _block_identity(4, np.dtype(object))
    lam[0, 0] = ch
    lam[axis, axis] = ch
    lam[0, axis] = sh
    lam[axis, 0] = sh
    return lam


def random_exact_element(rng) -> GroupElement:
    """Random exact group element: products of rational rotations and boosts."""
    lam = _block_identity(4, np.dtype(object))
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.5:
            i, j = rng.sample([1, 2, 3], 2)
            cs = rng.choice(_PYTHAGOREAN)
            factor = exact_rotation(min(i, j), max(i, j), cs)
        else:
            factor = exact_boost(rng.randint(1, 3), Fraction(rng.randint(-3, 3), 7))
        lam = lam.dot(factor)
    a = np.array([Fraction(rng.randint(-6, 6), 3) for _ in range(4)], dtype=object)
    bm = np.array([[Fraction(0)] * 4 for _ in range(4)], dtype=object)
    for mu, nu in PAIRS:
        v = Fraction(rng.randint(-6, 6), 2)
        bm[mu, nu] = v
        bm[nu, mu] = -v
    return GroupElement(lam, a, bm)


def random_float_lorentz(rng: np.random.Generator, scale: float = 0.4) -> np.ndarray:
    """Random proper Lorentz matrix via the exponential of a generator."""
    from scipy.linalg import expm

    upper = rng.normal(0.0, scale, (4, 4))
    upper = upper - upper.T
    return expm(upper.dot(ETA))


# ---------------------------------------------------------------------------
# Casimir evaluations


def minkowski_dot(u, v) -> float:
    u = np.asarray(u)
    v = np.asarray(v)
    return u.dot(_eta_like(u).dot(v))


def orbital_m1(x_ref, k) -> np.ndarray:
    """Orbital M1^{mu nu} = X^mu k^nu - X^nu k^mu at a reference point."""
    x_ref = np.asarray(x_ref)
    k = np.asarray(k)
    return np.outer(x_ref, k) - np.outer(k, x_ref)


def orbital_m2(theta_ref, K) -> np.ndarray:
    """Orbital M2^{mu nu} = -theta^{mu s} K_s^nu + theta^{nu s} K_s^mu."""
    theta_ref = np.asarray(theta_ref)
    K = np.asarray(K)
    raw = theta_ref.dot(_eta_like(theta_ref)).dot(K)
    return -raw + raw.T


def matrix_to_text(m: np.ndarray, title: str) -> str:
    """Row-major text serialization for golden files.

    The header documents the antisymmetric basis ordering used by the d2/d4
    blocks and the d5 column layout.
    """
    lines = [
        f"# {title}",
        "# antisymmetric basis order: " + " ".join(f"({a},{b})" for a, b in PAIRS),
        "# d5 layout: rows/cols = 4 vector, 6 pairs, 1 translation",
    ]
    for row in np.asarray(m):
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


_LEVI4 = None


def _levi4() -> np.ndarray:
    global _LEVI4
    if _LEVI4 is None:
        eps = np.zeros((4, 4, 4, 4))
        from itertools import permutations

        def sign(p):
            s = 1
            p = list(p)
            for i in range(len(p)):
                for j in range(i + 1, len(p)):
                    if p[i] > p[j]:
                        s = -s
            return s

        for p in permutations(range(4)):
            eps[p] = sign(p)
        _LEVI4 = eps
    return _LEVI4


def pauli_lubanski(m1, k) -> np.ndarray:
    """s_mu = (1/2) eps_{mu nu rho sigma} M1^{nu rho} k^sigma (lower index)."""
    m1 = np.asarray(m1, dtype=float)
    k = np.asarray(k, dtype=float)
    return 0.5 * np.einsum("mnrs,nr,s->m", _levi4(), m1, k)


def casimirs(k, K, m1=None, m2=None, x_ref=None, theta_ref=None):
    """(C1, C2, C3, C4) evaluated on plane-wave data.

    k is a contravariant 4-vector, K an antisymmetric contravariant 4x4.
    C1 = k.k and C3 = (1/2) K_{mu nu} K^{mu nu} are intrinsic.  C2 = s.s
    needs an angular-momentum matrix m1 (defaults to the orbital one at
    x_ref, which makes the Pauli-Lubanski vector vanish); C4 = (1/2)
    M2^{mu nu} K_{mu nu} likewise uses m2 or the orbital value at theta_ref.
    The 1/2 in C3 and C4 is the independent-component normalization.
    """
    k = np.asarray(k, dtype=float)
    K = np.asarray(K, dtype=float)
    _check_antisymmetric(K, "K")
    c1 = float(k.dot(ETA).dot(k))
    k_lower = ETA.dot(K).dot(ETA)
    c3 = 0.5 * float(np.einsum("mn,mn->", K, k_lower))
    if m1 is None:
        m1 = orbital_m1(np.zeros(4) if x_ref is None else x_ref, k)
    s = pauli_lubanski(m1, k)
    c2 = float(s.dot(ETA).dot(s))
    if m2 is None:
        m2 = orbital_m2(np.zeros((4, 4)) if theta_ref is None else theta_ref, K)
    c4 = 0.5 * float(np.einsum("mn,mn->", np.asarray(m2, dtype=float), k_lower))
    return c1, c2, c3, c4


# ---------------------------------------------------------------------------
# scalar fields sampled on an (x, theta) grid


class StencilError(ValueError):
    """An axis the transform needs is too small for central differences."""


@dataclass(frozen=True)
class SampledField:
    """Scalar samples on a rectangular grid over (x^0..x^3, theta pairs).

    values has 10 axes: four x axes then six theta axes in PAIRS order.
    Size-1 axes mean the field is constant along that direction (the
    derivative is zero); size-2 axes cannot support the central stencil.
    """

    values: np.ndarray
    origin: tuple[float, ...]
    spacing: tuple[float, ...]

    def __post_init__(self):
        if self.values.ndim != 10:
            raise ValueError("values must have 10 axes (4 x + 6 theta)")
        if len(self.origin) != 10 or len(self.spacing) != 10:
            raise ValueError("origin and spacing must have 10 entries")

    def coordinate(self, axis: int) -> np.ndarray:
        """Coordinate along one axis, broadcastable against values."""
        n = self.values.shape[axis]
        shape = [1] * 10
        shape[axis] = n
        return (
            self.origin[axis] + self.spacing[axis] * np.arange(n)
        ).reshape(shape)

    def derivative(self, axis: int) -> np.ndarray:
        n = self.values.shape[axis]
        if n == 1:
            return np.zeros_like(self.values)
        if n == 2:
            raise StencilError(f"axis {axis} has 2 points; need 1 or >= 3")
        return np.gradient(self.values, self.spacing[axis], axis=axis, edge_order=2)


def scalar_field_transform(e: InfinitesimalElement, f: SampledField) -> np.ndarray:
    """delta phi = -(a + omega x)^mu d_mu phi - (1/2)(b + 2 omega theta)^{mu nu} d_{mu nu} phi.

    Evaluated by central differences on the sample grid; the pair sum runs
    over the canonical basis with the antisymmetrized theta coefficient.
    """
    omega = np.asarray(e.omega, dtype=float)
    a = np.asarray(e.a, dtype=float)
    b = np.asarray(e.b, dtype=float)
    out = np.zeros_like(f.values)

    for mu in range(4):
        coeff = None
        if a[mu] != 0.0:
            coeff = np.full_like(f.values, a[mu])
        for nu in range(4):
            if omega[mu, nu] != 0.0:
                term = omega[mu, nu] * f.coordinate(nu)
                coeff = term if coeff is None else coeff + term
        if coeff is None:
            continue
        out = out - coeff * f.derivative(mu)

    def theta_coord(mu, nu):
        if mu == nu:
            return 0.0
        slot, sign = pair_slot(mu, nu)
        return sign * f.coordinate(4 + slot)

    for slot, (mu, nu) in enumerate(PAIRS):
        coeff = None
        if b[mu, nu] != 0.0:
            coeff = np.full_like(f.values, b[mu, nu])
        for rho in range(4):
            for upper, lower, sign in ((mu, nu, 1.0), (nu, mu, -1.0)):
                w = omega[upper, rho]
                if w == 0.0:
                    continue
                tc = theta_coord(rho, lower)
                if isinstance(tc, float):
                    continue
                term = sign * w * tc
                coeff = term if coeff is None else coeff + term
        if coeff is None:
            continue
        out = out - coeff * f.derivative(4 + slot)

    return out
