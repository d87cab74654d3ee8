"""Lorentz group in six Euler angles: SO(3,1), SL(2,C) and the (u, v) representations.

Angles are ordered (theta1, theta2, theta3) for rotations about x, y, z and
(theta4, theta5, theta6) for boost rapidities along x, y, z.  Every factor of the
six-fold product is written in closed form so that the same code accepts plain
arrays and :class:`~spintop.core.jets.Jet` angles.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from operator import matmul
from typing import Any, Sequence

import numpy as np

from . import jets
from .errors import DomainError, SingularChart, UnsupportedRep

logger = logging.getLogger(__name__)

__all__ = [
    "G",
    "EPSILON",
    "ROTATION_GENERATORS",
    "BOOST_GENERATORS",
    "BASIS",
    "PAULI",
    "EulerAngles",
    "InvariantFrame",
    "SpinorRep",
    "as_angles",
    "lorentz_from_euler",
    "sl2c_from_euler",
    "vector_map",
    "is_proper_lorentz",
    "killing_vectors",
    "invariant_frame",
    "algebra_metric",
    "group_metric",
    "structure_constants",
    "killing_form",
    "adjoint_matrix",
    "euler_from_lorentz",
    "compose_angles",
    "left_translation_jacobian",
    "spin_matrices",
    "rep_generators",
    "rep_matrix",
    "casimir",
    "swap_permutation",
    "conjugate_rep_matrix",
    "symmetric_power",
    "rep_matrix_from_sl2c",
]

SINGULAR_CHART_DET = 1e-10

G = np.diag([-1.0, 1.0, 1.0, 1.0])

EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPSILON[_i, _j, _k] = 1.0
    EPSILON[_j, _i, _k] = -1.0


def _rotation_generator(k: int) -> np.ndarray:
    generator = np.zeros((4, 4))
    generator[1:, 1:] = -EPSILON[k]
    return generator


def _boost_generator(k: int) -> np.ndarray:
    generator = np.zeros((4, 4))
    generator[0, k + 1] = generator[k + 1, 0] = 1.0
    return generator


ROTATION_GENERATORS: tuple[np.ndarray, ...] = tuple(_rotation_generator(k) for k in range(3))
BOOST_GENERATORS: tuple[np.ndarray, ...] = tuple(_boost_generator(k) for k in range(3))
BASIS: tuple[np.ndarray, ...] = ROTATION_GENERATORS + BOOST_GENERATORS
"""Generator basis {J1, J2, J3, K1, K2, K3}; J3 rotates x into y."""

_BASIS_NORMS = np.array([np.trace(X @ X) for X in BASIS])

PAULI: tuple[np.ndarray, ...] = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_SIGMA_4 = (np.eye(2, dtype=complex),) + PAULI


@dataclass(frozen=True, slots=True)
class EulerAngles:
    """Six Euler angles: three rotation angles followed by three rapidities."""

    theta: tuple[float, float, float, float, float, float]

    def __post_init__(self) -> None:
        values = tuple(float(t) for t in self.theta)
        if len(values) != 6:
            raise DomainError(f"expected six Euler angles, got {len(values)}")
        if not all(math.isfinite(t) for t in values):
            raise DomainError("Euler angles must be finite")
        object.__setattr__(self, "theta", values)

    @property
    def rotations(self) -> tuple[float, float, float]:
        return self.theta[:3]

    @property
    def boosts(self) -> tuple[float, float, float]:
        return self.theta[3:]

    def as_array(self) -> np.ndarray:
        return np.array(self.theta)


@dataclass(frozen=True, slots=True)
class InvariantFrame:
    """Right-translated derivatives of the fourleg and their generator components.

    ``omega[alpha]`` is (dLambda / dtheta^alpha) Lambda^-1 and ``xi[a, alpha]``
    its coefficient along ``BASIS[a]``.
    """

    omega: np.ndarray
    xi: np.ndarray

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.xi))


def as_angles(angles: Any) -> Any:
    """Return *angles* as a length-6 float array, passing jets through unchanged."""

    if isinstance(angles, jets.Jet):
        if angles.shape != (6,):
            raise DomainError(f"expected six Euler angles, got shape {angles.shape}")
        if not np.all(np.isfinite(angles.val)):
            raise DomainError("Euler angles must be finite")
        return angles
    if isinstance(angles, EulerAngles):
        return angles.as_array()
    arr = np.asarray(angles, dtype=float)
    if arr.shape != (6,):
        raise DomainError(f"expected six Euler angles, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("Euler angles must be finite")
    return arr


def _vector_factor(alpha: int, t: Any) -> Any:
    X = BASIS[alpha]
    X2 = X @ X
    if alpha < 3:
        return np.eye(4) + jets.sin(t) * X + (1.0 - jets.cos(t)) * X2
    return np.eye(4) + jets.sinh(t) * X + (jets.cosh(t) - 1.0) * X2


def _lorentz_factors(theta: Any) -> list[Any]:
    return [_vector_factor(alpha, theta[alpha]) for alpha in range(6)]


def lorentz_from_euler(angles: Any) -> Any:
    """Return the fourleg matrix e^{theta1 J1} ... e^{theta6 K3}."""

    theta = as_angles(angles)
    return reduce(matmul, _lorentz_factors(theta))


def sl2c_from_euler(angles: Any) -> Any:
    """Return the SL(2,C) element covering :func:`lorentz_from_euler` at the same angles."""

    theta = as_angles(angles)
    factors = []
    for alpha in range(6):
        half = 0.5 * theta[alpha]
        sigma = PAULI[alpha % 3]
        if alpha < 3:
            factors.append(jets.cos(half) * np.eye(2) - 1j * jets.sin(half) * sigma)
        else:
            factors.append(jets.cosh(half) * np.eye(2) + jets.sinh(half) * sigma)
    return reduce(matmul, factors)


def vector_map(A: np.ndarray) -> np.ndarray:
    """Return the Lorentz matrix defined by A sigma_a A^dagger = Lambda^mu_a sigma_mu."""

    A = np.asarray(A, dtype=complex)
    out = np.empty((4, 4))
    for a, sigma_a in enumerate(_SIGMA_4):
        image = A @ sigma_a @ A.conj().T
        for mu, sigma_mu in enumerate(_SIGMA_4):
            out[mu, a] = 0.5 * np.trace(sigma_mu @ image).real
    return out


def is_proper_lorentz(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    """Check Lambda^T G Lambda = G, det = +1 and Lambda^0_0 >= 1 to *tol*."""

    matrix = np.asarray(matrix, dtype=float)
    metric_ok = np.max(np.abs(matrix.T @ G @ matrix - G)) <= tol
    det_ok = abs(np.linalg.det(matrix) - 1.0) <= max(tol, 1e-10)
    return bool(metric_ok and det_ok and matrix[0, 0] >= 1.0 - tol)


def _lorentz_inverse(matrix: Any) -> Any:
    return G @ matrix.T @ G


def _project(omega: Any, a: int) -> Any:
    if isinstance(omega, jets.Jet):
        return (omega @ BASIS[a]).trace() / _BASIS_NORMS[a]
    return float(np.trace(omega @ BASIS[a]).real) / _BASIS_NORMS[a]


def killing_vectors(angles: Any) -> Any:
    """Return xi[a, alpha] from Omega_alpha = Ad(Lambda_1 ... Lambda_{alpha-1}) X_alpha.

    Closed form, so the result can itself be differentiated when *angles* is a jet.
    """

    theta = as_angles(angles)
    factors = _lorentz_factors(theta)
    columns = []
    prefix: Any = np.eye(4)
    if isinstance(theta, jets.Jet):
        prefix = jets.constant(prefix, theta.nvars, order=theta.order)
    for alpha in range(6):
        omega = prefix @ BASIS[alpha] @ _lorentz_inverse(prefix)
        columns.append([_project(omega, a) for a in range(6)])
        prefix = prefix @ factors[alpha]
    if isinstance(theta, jets.Jet):
        return jets.stack([jets.stack(column) for column in columns], axis=1)
    return np.array(columns, dtype=float).T


def _check_chart(xi: np.ndarray, angles: Any) -> None:
    det = float(np.linalg.det(xi))
    if abs(det) < SINGULAR_CHART_DET:
        logger.debug("EVENT=SINGULAR_CHART DET=%.3e", det)
        raise SingularChart(det, angles)


def invariant_frame(angles: Any) -> InvariantFrame:
    """Differentiate the fourleg exactly and return the right-invariant frame."""

    theta = as_angles(angles)
    lam = lorentz_from_euler(jets.seed(jets.value(theta), order=1))
    inverse = _lorentz_inverse(lam.val)
    omega = np.einsum("ija,jk->aik", lam.grad, inverse)
    xi = np.einsum("aij,bji->ba", omega, np.array(BASIS)) / _BASIS_NORMS[:, None]
    _check_chart(xi, jets.value(theta))
    return InvariantFrame(omega=omega, xi=xi)


def algebra_metric(a: float, sign: int = 1) -> np.ndarray:
    """Trace form -sign a^2 tr(X_a X_b) on the generator basis."""

    return -sign * a * a * np.diag(_BASIS_NORMS)


def group_metric(angles: Any, a: float, sign: int = 1) -> Any:
    """Return g_{alpha beta} = -sign a^2 tr(Omega_alpha Omega_beta).

    With the default sign the rotation block is positive: diag(2, 2, 2, -2, -2, -2)
    at the identity for a = 1.
    """

    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    theta = as_angles(angles)
    xi = killing_vectors(theta)
    _check_chart(jets.value(xi), jets.value(theta))
    return xi.T @ algebra_metric(a, sign) @ xi


def structure_constants() -> np.ndarray:
    """Return f[c, a, b] with [X_a, X_b] = f^c_{ab} X_c."""

    f = np.zeros((6, 6, 6))
    for a, Xa in enumerate(BASIS):
        for b, Xb in enumerate(BASIS):
            bracket = Xa @ Xb - Xb @ Xa
            for c in range(6):
                f[c, a, b] = _project(bracket, c)
    return f


def killing_form() -> np.ndarray:
    """B_ab = tr(ad X_a ad X_b)."""

    f = structure_constants()
    ad = np.transpose(f, (1, 0, 2))
    return np.einsum("acd,bdc->ab", ad, ad)


def adjoint_matrix(M: np.ndarray) -> np.ndarray:
    """Matrix of X -> M X M^-1 in the generator basis."""

    inverse = _lorentz_inverse(np.asarray(M, dtype=float))
    out = np.empty((6, 6))
    for b, Xb in enumerate(BASIS):
        image = M @ Xb @ inverse
        for a in range(6):
            out[a, b] = _project(image, a)
    return out


def euler_from_lorentz(
    matrix: np.ndarray,
    guess: Sequence[float] | None = None,
    *,
    tol: float = 1e-13,
    max_iter: int = 50,
) -> np.ndarray:
    """Solve lorentz_from_euler(theta) = *matrix* by Newton iteration from *guess*."""

    target = np.asarray(matrix, dtype=float)
    theta = np.zeros(6) if guess is None else as_angles(guess).copy()
    for _ in range(max_iter):
        current = lorentz_from_euler(theta)
        step_matrix = target @ _lorentz_inverse(current) - np.eye(4)
        if np.max(np.abs(step_matrix)) < tol:
            return theta
        coeffs = np.array([_project(step_matrix, a) for a in range(6)])
        theta = theta + np.linalg.solve(invariant_frame(theta).xi, coeffs)
    raise DomainError("Euler-angle inversion did not converge")


def compose_angles(
    first: Sequence[float], second: Sequence[float], *, guess: Sequence[float] | None = None
) -> np.ndarray:
    """Euler angles of Lambda(first) Lambda(second); Newton starts from first + second."""

    first, second = as_angles(first), as_angles(second)
    target = lorentz_from_euler(first) @ lorentz_from_euler(second)
    return euler_from_lorentz(target, first + second if guess is None else guess)


def left_translation_jacobian(
    element: Sequence[float], angles: Sequence[float]
) -> tuple[np.ndarray, np.ndarray]:
    """Return (theta', J) for the chart map of Lambda(theta) -> Lambda(element) Lambda(theta).

    dLambda Lambda^-1 picks up Ad(Lambda(element)) under left translation, so
    J = xi(theta')^-1 Ad xi(theta).
    """

    theta = as_angles(angles)
    translated = compose_angles(element, theta)
    moved = adjoint_matrix(lorentz_from_euler(element)) @ invariant_frame(theta).xi
    return translated, np.linalg.solve(invariant_frame(translated).xi, moved)


# -- finite-dimensional representations ----------------------------------------


@dataclass(frozen=True, slots=True)
class SpinorRep:
    """Representation label (2u, 2v) with 2u, 2v in 0..3."""

    two_u: int
    two_v: int

    def __post_init__(self) -> None:
        for label in (self.two_u, self.two_v):
            if isinstance(label, bool) or not isinstance(label, (int, np.integer)):
                raise UnsupportedRep(self.two_u, self.two_v)
            if not 0 <= label <= 3:
                raise UnsupportedRep(self.two_u, self.two_v)

    @property
    def u(self) -> float:
        return self.two_u / 2.0

    @property
    def v(self) -> float:
        return self.two_v / 2.0

    @property
    def dim(self) -> int:
        return (self.two_u + 1) * (self.two_v + 1)

    @property
    def casimir_value(self) -> float:
        """2 [u(u+1) + v(v+1)]."""

        return 2.0 * (self.u * (self.u + 1.0) + self.v * (self.v + 1.0))

    def swapped(self) -> "SpinorRep":
        return SpinorRep(self.two_v, self.two_u)

    def __str__(self) -> str:
        return f"({_half(self.two_u)},{_half(self.two_v)})"


def _half(two_j: int) -> str:
    return str(two_j // 2) if two_j % 2 == 0 else f"{two_j}/2"


def _as_rep(rep: Any) -> SpinorRep:
    if isinstance(rep, SpinorRep):
        return rep
    two_u, two_v = rep
    return SpinorRep(two_u, two_v)


@lru_cache(maxsize=None)
def _spin_matrices(two_j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    j = two_j / 2.0
    dim = two_j + 1
    m = j - np.arange(dim)
    raising = np.zeros((dim, dim), dtype=complex)
    for r in range(1, dim):
        raising[r - 1, r] = math.sqrt(j * (j + 1.0) - m[r] * (m[r] + 1.0))
    lowering = raising.conj().T
    J1 = 0.5 * (raising + lowering)
    J2 = -0.5j * (raising - lowering)
    J3 = np.diag(m).astype(complex)
    for matrix in (J1, J2, J3):
        matrix.setflags(write=False)
    return J1, J2, J3


def spin_matrices(two_j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hermitian spin-j matrices in the basis m = j, j-1, ..., -j."""

    if two_j < 0:
        raise UnsupportedRep(two_j, 0)
    return _spin_matrices(int(two_j))


@lru_cache(maxsize=None)
def _generators(two_u: int, two_v: int, dotted: bool) -> tuple[tuple[np.ndarray, ...], ...]:
    eye_u = np.eye(two_u + 1)
    eye_v = np.eye(two_v + 1)
    Ju = spin_matrices(two_u)
    Jv = spin_matrices(two_v)
    sign = -1.0 if dotted else 1.0
    J = tuple(np.kron(Ju[k], eye_v) + np.kron(eye_u, Jv[k]) for k in range(3))
    K = tuple(sign * 1j * (np.kron(eye_u, Jv[k]) - np.kron(Ju[k], eye_v)) for k in range(3))
    return J, K


def rep_generators(
    rep: Any, *, dotted: bool = False
) -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    """Return (J, K) for *rep*; dotted flips the sign of K."""

    rep = _as_rep(rep)
    return _generators(rep.two_u, rep.two_v, bool(dotted))


def casimir(rep: Any, *, dotted: bool = False) -> np.ndarray:
    """Return J.J - K.K, which equals 2[u(u+1) + v(v+1)] times the identity."""

    J, K = rep_generators(rep, dotted=dotted)
    return sum(Jk @ Jk for Jk in J) - sum(Kk @ Kk for Kk in K)


@lru_cache(maxsize=None)
def _exponent_tables(
    two_u: int, two_v: int, dotted: bool
) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    J, K = _generators(two_u, two_v, dotted)
    tables = []
    for generator in J:
        eigenvalues, vectors = np.linalg.eigh(generator)
        tables.append((vectors, -1j * eigenvalues))
    for generator in K:
        eigenvalues, vectors = np.linalg.eigh(-1j * generator)
        tables.append((vectors, eigenvalues.astype(complex)))
    return tuple(tables)


def _rep_factor(table: tuple[np.ndarray, np.ndarray], t: Any) -> Any:
    vectors, rates = table
    return (vectors * jets.exp(t * rates)) @ vectors.conj().T


def rep_matrix(rep: Any, angles: Any, *, inverse: bool = False, dotted: bool = False) -> Any:
    """Return D^{(u,v)}(Lambda(theta)) = prod_k exp(-i theta_k G_k), or its exact inverse."""

    rep = _as_rep(rep)
    theta = as_angles(angles)
    tables = _exponent_tables(rep.two_u, rep.two_v, bool(dotted))
    if inverse:
        factors = [_rep_factor(tables[k], -theta[k]) for k in reversed(range(6))]
    else:
        factors = [_rep_factor(tables[k], theta[k]) for k in range(6)]
    return reduce(matmul, factors)


def swap_permutation(two_u: int, two_v: int) -> np.ndarray:
    """Permutation taking the (v x u) tensor ordering to the (u x v) ordering."""

    du, dv = two_u + 1, two_v + 1
    perm = np.zeros((du * dv, du * dv))
    for iu in range(du):
        for iv in range(dv):
            perm[iu * dv + iv, iv * du + iu] = 1.0
    return perm


def conjugate_rep_matrix(rep: Any, angles: Any) -> np.ndarray:
    """Return D^{(v,u)}(Lambda) expressed in the tensor ordering of *rep*."""

    rep = _as_rep(rep)
    perm = swap_permutation(rep.two_u, rep.two_v)
    return perm @ rep_matrix(rep.swapped(), angles) @ perm.T


def symmetric_power(M: np.ndarray, two_j: int) -> np.ndarray:
    """Spin-j image of a 2x2 matrix acting on homogeneous polynomials of degree 2j.

    Basis state r carries x^(2j - r) y^r normalized by 1 / sqrt((2j - r)! r!).
    """

    M = np.asarray(M, dtype=complex)
    dim = two_j + 1
    out = np.zeros((dim, dim), dtype=complex)
    for r in range(dim):
        p, q = two_j - r, r
        poly = np.ones(1, dtype=complex)
        for _ in range(p):
            poly = np.convolve(poly, [M[0, 0], M[1, 0]])
        for _ in range(q):
            poly = np.convolve(poly, [M[0, 1], M[1, 1]])
        for r_out in range(dim):
            p_out, q_out = two_j - r_out, r_out
            weight_out = math.factorial(p_out) * math.factorial(q_out)
            norm = math.sqrt(weight_out / (math.factorial(p) * math.factorial(q)))
            out[r_out, r] = poly[r_out] * norm
    return out


def rep_matrix_from_sl2c(rep: Any, A: np.ndarray) -> np.ndarray:
    """Independent construction D^{(u)}((A^dagger)^-1) (x) D^{(v)}(A) from symmetric powers."""

    rep = _as_rep(rep)
    A = np.asarray(A, dtype=complex)
    conjugate = np.linalg.inv(A.conj().T)
    return np.kron(symmetric_power(conjugate, rep.two_u), symmetric_power(A, rep.two_v))
