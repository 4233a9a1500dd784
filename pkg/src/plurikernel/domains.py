"""Strongly pseudoconvex domains given by defining functions.

A domain is described by a smooth real field psi on C^n with psi < 0 inside,
psi = 0 on the boundary and nonvanishing gradient there.  Built-in kinds
(disc, unit ball, translated/scaled balls, axis-aligned Hermitian ellipsoids
``sum a_j |z_j|^2 = 1``) carry analytic first and second derivatives; custom
domains fall back to central finite differences.

Derivative conventions: ``grad_psi`` holds the Wirtinger derivatives
``d psi / d z_j`` and ``hess_psi`` the mixed complex Hessian
``d^2 psi / (d z_i d conj(z_j))``.  For real psi the real differential acting
on a displacement v is ``2 Re <v, conj(grad_psi)>``, so the outward unit
normal is ``conj(grad_psi)`` normalized and ``|d psi| = 2 ||grad_psi||``.

The boundary frame at p fixes the canonical defining couple: the C-linear
functional ``theta_p(v) = <v, nu_p>`` (standard Hermitian product against the
outward unit normal), with ``theta_p(nu_p) = 1`` and kernel equal to the
complex tangent space.  All kernel normalizations in this package refer to
this couple; rescaled couples are handled by an explicit utility in
``kernels``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    NotOnBoundaryError,
    PseudoconvexityError,
    ValidationError,
)
from .expressions import ScalarField, infer_dimension
from .utils import BOUNDARY_TOL, as_vector, herm, norm, to_real

_GRAD_STEP = 1e-6
_HESS_STEP = 1e-4


class DomainKind(str, Enum):
    DISC = "disc"
    UNIT_BALL = "unit_ball"
    BALL = "ball"
    ELLIPSOID = "ellipsoid"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class DomainSpec:
    """A bounded domain with defining function and derivative access."""

    kind: DomainKind
    n: int
    center: Optional[np.ndarray] = None          # ball
    radius: Optional[float] = None               # ball
    coeffs: Optional[np.ndarray] = None          # ellipsoid
    psi_fn: Optional[Callable] = None            # custom
    grad_fn: Optional[Callable] = None           # custom, optional
    hess_fn: Optional[Callable] = None           # custom, optional
    interior: np.ndarray = field(default=None)   # reference interior point
    label: str = ""

    # -- constructors ------------------------------------------------------

    @staticmethod
    def disc() -> "DomainSpec":
        return DomainSpec(kind=DomainKind.DISC, n=1, interior=np.zeros(1, complex),
                          label="disc")

    @staticmethod
    def unit_ball(n: int) -> "DomainSpec":
        if n < 1:
            raise ValidationError("dimension must be positive")
        return DomainSpec(kind=DomainKind.UNIT_BALL, n=n,
                          interior=np.zeros(n, complex), label=f"unit_ball:{n}")

    @staticmethod
    def ball(center, radius: float) -> "DomainSpec":
        c = as_vector(center)
        if radius <= 0:
            raise ValidationError("ball radius must be positive")
        return DomainSpec(kind=DomainKind.BALL, n=len(c), center=c,
                          radius=float(radius), interior=c.copy(),
                          label=f"ball(r={radius:g})")

    @staticmethod
    def ellipsoid(coeffs) -> "DomainSpec":
        a = np.asarray(coeffs, dtype=float)
        if a.ndim != 1 or np.any(a <= 0):
            raise ValidationError("ellipsoid coefficients must be positive reals")
        return DomainSpec(kind=DomainKind.ELLIPSOID, n=len(a), coeffs=a,
                          interior=np.zeros(len(a), complex),
                          label="ellipsoid(" + ",".join(f"{x:g}" for x in a) + ")")

    @staticmethod
    def custom(psi, n: int, grad=None, hess=None, interior_point=None) -> "DomainSpec":
        """Custom domain from a callable or an expression string in z1..zn."""
        if isinstance(psi, str):
            fld = ScalarField(psi, n)
            psi_fn = lambda z: float(np.real(fld(z)))
            label = f"custom({psi})"
        else:
            psi_fn = psi
            label = "custom"
        interior = (np.zeros(n, complex) if interior_point is None
                    else as_vector(interior_point, n))
        return DomainSpec(kind=DomainKind.CUSTOM, n=n, psi_fn=psi_fn,
                          grad_fn=grad, hess_fn=hess, interior=interior,
                          label=label)

    # -- defining function and derivatives ---------------------------------

    def psi(self, z) -> float:
        z = as_vector(z, self.n)
        if self.kind in (DomainKind.DISC, DomainKind.UNIT_BALL):
            return float(np.real(herm(z, z))) - 1.0
        if self.kind is DomainKind.BALL:
            d = z - self.center
            return float(np.real(herm(d, d))) - self.radius ** 2
        if self.kind is DomainKind.ELLIPSOID:
            return float(np.sum(self.coeffs * np.abs(z) ** 2)) - 1.0
        value = self.psi_fn(z)
        if not np.isfinite(value):
            raise DomainError(f"defining function returned non-finite value at {z}")
        return float(np.real(value))

    def grad_psi(self, z) -> np.ndarray:
        """Wirtinger gradient (d psi / d z_j)."""
        z = as_vector(z, self.n)
        if self.kind in (DomainKind.DISC, DomainKind.UNIT_BALL):
            return np.conj(z)
        if self.kind is DomainKind.BALL:
            return np.conj(z - self.center)
        if self.kind is DomainKind.ELLIPSOID:
            return self.coeffs * np.conj(z)
        if self.grad_fn is not None:
            return as_vector(self.grad_fn(z), self.n)
        return _fd_wirtinger_gradient(self.psi, z)

    def hess_psi(self, z) -> np.ndarray:
        """Mixed complex Hessian  H_ij = d^2 psi / (d z_i d conj(z_j))."""
        z = as_vector(z, self.n)
        if self.kind in (DomainKind.DISC, DomainKind.UNIT_BALL, DomainKind.BALL):
            return np.eye(self.n, dtype=complex)
        if self.kind is DomainKind.ELLIPSOID:
            return np.diag(self.coeffs).astype(complex)
        if self.hess_fn is not None:
            h = np.asarray(self.hess_fn(z), dtype=complex)
            if h.shape != (self.n, self.n):
                raise DomainError(f"hessian callback returned shape {h.shape}")
            return h
        return _fd_complex_hessian(self.psi, z)

    def real_hessian(self, z) -> np.ndarray:
        """Second derivatives of psi on R^{2n} in (Re z, Im z) coordinates."""
        z = as_vector(z, self.n)
        if self.kind in (DomainKind.DISC, DomainKind.UNIT_BALL, DomainKind.BALL):
            return 2.0 * np.eye(2 * self.n)
        if self.kind is DomainKind.ELLIPSOID:
            return np.diag(np.concatenate([2 * self.coeffs, 2 * self.coeffs]))
        return _fd_real_hessian(self.psi, z)

    # -- geometry helpers ---------------------------------------------------

    @property
    def is_ball_like(self) -> bool:
        return self.kind in (DomainKind.DISC, DomainKind.UNIT_BALL, DomainKind.BALL)

    @property
    def is_convex_kind(self) -> bool:
        return self.kind is not DomainKind.CUSTOM

    @property
    def ball_center(self) -> np.ndarray:
        return self.center if self.kind is DomainKind.BALL else np.zeros(self.n, complex)

    @property
    def ball_radius(self) -> float:
        return self.radius if self.kind is DomainKind.BALL else 1.0

    def bounding_radius(self) -> float:
        """Radius of a ball around the reference interior point containing the domain."""
        if self.is_ball_like:
            return self.ball_radius
        if self.kind is DomainKind.ELLIPSOID:
            return float(1.0 / math.sqrt(np.min(self.coeffs)))
        return float("inf")

    def contains(self, z, tol: float = 0.0) -> bool:
        return self.psi(z) < -tol

    def __repr__(self):
        return f"DomainSpec({self.label or self.kind.value}, n={self.n})"


@dataclass(frozen=True, eq=False)
class BoundaryFrame:
    """Boundary differential data at p: normal, complex tangent frame, Levi form.

    ``theta(v) = <v, nu>`` is the canonical defining couple; ``theta_coeffs``
    are the coefficients of that functional (so ``theta(v) = theta_coeffs @ v``).
    """

    p: np.ndarray
    nu: np.ndarray
    tangent_basis: np.ndarray       # (n-1, n), rows orthonormal, Hermitian-orthogonal to nu
    levi: np.ndarray                # (n-1, n-1) Hermitian positive definite
    theta_coeffs: np.ndarray

    def theta(self, v) -> complex:
        return herm(as_vector(v, len(self.nu)), self.nu)


def psi_jet(domain: DomainSpec, z):
    """Defining function value, Wirtinger gradient and mixed complex Hessian at z."""
    z = as_vector(z, domain.n)
    if norm(z - domain.interior) > 10.0 * max(domain.bounding_radius(), 1.0) \
            and domain.bounding_radius() < float("inf"):
        raise ValidationError(f"point {z} is far outside the domain's bounding box")
    value = domain.psi(z)
    if not np.isfinite(value):
        raise DomainError("defining function returned a non-finite value")
    return value, domain.grad_psi(z), domain.hess_psi(z)


def require_on_boundary(domain: DomainSpec, p, tol: float = BOUNDARY_TOL) -> np.ndarray:
    p = as_vector(p, domain.n)
    v = domain.psi(p)
    if abs(v) >= tol:
        raise NotOnBoundaryError(f"|psi(p)| = {abs(v):.3e} exceeds boundary tolerance {tol:g}")
    return p


def outward_normal(domain: DomainSpec, p, tol: float = BOUNDARY_TOL) -> np.ndarray:
    p = require_on_boundary(domain, p, tol)
    g = domain.grad_psi(p)
    ng = norm(g)
    if ng < 1e-14:
        raise DomainError("defining function has vanishing gradient at the boundary point")
    return np.conj(g) / ng


def boundary_frame(domain: DomainSpec, p, tol: float = BOUNDARY_TOL) -> BoundaryFrame:
    """Outward normal, orthonormal complex tangent basis and restricted Levi form at p."""
    p = require_on_boundary(domain, p, tol)
    nu = outward_normal(domain, p, tol)
    basis = _complex_tangent_basis(nu)
    H = domain.hess_psi(p)
    # Levi(u, v) = sum_ij H_ij u_i conj(v_j) restricted to the tangent basis
    levi = np.asarray([[np.sum(H * np.outer(ta, np.conj(tb)))
                        for tb in basis] for ta in basis], dtype=complex)
    levi = levi.reshape(len(basis), len(basis))
    if len(basis):
        levi = 0.5 * (levi + levi.conj().T)
        eigs = np.linalg.eigvalsh(levi)
        if np.min(eigs) <= 0:
            raise PseudoconvexityError(
                f"restricted Levi form not positive definite at p (min eig {np.min(eigs):.3e})")
    return BoundaryFrame(p=p, nu=nu, tangent_basis=basis, levi=levi,
                         theta_coeffs=np.conj(nu))


def _complex_tangent_basis(nu: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the Hermitian orthogonal complement of nu."""
    n = len(nu)
    if n == 1:
        return np.zeros((0, 1), dtype=complex)
    # complete nu to a unitary basis via QR, deterministically
    M = np.eye(n, dtype=complex)
    k = int(np.argmax(np.abs(nu)))
    M[:, [0, k]] = M[:, [k, 0]]
    M[:, 0] = nu
    Q, R = np.linalg.qr(M)
    # fix phases so Q[:,0] is exactly parallel to nu
    phase = herm(nu, Q[:, 0])
    Q[:, 0] *= phase / abs(phase)
    return np.ascontiguousarray(Q[:, 1:].T)


def levi_density(domain: DomainSpec, p, tol: float = BOUNDARY_TOL) -> float:
    """Density of the boundary form against surface volume at p.

    Equals ``4^{n-1} (n-1)! det(restricted Levi form) / |d psi|^{n-1}`` and is
    invariant under rescaling the defining function.
    """
    frame = boundary_frame(domain, p, tol)
    n = domain.n
    if n == 1:
        return 1.0
    det = float(np.real(np.linalg.det(frame.levi)))
    if det <= 0:
        raise PseudoconvexityError("degenerate Levi form")
    dpsi = 2.0 * norm(domain.grad_psi(frame.p))
    return float(4 ** (n - 1) * math.factorial(n - 1) * det / dpsi ** (n - 1))


@dataclass(frozen=True)
class OsculatingRadii:
    """Tangent-sphere radii at a boundary point.

    ``r_in`` is the reciprocal largest normal curvature (inscribed tangent
    ball), ``r_out`` the reciprocal smallest (circumscribed tangent ball).
    ``global_containment`` is True for the built-in convex kinds, where the
    tangent balls are certified to contain / be contained in the domain;
    custom domains get local-only radii.
    """

    r_in: float
    r_out: float
    global_containment: bool

    def __iter__(self):
        return iter((self.r_in, self.r_out))


def osculating_radii(domain: DomainSpec, p, tol: float = BOUNDARY_TOL) -> OsculatingRadii:
    """Principal-curvature tangent ball radii from the real second fundamental form."""
    p = require_on_boundary(domain, p, tol)
    g = domain.grad_psi(p)
    if norm(g) < 1e-14:
        raise DomainError("vanishing gradient on the boundary")
    # real gradient of psi on R^{2n} is 2*conj(g) in complex form
    grad_r = to_real(2.0 * np.conj(g))
    gn = float(np.linalg.norm(grad_r))
    nr = grad_r / gn
    Hr = domain.real_hessian(p)
    # orthonormal basis of the real tangent space
    w, V = np.linalg.eigh(np.eye(2 * domain.n) - np.outer(nr, nr))
    T = V[:, w > 0.5]
    shape_op = T.T @ (Hr / gn) @ T
    curv = np.linalg.eigvalsh(shape_op)
    kmax = float(np.max(curv))
    kmin = float(np.min(curv))
    if kmax <= 0:
        raise PseudoconvexityError("no positive normal curvature at p")
    r_in = 1.0 / kmax
    r_out = 1.0 / kmin if kmin > 0 else float("inf")
    return OsculatingRadii(r_in=r_in, r_out=r_out,
                           global_containment=domain.is_convex_kind)


def signed_boundary_distance(domain: DomainSpec, z) -> float:
    """Signed Euclidean distance to the boundary: negative inside, zero on it."""
    z = as_vector(z, domain.n)
    if domain.is_ball_like:
        return norm(z - domain.ball_center) - domain.ball_radius
    if domain.kind is DomainKind.ELLIPSOID:
        q, dist = _ellipsoid_nearest_point(domain.coeffs, z)
        return dist if domain.psi(z) > 0 else -dist
    q, dist = _footpoint_nearest(domain, z)
    return dist if domain.psi(z) > 0 else -dist


def nearest_boundary_point(domain: DomainSpec, z) -> np.ndarray:
    """The boundary point realizing the distance in signed_boundary_distance."""
    z = as_vector(z, domain.n)
    if domain.is_ball_like:
        d = z - domain.ball_center
        nd = norm(d)
        if nd < 1e-15:
            d = np.zeros(domain.n, complex)
            d[0] = 1.0
            nd = 1.0
        return domain.ball_center + domain.ball_radius * d / nd
    if domain.kind is DomainKind.ELLIPSOID:
        return _ellipsoid_nearest_point(domain.coeffs, z)[0]
    return _footpoint_nearest(domain, z)[0]


def _ellipsoid_nearest_point(a: np.ndarray, z: np.ndarray):
    """Nearest point on {sum a_j |z_j|^2 = 1} via the scalar multiplier equation.

    The projection solves x_j = z_j / (1 + lam * a_j) with
    h(lam) = sum a_j |x_j|^2 = 1; for the nearest point the root lies in
    (-1/max(a), inf) where h is strictly decreasing.  Coordinates with
    z_j = 0 admit axis branches at lam = -1/a_j, handled separately.
    """
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=complex)
    amax = float(np.max(a))
    trace = []

    def h(lam):
        return float(np.sum(a * np.abs(z) ** 2 / (1 + lam * a) ** 2))

    candidates = []
    active = np.abs(z) > 0
    if np.any(active):
        # h is strictly decreasing on (-1/amax, inf); bracket the root
        lam_lo, lam_hi = None, None
        if h(0.0) >= 1.0:
            lam_lo = 0.0
            lam_hi = 1.0
            while h(lam_hi) > 1.0:
                lam_hi *= 2.0
                if lam_hi > 1e12:
                    raise ConvergenceError("multiplier bracket failed", trace)
        else:
            lam_hi = 0.0
            step = 0.5 * (0.0 - (-1.0 / amax))
            lam_lo = -1.0 / amax + step
            while h(lam_lo) < 1.0:
                step *= 0.5
                lam_lo = -1.0 / amax + step
                if step < 1e-18:
                    lam_lo = None  # no root: nearest point on an axis branch
                    break
        if lam_lo is not None:
            lam = 0.5 * (lam_lo + lam_hi)
            for it in range(200):
                val = h(lam)
                trace.append((it, lam, val))
                if abs(val - 1.0) < 1e-14:
                    break
                dh = float(np.sum(-2 * a ** 2 * np.abs(z) ** 2 / (1 + lam * a) ** 3))
                if val > 1.0:
                    lam_lo = lam
                else:
                    lam_hi = lam
                lam_newton = lam - (val - 1.0) / dh if dh != 0 else None
                if lam_newton is not None and lam_lo < lam_newton < lam_hi:
                    lam = lam_newton
                else:
                    lam = 0.5 * (lam_lo + lam_hi)
            else:
                raise ConvergenceError("ellipsoid projection did not converge", trace)
            x = z / (1 + lam * a)
            candidates.append(x)
    # axis branches: for every coordinate with z_j = 0 the projection may sit
    # off-center on that axis, with multiplier exactly -1/a_j
    for j in range(len(a)):
        if abs(z[j]) > 0:
            continue
        denom = 1.0 - a / a[j]
        degenerate = np.abs(denom) < 1e-15
        if np.any(degenerate & (np.abs(z) > 0)):
            continue  # multiplier pole hit by an active coordinate
        x = np.where(degenerate, 0.0, z / np.where(degenerate, 1.0, denom))
        rest = float(np.sum(a * np.abs(x) ** 2))
        if rest <= 1.0:
            x = np.array(x, dtype=complex)
            x[j] = math.sqrt((1.0 - rest) / a[j])
            candidates.append(x)
    if not candidates:
        raise ConvergenceError("no projection candidate found", trace)
    dists = [norm(z - x) for x in candidates]
    k = int(np.argmin(dists))
    return candidates[k], float(dists[k])


def _footpoint_nearest(domain: DomainSpec, z: np.ndarray, max_iter: int = 200):
    """Foot-point iteration for custom kinds: surface Newton + tangential slide."""
    trace = []

    def to_surface(x):
        for it in range(80):
            v = domain.psi(x)
            g = domain.grad_psi(x)
            g2 = float(np.real(herm(g, g)))
            if g2 < 1e-30:
                raise ConvergenceError("vanishing gradient during projection", trace)
            # step along the real gradient direction conj(g); d psi along it is 2||g||
            x = x - v * np.conj(g) / (2.0 * g2)
            if abs(v) < 1e-14:
                return x
        raise ConvergenceError("surface Newton did not converge", trace)

    if norm(z - domain.interior) < 1e-14:
        direction = np.zeros(domain.n, complex)
        direction[0] = 1.0
    else:
        direction = (z - domain.interior) / norm(z - domain.interior)
    # start from the ray intersection with the boundary
    t_hi = 1.0
    while domain.psi(domain.interior + t_hi * direction) < 0:
        t_hi *= 2.0
        if t_hi > 1e9:
            raise ConvergenceError("domain appears unbounded along the ray", trace)
    x = to_surface(domain.interior + t_hi * direction)
    scale = max(norm(z), 1.0)
    for it in range(max_iter):
        w = z - x
        nu = outward_normal(domain, x, tol=1e-10)
        w_tan = w - np.real(herm(w, nu)) * nu
        resid = norm(w_tan)
        trace.append((it, resid))
        if resid < 1e-12 * scale:
            return x, norm(z - x)
        x = to_surface(x + w_tan)
    raise ConvergenceError("foot-point iteration did not converge", trace)


def boundary_samples(domain: DomainSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Deterministic (seeded) boundary sample points, |psi| = 0 to high accuracy."""
    from .utils import sample_sphere

    pts = np.empty((count, domain.n), dtype=complex)
    for i in range(count):
        v = sample_sphere(rng, domain.n)
        if domain.is_ball_like:
            pts[i] = domain.ball_center + domain.ball_radius * v
        elif domain.kind is DomainKind.ELLIPSOID:
            s = math.sqrt(1.0 / float(np.sum(domain.coeffs * np.abs(v) ** 2)))
            pts[i] = v * s
        else:
            t_hi = 1.0
            while domain.psi(domain.interior + t_hi * v) < 0:
                t_hi *= 2.0
            t_lo = 0.0
            for _ in range(80):
                mid = 0.5 * (t_lo + t_hi)
                if domain.psi(domain.interior + mid * v) < 0:
                    t_lo = mid
                else:
                    t_hi = mid
            pts[i] = domain.interior + 0.5 * (t_lo + t_hi) * v
    return pts


# -- finite differences -----------------------------------------------------

def _fd_wirtinger_gradient(psi, z: np.ndarray, h: float = _GRAD_STEP) -> np.ndarray:
    n = len(z)
    g = np.zeros(n, dtype=complex)
    for j in range(n):
        e = np.zeros(n, complex)
        e[j] = 1.0
        dx = (psi(z + h * e) - psi(z - h * e)) / (2 * h)
        dy = (psi(z + 1j * h * e) - psi(z - 1j * h * e)) / (2 * h)
        g[j] = 0.5 * (dx - 1j * dy)
    return g


def _fd_complex_hessian(psi, z: np.ndarray, h: float = _HESS_STEP) -> np.ndarray:
    n = len(z)
    H = np.zeros((n, n), dtype=complex)

    def second(u, v):
        return (psi(z + h * u + h * v) - psi(z + h * u - h * v)
                - psi(z - h * u + h * v) + psi(z - h * u - h * v)) / (4 * h * h)

    for i in range(n):
        ei = np.zeros(n, complex)
        ei[i] = 1.0
        for j in range(n):
            ej = np.zeros(n, complex)
            ej[j] = 1.0
            if i == j:
                lap = (psi(z + h * ei) + psi(z - h * ei)
                       + psi(z + 1j * h * ei) + psi(z - 1j * h * ei)
                       - 4 * psi(z)) / (h * h)
                H[i, i] = 0.25 * lap
            else:
                xx = second(ei, ej)
                yy = second(1j * ei, 1j * ej)
                xy = second(ei, 1j * ej)
                yx = second(1j * ei, ej)
                H[i, j] = 0.25 * ((xx + yy) + 1j * (xy - yx))
    return 0.5 * (H + H.conj().T)


def _fd_real_hessian(psi, z: np.ndarray, h: float = _HESS_STEP) -> np.ndarray:
    n = len(z)
    m = 2 * n

    def basis(k):
        e = np.zeros(n, complex)
        if k < n:
            e[k] = 1.0
        else:
            e[k - n] = 1j
        return e

    H = np.zeros((m, m))
    for i in range(m):
        ei = basis(i)
        H[i, i] = (psi(z + h * ei) - 2 * psi(z) + psi(z - h * ei)) / (h * h)
        for j in range(i + 1, m):
            ej = basis(j)
            v = (psi(z + h * ei + h * ej) - psi(z + h * ei - h * ej)
                 - psi(z - h * ei + h * ej) + psi(z - h * ei - h * ej)) / (4 * h * h)
            H[i, j] = H[j, i] = v
    return H


# -- JSON interface ----------------------------------------------------------

def domain_from_json(spec) -> DomainSpec:
    """Build a DomainSpec from a JSON object / string / ``kind:params`` shorthand.

    Accepted forms::

        {"kind": "disc"}
        {"kind": "unit_ball", "n": 2}
        {"kind": "ball", "center": [[re, im], ...], "radius": r}
        {"kind": "ellipsoid", "a": [1.0, 2.0]}
        {"kind": "custom", "psi": "z1*conj(z1)-1", "n": 1}
        "unit_ball:2" | "disc" | "ellipsoid:1,2"
    """
    if isinstance(spec, DomainSpec):
        return spec
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            spec = json.loads(text)
        else:
            return _domain_from_shorthand(text)
    if not isinstance(spec, dict):
        raise ValidationError(f"cannot interpret domain spec {spec!r}")
    known = {"kind", "n", "center", "radius", "a", "psi"}
    extra = set(spec) - known
    if extra:
        raise ValidationError(f"unknown fields in domain spec: {sorted(extra)}")
    kind = spec.get("kind")
    if kind == "disc":
        return DomainSpec.disc()
    if kind == "unit_ball":
        return DomainSpec.unit_ball(int(spec["n"]))
    if kind == "ball":
        center = [complex(re, im) for re, im in spec["center"]]
        return DomainSpec.ball(center, float(spec["radius"]))
    if kind == "ellipsoid":
        return DomainSpec.ellipsoid(spec["a"])
    if kind == "custom":
        source = str(spec["psi"])
        n = int(spec["n"]) if "n" in spec else infer_dimension(source)
        return DomainSpec.custom(source, n)
    raise ValidationError(f"unknown domain kind {kind!r}")


def _domain_from_shorthand(text: str) -> DomainSpec:
    head, _, tail = text.partition(":")
    if head == "disc":
        return DomainSpec.disc()
    if head == "unit_ball":
        return DomainSpec.unit_ball(int(tail))
    if head == "ellipsoid":
        return DomainSpec.ellipsoid([float(x) for x in tail.split(",")])
    raise ValidationError(f"unknown domain shorthand {text!r}")
