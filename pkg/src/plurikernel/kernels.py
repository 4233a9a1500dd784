"""Closed-form kernels and distances for the disc and for balls.

The negative Poisson kernel of the unit disc with pole p, |p| = 1, is

    P_p(zeta) = -(1 - |zeta|^2) / |p - zeta|^2,

harmonic, zero on the unit circle away from p, with a simple pole along
non-tangential approach to p.  Its several-variable analogue on the unit
ball of C^n with pole e1 is

    Omega_{e1}(w) = -(1 - ||w||^2) / |1 - w_1|^2,

normalized by the canonical defining couple theta(v) = <v, nu_p>:  along any
interior curve gamma reaching the pole transversally,

    Omega(gamma(t)) * (1 - t)  ->  -2 Re [theta(gamma'(1))]^{-1}.

General poles follow by unitary invariance, translated/scaled balls B(c, r)
by the couple-rescaling rule  Omega_{B(c,r),p}(z) = (1/r) Omega((z-c)/r) at
pole (p-c)/r.  The module also provides the standard involutive ball
automorphisms, the Kobayashi distance (arctanh of the Mobius invariant), the
symmetric Green function with logarithmic pole G(z, w) = log ||phi_z(w)||,
Richardson-extrapolated boundary limits along curves, and pullbacks of
kernels under registered biholomorphisms together with the induced couple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError
from .extrapolate import Extrapolation, richardson
from .utils import as_vector, herm, norm

#: |  ||p|| - 1 | below this counts as a boundary pole.
_SPHERE_TOL = 1e-9


class _NegInfinity:
    """Explicit sentinel for negative-infinite values (pole hits).

    Orders below every float but supports no arithmetic, so it can never
    silently propagate through computations.
    """

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INFINITY"

    def __float__(self):
        return float("-inf")

    def __lt__(self, other):
        return not isinstance(other, _NegInfinity)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _NegInfinity)

    def __eq__(self, other):
        return isinstance(other, _NegInfinity)

    def __hash__(self):
        return hash("NEG_INFINITY")


NEG_INFINITY = _NegInfinity()


def is_neg_infinity(x) -> bool:
    return isinstance(x, _NegInfinity)


class Provenance(str, Enum):
    CLOSED_FORM = "closed_form"
    SANDWICH_INTERVAL = "sandwich_interval"
    ENVELOPE_LOWER_BOUND = "envelope_lower_bound"


@dataclass(frozen=True)
class KernelValue:
    """A kernel evaluation: exact value or certified enclosure, always <= 0."""

    lo: float
    hi: float
    provenance: Provenance
    pole_hit: bool = False      # value is negative infinity (z at the pole)

    def __post_init__(self):
        if self.pole_hit:
            return
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValidationError("kernel enclosure must be finite")
        if self.lo > self.hi + 1e-12:
            raise ValidationError(f"invalid enclosure [{self.lo}, {self.hi}]")
        if self.hi > 1e-9:
            raise ValidationError(f"kernel values must be <= 0, got hi = {self.hi}")
        object.__setattr__(self, "hi", min(self.hi, 0.0))
        object.__setattr__(self, "lo", min(self.lo, self.hi))

    @staticmethod
    def closed_form(value: float) -> "KernelValue":
        return KernelValue(lo=float(value), hi=float(value),
                           provenance=Provenance.CLOSED_FORM)

    @staticmethod
    def interval(lo: float, hi: float,
                 provenance: Provenance = Provenance.SANDWICH_INTERVAL) -> "KernelValue":
        return KernelValue(lo=float(lo), hi=float(hi), provenance=provenance)

    @staticmethod
    def neg_infinity(provenance: Provenance = Provenance.CLOSED_FORM) -> "KernelValue":
        return KernelValue(lo=0.0, hi=0.0, provenance=provenance, pole_hit=True)

    @property
    def is_exact(self) -> bool:
        return not self.pole_hit and self.lo == self.hi

    @property
    def value(self) -> float:
        if self.pole_hit:
            raise ValidationError("negative-infinite kernel value has no float value")
        if not self.is_exact:
            raise ValidationError("interval kernel value has no single value; use lo/hi")
        return self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def scaled(self, factor: float) -> "KernelValue":
        """Multiply the enclosure by a positive factor."""
        if factor <= 0:
            raise ValidationError("scaling factor must be positive")
        if self.pole_hit:
            return self
        return KernelValue(lo=self.lo * factor, hi=self.hi * factor,
                           provenance=self.provenance)


# -- disc -------------------------------------------------------------------

def poisson_disc(p: complex, zeta: complex) -> float:
    """Negative Poisson kernel of the unit disc with boundary pole p."""
    p = complex(p)
    zeta = complex(zeta)
    if abs(abs(p) - 1.0) > _SPHERE_TOL:
        raise ValidationError(f"pole must be unimodular, |p| = {abs(p)}")
    if abs(zeta) >= 1.0:
        raise ValidationError(f"point must be in the open disc, |zeta| = {abs(zeta)}")
    return -(1.0 - abs(zeta) ** 2) / abs(p - zeta) ** 2


# -- ball automorphisms and invariants ---------------------------------------

def mobius_ball(z0, w) -> np.ndarray:
    """The standard involutive automorphism phi_{z0} of the unit ball.

    phi_{z0}(z0) = 0, phi_{z0} o phi_{z0} = id, maps the closed ball onto
    itself; phi_0 = -id.
    """
    z0 = as_vector(z0)
    w = as_vector(w, len(z0))
    a2 = float(np.real(herm(z0, z0)))
    if a2 >= 1.0:
        raise ValidationError("automorphism anchor must be inside the open ball")
    if norm(w) > 1.0 + 1e-12:
        raise ValidationError("point must be in the closed ball")
    if a2 == 0.0:
        return -w
    s = math.sqrt(1.0 - a2)
    proj = (herm(w, z0) / a2) * z0
    return (z0 - proj - s * (w - proj)) / (1.0 - herm(w, z0))


def mobius_ball_jacobian(z0, w) -> np.ndarray:
    """Complex Jacobian matrix J of phi_{z0} at w, (d phi(v))_i = sum_j J_ij v_j."""
    z0 = as_vector(z0)
    n = len(z0)
    w = as_vector(w, n)
    a2 = float(np.real(herm(z0, z0)))
    if a2 == 0.0:
        return -np.eye(n, dtype=complex)
    s = math.sqrt(1.0 - a2)
    P = np.outer(z0, np.conj(z0)) / a2
    L = P + s * (np.eye(n, dtype=complex) - P)
    d = 1.0 - herm(w, z0)
    return (-L * d + np.outer(z0 - L @ w, np.conj(z0))) / d ** 2


def kobayashi(domain, z, w) -> float:
    """Kobayashi distance of the disc or unit ball: arctanh of the Mobius invariant.

    For the disc this is the Poincare distance (1/2) log((1+m)/(1-m)) with
    m = |phi_z(w)|.
    """
    from .domains import DomainKind, DomainSpec

    if not isinstance(domain, DomainSpec) or domain.kind not in (
            DomainKind.DISC, DomainKind.UNIT_BALL):
        raise ValidationError("kobayashi distance is provided for the disc and unit ball")
    z = as_vector(z, domain.n)
    w = as_vector(w, domain.n)
    if norm(z) >= 1.0 or norm(w) >= 1.0:
        raise ValidationError("points must lie in the open ball")
    m = norm(mobius_ball(z, w))
    return float(np.arctanh(min(m, 1.0 - 1e-16)))


# -- pluricomplex Poisson kernel of balls -------------------------------------

def omega_ball_value(n: int, p, z) -> float:
    """Raw kernel value -(1 - ||z||^2)/|1 - <z, p>|^2 of the unit ball at pole p."""
    p = as_vector(p, n)
    z = as_vector(z, n)
    if abs(norm(p) - 1.0) > _SPHERE_TOL:
        raise ValidationError("pole must lie on the unit sphere")
    nz = norm(z)
    if nz > 1.0 + _SPHERE_TOL:
        raise ValidationError("point must lie in the closed ball")
    denom = abs(1.0 - herm(z, p)) ** 2
    if denom < 1e-300:
        raise ValidationError("kernel evaluated at its pole")
    return -max(1.0 - nz ** 2, 0.0) / denom


def omega_ball(n: int, p, z) -> KernelValue:
    """Pluricomplex Poisson kernel of the unit ball of C^n, canonical couple."""
    return KernelValue.closed_form(omega_ball_value(n, p, z))


def omega_general_ball_value(center, radius: float, p, z) -> float:
    """Kernel of the ball B(center, radius) via the scaling rule (1/r) Omega((z-c)/r)."""
    c = as_vector(center)
    if radius <= 0:
        raise ValidationError("radius must be positive")
    p = as_vector(p, len(c))
    z = as_vector(z, len(c))
    return omega_ball_value(len(c), (p - c) / radius, (z - c) / radius) / radius


def omega_general_ball(center, radius: float, p, z) -> KernelValue:
    return KernelValue.closed_form(omega_general_ball_value(center, radius, p, z))


def rescale_couple(value, rho: float):
    """Re-express a kernel value in the couple rho * theta (values scale by 1/rho)."""
    if rho <= 0:
        raise ValidationError("couple scale must be positive")
    if isinstance(value, KernelValue):
        return value.scaled(1.0 / rho)
    return value / rho


# -- Green function -----------------------------------------------------------

def green_ball(n: int, z, w):
    """Pluricomplex Green function of the unit ball: G(z, w) = log ||phi_z(w)||.

    Symmetric in (z, w), negative inside, zero on the boundary, logarithmic
    pole at w = z (returned as the NEG_INFINITY sentinel).
    """
    z = as_vector(z, n)
    w = as_vector(w, n)
    if norm(z) >= 1.0 or norm(w) > 1.0 + _SPHERE_TOL:
        raise ValidationError("green_ball requires z interior and w in the closed ball")
    m = norm(mobius_ball(z, w))
    if m == 0.0:
        return NEG_INFINITY
    return float(np.log(min(m, 1.0)))


def green_general_ball(center, radius: float, z, w):
    """Green function of B(center, radius) by biholomorphic invariance."""
    c = as_vector(center)
    return green_ball(len(c), (as_vector(z, len(c)) - c) / radius,
                      (as_vector(w, len(c)) - c) / radius)


# -- boundary limits -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """A curve gamma: [0,1] -> closure(D) with gamma(1) = p on the boundary.

    ``gamma_prime_at_1`` is the one-sided derivative at t = 1; transversal
    approach requires Re <gamma'(1), nu_p> > 0.
    """

    gamma: Callable[[float], np.ndarray]
    gamma_prime_at_1: np.ndarray

    def endpoint(self) -> np.ndarray:
        return as_vector(self.gamma(1.0))


@dataclass(frozen=True)
class BoundaryLimitResult:
    estimate: float
    predicted: float
    error: float
    levels: int

    @property
    def deviation(self) -> float:
        return abs(self.estimate - self.predicted)


def boundary_limit(evaluator, curve: BoundaryCurve, nu_p, *,
                   start_level: int = 3, max_level: int = 26) -> BoundaryLimitResult:
    """Extrapolate lim_{t->1} f(gamma(t)) * (1 - t) on the schedule t_k = 1 - 2^-k.

    Also returns the predicted transversal limit -2 Re [<gamma'(1), nu_p>]^{-1}.
    """
    nu_p = as_vector(nu_p)
    gp = as_vector(curve.gamma_prime_at_1, len(nu_p))
    theta = herm(gp, nu_p)
    if theta.real <= 1e-12:
        raise ValidationError(
            f"curve is tangential: Re <gamma'(1), nu> = {theta.real:.3e} must be positive")
    predicted = -2.0 * (1.0 / theta).real

    vals = []
    best: Optional[Extrapolation] = None
    for k in range(start_level, max_level + 1):
        h = 2.0 ** (-k)
        v = evaluator(curve.gamma(1.0 - h))
        if isinstance(v, KernelValue):
            v = v.value
        vals.append(v * h)
        if len(vals) >= 3:
            ext = richardson(vals)
            if best is None or ext.error <= best.error:
                best = ext
            elif ext.error > 16.0 * max(best.error, 1e-15):
                break  # refinement has hit the round-off floor
    if best is None:
        best = richardson(vals)
    return BoundaryLimitResult(estimate=best.real, predicted=predicted,
                               error=best.error, levels=len(vals))


# -- registered biholomorphisms and kernel pullback ---------------------------

@dataclass(frozen=True)
class Biholomorphism:
    """A registered biholomorphism with boundary extension.

    ``derivative(z)`` returns the complex Jacobian matrix J with
    (dF_z(v))_i = sum_j J_ij v_j.
    """

    name: str
    map: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]


def identity_biholomorphism(n: int) -> Biholomorphism:
    eye = np.eye(n, dtype=complex)
    return Biholomorphism(name="identity",
                          map=lambda z: as_vector(z, n),
                          derivative=lambda z: eye,
                          inverse=lambda w: as_vector(w, n))


def unitary_biholomorphism(U) -> Biholomorphism:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValidationError("unitary matrix must be square")
    if not np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=1e-10):
        raise ValidationError("matrix is not unitary")
    Uh = U.conj().T
    return Biholomorphism(name="unitary",
                          map=lambda z: U @ as_vector(z, U.shape[0]),
                          derivative=lambda z: U,
                          inverse=lambda w: Uh @ as_vector(w, U.shape[0]))


def ball_automorphism_biholomorphism(anchor) -> Biholomorphism:
    a = as_vector(anchor)
    return Biholomorphism(name="ball_automorphism",
                          map=lambda z: mobius_ball(a, z),
                          derivative=lambda z: mobius_ball_jacobian(a, z),
                          inverse=lambda w: mobius_ball(a, w))


def affine_biholomorphism(scale: float, offset) -> Biholomorphism:
    """z -> scale * z + offset (maps balls to balls)."""
    b = as_vector(offset)
    n = len(b)
    if scale == 0:
        raise ValidationError("affine scale must be nonzero")
    J = float(scale) * np.eye(n, dtype=complex)
    return Biholomorphism(name="affine",
                          map=lambda z: scale * as_vector(z, n) + b,
                          derivative=lambda z: J,
                          inverse=lambda w: (as_vector(w, n) - b) / scale)


@dataclass(frozen=True, eq=False)
class PulledBackKernel:
    """z -> Omega_{D', q}(F(z)) together with the pulled-back defining couple.

    ``couple_coeffs`` is the vector c with theta'(v) = <v, c>.  For registered
    maps theta' = scale_to_standard * theta_p with theta_p the canonical
    couple at the pole preimage, so multiplying values by
    ``scale_to_standard`` renormalizes the kernel to the canonical couple.
    """

    evaluator: Callable[[np.ndarray], float]
    couple_coeffs: np.ndarray
    pole: np.ndarray
    scale_to_standard: float

    def standard_evaluator(self) -> Callable[[np.ndarray], float]:
        rho = self.scale_to_standard
        ev = self.evaluator
        return lambda z: rho * ev(z)


def pullback_kernel(F: Biholomorphism, q, kernel=None, source_normal=None) -> PulledBackKernel:
    """Pull back a target-ball kernel with pole q under a registered biholomorphism.

    ``kernel`` is the target evaluator (defaults to the unit-ball kernel at
    pole q in the canonical couple).  The pulled-back couple is
    theta'(v) = theta_q(dF_p v) at p = F^{-1}(q); for registered maps it is a
    positive multiple of the canonical couple at p, and ``scale_to_standard``
    carries that multiple.
    """
    if not isinstance(F, Biholomorphism):
        raise ValidationError(f"unregistered map type: {type(F).__name__}")
    q = as_vector(q)
    n = len(q)
    if kernel is None:
        if abs(norm(q) - 1.0) > _SPHERE_TOL:
            raise ValidationError("default target kernel requires a unit-sphere pole")
        kernel = lambda w: omega_ball_value(n, q, w)
        nu_q = q
    else:
        nu_q = q / norm(q)
    p = as_vector(F.inverse(q))
    J = np.asarray(F.derivative(p), dtype=complex)
    coeffs = J.conj().T @ nu_q
    if source_normal is None:
        nn = norm(p)
        if abs(nn - 1.0) > 1e-6:
            raise ValidationError("source normal required when the source is not the unit ball")
        source_normal = p / nn
    rho = herm(as_vector(source_normal, n), coeffs)
    if abs(rho.imag) > 1e-9 * abs(rho) or rho.real <= 0:
        raise ValidationError(f"pulled-back couple is not positively oriented: theta'(nu) = {rho}")
    fmap = F.map
    return PulledBackKernel(evaluator=lambda z: kernel(fmap(z)),
                            couple_coeffs=coeffs,
                            pole=p,
                            scale_to_standard=float(rho.real))
