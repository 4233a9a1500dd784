"""Normal derivatives of the Green function and the boundary measure density.

For domains with a symmetric Green function (the disc and balls, where
G(z, w) = log ||phi_z(w)||), the boundary normal derivative of G recovers
the pluricomplex Poisson kernel:

    - dG(z, p)/d nu_p = Omega_p(z),

computed here as the limit of one-sided difference quotients
G(z, p - h nu_p)/h on a halving schedule with Aitken acceleration.  The
quotients converge at first order (the Green function is C^{1,1} up to the
boundary but no better in general), so the raw sequence is also checked for
the |q(h) - q(h/2)| <= C h Cauchy pattern and the empirical constant C is
reported.

The induced boundary measure has density  (dG(z,.)/d nu_p)^n  against the
Levi boundary form, i.e.  |Omega_p(z)|^n * levi_density(p)  against surface
volume; at the center of the unit ball its total mass is (2 pi)^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .domains import DomainKind, DomainSpec, levi_density, outward_normal, require_on_boundary
from .errors import ConvergenceError, ValidationError
from .extrapolate import aitken
from .kernels import (
    green_general_ball,
    is_neg_infinity,
    omega_general_ball_value,
    poisson_disc,
)
from .utils import as_vector, norm


def _require_symmetric_green(domain: DomainSpec) -> None:
    if not domain.is_ball_like:
        raise ValidationError(
            "Green-kernel identities require a domain with symmetric Green function "
            "(disc, unit ball, general ball)")


def green_function(domain: DomainSpec, z, w):
    """Green function with pole z for disc/ball kinds; NEG_INFINITY at w = z."""
    _require_symmetric_green(domain)
    return green_general_ball(domain.ball_center, domain.ball_radius, z, w)


@dataclass(frozen=True)
class NormalDerivativeResult:
    """One-sided normal derivative of the Green function at a boundary point.

    ``value`` is the extrapolated -dG/d nu_p (equal to the kernel, hence <= 0);
    ``step_sequence`` holds the raw (h, quotient) pairs and
    ``lipschitz_estimate`` the empirical constant of the first-order refinement.
    """

    value: float
    step_sequence: List[Tuple[float, float]]
    lipschitz_estimate: float
    error: float


def normal_derivative_green(domain: DomainSpec, z, p, h0: float = 1e-3,
                            halvings: int = 8) -> NormalDerivativeResult:
    """Extrapolated limit of G(z, p - h nu_p)/h for h -> 0+ (equals -dG/d nu_p)."""
    _require_symmetric_green(domain)
    z = as_vector(z, domain.n)
    p = require_on_boundary(domain, p)
    if norm(z - p) < 1e-12:
        raise ValidationError("z must differ from the boundary point")
    if domain.psi(z) >= 0:
        raise ValidationError("z must be interior")
    if h0 <= 0:
        raise ValidationError("initial step must be positive")
    nu = outward_normal(domain, p)

    steps = []
    quotients = []
    for k in range(halvings + 1):
        h = h0 * 2.0 ** (-k)
        g = green_function(domain, z, p - h * nu)
        if is_neg_infinity(g):
            raise ValidationError("difference stencil hit the Green pole")
        quotients.append(g / h)
        steps.append((h, g / h))

    diffs = np.abs(np.diff(quotients))
    hs = np.array([s[0] for s in steps])
    with np.errstate(divide="ignore"):
        constants = diffs / hs[:-1]
    lipschitz = float(np.max(constants)) if len(constants) else 0.0
    if len(diffs) >= 3 and not (diffs[-1] <= 0.75 * diffs[0] or diffs[-1] < 1e-12):
        raise ConvergenceError(
            "difference quotients are not Cauchy at first order (regularity failure)",
            trace=steps)
    ext = aitken(quotients)
    return NormalDerivativeResult(value=ext.real, step_sequence=steps,
                                  lipschitz_estimate=lipschitz, error=ext.error)


def omega_closed_form(domain: DomainSpec, p, z) -> float:
    """Closed-form kernel of disc/ball kinds in the canonical couple."""
    _require_symmetric_green(domain)
    if domain.kind is DomainKind.DISC:
        return poisson_disc(as_vector(p, 1)[0], as_vector(z, 1)[0])
    return omega_general_ball_value(domain.ball_center, domain.ball_radius, p, z)


def green_omega_identity_check(domain: DomainSpec, pairs: Sequence,
                               h0: float = 1e-3, halvings: int = 8) -> float:
    """Max over (z, p) pairs of |extrapolated -dG/d nu_p  -  closed-form kernel|."""
    worst = 0.0
    for z, p in pairs:
        nd = normal_derivative_green(domain, z, p, h0=h0, halvings=halvings)
        worst = max(worst, abs(nd.value - omega_closed_form(domain, p, z)))
    return worst


def demailly_density(domain: DomainSpec, z, p) -> float:
    """Density of the boundary reproducing measure against surface volume.

    Equals (dG(z,.)/d nu_p)^n * levi_density(p) = |Omega_p(z)|^n * levi_density(p);
    strictly positive for interior z.
    """
    _require_symmetric_green(domain)
    z = as_vector(z, domain.n)
    if domain.psi(z) >= 0:
        raise ValidationError("z must be interior")
    om = omega_closed_form(domain, p, z)
    return abs(om) ** domain.n * levi_density(domain, p)
