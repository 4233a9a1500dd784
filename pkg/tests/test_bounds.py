import math

import numpy as np
import pytest

from plurikernel import (
    ContainmentError,
    DomainSpec,
    Provenance,
    ValidationError,
    ball_restriction_candidate,
    kernel_value,
    lower_envelope,
    peak_candidate,
    sandwich_bounds,
    uniform_bound_check,
)
from plurikernel.bounds import candidate_normal_limit, pole_upper_bound
from plurikernel.domains import boundary_samples
from plurikernel.extrapolate import richardson
from plurikernel.kernels import omega_ball_value
from plurikernel.utils import herm, sample_ball

E1 = np.array([1.0, 0.0], dtype=complex)
ELL = DomainSpec.ellipsoid([1.0, 2.0])
BALL2 = DomainSpec.unit_ball(2)

# peak value at the center of the unit ball: P(exp(-1)) computed from the
# closed forms -(1 - e^{-2}) / (1 - e^{-1})^2
PEAK_AT_CENTER = -(1 - math.exp(-2)) / (1 - math.exp(-1)) ** 2


def test_peak_candidate_at_ball_center():
    cand = peak_candidate(BALL2, E1)
    u0 = cand.evaluator([0, 0])
    assert u0 == pytest.approx(PEAK_AT_CENTER, rel=1e-14)
    assert u0 == pytest.approx(-2.163953413738653, abs=1e-12)
    # candidate lies below the kernel
    assert u0 <= omega_ball_value(2, E1, [0, 0])


def test_peak_candidate_normal_rate():
    cand = peak_candidate(BALL2, E1)
    res = candidate_normal_limit(BALL2, cand)
    assert res.estimate == pytest.approx(-2.0, abs=1e-8)


def test_candidates_negative_inside_and_admissible(rng):
    # family membership: negative on interior samples, normal rate >= -2
    for cand in (peak_candidate(ELL, E1), ball_restriction_candidate(ELL, E1)):
        for _ in range(30):
            z = sample_ball(rng, 2, 0.9)
            if ELL.psi(z) >= -1e-9:
                continue
            assert cand.evaluator(z) < 0
        res = candidate_normal_limit(ELL, cand)
        assert res.estimate >= -2.0 - 1e-7


def test_peak_candidate_peaks_only_at_pole(rng):
    cand = peak_candidate(ELL, E1)
    nu = cand.metadata["nu"]
    for q in boundary_samples(ELL, 40, rng):
        if np.linalg.norm(q - E1) < 1e-3:
            continue
        # strictly negative away from the pole, and |h| = 1 only at the pole
        assert cand.evaluator(q) < 0
        assert abs(np.exp(herm(q - E1, nu))) < 1.0
        # continuous extension from inside
        assert cand.evaluator(q * (1 - 1e-9)) == pytest.approx(
            cand.evaluator(q), abs=1e-6)


def test_peak_candidate_requires_convex_kind():
    dom = DomainSpec.custom("z1*conj(z1) - 1", n=1)
    with pytest.raises(ValidationError):
        peak_candidate(dom, [1.0])


def test_lower_envelope_examples(rng):
    peak = peak_candidate(BALL2, E1)
    ball_cand = ball_restriction_candidate(BALL2, E1)
    single = lower_envelope(BALL2, E1, [0, 0], [peak])
    assert single == pytest.approx(PEAK_AT_CENTER, rel=1e-12)
    both = lower_envelope(BALL2, E1, [0, 0], [peak, ball_cand])
    assert both >= single  # max is monotone in the candidate set
    # for the ball, the circumscribed ball is the ball itself: envelope exact
    assert both == pytest.approx(omega_ball_value(2, E1, [0, 0]), rel=1e-12)
    for _ in range(20):
        z = sample_ball(rng, 2, 0.8)
        assert lower_envelope(BALL2, E1, z, [peak, ball_cand]) == pytest.approx(
            omega_ball_value(2, E1, z), rel=1e-11)


def test_lower_envelope_empty_candidates():
    with pytest.raises(ValidationError):
        lower_envelope(BALL2, E1, [0, 0], [])


def test_sandwich_ball_degenerate():
    kv = sandwich_bounds(BALL2, E1, [0.3, 0.2j])
    assert kv.lo == kv.hi
    assert kv.lo == pytest.approx(omega_ball_value(2, E1, [0.3, 0.2j]))


def test_sandwich_ellipsoid_worked_interval():
    # circumscribed unit ball gives -(1 - 0.25)/0.25 = -3; inscribed
    # ball(0.5 e1, 0.5) evaluated at its center gives -2
    kv = sandwich_bounds(ELL, E1, 0.5 * E1)
    assert kv.provenance is Provenance.SANDWICH_INTERVAL
    assert kv.lo == pytest.approx(-3.0, abs=1e-12)
    assert kv.hi == pytest.approx(-2.0, abs=1e-12)


def test_sandwich_outside_inscribed_ball():
    # z = 0 is on the boundary of the inscribed ball B(0.5 e1, 0.5): pick a
    # point clearly outside it but inside the ellipsoid
    z = np.array([-0.3, 0.0], dtype=complex)
    kv = sandwich_bounds(ELL, E1, z)
    assert kv.hi == 0.0
    assert np.isfinite(kv.lo) and kv.lo < 0


def test_sandwich_vs_envelope_consistency(rng):
    peak = peak_candidate(ELL, E1)
    ball_cand = ball_restriction_candidate(ELL, E1)
    for _ in range(40):
        z = sample_ball(rng, 2, 0.9)
        if ELL.psi(z) >= -1e-6:
            continue
        kv = sandwich_bounds(ELL, E1, z)
        env = lower_envelope(ELL, E1, z, [peak, ball_cand])
        assert env <= kv.hi + 1e-12
        assert env >= kv.lo - 1e-12  # envelope never below the circumscribed bound
        assert kv.hi <= 0.0


def test_sandwich_ratio_tends_to_one_along_normal():
    vals = []
    for k in range(3, 22):
        t = 1.0 - 2.0 ** (-k)
        kv = sandwich_bounds(ELL, E1, [t, 0.0])
        vals.append(kv.hi / kv.lo)
    est = richardson(vals)
    assert est.real == pytest.approx(1.0, abs=1e-3)


def _ellipsoid_pole_near(q, eps):
    d = q + eps * np.array([0.0, 1.0], dtype=complex)
    return d / math.sqrt(abs(d[0]) ** 2 + 2 * abs(d[1]) ** 2)


def test_pole_upper_bound_semicontinuous_in_pole():
    # the inscribed-ball upper bound g(z, p) is continuous in both arguments,
    # so lim over poles q_k -> q of g(z, q_k) equals g(z, q)
    z = np.array([0.2, 0.1j])
    g0 = pole_upper_bound(ELL, E1, z)
    gaps = []
    for eps in (1e-2, 1e-4, 1e-6, 1e-8):
        qk = _ellipsoid_pole_near(E1, eps)
        gaps.append(abs(pole_upper_bound(ELL, qk, z) - g0))
    assert gaps[-1] < 1e-6 and gaps[-2] < 1e-6
    assert gaps[0] > gaps[2] > gaps[3]


def test_uniform_bound_check_ball(rng):
    grid = [0.5 * sample_ball(rng, 2, 1.0) for _ in range(25)]
    poles = boundary_samples(BALL2, 20, rng)
    bound = uniform_bound_check(BALL2, grid, poles)
    assert np.isfinite(bound)
    worst_kernel = max(abs(omega_ball_value(2, p, z)) for p in poles for z in grid)
    assert bound >= worst_kernel


def test_uniform_bound_shrinks_with_grid(rng):
    poles = boundary_samples(BALL2, 10, rng)
    big = [0.7 * sample_ball(rng, 2, 1.0) for _ in range(30)]
    bound_big = uniform_bound_check(BALL2, big, poles)
    small = [0.1 * z for z in big]
    bound_small = uniform_bound_check(BALL2, small, poles)
    assert bound_small <= bound_big


def test_uniform_bound_ellipsoid_at_origin(rng):
    poles = boundary_samples(ELL, 30, rng)
    bound = uniform_bound_check(ELL, [np.zeros(2)], poles)
    # direct evaluation oracle: max_p |P(exp(<-p, nu_p>))|
    direct = 0.0
    for p in poles:
        cand = peak_candidate(ELL, p)
        direct = max(direct, abs(cand.evaluator(np.zeros(2))))
    assert bound == pytest.approx(direct, rel=1e-12)
    assert np.isfinite(bound)


def test_uniform_bound_rejects_boundary_grid():
    with pytest.raises(ValidationError):
        uniform_bound_check(BALL2, [E1], [E1])


def test_kernel_value_dispatch():
    assert kernel_value(DomainSpec.disc(), [1.0], [0.0]).value == pytest.approx(-1.0)
    assert kernel_value(BALL2, E1, [0, 0]).value == pytest.approx(-1.0)
    kv = kernel_value(ELL, E1, 0.5 * E1)
    assert (kv.lo, kv.hi) == pytest.approx((-3.0, -2.0))
    dom = DomainSpec.custom("z1*conj(z1) - 1", n=1)
    with pytest.raises(ContainmentError):
        kernel_value(dom, [1.0], [0.0])


def test_sandwich_requires_interior_point():
    with pytest.raises(ValidationError):
        sandwich_bounds(ELL, E1, E1)
