import numpy as np
import pytest

from plurikernel.extrapolate import aitken, refine_until, richardson


def test_richardson_polynomial_sequence():
    # f(h) = 3 + 2h + 5h^2 sampled on h = 2^-k: limit recovered exactly
    hs = 2.0 ** -np.arange(2, 12)
    vals = 3.0 + 2.0 * hs + 5.0 * hs ** 2
    ext = richardson(vals)
    assert ext.real == pytest.approx(3.0, abs=1e-12)
    assert ext.error < 1e-10


def test_richardson_half_integer_orders():
    hs = 2.0 ** -np.arange(2, 16)
    vals = 1.0 + 4.0 * np.sqrt(hs) + 2.0 * hs
    ext = richardson(vals, orders=np.arange(1, len(vals)) * 0.5)
    assert ext.real == pytest.approx(1.0, abs=1e-9)


def test_richardson_does_not_claim_convergence_for_linear_growth():
    # regression: sequences growing linearly in the level index must not
    # produce a tiny error estimate from a single-entry table column
    vals = 0.35 * np.arange(20) + 1.0
    ext = richardson(vals)
    assert ext.error > 0.1


def test_aitken_geometric_sequence():
    # s_k = L + c r^k
    ks = np.arange(12)
    vals = 2.0 + 3.0 * 0.5 ** ks
    ext = aitken(vals)
    assert ext.real == pytest.approx(2.0, abs=1e-10)


def test_refine_until_divergence_flag():
    ext = refine_until(lambda h: 1.0 / h, start_level=3, max_level=24,
                       divergence_threshold=1e6)
    assert ext.diverged


def test_refine_until_convergence():
    ext = refine_until(lambda h: -2.0 + 0.7 * h + h * h, start_level=3, max_level=20)
    assert not ext.diverged
    assert ext.real == pytest.approx(-2.0, abs=1e-10)


def test_empty_sequences_rejected():
    with pytest.raises(ValueError):
        richardson([])
    with pytest.raises(ValueError):
        aitken([])
