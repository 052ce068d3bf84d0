import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from setyoung.errors import DimMismatch, GridError, InvalidExponent
from setyoung.paths import SampledPath, sample_fbm
from setyoung.young import (
    YoungConfig,
    iterated_integral,
    riemann_sum,
    verify_young_love,
    young_convergence,
    young_integral,
)


def test_config_validation():
    with pytest.raises(InvalidExponent):
        YoungConfig(0.4, 0.5)
    with pytest.raises(InvalidExponent):
        YoungConfig(1.2, 0.5)
    with pytest.raises(ValueError):
        YoungConfig(0.6, 0.6, scheme="midpoint")
    cfg = YoungConfig(0.6, 0.7)
    assert cfg.sewing_constant == pytest.approx(1 / (1 - 2 ** (-0.3)))
    assert cfg.holder_constant(2.0) == pytest.approx(cfg.sewing_constant * 2**0.6)
    assert cfg.holder_constant(0.5) == pytest.approx(cfg.sewing_constant)


def test_smooth_integral():
    m = 2**10
    f = SampledPath.from_function(lambda t: t, 1.0, m)
    w = SampledPath.from_function(lambda t: t * t, 1.0, m)
    assert young_integral(f, w).values[-1] == pytest.approx(2 / 3, abs=1e-6)
    left = young_integral(f, w, YoungConfig(0.9, 0.9, scheme="left")).values[-1]
    assert left == pytest.approx(2 / 3, abs=2 / m)


def test_identity_integrand_gives_increment():
    w = sample_fbm(0.7, 1.0, 512, dims=2, seed=3)
    f = SampledPath(1.0, np.tile(np.eye(2), (513, 1, 1)))
    I = young_integral(f, w)
    assert np.allclose(I.values, w.values - w.values[0], atol=1e-14)


@given(st.integers(0, 1000))
def test_chain_rule_trapezoid(seed):
    w = sample_fbm(0.75, 1.0, 256, seed=seed)
    I = young_integral(w, w).values
    assert np.allclose(I, 0.5 * (w.values**2 - w.values[0] ** 2), atol=1e-12)


def test_matrix_shapes():
    m = 16
    w = sample_fbm(0.7, 1.0, m, dims=3, seed=0)
    F = np.random.default_rng(0).normal(size=(m + 1, 2, 3))
    a = young_integral(SampledPath(1.0, F), w).values
    b = young_integral(SampledPath(1.0, F.reshape(m + 1, 6)), w).values
    assert a.shape == (m + 1, 2) and np.allclose(a, b)
    with pytest.raises(DimMismatch):
        young_integral(SampledPath(1.0, np.zeros(m + 1)), w)
    with pytest.raises(DimMismatch):
        young_integral(SampledPath(1.0, np.zeros((m + 1, 2, 2))), w)


def test_common_grid():
    f = SampledPath.from_function(lambda t: t, 1.0, 4)
    w = SampledPath.from_function(lambda t: t, 1.0, 6)
    assert young_integral(f, w).m == 12
    with pytest.raises(GridError):
        young_integral(f, SampledPath.from_function(lambda t: t, 2.0, 4))


def test_riemann_sum_on_full_grid_matches_integral():
    w = sample_fbm(0.7, 1.0, 64, seed=2)
    f = SampledPath.from_function(math.cos, 1.0, 64)
    assert riemann_sum(f, w, np.arange(65)) == pytest.approx(young_integral(f, w).values[-1])
    with pytest.raises(GridError):
        riemann_sum(f, w, [0, 10, 5, 64])


def test_convergence_order():
    w = sample_fbm(0.75, 1.0, 2**12, seed=5)
    f = SampledPath.from_function(lambda t: math.sin(5 * t), 1.0, 2**12)
    rep = young_convergence(f, w, YoungConfig(0.9, 0.7, scheme="left"))
    assert rep.order is not None and rep.order >= rep.expected_min_order - 0.05


@given(st.integers(0, 1000))
def test_young_love_bounds(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=3)
    w = sample_fbm(0.75, 1.0, 128, seed=seed)
    f = SampledPath.from_function(lambda t: a[0] * math.sin(4 * t + a[1]) + a[2] * t, 1.0, 128)
    rep = verify_young_love(f, w, YoungConfig(0.6, 0.7), 60, seed)
    assert rep.satisfied and rep.worst_ratio <= 1.0 and rep.global_ratio <= 1.0


def test_iterated_integral():
    w0 = SampledPath.from_function(lambda t: t, 1.0, 32)
    it = iterated_integral(w0)
    assert np.allclose(it.values[:, 1], w0.grid**2 / 2)
    with pytest.raises(DimMismatch):
        iterated_integral(sample_fbm(0.7, 1.0, 8, dims=2))
