import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from hybridhyper.noise import NoiseSpec, generate


def test_zero_levels_give_zeros():
    assert not np.any(generate(NoiseSpec(sigma=0.0, seed=3), 1000))
    assert not np.any(generate(NoiseSpec(impulse=0.0, seed=3), 1000))


def test_negative_levels_rejected():
    with pytest.raises(ValueError):
        NoiseSpec(sigma=-0.1)
    with pytest.raises(ValueError):
        NoiseSpec(impulse=-1.0)
    with pytest.raises(ValueError):
        generate(NoiseSpec(sigma=1.0), 0)


def test_gaussian_statistics():
    x = generate(NoiseSpec.gaussian(0.4, seed=0), 10**5)
    assert abs(x.mean()) <= 0.01
    assert abs(x.std() - 0.4) <= 0.01
    assert stats.kstest(x / 0.4, "norm").pvalue > 0.01


def test_impulse_statistics():
    x = generate(NoiseSpec.impulse_noise(0.5, seed=0), 10**5)
    assert abs(np.mean(x == 0) - 0.5) <= 0.01
    nz = x[x != 0]
    assert np.all(np.abs(nz) <= 0.5)
    assert stats.kstest(nz, stats.uniform(loc=-0.5, scale=1.0).cdf).pvalue > 0.01


def test_whole_vector_impulse_is_all_or_nothing():
    on = [np.count_nonzero(generate(NoiseSpec.impulse_noise(0.5, seed=1, whole_vector=True), 200, t)) for t in range(200)]
    assert set(on) <= {0, 200}
    assert 60 < sum(o == 200 for o in on) < 140


def test_components_add():
    g = generate(NoiseSpec(sigma=0.3, seed=4), 500, 2)
    i = generate(NoiseSpec(impulse=0.2, seed=4), 500, 2)
    both = generate(NoiseSpec(sigma=0.3, impulse=0.2, seed=4), 500, 2)
    assert np.array_equal(both, g + i)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**63 - 1), n=st.integers(1, 300), trial=st.integers(0, 10**6))
def test_reproducible(seed, n, trial):
    spec = NoiseSpec(sigma=0.2, impulse=0.1, seed=seed)
    assert np.array_equal(generate(spec, n, trial), generate(spec, n, trial))


def test_prefix_stable_in_n():
    spec = NoiseSpec(sigma=1.0, seed=7)
    assert np.array_equal(generate(spec, 10, 3), generate(spec, 100, 3)[:10])


def test_trials_are_independent():
    spec = NoiseSpec.gaussian(1.0, seed=11)
    X = np.stack([generate(spec, 2000, t) for t in range(20)])
    C = np.corrcoef(X)
    off = C[~np.eye(20, dtype=bool)]
    assert np.max(np.abs(off)) < 0.1
    assert not np.array_equal(X[0], X[1])


def test_seeds_differ():
    a = generate(NoiseSpec.gaussian(1.0, seed=1), 50)
    b = generate(NoiseSpec.gaussian(1.0, seed=2), 50)
    assert not np.array_equal(a, b)
