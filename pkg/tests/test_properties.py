"""Property-based checks of the numeric invariants that must hold for any
input, not just the fixtures: simplex membership, blend stochasticity,
split partitioning, and validation idempotence."""

import numpy as np
import numpy.testing as npt
from hypothesis import given, settings
from hypothesis import strategies as st

from dirblend.core import PredictionMatrix, WeightVector, validate_matrix
from dirblend.ensemble import combine, trial_weights
from dirblend.split import SplitSpec, split_sizes


@settings(max_examples=60, deadline=None)
@given(
    k=st.integers(1, 8),
    alpha=st.floats(0.05, 50.0),
    seed=st.integers(-(2**63), 2**63 - 1),
    trial=st.integers(0, 10_000),
)
def test_trial_weights_always_on_simplex(k, alpha, seed, trial):
    w = trial_weights(k, alpha, seed, trial)
    assert (w.weights >= 0).all()
    assert abs(w.weights.sum() - 1.0) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 12),
    c=st.integers(2, 8),
    k=st.integers(1, 5),
    seed=st.integers(0, 2**32 - 1),
)
def test_blend_of_stochastic_is_stochastic(n, c, k, seed):
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(k):
        m = rng.random((n, c)) + 1e-9
        mats.append(PredictionMatrix(m / m.sum(axis=1, keepdims=True)))
    weights = WeightVector(rng.dirichlet(np.ones(k)))
    out = combine(mats, weights)
    assert (out.values >= 0).all()
    npt.assert_allclose(out.values.sum(axis=1), 1.0, atol=1e-9, rtol=0)


@settings(max_examples=100, deadline=None)
@given(
    n=st.integers(1, 5000),
    test_frac=st.floats(0.001, 0.999),
    val_frac=st.floats(0.001, 0.999),
)
def test_split_sizes_partition(n, test_frac, val_frac):
    spec = SplitSpec(test_fraction=test_frac, validation_fraction_of_remainder=val_frac)
    n_train, n_val, n_test = split_sizes(n, spec)
    assert n_train + n_val + n_test == n
    assert n_train >= 1
    assert n_val >= 0 and n_test >= 0


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 40), c=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_validate_matrix_idempotent(n, c, seed):
    rng = np.random.default_rng(seed)
    raw = rng.random((n, c)) + 1e-12
    raw /= raw.sum(axis=1, keepdims=True)
    raw *= 1 + rng.uniform(-9e-7, 9e-7, size=(n, 1))
    once = validate_matrix(raw)
    twice = validate_matrix(once.values)
    assert once.values.tobytes() == twice.values.tobytes()
