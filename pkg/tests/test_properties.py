"""Property-based checks of the small decision kernels."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cceqr import InvariantError, acceptance_count, householder, norm_mass_cdf
from _oracles import explicit_reflector


@given(
    st.lists(st.floats(0.01, 100.0), min_size=1, max_size=12),
    st.floats(0.0, 150.0),
    st.floats(0.0, 150.0),
)
def test_acceptance_count_matches_bruteforce(diag, delta, mu):
    diag = sorted(diag, reverse=True)  # pivoted QR emits nonincreasing |diag|
    Rhat = np.diag(diag)
    cleared = [i for i, v in enumerate(diag) if v * v >= max(delta, mu)]
    if not cleared:
        with pytest.raises(InvariantError):
            acceptance_count(Rhat, delta, mu)
    else:
        assert acceptance_count(Rhat, delta, mu) == max(cleared) + 1


@given(
    st.integers(2, 10).flatmap(
        lambda m: st.tuples(
            st.lists(st.floats(-1e6, 1e6), min_size=m, max_size=m),
            st.integers(0, m - 1),
        )
    )
)
@settings(max_examples=200)
def test_householder_postconditions(case):
    x_list, i = case
    x = np.array(x_list)
    v, tau, mu = householder(x, i)
    assert np.all(v[:i] == 0.0) and v[i] == 1.0
    assert tau >= 0.0
    y = explicit_reflector(v, tau) @ x
    scale = max(np.linalg.norm(x), 1.0)
    assert np.allclose(y[:i], x[:i], atol=1e-9 * scale)
    assert np.allclose(y[i + 1:], 0.0, atol=1e-9 * scale)
    assert abs(abs(y[i]) - np.linalg.norm(x[i:])) <= 1e-9 * scale
    assert abs(abs(mu) - np.linalg.norm(x[i:])) <= 1e-9 * scale


@given(st.lists(st.floats(0.0, 1e6), min_size=1, max_size=30))
def test_norm_mass_cdf_is_monotone_and_bounded(norms):
    A = np.diag(np.sqrt(np.array(norms)))
    quantiles = np.linspace(0.0, 1.0, 11)
    frac, zero = norm_mass_cdf(A, quantiles)
    assert np.all(frac >= -1e-15) and np.all(frac <= 1.0 + 1e-12)
    assert np.all(np.diff(frac) >= -1e-12)
    if not zero:
        assert frac[-1] == pytest.approx(1.0)
