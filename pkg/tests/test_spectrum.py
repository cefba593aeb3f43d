import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sflowkit.spectrum import (DomainSpec, fd_closed_form, fd_spectrum_interval, interval_spectrum,
                               rectangle_modes, rectangle_spectrum)

PI2 = math.pi**2


def test_interval_examples():
    assert np.allclose(interval_spectrum(math.pi, 3).values, [1, 4, 9])
    assert np.allclose(interval_spectrum(math.pi / 2, 2).values, [4, 16])
    assert interval_spectrum(1.0, 1).values[0] == pytest.approx(PI2)


def test_rectangle_examples():
    assert np.allclose(rectangle_spectrum(1, 1, 4).values, [2 * PI2, 5 * PI2, 5 * PI2, 8 * PI2])
    assert np.allclose(rectangle_spectrum(1, 1, 1).values, [2 * PI2])
    assert np.allclose(rectangle_spectrum(1, 2, 2).values, [1.25 * PI2, 2 * PI2])


def test_rectangle_ties_in_lexicographic_order():
    modes = rectangle_modes(1, 1, 3)
    assert [(m, p) for _, m, p in modes] == [(1, 1), (1, 2), (2, 1)]


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.integers(1, 40))
def test_rectangle_enumeration_is_complete(a, b, n):
    got = rectangle_spectrum(a, b, n).values
    brute = sorted(PI2 * (m * m / a**2 + p * p / b**2) for m in range(1, 60) for p in range(1, 60))[:n]
    assert np.allclose(got, brute)


def test_fd_examples():
    fd = fd_spectrum_interval(math.pi, 2000, 3).values
    assert np.all(np.abs(fd - [1, 4, 9]) / [1, 4, 9] < 1e-4)
    v = fd_spectrum_interval(math.pi, 8, 1).values[0]
    assert v < 1 and v > 0.95
    assert len(fd_spectrum_interval(2.0, 10, 0)) == 0
    with pytest.raises(ValueError):
        fd_spectrum_interval(math.pi, 7, 2)


def test_fd_matches_closed_form():
    assert np.allclose(fd_spectrum_interval(2.5, 64, 10).values, fd_closed_form(2.5, 64, 10), rtol=1e-12)


@pytest.mark.parametrize("L", [0.5, 1.0, math.pi, 7.0])
def test_fd_agrees_with_analytic(L):
    fd = fd_spectrum_interval(L, 2000, 10).values
    exact = interval_spectrum(L, 10).values
    assert np.max(np.abs(fd - exact) / exact) < 1e-4


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(0.1, 10.0), st.integers(1, 30))
def test_spectra_positive_nondecreasing(a, b, n):
    for spec in (interval_spectrum(a, n), rectangle_spectrum(a, b, n)):
        v = spec.values
        assert np.all(v > 0) and np.all(np.diff(v) >= 0)


def test_spectrum_extends_on_demand():
    s = interval_spectrum(math.pi, 2)
    assert s.eigenvalue(10) == pytest.approx(100)
    assert s.count(10) == 3 and s.count(9, strict=True) == 2
    assert np.allclose(s.up_to(16), [1, 4, 9, 16])


def test_domain_validation():
    with pytest.raises(ValueError):
        DomainSpec.interval(0)
    with pytest.raises(ValueError):
        DomainSpec.rectangle(1, -1)
    assert DomainSpec.rectangle(1, 2).to_dict() == {"type": "rectangle", "sides": [1.0, 2.0]}
