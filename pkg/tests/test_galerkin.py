import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sflowkit.coefficients import CoefficientPath as P
from sflowkit.errors import NotConverged, XDependentUnsupported
from sflowkit.galerkin import (GalerkinConfig, assemble, assemble_form, composite_gauss, eigen_track,
                               morse_index, sflow_galerkin, sflow_matrix_path, tail_block_norm,
                               tail_norm, write_eigen_csv)
from sflowkit.index import block, spectral_flow_constant
from sflowkit.spectrum import DomainSpec, interval_spectrum

PI = DomainSpec.interval()
ZERO = P.from_strings("0", "0", "0")
FIVE = P.from_strings("5", "0", "5")
LIN5 = P.linear(5, 0, 5)


def test_assemble_examples():
    assert np.array_equal(assemble(ZERO, PI, 2, 0.0).matrix, np.diag([-1.0, 1, -1, 1]))
    assert np.allclose(assemble(FIVE, PI, 1, 0.0).matrix, np.diag([-6.0, -4.0]), atol=1e-12)


def test_x_dependent_entry_matches_integral():
    K = assemble_form(P.from_strings("sin(x)", "0", "0"), PI, 1, 0.0)
    assert np.allclose(K, -0.5 * 8 / (3 * math.pi), atol=1e-10, rtol=0)


def test_constant_assembly_is_block_diagonal():
    spec = interval_spectrum(math.pi, 16)
    path = P.from_strings("3*lambda-1", "2", "-lambda^2")
    m = assemble(path, PI, 12, 0.7).matrix
    off = m.copy()
    for k in range(12):
        off[2 * k:2 * k + 2, 2 * k:2 * k + 2] = 0
        blk = block(path, 0.7, k + 1, spec).matrix.to_array()
        assert np.allclose(m[2 * k:2 * k + 2, 2 * k:2 * k + 2], blk, atol=1e-12)
    assert np.max(np.abs(off)) < 1e-12


def test_rectangle_assembly_is_block_diagonal():
    dom = DomainSpec.rectangle(1.0, 2.0)
    m = assemble(FIVE, dom, 10, 0.0).matrix
    spec = dom.spectrum(10)
    for k in range(10):
        m[2 * k:2 * k + 2, 2 * k:2 * k + 2] -= block(FIVE, 0.0, k + 1, spec).matrix.to_array()
    assert np.max(np.abs(m)) < 1e-12


def test_x_dependent_rectangle_rejected():
    with pytest.raises(XDependentUnsupported):
        assemble(P.from_strings("sin(x)", "0", "0"), DomainSpec.rectangle(1, 1), 2, 0.0)


def test_morse_examples():
    assert morse_index(assemble(ZERO, PI, 3, 0.0)) == 3
    assert morse_index(assemble(LIN5, PI, 3, 1.0)) == 5
    assert morse_index(np.diag([0.0, 1.0]), delta=1e-8) == 0


def test_sflow_examples():
    r = sflow_galerkin(LIN5, PI)
    assert r.value == -2 and r.stable
    assert sflow_galerkin(ZERO, PI).value == 0


def test_singular_endpoint_uses_delta_shift():
    r = sflow_galerkin(P.linear(1, 0, 1), PI)
    assert r.delta_used > 0 and r.value == 0
    r = sflow_galerkin(P.linear(1, 0, 1), PI, GalerkinConfig(delta=-1e-3))
    assert r.value == -1 and r.delta_used == -1e-3


def test_not_converged():
    with pytest.raises(NotConverged):
        sflow_galerkin(LIN5, PI, GalerkinConfig(n_start=2, n_max=4))


def test_tail_norm_examples():
    assert tail_norm(FIVE, PI, 4) == pytest.approx(0.2)
    assert tail_norm(ZERO, PI, 4) == 0
    assert tail_norm(LIN5, PI, 6) == pytest.approx(5 / 49)


def test_tail_block_below_bound():
    path = P.from_strings("lambda*(5+sin(x))", "cos(x)", "-2*lambda")
    for n in (4, 8):
        meas = tail_block_norm(path, PI, n, 4 * n, np.linspace(0, 1, 5))
        assert meas <= tail_norm(path, PI, n) + 1e-12


def test_eigen_track_examples(tmp_path):
    lams, ev = eigen_track(LIN5, PI, 2, [0.0, 0.2, 1.0])
    assert np.min(np.abs(ev[1])) < 1e-12
    _, ev0 = eigen_track(ZERO, PI, 2, [0.0, 0.5, 1.0])
    assert np.allclose(ev0, ev0[0])
    assert np.allclose(ev[0], np.linalg.eigvalsh(assemble(LIN5, PI, 2, 0.0).matrix))
    out = tmp_path / "track.csv"
    write_eigen_csv(out, lams, ev)
    text = out.read_bytes()
    assert text.startswith(b"lambda,ev1,ev2,ev3,ev4\n") and b"\r" not in text
    assert len(text.splitlines()) == 4


def test_quadrature_exact_for_polynomials():
    x, w = composite_gauss(0.0, 2.0, 3)
    assert w.sum() == pytest.approx(2.0, abs=1e-14)
    assert (w * x**5).sum() == pytest.approx(64 / 6, rel=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.integers(-8, 8), st.integers(-8, 8), st.integers(-8, 8))
def test_galerkin_equals_index_formula(a, b, c):
    path = P.linear(a, b, c)
    try:
        want = spectral_flow_constant(path, interval_spectrum(math.pi, 16))
    except Exception:
        return
    assert sflow_galerkin(path, PI, GalerkinConfig(eigensolver="lapack")).value == want


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_matrix_path_flow_is_morse_difference(seed):
    rng = np.random.default_rng(seed)
    A0, A1 = (0.5 * (m + m.T) for m in rng.standard_normal((2, 6, 6)))
    mu = lambda m: int(np.count_nonzero(np.linalg.eigvalsh(m) < 0))
    assert sflow_matrix_path(A0, A1) == mu(A0) - mu(A1)
