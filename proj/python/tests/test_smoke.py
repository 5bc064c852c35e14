import math

import pytest

import ntkeoc


def test_activation_params():
    p = ntkeoc.make_activation(1.0, 1.0)
    assert p.delta == pytest.approx(0.5)
    assert p.sigma == pytest.approx(1.0 / math.sqrt(2.0))
    with pytest.raises(ValueError):
        ntkeoc.make_activation(0.0, 0.0)


def test_scalar_map_pins():
    assert ntkeoc.cosine_map(0.5, 1.0) == 1.0
    assert ntkeoc.sqdist_map(1.0, 0.5) == pytest.approx(0.5 - 1.0 / math.pi, abs=1e-15)
    assert ntkeoc.invdist_map(1.0, math.sqrt(2.0)) == pytest.approx(
        2.346034268242520221, abs=1e-14
    )
    assert ntkeoc.invdist_argmin(1.0) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_propagate_trace():
    tr = ntkeoc.propagate(0.5, 0.0, 6)
    assert tr.depth() == 6
    assert tr.kernel_sum[1] == pytest.approx(1.0 / math.pi, abs=1e-15)
    assert len(tr.cosine) == len(tr.invdist) == 6


def test_duals():
    p = ntkeoc.make_activation(0.5, 0.5)
    assert ntkeoc.dual_abs(1.0) == pytest.approx(1.0, abs=1e-15)
    assert ntkeoc.dual_sign(0.5) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert ntkeoc.dual_activation(p, 0.0) == pytest.approx(1.0 / (2.0 * math.pi), abs=1e-15)


def test_kernel_and_spectrum():
    p = ntkeoc.make_activation(0.0, 1.0)
    d = ntkeoc.sample_sphere_dataset(8, 4, 17)
    assert d.points.shape == (8, 4)

    km = ntkeoc.ntk_matrix(p, d, 5)
    assert km.block.shape == (8, 8)
    assert km.block[0, 0] == pytest.approx(5.0 / 8.0, abs=1e-15)

    rep = ntkeoc.spectrum_report(p, d, 5)
    assert rep.perron_ok and rep.lambda2_ok
    eigs = ntkeoc.eigen_symmetric(km.block)
    assert rep.kappa == pytest.approx(eigs[0] / eigs[-1], rel=1e-12)
    assert ntkeoc.kappa_limit(8) == pytest.approx(1.0 + 8.0 / 3.0, abs=1e-15)


def test_convergence_sweep_shape():
    p = ntkeoc.make_activation(1.0, 1.0)
    d = ntkeoc.sample_sphere_dataset(3, 4, 71)
    rows = ntkeoc.convergence_sweep(p, d, [8, 16, 32], 2, 3, 99)
    assert [r.width for r in rows] == [8, 16, 32]
    assert all(r.mean_rel_error > 0.0 for r in rows)
