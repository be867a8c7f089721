import pytest
import numpy as np
from gyrotop.integrate import simulate
from gyrotop.models import ModelSpec, classical_point, example_spec, generic_point
from gyrotop.skew import vee3
from gyrotop.zhukovskiy import (DEGENERATE_CONE, NO_K_POINT, RESIDUALS, max_residual, zh_state, zh_trace,
                                zh_verify)


def verify(inertia, L_vec, m, Omega):
    geometry = zh_state(inertia, L_vec, m, Omega)
    K = np.asarray(inertia, dtype=float) * np.asarray(Omega, dtype=float) + np.asarray(L_vec, dtype=float)
    return geometry, zh_verify(geometry, K, Omega)


# ------------- Test special configurations -------------
def test_spherical_top():
    geometry, residuals = verify([1, 1, 1], [0, 0, 0], 1.0, [0, 0, 2])
    assert geometry.h == 2.0 and geometry.k == 2.0
    assert geometry.N.tolist() == [0.0, 0.0, 1.0]
    assert geometry.S.tolist() == [0.0, 0.0, 1.0]
    assert geometry.p == 1.0
    assert geometry.flags == {DEGENERATE_CONE}
    assert geometry.F is None
    assert geometry.theta == 2.0 and geometry.theta_prime == 0.0
    assert str(geometry) == "<ZhGeometry: h=2 k=2 theta=2 theta'=0 (degenerate cone)>"
    assert [name for name in RESIDUALS if residuals[name] is None] == ["c", "d", "f"]
    assert max_residual(residuals) < 1e-14


def test_momentum_parallel_to_tangent_plane():
    # K = (0, 1, 0) lies in the tangent plane x = 1
    geometry, residuals = verify([1, 1, 1], [-1, 1, 0], 1.0, [1, 0, 0])
    assert geometry.flags == {NO_K_POINT}
    assert np.allclose(geometry.K, [0, 1, 0])
    assert geometry.K_pt is None
    assert geometry.alpha == pytest.approx(np.pi / 2)
    assert geometry.theta == 0.0
    assert np.array_equal(geometry.F, geometry.S)
    assert geometry.S.tolist() == [1.0, 0.0, 0.0]
    assert geometry.p == 1.0 and geometry.speed == 1.0
    assert geometry.theta_prime == 1.0
    assert [name for name in RESIDUALS if residuals[name] is None] == ["c", "d", "g"]
    assert max_residual(residuals) < 1e-14


def test_degenerate_cone():
    geometry, residuals = verify([1, 2, 3], [0, 0, 0], 1.0, [0, 0, 2])
    assert geometry.flags == {DEGENERATE_CONE}
    assert geometry.h == 6.0
    assert np.allclose(geometry.N, [0, 0, np.sqrt(3)])
    assert geometry.p == pytest.approx(np.sqrt(3))
    assert residuals["f"] is None
    assert max_residual(residuals) < 1e-12


# ------------- Test generic configurations -------------
def test_random_residuals():
    rng = np.random.default_rng(0)
    for _ in range(200):
        inertia = rng.uniform(0.5, 3.0, 3)
        L_vec = rng.uniform(-1, 1, 3)
        Omega = rng.uniform(-1, 1, 3)
        m = rng.uniform(0.5, 2.0)
        geometry, residuals = verify(inertia, L_vec, m, Omega)
        assert not geometry.degenerate
        assert all(value is not None for value in residuals.values())
        assert max_residual(residuals) <= 1e-10


def test_joint_scaling():
    # scaling Omega and L together keeps the points and scales the speeds
    rng = np.random.default_rng(1)
    inertia, L_vec, Omega = rng.uniform(0.5, 3.0, 3), rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
    first = zh_state(inertia, L_vec, 1.0, Omega)
    second = zh_state(inertia, 3 * L_vec, 1.0, 3 * Omega)
    for name in ("N", "S", "K_pt", "F", "L_pt"):
        assert np.allclose(getattr(second, name), getattr(first, name), atol=1e-12)
    assert second.alpha == pytest.approx(first.alpha)
    assert second.theta == pytest.approx(3 * first.theta)
    assert second.theta_prime == pytest.approx(3 * first.theta_prime)
    assert second.h == pytest.approx(9 * first.h)


def test_mass_rescales_ellipsoid():
    first = zh_state([1, 2, 3], [0.1, 0.2, 0.3], 1.0, [0.4, -0.5, 0.6])
    second = zh_state([1, 2, 3], [0.1, 0.2, 0.3], 4.0, [0.4, -0.5, 0.6])
    assert np.allclose(second.N, first.N / 2)
    assert np.allclose(second.S, first.S / 2)
    assert second.alpha == pytest.approx(first.alpha)


def test_zh_state_errors():
    with pytest.raises(ValueError) as exception:
        zh_state([1, 0, 1], [0, 0, 0], 1.0, [1, 0, 0])
    assert "The principal moments must be three positive numbers, got [1.0, 0.0, 1.0]." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        zh_state([1, 1, 1], [0, 0, 0], 0, [1, 0, 0])
    assert "The mass of the transformed body must be positive, got 0." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        zh_state([1, 1, 1], [0, 0, 0], 1.0, [0, 0, 0])
    assert "The angular velocity must be a non-zero 3-vector." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        zh_state([1, 1, 1], [0, 0], 1.0, [1, 0, 0])
    assert "The gyroscope momentum must be a 3-vector, got shape (2,)." in str(exception.value)


# ------------- Test traces -------------
def euler_trace(T=1.0, dt=0.001):
    spec = example_spec("classical3_euler")
    trajectory = simulate("rk4", spec, generic_point(spec, np.random.default_rng(0)), dt, T)
    return zh_trace(trajectory)


def test_trace_constancy():
    trace = euler_trace()
    assert len(trace) == 1001
    assert trace.degenerate_count == 0
    drifts = trace.constancy()
    assert sorted(drifts) == ["h", "k", "sphere"]
    assert max(drifts.values()) < 1e-8
    assert np.allclose(trace.sphere_radius(), trace.series("k") / np.sqrt(2 * trace.series("h")))


def test_trace_standard_representation():
    spec = example_spec("classical3_euler", representation="standard")
    x = generic_point(spec, np.random.default_rng(0))
    trace = zh_trace(simulate("rk4", spec, x, 0.1, 0.2))
    # K = M + L is the standard momentum itself
    assert np.allclose(trace.geometries[0].K, vee3(x.momentum))


def test_trace_csv(tmp_path):
    trace = euler_trace(T=0.1, dt=0.01)
    path = tmp_path / "zhukovskiy.csv"
    trace.to_csv(path)
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    assert header[:3] == ["t", "h", "k"]
    assert header[-4:] == ["alpha", "theta", "theta_prime", "flags"]
    assert len(header) == 20
    assert len(lines) == 12
    assert all(line.endswith(",") for line in lines[1:])


def test_degenerate_trace_is_logged(caplog, tmp_path):
    # a spherical top without gyroscope turns about a fixed axis
    spec = ModelSpec("classical3_euler", 3, L=[0, 0, 0], inertia=[1, 1, 1])
    trajectory = simulate("rk4", spec, classical_point([0.3, 0.2, 0.5], [0, 0, 1]), 0.1, 0.5)
    trace = zh_trace(trajectory)
    assert trace.degenerate_count == 6
    assert "6 of 6 Zhukovskiy samples are degenerate" in caplog.text
    path = tmp_path / "zhukovskiy.csv"
    trace.to_csv(path)
    row = path.read_text().splitlines()[1].split(",")
    assert row[-1] == DEGENERATE_CONE
    assert row[-7:-4] == ["nan", "nan", "nan"]


def test_zh_trace_errors():
    spec = example_spec("classical3_kowalevski")
    trajectory = simulate("rk4", spec, generic_point(spec, np.random.default_rng(0)), 0.1, 0.2)
    with pytest.raises(ValueError) as exception:
        zh_trace(trajectory)
    assert ("The Zhukovskiy construction needs a classical3_euler trajectory, got classical3_kowalevski."
            in str(exception.value))


def test_trace_plot(tmp_path):
    filename = tmp_path / "zhukovskiy.png"
    euler_trace(T=0.2, dt=0.1).visualise(show=False, filename=filename)
    assert filename.exists()
