import csv
import pytest
import mock
import numpy as np
from gyrotop.integrate import (ConvergenceError, DriftRow, Trajectory, convergence_ratio, drift_report,
                               self_convergence, simulate, step, step_count, write_drift_csv)
from gyrotop.models import example_spec, generic_point, hamiltonian_field
from gyrotop.poisson import IntegralFamily, casimirs


def start_of(spec, seed=0):
    return generic_point(spec, np.random.default_rng(seed))


# ------------- Test steps -------------
def test_step_errors():
    spec = example_spec("classical3_euler")
    x = start_of(spec)
    with pytest.raises(ValueError) as exception:
        step("euler", spec, x, 0.1)
    assert "Unknown integrator 'euler'" in str(exception.value)

    with pytest.raises(ValueError) as exception:
        step("rk4", spec, x, 0.0)
    assert "The time step must not be zero." in str(exception.value)


def test_simulate_errors():
    spec = example_spec("classical3_euler")
    x = start_of(spec)
    with pytest.raises(ValueError) as exception:
        simulate("rk4", spec, x, -0.01, 1.0)
    assert "The time step must be positive, got -0.01." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        simulate("rk4", spec, x, 0.5, 0.1)
    assert "The final time 0.1 is shorter than one step 0.5." in str(exception.value)


def test_step_count():
    assert step_count(0.1, 1.0) == 10
    assert step_count(0.1, 1.05) == 11
    assert step_count(0.001, 10.0) == 10000


def test_trajectory_grid():
    spec = example_spec("classical3_euler")
    x = start_of(spec)
    trajectory = simulate("rk4", spec, x, 0.1, 1.0)
    assert len(trajectory) == 11
    assert trajectory.dt == pytest.approx(0.1)
    assert trajectory.points[0] is x
    assert str(trajectory) == "<Trajectory: 11 samples of classical3_euler n=3, dt=0.1>"
    # the last step overshoots a final time off the grid
    trajectory = simulate("rk4", spec, x, 0.1, 1.05)
    assert len(trajectory) == 12
    assert trajectory.times[-1] == pytest.approx(1.1)

    with pytest.raises(ValueError) as exception:
        Trajectory(spec, [0.0, 0.1], [x])
    assert "A trajectory needs one point per time." in str(exception.value)


# ------------- Test accuracy -------------
def test_rk4_energy_drift():
    spec = example_spec("manakov_gyro", 4)
    trajectory = simulate("rk4", spec, start_of(spec), 0.01, 1.0)
    rows = drift_report(trajectory, IntegralFamily(spec.model, spec.n, [hamiltonian_field(spec)]))
    assert rows[0].label == "H"
    assert rows[0].max_drift < 1e-8


def test_midpoint_keeps_quadratic_invariants():
    # energy and tr(K^2) are quadratic in the Manakov momentum
    spec = example_spec("manakov_gyro", 4)
    monitors = IntegralFamily(spec.model, spec.n, [hamiltonian_field(spec)])
    monitors = monitors + casimirs(spec.model, spec.n, "magnetic", spec.L)
    trajectory = simulate("implicit_midpoint", spec, start_of(spec), 0.05, 1.0)
    rows = drift_report(trajectory, monitors)
    assert [row.label for row in rows[:2]] == ["H", "C1"]
    assert rows[0].max_drift < 1e-10
    assert rows[1].max_drift < 1e-10


def test_midpoint_keeps_field_length():
    spec = example_spec("belyaev_e_n", 4)
    trajectory = simulate("implicit_midpoint", spec, start_of(spec), 0.1, 1.0)
    lengths = np.array([x.field @ x.field for x in trajectory.points])
    assert np.max(np.abs(lengths - lengths[0])) < 1e-11


def test_midpoint_is_reversible():
    spec = example_spec("belyaev_e_n", 4)
    x = start_of(spec)
    back = step("implicit_midpoint", spec, step("implicit_midpoint", spec, x, 0.05), -0.05)
    assert np.allclose(back.to_vector(), x.to_vector(), atol=1e-11)


def test_rk4_order():
    spec = example_spec("classical3_euler")
    assert 12 < self_convergence("rk4", spec, start_of(spec), 0.05, 1.0) < 20


def test_midpoint_order():
    spec = example_spec("classical3_euler")
    assert 3 < self_convergence("implicit_midpoint", spec, start_of(spec), 0.05, 1.0) < 5


def test_convergence_ratio():
    spec = example_spec("classical3_euler")
    rows = convergence_ratio("rk4", spec, start_of(spec), 0.1, 1.0,
                             IntegralFamily(spec.model, spec.n, [hamiltonian_field(spec)]))
    assert rows[0].label == "H"
    assert rows[0].resolved
    assert rows[0].ratio > 4


# ------------- Test convergence failure -------------
def test_midpoint_non_convergence():
    spec = example_spec("classical3_euler")
    x = start_of(spec)
    rng = np.random.default_rng(1)
    noisy = mock.Mock(side_effect=lambda spec, x: rng.uniform(-1, 1, len(x.to_vector())))
    with mock.patch("gyrotop.integrate._rate", noisy):
        with pytest.raises(ConvergenceError) as exception:
            simulate("implicit_midpoint", spec, x, 0.1, 1.0)
    assert exception.value.step_index == 0
    assert exception.value.iterations == 50
    assert "Implicit midpoint did not converge in 50 iterations at step 0; try a smaller dt." in str(exception.value)

    with mock.patch("gyrotop.integrate._rate", noisy):
        with pytest.raises(ConvergenceError) as exception:
            step("implicit_midpoint", spec, x, 0.1)
    assert "at step" not in str(exception.value)


# ------------- Test output -------------
def test_drift_report():
    spec = example_spec("classical3_euler")
    trajectory = simulate("rk4", spec, start_of(spec), 0.1, 1.0)
    family = IntegralFamily(spec.model, spec.n, [hamiltonian_field(spec)])
    every = drift_report(trajectory, family)
    sparse = drift_report(trajectory, family, stride=4)
    assert every[0].initial == sparse[0].initial == hamiltonian_field(spec)(trajectory.points[0])
    assert sparse[0].max_drift <= every[0].max_drift

    with pytest.raises(ValueError) as exception:
        drift_report(trajectory, casimirs("so", 3))
    assert "Family on so/3 does not match trajectory on e_n/3." in str(exception.value)


def test_write_drift_csv(tmp_path):
    path = tmp_path / "drift.csv"
    write_drift_csv([DriftRow("H", 1.5, 0.125), DriftRow("q1", 0.25, 0.0), DriftRow("K[1,2]", 0.5, 0.0)], path)
    lines = path.read_text().splitlines()
    assert lines == ["label,initial,max_drift", "H,1.5,0.125", "q1,0.25,0", "\"K[1,2]\",0.5,0"]
    with open(path, newline="") as handle:
        assert [row[0] for row in csv.reader(handle)] == ["label", "H", "q1", "K[1,2]"]


def test_trajectory_csv(tmp_path):
    spec = example_spec("classical3_euler")
    trajectory = simulate("rk4", spec, start_of(spec), 0.1, 0.5)
    path = tmp_path / "trajectory.csv"
    trajectory.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == 't,"M[1,2]","M[1,3]","M[2,3]",G[1],G[2],G[3]'
    assert len(lines) == 7
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["t", "M[1,2]", "M[1,3]", "M[2,3]", "G[1]", "G[2]", "G[3]"]
    assert {len(row) for row in rows} == {7}
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    assert np.array_equal(table, trajectory.table())


def test_trajectory_plot(tmp_path):
    spec = example_spec("bitop")
    trajectory = simulate("rk4", spec, start_of(spec), 0.1, 0.3)
    filename = tmp_path / "trajectory.png"
    trajectory.visualise(show=False, filename=filename)
    assert filename.exists()
