"""Fixed-step integration of the equations of motion and drift of first integrals."""
import csv
import logging
from collections import namedtuple
from math import ceil
import matplotlib.pyplot as plt
import numpy as np

from .models import vector_field
from .poisson import PhasePoint, flatten

logger = logging.getLogger(__name__)

METHODS = ("rk4", "implicit_midpoint")
MIDPOINT_TOLERANCE = 1e-13
MIDPOINT_MAX_ITERATIONS = 50
DRIFT_FLOOR = 1e-8

DriftRow = namedtuple("DriftRow", ["label", "initial", "max_drift"])
ConvergenceRow = namedtuple("ConvergenceRow", ["label", "drift", "drift_half", "ratio", "resolved"])


class ConvergenceError(Exception):
    """The implicit midpoint iteration did not settle.

    Attributes
    ----------
    iterations: int
        Iterations spent.
    step_index: int or None
        Index of the failing step inside :func:`simulate`.
    """
    def __init__(self, iterations, step_index=None):
        self.iterations = iterations
        self.step_index = step_index
        where = "" if step_index is None else f" at step {step_index}"
        super().__init__(f"Implicit midpoint did not converge in {iterations} iterations{where}; try a smaller dt.")


class Trajectory:
    """Samples of one solution on a uniform time grid.

    Attributes
    ----------
    spec: ModelSpec
        The system integrated.
    times: numpy.ndarray
        ``t0, t0 + dt, ..., t0 + N dt``.
    points: list of PhasePoint
        State at every time.
    method: str
        Integrator used.
    """
    def __init__(self, spec, times, points, method="rk4"):
        if len(times) != len(points):
            raise ValueError("A trajectory needs one point per time.")
        self.spec = spec
        self.times = np.asarray(times, dtype=float)
        self.points = list(points)
        self.method = method

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return "<Trajectory: %s samples of %s n=%s, dt=%g>" % (len(self), self.spec.family, self.spec.n, self.dt)

    @property
    def dt(self):
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    @property
    def final(self):
        return self.points[-1]

    def values(self, field):
        """``field`` evaluated at every sample."""
        return np.array([field(x) for x in self.points])

    def columns(self):
        """CSV column names: ``t``, the momentum then the field coordinates."""
        n = self.spec.n
        name = "M" if self.points[0].representation == "magnetic" else "K"
        columns = ["t"] + [f"{name}[{i + 1},{j + 1}]" for i in range(n) for j in range(i + 1, n)]
        if self.spec.model == "so_so":
            columns += [f"G[{i + 1},{j + 1}]" for i in range(n) for j in range(i + 1, n)]
        elif self.spec.model == "e_n":
            columns += [f"G[{i + 1}]" for i in range(n)]
        return columns

    def table(self):
        return np.column_stack([self.times, np.array([x.to_vector() for x in self.points])])

    def to_csv(self, path):
        """Write the samples with 17 significant digits; labels such as ``M[1,2]`` are quoted."""
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(self.columns())
            writer.writerows(["%.17g" % value for value in row] for row in self.table())

    def visualise(self, show=True, filename="trajectory.png"):
        """
        Plot the momentum and field coordinates against time.

        Parameters
        ----------
        show: bool, optional
            If True the plot is shown, otherwise it is saved under ``filename`` (default is True).
        filename: string, optional
            File name for the saved plot (default is "trajectory.png").
        """
        table = self.table()
        columns = self.columns()
        size = self.spec.n * (self.spec.n - 1) // 2
        plot = plt.figure(figsize=(10, 5))
        plot.add_subplot(1, 2, 1)
        for index in range(1, size + 1):
            plt.plot(table[:, 0], table[:, index], label=columns[index])
        plt.xlabel("Time")
        plt.ylabel("Momentum")
        plt.title("Angular momentum in the body frame")
        if self.spec.model != "so":
            plot.add_subplot(1, 2, 2)
            for index in range(size + 1, table.shape[1]):
                plt.plot(table[:, 0], table[:, index], label=columns[index])
            plt.xlabel("Time")
            plt.ylabel("Field")
            plt.title("Gravity field in the body frame")
        plt.tight_layout()
        if show:
            plt.show()
        else:
            plt.savefig(filename)
        plt.close(plot)


def _rate(spec, x):
    return flatten(x.model, *vector_field(spec, x))


def _point(x, vector):
    return PhasePoint.from_vector(x.model, x.n, vector, x.representation)


def _rk4(spec, x, dt):
    v = x.to_vector()
    k1 = _rate(spec, x)
    k2 = _rate(spec, _point(x, v + 0.5 * dt * k1))
    k3 = _rate(spec, _point(x, v + 0.5 * dt * k2))
    k4 = _rate(spec, _point(x, v + dt * k3))
    return _point(x, v + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))


def _implicit_midpoint(spec, x, dt, tolerance=MIDPOINT_TOLERANCE, max_iterations=MIDPOINT_MAX_ITERATIONS):
    v = x.to_vector()
    new = v + dt * _rate(spec, x)
    scale = max(1.0, float(np.max(np.abs(v))))
    for iteration in range(1, max_iterations + 1):
        update = v + dt * _rate(spec, _point(x, 0.5 * (v + new)))
        increment = float(np.max(np.abs(update - new)))
        new = update
        if increment <= tolerance * scale:
            logger.debug("implicit midpoint converged in %s iterations", iteration)
            return _point(x, new)
    raise ConvergenceError(max_iterations)


def step(method, spec, x, dt):
    """
    One step of a fixed-step scheme on the closed-form vector field.

    Parameters
    ----------
    method: str
        ``"rk4"`` (classical four-stage Runge-Kutta) or ``"implicit_midpoint"``
        (``x' = x + dt f((x + x')/2)`` solved by fixed-point iteration to an
        increment of 1e-13, at most 50 iterations).
    spec: ModelSpec
        System to integrate.
    x: PhasePoint
        Current state.
    dt: float
        Step; a negative value steps backwards.

    Returns
    -------
    x_next: PhasePoint

    Raises
    ------
    ValueError
        For an unknown method or ``dt == 0``.
    ConvergenceError
        If the midpoint iteration does not converge.
    """
    if method not in METHODS:
        raise ValueError(f"Unknown integrator '{method}', expected one of {METHODS}.")
    if dt == 0:
        raise ValueError("The time step must not be zero.")
    if method == "rk4":
        return _rk4(spec, x, dt)
    return _implicit_midpoint(spec, x, dt)


def step_count(dt, T):
    """``ceil(T/dt)`` with a guard against round-off in the ratio."""
    return int(ceil(T / dt - 1e-9))


def simulate(method, spec, x0, dt, T):
    """
    Integrate from ``x0`` over ``[0, T]`` with ``ceil(T/dt)`` steps of size ``dt``.

    Raises
    ------
    ValueError
        If ``dt <= 0`` or ``T < dt``.
    ConvergenceError
        From a failing midpoint step, with its index.
    """
    if not dt > 0:
        raise ValueError(f"The time step must be positive, got {dt}.")
    if T < dt:
        raise ValueError(f"The final time {T} is shorter than one step {dt}.")
    steps = step_count(dt, T)
    points = [x0]
    x = x0
    for index in range(steps):
        try:
            x = step(method, spec, x, dt)
        except ConvergenceError as error:
            raise ConvergenceError(error.iterations, index) from error
        points.append(x)
    return Trajectory(spec, dt * np.arange(steps + 1), points, method)


def drift_report(trajectory, family, stride=1):
    """
    Largest relative change of every member of ``family`` along ``trajectory``.

    The relative drift is ``|f(x_t) - f(x_0)| / max(|f(x_0)|, 1e-8)``.

    Parameters
    ----------
    trajectory: Trajectory
    family: IntegralFamily
        Monitors on the phase space of the trajectory.
    stride: int, optional
        Only every ``stride``-th sample is evaluated (default is 1); the last one always is.

    Returns
    -------
    rows: list of DriftRow
        ``(label, initial, max_drift)`` in family order.

    Raises
    ------
    ValueError
        If the family lives on another phase space.
    """
    spec = trajectory.spec
    if (family.model, family.n) != (spec.model, spec.n):
        raise ValueError(f"Family on {family.model}/{family.n} does not match trajectory on {spec.model}/{spec.n}.")
    indices = list(range(0, len(trajectory), stride))
    if indices[-1] != len(trajectory) - 1:
        indices.append(len(trajectory) - 1)
    rows = []
    for field in family:
        values = np.array([field(trajectory.points[i]) for i in indices])
        initial = values[0]
        drift = float(np.max(np.abs(values - initial))) / max(abs(initial), DRIFT_FLOOR)
        rows.append(DriftRow(field.label, float(initial), drift))
    return rows


def write_drift_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["label", "initial", "max_drift"])
        for row in rows:
            writer.writerow([row.label, "%.17g" % row.initial, "%.17g" % row.max_drift])


def convergence_ratio(method, spec, x0, dt, T, family, floor=1e-13, stride=1):
    """
    Drift of every member at ``dt`` and ``dt/2`` and their ratio.

    A fourth-order scheme gives ratios near 16. Drifts below ``floor`` at
    the finer step are not resolved and carry no ratio.

    Returns
    -------
    rows: list of ConvergenceRow
    """
    coarse = drift_report(simulate(method, spec, x0, dt, T), family, stride)
    fine = drift_report(simulate(method, spec, x0, dt / 2, T), family, 2 * stride)
    rows = []
    for first, second in zip(coarse, fine):
        resolved = second.max_drift > floor
        ratio = first.max_drift / second.max_drift if resolved else None
        rows.append(ConvergenceRow(first.label, first.max_drift, second.max_drift, ratio, resolved))
    return rows


def self_convergence(method, spec, x0, dt, T):
    """
    Richardson ratio ``|x_dt - x_dt/2| / |x_dt/2 - x_dt/4|`` of the final states.

    Close to ``2^p`` for a scheme of order ``p``.
    """
    finals = [simulate(method, spec, x0, dt / 2 ** level, T).final.to_vector() for level in range(3)]
    return float(np.linalg.norm(finals[0] - finals[1]) / np.linalg.norm(finals[1] - finals[2]))
