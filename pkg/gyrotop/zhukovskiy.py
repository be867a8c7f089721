"""Zhukovskiy's geometric picture of the Euler gyrostat in the body frame."""
import csv
import logging
import matplotlib.pyplot as plt
import numpy as np

from .skew import vee3

logger = logging.getLogger(__name__)

DEGENERATE_CONE = "degenerate cone"
NO_K_POINT = "no K_pt"
PARALLEL_TOLERANCE = 1e-12
DEGENERATE_SHARE = 0.01

RESIDUALS = ("ellipsoid", "tangent_plane", "q_radius", "a", "b", "c", "d", "e_theta", "e_theta_prime", "f", "g")
_SKIPPED_BY = {
    DEGENERATE_CONE: ("c", "d", "f"),
    NO_K_POINT: ("c", "d", "g"),
}


def _unit_cross(u, v):
    # |u x v| / (|u| |v|), the sine of the angle between u and v
    return float(np.linalg.norm(np.cross(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v)))


class ZhGeometry:
    """The construction at one instant.

    Attributes
    ----------
    h: float
        Kinetic energy ``<I Omega, Omega>/2`` of the transformed body.
    k: float
        Length of the total angular momentum ``K = I Omega + L``.
    m: float
        Mass of the transformed body, only rescales the ellipsoid.
    N: numpy.ndarray
        Point where the ray of ``M = I Omega`` meets the ellipsoid ``<X, I^-1 X> = 1/m``.
    S: numpy.ndarray
        Foot of the perpendicular from O to the tangent plane at N.
    L_pt: numpy.ndarray
        Point on the gyroscope axis with ``LO`` along ``L`` and ``|OL| = |L|/sqrt(2mh)``.
    K_pt: numpy.ndarray or None
        Intersection of the line ``span(K)`` with the tangent plane.
    F: numpy.ndarray or None
        Point of the line ``K_pt S`` orthogonal to ``K``.
    p, q, r: float
        ``|OS|``, ``|I Omega|`` and ``|ON|``.
    alpha: float
        Angle between ``OS`` and ``OK_pt`` in radians.
    theta, theta_prime: float
        Sliding and rotating angular speeds ``sqrt(2h/m)/|OK_pt|`` and ``sqrt(2h/m)/|OF|``.
    D: numpy.ndarray
        Normal direction ``(2h + <L, Omega>) K - k^2 Omega`` of the cone of fixed direction.
    flags: frozenset of str
        ``"degenerate cone"`` when ``K`` is parallel to ``Omega``, ``"no K_pt"``
        when ``K`` is parallel to the tangent plane.
    """
    def __init__(self, inertia, L_vec, m, Omega):
        self.inertia = np.asarray(inertia, dtype=float)
        self.L_vec = np.asarray(L_vec, dtype=float)
        self.m = float(m)
        self.Omega = np.asarray(Omega, dtype=float)
        M = self.inertia * self.Omega
        self.K = M + self.L_vec
        self.h = 0.5 * float(M @ self.Omega)
        self.k = float(np.linalg.norm(self.K))
        scale = np.sqrt(2 * self.m * self.h)
        self.N = M / scale
        self.q = float(np.linalg.norm(M))
        self.r = float(np.linalg.norm(self.N))
        g = self.N / self.inertia
        self.S = g / (self.m * float(g @ g))
        self.p = float(np.linalg.norm(self.S))
        self.L_pt = -self.L_vec / scale
        self.D = (2 * self.h + float(self.L_vec @ self.Omega)) * self.K - self.k ** 2 * self.Omega
        self.speed = np.sqrt(2 * self.h / self.m)
        flags = set()
        if self.k == 0 or _unit_cross(self.K, self.Omega) <= PARALLEL_TOLERANCE:
            flags.add(DEGENERATE_CONE)
        reach = float(g @ self.K)
        if self.k == 0 or abs(reach) <= PARALLEL_TOLERANCE * np.linalg.norm(g) * self.k:
            flags.add(NO_K_POINT)
        self.flags = frozenset(flags)
        self._place_points(g, reach)

    def _place_points(self, g, reach):
        if NO_K_POINT in self.flags:
            # K_pt at infinity: theta vanishes and F is S itself
            self.K_pt = None
            self.alpha = np.pi / 2
            self.theta = 0.0
            self.F = self.S.copy()
            self.theta_prime = self.speed / self.p
            return
        self.K_pt = self.K / (self.m * reach)
        cosine = float(self.S @ self.K_pt) / (self.p * np.linalg.norm(self.K_pt))
        self.alpha = float(np.arccos(np.clip(cosine, -1.0, 1.0)))
        self.theta = self.speed / float(np.linalg.norm(self.K_pt))
        if DEGENERATE_CONE in self.flags:
            # F at infinity
            self.alpha = 0.0
            self.F = None
            self.theta_prime = 0.0
            return
        s = float(self.K @ self.K_pt) / float(self.K @ (self.K_pt - self.S))
        self.F = self.K_pt + s * (self.S - self.K_pt)
        self.theta_prime = self.speed / float(np.linalg.norm(self.F))

    @property
    def degenerate(self):
        return bool(self.flags)

    def __repr__(self):
        flags = ", ".join(sorted(self.flags)) or "generic"
        return "<ZhGeometry: h=%.6g k=%.6g theta=%.6g theta'=%.6g (%s)>" % (
            self.h, self.k, self.theta, self.theta_prime, flags)


def zh_state(inertia, L_vec, m, Omega):
    """
    Build the construction for the Euler gyrostat with moments ``inertia``.

    Parameters
    ----------
    inertia: array_like
        Principal moments ``(A, B, C)``, all positive.
    L_vec: array_like
        Gyroscope momentum in the principal frame.
    m: float
        Mass of the transformed body, positive.
    Omega: array_like
        Angular velocity, non-zero.

    Returns
    -------
    geometry: ZhGeometry

    Raises
    ------
    ValueError
        If a moment or the mass is not positive, or Omega vanishes.

    Examples
    --------
    >>> geometry = zh_state([1, 1, 1], [0, 0, 0], 1.0, [0, 0, 2])
    >>> geometry.N.tolist(), geometry.p
    ([0.0, 0.0, 1.0], 1.0)
    >>> sorted(geometry.flags)
    ['degenerate cone']
    """
    inertia = np.asarray(inertia, dtype=float)
    if inertia.shape != (3,) or np.any(inertia <= 0):
        raise ValueError(f"The principal moments must be three positive numbers, got {inertia.tolist()}.")
    if not m > 0:
        raise ValueError(f"The mass of the transformed body must be positive, got {m}.")
    Omega = np.asarray(Omega, dtype=float)
    if Omega.shape != (3,) or not np.any(Omega):
        raise ValueError("The angular velocity must be a non-zero 3-vector.")
    L_vec = np.asarray(L_vec, dtype=float)
    if L_vec.shape != (3,):
        raise ValueError(f"The gyroscope momentum must be a 3-vector, got shape {L_vec.shape}.")
    return ZhGeometry(inertia, L_vec, m, Omega)


def zh_verify(geometry, K, Omega):
    """
    Residuals of the identities of the construction.

    Parameters
    ----------
    geometry: ZhGeometry
        Built by :func:`zh_state` from ``Omega``.
    K, Omega: array_like
        Total angular momentum and angular velocity the geometry was built from.

    Returns
    -------
    residuals: dict
        ``None`` marks a residual skipped for a degenerate configuration.

        * ``ellipsoid``: ``<N, I^-1 N> - 1/m``
        * ``tangent_plane``: ``<N/I, S> - 1/m``
        * ``q_radius``: ``q - r sqrt(2mh)``
        * ``a``: ``p |Omega| - sqrt(2h/m)``
        * ``b``: ``|L_pt - N| sqrt(2mh) - k``
        * ``c``: cosine of the angle ``F O K_pt``
        * ``d``: sine of the angle between ``F - K_pt`` and ``S - K_pt``
        * ``e_theta``, ``e_theta_prime``: ``theta - |Omega| cos alpha``, ``theta' - |Omega| sin alpha``
        * ``f``: sine of the angle between ``OF`` and ``D``
        * ``g``: ``sqrt(2h/m) cos(alpha)/p - theta``
    """
    K = np.asarray(K, dtype=float)
    Omega = np.asarray(Omega, dtype=float)
    geo = geometry
    scale = np.sqrt(2 * geo.m * geo.h)
    norm = float(np.linalg.norm(Omega))
    residuals = {
        "ellipsoid": float(geo.N @ (geo.N / geo.inertia)) - 1.0 / geo.m,
        "tangent_plane": float((geo.N / geo.inertia) @ geo.S) - 1.0 / geo.m,
        "q_radius": geo.q - geo.r * scale,
        "a": geo.p * norm - geo.speed,
        "b": float(np.linalg.norm(geo.L_pt - geo.N)) * scale - float(np.linalg.norm(K)),
        "e_theta": geo.theta - norm * np.cos(geo.alpha),
        "e_theta_prime": geo.theta_prime - norm * np.sin(geo.alpha),
    }
    skipped = set()
    for flag in geo.flags:
        skipped.update(_SKIPPED_BY[flag])
    if "c" not in skipped:
        residuals["c"] = float(geo.F @ geo.K_pt) / float(np.linalg.norm(geo.F) * np.linalg.norm(geo.K_pt))
    if "d" not in skipped:
        residuals["d"] = _unit_cross(geo.F - geo.K_pt, geo.S - geo.K_pt)
    if "f" not in skipped:
        residuals["f"] = _unit_cross(geo.F, geo.D)
    if "g" not in skipped:
        residuals["g"] = geo.speed * np.cos(geo.alpha) / geo.p - geo.theta
    return {name: residuals.get(name) for name in RESIDUALS}


def max_residual(residuals):
    """Largest absolute residual, skipped entries ignored."""
    return max((abs(value) for value in residuals.values() if value is not None), default=0.0)


class ZhTrace:
    """The construction sampled along a trajectory.

    Attributes
    ----------
    times: numpy.ndarray
    geometries: list of ZhGeometry
    """
    def __init__(self, times, geometries):
        self.times = np.asarray(times, dtype=float)
        self.geometries = list(geometries)

    def __len__(self):
        return len(self.geometries)

    def __repr__(self):
        return "<ZhTrace: %s samples, %s degenerate>" % (len(self), self.degenerate_count)

    @property
    def degenerate_count(self):
        return sum(1 for geometry in self.geometries if geometry.degenerate)

    def series(self, name):
        """A scalar attribute of every sample, e.g. ``"theta"``."""
        return np.array([getattr(geometry, name) for geometry in self.geometries], dtype=float)

    def sphere_radius(self):
        """``|L_pt - N|`` at every sample."""
        return np.array([np.linalg.norm(g.L_pt - g.N) for g in self.geometries])

    def constancy(self):
        """
        Relative drift of the quantities that are constant along the motion.

        Returns
        -------
        drifts: dict
            ``h``, ``k`` and ``sphere`` (``|L_pt - N|``) mapped to
            ``max|v - v0| / max(|v0|, 1e-8)``.
        """
        drifts = {}
        for name, values in (("h", self.series("h")), ("k", self.series("k")), ("sphere", self.sphere_radius())):
            drifts[name] = float(np.max(np.abs(values - values[0]))) / max(abs(values[0]), 1e-8)
        return drifts

    def columns(self):
        columns = ["t", "h", "k"]
        for name in ("N", "S"):
            columns += [f"{name}{i}" for i in (1, 2, 3)]
        columns.append("p")
        for name in ("K_pt", "F"):
            columns += [f"{name}{i}" for i in (1, 2, 3)]
        return columns + ["alpha", "theta", "theta_prime", "flags"]

    def rows(self):
        for t, g in zip(self.times, self.geometries):
            K_pt = g.K_pt if g.K_pt is not None else np.full(3, np.nan)
            F = g.F if g.F is not None else np.full(3, np.nan)
            numbers = [t, g.h, g.k, *g.N, *g.S, g.p, *K_pt, *F, g.alpha, g.theta, g.theta_prime]
            yield [float(value) for value in numbers], ";".join(sorted(g.flags))

    def to_csv(self, path):
        """Write one row per sample; missing points are ``nan``, flags are ``;``-separated."""
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(self.columns())
            for numbers, flags in self.rows():
                writer.writerow(["%.17g" % value for value in numbers] + [flags])

    def visualise(self, show=True, filename="zhukovskiy.png"):
        """
        Plot the sliding and rotating speeds and the angle alpha against time.

        Parameters
        ----------
        show: bool, optional
            If True the plot is shown, otherwise it is saved under ``filename`` (default is True).
        filename: string, optional
            File name for the saved plot (default is "zhukovskiy.png").
        """
        plot = plt.figure(figsize=(10, 5))
        plot.add_subplot(1, 2, 1)
        plt.plot(self.times, self.series("theta"), label="theta (sliding)")
        plt.plot(self.times, self.series("theta_prime"), label="theta' (rotating)")
        plt.xlabel("Time")
        plt.ylabel("Angular speed")
        plt.legend()
        plot.add_subplot(1, 2, 2)
        plt.plot(self.times, self.series("alpha"))
        plt.xlabel("Time")
        plt.ylabel("alpha (rad)")
        plt.title("Angle between OS and OK")
        plt.tight_layout()
        if show:
            plt.show()
        else:
            plt.savefig(filename)
        plt.close(plot)


def zh_trace(trajectory, m=1.0):
    """
    The construction at every sample of an Euler gyrostat trajectory.

    Parameters
    ----------
    trajectory: Trajectory
        Solution of a ``classical3_euler`` spec.
    m: float, optional
        Mass of the transformed body (default is 1).

    Returns
    -------
    trace: ZhTrace

    Raises
    ------
    ValueError
        If the trajectory is not of an Euler gyrostat.
    """
    spec = trajectory.spec
    if spec.family != "classical3_euler":
        raise ValueError(f"The Zhukovskiy construction needs a classical3_euler trajectory, got {spec.family}.")
    L_vec = vee3(spec.L)
    geometries = []
    for x in trajectory.points:
        M = vee3(x.to_magnetic(spec.L).momentum)
        geometries.append(zh_state(spec.inertia, L_vec, m, M / spec.inertia))
    trace = ZhTrace(trajectory.times, geometries)
    if trace.degenerate_count > DEGENERATE_SHARE * len(trace):
        logger.warning("%s of %s Zhukovskiy samples are degenerate", trace.degenerate_count, len(trace))
    return trace
