"""Check runners behind the command line, one per command, and the certification suite."""
import logging
from concurrent.futures import ThreadPoolExecutor
import numpy as np

from .diagnostics import (asserted_pairs, casimir_residual, completeness_count, completeness_family, crosscheck_so3,
                          gyroscope_for, involution_matrix, jacobi_residual, poisson_map_check,
                          rank_survey, structure_relation_residual, vector_field_residual)
from .integrate import ConvergenceError, convergence_ratio, drift_report, self_convergence, simulate
from .lax import LAX_FAMILIES, lax_residual
from .models import generic_point
from .skew import inner, random_skew, vee3
from .zhukovskiy import max_residual, zh_state, zh_trace, zh_verify

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = {
    "lax": 1e-12,
    "lax_negative": 1e-4,
    "lax_negative_share": 0.9,
    "drift": 1e-6,
    "convergence_floor": 1e-10,
    "involution": 1e-9,
    "casimir": 1e-10,
    "structure": 1e-12,
    "jacobi": 1e-9,
    "vector_field": 1e-10,
    "rank_share": 0.95,
    "poisson_map": 1e-10,
    "poisson_map_wrong": 1e-3,
    "crosscheck": 1e-12,
    "zhukovskiy": 1e-10,
    "zhukovskiy_constancy": 1e-7,
    "homogeneity": 1e-12,
}

LAX_POINTS = 100
INVOLUTION_POINTS = 20
RANK_POINTS = 20
FIELD_POINTS = 5
CROSSCHECK_POINTS = 100
ZHUKOVSKIY_STATES = 1000
CONVERGENCE_DT = 0.02
CONVERGENCE_T = 1.0
DRIFT_STRIDE = 10
# order p of each scheme: Richardson ratios of halved steps should lie in 2^p * [0.75, 1.25]
ORDERS = {"rk4": 4, "implicit_midpoint": 2}


class CheckResult:
    """One row of a report.

    Attributes
    ----------
    name: str
    max_residual: float
        Measured value.
    tolerance: float, list or None
        Bound the value is compared with; ``None`` for rows that are only reported.
    passed: bool or None
        ``None`` for rows that are only reported.
    """
    def __init__(self, name, max_residual, tolerance=None, passed=None):
        self.name = name
        self.max_residual = float(max_residual)
        self.tolerance = tolerance
        self.passed = passed

    def __repr__(self):
        state = {True: "pass", False: "FAIL", None: "reported"}[self.passed]
        return "<CheckResult: %s %.3g (%s)>" % (self.name, self.max_residual, state)

    @property
    def gated(self):
        return self.passed is not None

    def to_dict(self):
        value = self.max_residual if np.isfinite(self.max_residual) else None
        return {"name": self.name, "max_residual": value, "tolerance": self.tolerance, "pass": self.passed}


def at_most(name, value, tolerance):
    return CheckResult(name, value, tolerance, bool(value <= tolerance))


def at_least(name, value, tolerance):
    return CheckResult(name, value, tolerance, bool(value >= tolerance))


def within(name, value, band):
    low, high = band
    return CheckResult(name, value, [low, high], bool(low <= value <= high))


def reported(name, value):
    return CheckResult(name, value)


def incomplete(name, error):
    """A failed row for a check that stopped before producing its values."""
    return CheckResult(f"{name} did not complete: {error}", float("inf"), None, False)


def merged_tolerances(*overrides):
    """Defaults updated by each override in turn."""
    tolerances = dict(DEFAULT_TOLERANCES)
    for override in overrides:
        for name, value in (override or {}).items():
            if name not in DEFAULT_TOLERANCES:
                raise KeyError(f"Unknown tolerance '{name}'.")
            tolerances[name] = float(value)
    return tolerances


def _points(spec, rng, count):
    return [generic_point(spec, rng) for _ in range(count)]


def _require_lax(spec):
    if spec.family not in LAX_FAMILIES:
        raise ValueError(f"Family {spec.family} has no Lax pair.")


def _broken_gyroscope(spec, rng, norm=0.1):
    """``spec`` with a component of the given norm added to L outside the symmetry subalgebra."""
    h = spec.subalgebra()
    X = random_skew(spec.n, rng)
    X = X - h.project(X)
    X = norm * X / np.sqrt(inner(X, X))
    return spec.replace(L=spec.L + X)


def run_lax(config, tolerances, rng, out=None):
    """Lax identity at random points and the broken-gyroscope control."""
    spec = config.spec
    _require_lax(spec)
    residual = max(lax_residual(spec, x) for x in _points(spec, rng, LAX_POINTS))
    results = [at_most("lax identity", residual, tolerances["lax"])]
    broken = _broken_gyroscope(spec, rng)
    points = _points(broken, rng, LAX_POINTS)
    detected = sum(1 for x in points if lax_residual(broken, x) >= tolerances["lax_negative"])
    results.append(at_least("lax negative control share", detected / len(points), tolerances["lax_negative_share"]))
    return results


def run_involution(config, tolerances, rng, out=None):
    """Brackets of the integrals: asserted pairs gated, the others reported."""
    spec = config.spec
    family = completeness_family(spec)
    matrix = involution_matrix(spec, family, _points(spec, rng, INVOLUTION_POINTS))
    mask = asserted_pairs(spec, family)
    results = [at_most("involution (asserted pairs)", float(np.max(matrix[mask], initial=0.0)),
                       tolerances["involution"])]
    labels = family.labels
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            if not mask[i, j]:
                results.append(reported(f"involution {labels[i]}~{labels[j]} (not asserted)", matrix[i, j]))
    return results


def run_casimirs(config, tolerances, rng, out=None):
    """Casimir property, coordinate structure relations, Jacobi identity and the Hamiltonian vector field."""
    spec = config.spec
    points = _points(spec, rng, FIELD_POINTS)
    L = gyroscope_for(spec, points[0])
    results = [
        at_most("casimir brackets", casimir_residual(spec, points, rng), tolerances["casimir"]),
        at_most("structure relations", max(structure_relation_residual(spec.model, x, L) for x in points),
                tolerances["structure"]),
        at_most("jacobi identity", jacobi_residual(L, spec.model, spec.n, rng, points), tolerances["jacobi"]),
        at_most("hamiltonian vector field", max(vector_field_residual(spec, x) for x in points),
                tolerances["vector_field"]),
    ]
    return results


def run_rank(config, tolerances, rng, out=None):
    """Independence rank of the complete family at random points."""
    spec = config.spec
    family = completeness_family(spec)
    expected = completeness_count(spec).expected_rank
    ranks = rank_survey(spec, _points(spec, rng, RANK_POINTS), family)
    share = sum(1 for rank in ranks if rank == expected) / len(ranks)
    return [
        at_least(f"rank share at expected rank {expected}", share, tolerances["rank_share"]),
        at_most("rank excess over expected", max(ranks) - expected, 0),
    ]


def run_poisson_map(config, tolerances, rng, out=None):
    """The momentum shift as a Poisson map, with the doubled-shift control."""
    spec = config.spec
    points = [generic_point(spec, rng, "magnetic") for _ in range(FIELD_POINTS)]
    results = [at_most("poisson map", poisson_map_check(spec.L, spec.model, points, rng), tolerances["poisson_map"])]
    wrong = poisson_map_check(spec.L, spec.model, points, rng, shift=2.0)
    if np.any(spec.L):
        results.append(at_least("poisson map wrong shift control", wrong, tolerances["poisson_map_wrong"]))
    else:
        results.append(reported("poisson map wrong shift control (L = 0)", wrong))
    return results


def run_crosscheck(config, tolerances, rng, out=None):
    """Matrix equations against the cross-product equations at n=3."""
    spec = config.spec
    residual = max(crosscheck_so3(spec, x) for x in _points(spec, rng, CROSSCHECK_POINTS))
    return [at_most("so(3) crosscheck", residual, tolerances["crosscheck"])]


def run_conservation(config, tolerances, rng, out=None):
    """
    Drift of the integrals along the configured run, and the order of the scheme.

    The order is gated on the Richardson ratio of the final states over
    ``CONVERGENCE_T``; halved-step ratios of the integral drifts are reported.
    """
    spec = config.spec
    x0 = config.initial_point(rng)
    monitors = completeness_family(spec)
    trajectory = simulate(config.integrator, spec, x0, config.dt, config.T)
    results = [at_most(f"drift {row.label}", row.max_drift, tolerances["drift"])
               for row in drift_report(trajectory, monitors, DRIFT_STRIDE)]
    order = ORDERS[config.integrator]
    band = (0.75 * 2 ** order, 1.25 * 2 ** order)
    dt = config.convergence_dt or CONVERGENCE_DT
    ratio = self_convergence(config.integrator, spec, x0, dt, max(CONVERGENCE_T, dt))
    results.append(within(f"self-convergence order {order}", ratio, band))
    rows = convergence_ratio(config.integrator, spec, x0, dt, config.T, monitors, tolerances["convergence_floor"])
    for row in rows:
        if row.resolved:
            results.append(reported(f"convergence {row.label}", row.ratio))
        else:
            results.append(reported(f"convergence {row.label} (unresolved)", row.drift_half))
    return results


def _random_states(spec, rng, count):
    L_vec = vee3(spec.L)
    for _ in range(count):
        yield L_vec, rng.uniform(-1, 1, 3)


def run_zhukovskiy(config, tolerances, rng, out=None):
    """
    Identities of the Zhukovskiy construction.

    Random states, the homogeneity of theta and theta', and the constancy of
    ``h``, ``k`` and ``|L_pt - N|`` along the configured run. The trace is
    written to ``out/zhukovskiy.csv`` when ``out`` is given.
    """
    spec = config.spec
    if spec.family != "classical3_euler":
        raise ValueError(f"The Zhukovskiy trace needs a classical3_euler spec, got {spec.family}.")
    m = config.m_transformed
    worst = 0.0
    homogeneity = 0.0
    for L_vec, Omega in _random_states(spec, rng, ZHUKOVSKIY_STATES):
        geometry = zh_state(spec.inertia, L_vec, m, Omega)
        if not geometry.degenerate:
            worst = max(worst, max_residual(zh_verify(geometry, geometry.K, Omega)))
        c = rng.uniform(0.5, 2.0)
        scaled = zh_state(spec.inertia, c * L_vec, m, c * Omega)
        for name in ("theta", "theta_prime"):
            value = getattr(geometry, name)
            homogeneity = max(homogeneity, abs(getattr(scaled, name) - c * value) / max(c * value, 1e-300))
    results = [
        at_most("zhukovskiy identities (random states)", worst, tolerances["zhukovskiy"]),
        at_most("zhukovskiy homogeneity", homogeneity, tolerances["homogeneity"]),
    ]
    trajectory = simulate(config.integrator, spec, config.initial_point(rng), config.dt, config.T)
    trace = zh_trace(trajectory, m)
    along = max((max_residual(zh_verify(g, g.K, g.Omega)) for g in trace.geometries if not g.degenerate),
                default=0.0)
    results.append(at_most("zhukovskiy identities (trajectory)", along, tolerances["zhukovskiy"]))
    for name, drift in trace.constancy().items():
        results.append(at_most(f"zhukovskiy constancy {name}", drift, tolerances["zhukovskiy_constancy"]))
    results.append(reported("zhukovskiy degenerate share", trace.degenerate_count / len(trace)))
    if out is not None:
        trace.to_csv(out / "zhukovskiy.csv")
    return results


COMMANDS = {
    "check-lax": run_lax,
    "check-involution": run_involution,
    "check-casimirs": run_casimirs,
    "check-rank": run_rank,
    "check-poisson-map": run_poisson_map,
    "crosscheck-so3": run_crosscheck,
    "zhukovskiy-trace": run_zhukovskiy,
}

# fixed positions give every check its own random stream
SUITE = ("check-lax", "check-involution", "check-casimirs", "check-rank", "check-poisson-map", "crosscheck-so3",
         "conservation", "zhukovskiy-trace")
RUNNERS = dict(COMMANDS, conservation=run_conservation)


def applicable(spec):
    """The suite entries that apply to ``spec``."""
    names = []
    for name in SUITE:
        if name == "check-lax" and spec.family not in LAX_FAMILIES:
            continue
        if name == "crosscheck-so3" and spec.n != 3:
            continue
        if name == "zhukovskiy-trace" and spec.family != "classical3_euler":
            continue
        names.append(name)
    return names


def check_rng(seed, name):
    return np.random.default_rng([seed, SUITE.index(name)])


def run_check(name, config, tolerances, out=None):
    """Run one suite entry with its own generator; a check that stops early gives one failed row."""
    logger.info("running %s on %s n=%s", name, config.spec.family, config.spec.n)
    try:
        results = RUNNERS[name](config, tolerances, check_rng(config.seed, name), out)
    except (ConvergenceError, ValueError) as error:
        logger.error("%s did not complete: %s", name, error)
        results = [incomplete(name, error)]
    failed = [result.name for result in results if result.passed is False]
    logger.info("finished %s: %s", name, "failed " + ", ".join(failed) if failed else "pass")
    return results


def certify_all(config, tolerances, out=None, workers=4):
    """
    Every applicable check for the model of ``config``.

    Checks run on a thread pool; results come back in suite order, so the
    report does not depend on scheduling.

    Returns
    -------
    results: list of CheckResult
    """
    names = applicable(config.spec)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        batches = pool.map(lambda name: run_check(name, config, tolerances, out), names)
        return [result for batch in batches for result in batch]
