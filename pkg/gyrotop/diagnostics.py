"""Numerical certificates for the integrability statements of the families."""
import logging
from collections import namedtuple
from itertools import combinations
import numpy as np

from .lax import shift_integrals, spectral_invariants
from .models import (angular_velocity, cross_product_field, fourth_integral, hamiltonian_field, generic_point,
                     vector_field)
from .poisson import (IntegralFamily, PhasePoint, bracket, bracket_field, bracket_from_gradients, casimirs,
                      coordinate_field, dimension, flatten, hamiltonian_vector_field, linear_field,
                      random_quadratic_field)
from .skew import as_skew, commutator, random_skew, vee3, wedge

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-8

CompletenessCount = namedtuple("CompletenessCount", ["leaf_dim", "dof", "expected_rank"])


def gyroscope_for(spec, x):
    """The shift of the bracket matching the representation of ``x``."""
    return spec.L if x.representation == "magnetic" else None


def casimir_family(spec):
    return casimirs(spec.model, spec.n, spec.representation, spec.L)


def _commutative(spec):
    try:
        return spec.subalgebra().is_commutative()
    except ValueError:
        return False


def integral_family(spec):
    """
    Every first integral the package knows for ``spec``.

    Casimirs, the Hamiltonian, then the spectral, shift and Noether
    functions for Lax families or the fourth integral for classical tops.
    """
    family = casimir_family(spec) + IntegralFamily(spec.model, spec.n, [hamiltonian_field(spec)])
    if spec.classical:
        return family + IntegralFamily(spec.model, spec.n, [fourth_integral(spec)])
    return family + spectral_invariants(spec) + shift_integrals(spec)


def completeness_family(spec):
    """
    The commuting family used for rank counts.

    Casimirs, Hamiltonian, spectral and shift integrals, plus the Noether
    functions when the symmetry subalgebra is commutative.
    """
    family = integral_family(spec)
    if _commutative(spec):
        return family
    return family.of_kind("casimir", "hamiltonian", "spectral", "shift", "integral")


def asserted_pairs(spec, family):
    """
    Mask of the bracket pairs the integrability theorems assert to vanish.

    Casimirs commute with everything. The Hamiltonian commutes with the
    Casimir, spectral, shift and classical integrals. Spectral functions
    commute among themselves and with the shift and Noether functions;
    shift functions commute among themselves. Noether functions commute
    among themselves and with the Hamiltonian only for a commutative
    symmetry subalgebra.

    Returns
    -------
    mask: numpy.ndarray of bool
        Symmetric, ``True`` on the diagonal.
    """
    commutative = _commutative(spec)
    allowed = {
        ("hamiltonian", "hamiltonian"), ("hamiltonian", "spectral"), ("hamiltonian", "shift"),
        ("hamiltonian", "integral"), ("spectral", "spectral"), ("spectral", "noether"), ("shift", "shift"),
        ("shift", "spectral"), ("integral", "integral"),
    }
    if commutative:
        allowed |= {("noether", "noether"), ("hamiltonian", "noether")}
    kinds = family.kinds
    size = len(kinds)
    mask = np.eye(size, dtype=bool)
    for i, j in combinations(range(size), 2):
        first, second = kinds[i], kinds[j]
        asserted = ("casimir" in (first, second) or (first, second) in allowed or (second, first) in allowed)
        mask[i, j] = mask[j, i] = asserted
    return mask


def _check_points(family, points):
    for x in points:
        family.check_point(x)


def involution_matrix(spec, family, points):
    """
    Largest absolute bracket of every pair of members over ``points``.

    Parameters
    ----------
    spec: ModelSpec
        Gives the gyroscope of the magnetic bracket.
    family: IntegralFamily
        Members on the phase space of ``spec``.
    points: list of PhasePoint
        Evaluation points; at least 10 are advisable.

    Returns
    -------
    matrix: numpy.ndarray
        Symmetric, nonnegative, zero diagonal.

    Raises
    ------
    ValueError
        If a point lives on another phase space.
    """
    _check_points(family, points)
    size = len(family)
    matrix = np.zeros((size, size))
    for x in points:
        L = gyroscope_for(spec, x)
        gradients = [field.gradient(x) for field in family]
        for i, j in combinations(range(size), 2):
            value = abs(bracket_from_gradients(x, gradients[i], gradients[j], L))
            if value > matrix[i, j]:
                matrix[i, j] = matrix[j, i] = value
    return matrix


def independence_rank(family, x, rel_tol=RANK_TOLERANCE):
    """
    Numerical rank of the gradients of ``family`` at ``x``.

    Rows are normalised before the singular value decomposition; singular
    values above ``rel_tol`` times the largest count.

    Examples
    --------
    >>> from gyrotop.poisson import casimirs, random_point
    >>> q1 = casimirs("e_n", 3)[0]
    >>> family = IntegralFamily("e_n", 3, [q1, q1 * q1])
    >>> independence_rank(family, random_point("e_n", 3, np.random.default_rng(1)))
    1
    """
    gradients = family.gradient_matrix(x)
    norms = np.linalg.norm(gradients, axis=1)
    gradients = gradients[norms > 0] / norms[norms > 0, None]
    if gradients.size == 0:
        return 0
    sigma = np.linalg.svd(gradients, compute_uv=False)
    return int(np.sum(sigma > rel_tol * sigma[0]))


def casimir_count(model, n):
    if model == "so_so":
        return 2 * (n // 2)
    if model == "e_n":
        return (n + 1) // 2
    return n // 2


def completeness_count(spec):
    """
    Leaf dimension, degrees of freedom and expected rank of a complete family.

    The generic leaf has dimension ``dim g - #Casimirs``: ``n(n-1) - 2[n/2]``
    on so(n) x so(n), ``n(n+1)/2 - [(n+1)/2]`` on e(n), ``n(n-1)/2 - [n/2]``
    on so(n).

    Examples
    --------
    >>> from gyrotop.models import example_spec
    >>> completeness_count(example_spec("bitop"))
    CompletenessCount(leaf_dim=8, dof=4, expected_rank=8)
    """
    count = casimir_count(spec.model, spec.n)
    leaf_dim = dimension(spec.model, spec.n) - count
    dof = leaf_dim // 2
    return CompletenessCount(leaf_dim, dof, dof + count)


def rank_survey(spec, points, family=None, rel_tol=RANK_TOLERANCE):
    """Rank of the completeness family at every point; drops below the expected rank are logged."""
    family = family or completeness_family(spec)
    expected = completeness_count(spec).expected_rank
    ranks = []
    for index, x in enumerate(points):
        rank = independence_rank(family, x, rel_tol)
        if rank < expected:
            logger.warning("%s: rank %s below %s at sample point %s", spec.family, rank, expected, index)
        ranks.append(rank)
    return ranks


def poisson_map_check(L_gyro, model, points, rng, pairs=50, shift=1.0):
    """
    Defect of the momentum shift ``M -> K = M + shift*L`` as a Poisson map.

    For random quadratic polynomials ``F, G`` compares
    ``{F o phi, G o phi}_L(x)`` with ``{F, G}_0(phi(x))``. With ``shift = 1``
    the defect vanishes.

    Returns
    -------
    residual: float
        Largest absolute defect over all pairs and points.
    """
    residual = 0.0
    for x in points:
        if x.model != model:
            raise ValueError(f"Point on {x.model} does not match model {model}.")
    n = points[0].n
    L = np.zeros((n, n)) if L_gyro is None else np.asarray(L_gyro, dtype=float)
    for _ in range(pairs):
        F = random_quadratic_field(model, n, rng, "F")
        G = random_quadratic_field(model, n, rng, "G")
        F_shifted = F.shifted(L, shift)
        G_shifted = G.shifted(L, shift)
        for x in points:
            moved = PhasePoint(x.model, x.momentum + shift * L, x.field, "standard")
            magnetic = bracket(L, F_shifted, G_shifted, x)
            standard = bracket(None, F, G, moved)
            residual = max(residual, abs(magnetic - standard))
    return residual


def _expected_momentum_bracket(K, a, b, c, d):
    # {K_ab, K_cd} = -(d_bc K_ad - d_ac K_bd - d_bd K_ac + d_ad K_bc)
    delta = np.eye(K.shape[0])
    return -(delta[b, c] * K[a, d] - delta[a, c] * K[b, d] - delta[b, d] * K[a, c] + delta[a, d] * K[b, c])


def structure_relation_residual(model, x, L_gyro=None):
    """
    Largest gap between the gradient bracket and the coordinate structure relations at ``x``.

    Sweeps every pair of coordinates: ``{M_ab, M_cd}`` against the so(n)
    relations shifted by ``L``, ``{M_ab, G_cd}`` against the same relations
    on Gamma (so(n) x so(n)), ``{M_ab, G_k} = -G_a d_bk + G_b d_ak`` (e(n))
    and ``{G, G} = 0``.
    """
    n = x.n
    L = np.zeros((n, n)) if L_gyro is None else np.asarray(L_gyro, dtype=float)
    K = x.momentum + L
    pairs = list(combinations(range(n), 2))
    momentum = {pair: coordinate_field(model, n, "momentum", *pair) for pair in pairs}
    residual = 0.0
    for (a, b) in pairs:
        for (c, d) in pairs:
            value = bracket(L, momentum[a, b], momentum[c, d], x)
            residual = max(residual, abs(value - _expected_momentum_bracket(K, a, b, c, d)))
    if model == "so_so":
        field = {pair: coordinate_field(model, n, "field", *pair) for pair in pairs}
        for (a, b) in pairs:
            for (c, d) in pairs:
                value = bracket(L, momentum[a, b], field[c, d], x)
                expected = _expected_momentum_bracket(x.field, a, b, c, d)
                residual = max(residual, abs(value - expected), abs(bracket(L, field[a, b], field[c, d], x)))
    elif model == "e_n":
        field = [coordinate_field(model, n, "field", k) for k in range(n)]
        delta = np.eye(n)
        for (a, b) in pairs:
            for k in range(n):
                value = bracket(L, momentum[a, b], field[k], x)
                expected = -x.field[a] * delta[b, k] + x.field[b] * delta[a, k]
                residual = max(residual, abs(value - expected))
        for k, l in combinations(range(n), 2):
            residual = max(residual, abs(bracket(L, field[k], field[l], x)))
    return residual


def jacobi_residual(L_gyro, model, n, rng, points, triples=20):
    """Largest Jacobi defect ``{F,{G,H}} + {G,{H,F}} + {H,{F,G}}`` for random affine triples."""
    residual = 0.0

    def random_linear():
        b = None
        if model == "so_so":
            b = random_skew(n, rng)
        elif model == "e_n":
            b = rng.uniform(-1, 1, n)
        return linear_field(model, random_skew(n, rng), b, rng.uniform(-1, 1))

    for _ in range(triples):
        F, G, H = random_linear(), random_linear(), random_linear()
        cyclic = (bracket_field(L_gyro, F, bracket_field(L_gyro, G, H))
                  + bracket_field(L_gyro, G, bracket_field(L_gyro, H, F))
                  + bracket_field(L_gyro, H, bracket_field(L_gyro, F, G)))
        for x in points:
            residual = max(residual, abs(cyclic(x)))
    return residual


def casimir_residual(spec, points, rng, functions=50):
    """Largest ``|{C, F}|`` over the Casimirs of ``spec``, random quadratic ``F`` and ``points``."""
    family = casimir_family(spec)
    residual = 0.0
    for _ in range(functions):
        F = random_quadratic_field(spec.model, spec.n, rng)
        for x in points:
            L = gyroscope_for(spec, x)
            gradient = F.gradient(x)
            for C in family:
                residual = max(residual, abs(bracket_from_gradients(x, C.gradient(x), gradient, L)))
    return residual


def vector_field_residual(spec, x):
    """
    Relative gap between the closed-form field and the field generated by the Hamiltonian.

    The Hamiltonian is taken in the representation of ``x`` with the
    matching bracket.
    """
    closed = flatten(x.model, *vector_field(spec, x))
    H = hamiltonian_field(spec, x.representation)
    generated = flatten(x.model, *hamiltonian_vector_field(gyroscope_for(spec, x), H, x))
    return float(np.max(np.abs(closed - generated))) / max(1.0, float(np.max(np.abs(closed))))


def conservation_residual(spec, family, x):
    """Largest ``|dF/dt|`` along the closed-form field over the members of ``family``."""
    tangent = vector_field(spec, x)
    return max((abs(_directional(field, x, tangent)) for field in family), default=0.0)


def _directional(field, x, tangent):
    return float(flatten(x.model, *field.gradient(x)) @ flatten(x.model, *tangent))


def crosscheck_so3(spec, x):
    """
    Compare the matrix equations at n=3 with the cross-product Euler-Poisson equations.

    Matrix families on so(3) x so(3) and so(3) are read through ``vee3``;
    classical tops compare the e(3) matrix form ``M' = [M+L, Omega] + chi ^ Gamma``,
    ``Gamma' = -Omega Gamma`` with the cross-product form.

    Returns
    -------
    residual: float
        Largest component difference.

    Raises
    ------
    ValueError
        If ``spec`` is not three-dimensional.
    """
    if spec.n != 3:
        raise ValueError(f"The so(3) crosscheck needs n=3, got n={spec.n}.")
    x = x.to_magnetic(spec.L)
    m = vee3(x.momentum)
    l = vee3(spec.L)
    if spec.classical:
        # vector_field of a classical top is the cross-product form, so the matrix side is built here
        Omega = angular_velocity(spec, x.momentum)
        momentum_rate = commutator(x.momentum + spec.L, Omega) + wedge(spec.chi, x.field)
        field_rate = -Omega @ x.field
    else:
        momentum_rate, field_rate = vector_field(spec, x)
    if spec.model == "e_n":
        gamma, chi = np.asarray(x.field), spec.chi
        matrix_rates = (vee3(as_skew(momentum_rate)), field_rate)
    elif spec.model == "so":
        gamma, chi = np.zeros(3), np.zeros(3)
        matrix_rates = (vee3(as_skew(momentum_rate)), np.zeros(3))
    else:
        gamma, chi = vee3(x.field), vee3(spec.chi)
        matrix_rates = (vee3(as_skew(momentum_rate)), vee3(as_skew(field_rate)))
    vector_rates = cross_product_field(spec.inertia, l, chi, m, gamma)
    return max(float(np.max(np.abs(a - b))) for a, b in zip(matrix_rates, vector_rates))
