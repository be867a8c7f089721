"""Polynomial Lax pairs of the integrable families and the first integrals they carry."""
import logging
import numpy as np

from .models import angular_velocity, vector_field
from .poisson import IntegralFamily, ScalarField, linear_field, zero_tangent
from .skew import as_skew, commutator, freeze

logger = logging.getLogger(__name__)

LAX_FAMILIES = ("lagrange_so_so", "bitop", "totally_symmetric", "belyaev_e_n", "manakov_gyro")


class LaxPolynomial:
    """A polynomial ``C0 + lambda C1 + ... + lambda^d Cd`` with square matrix coefficients.

    Products are exact coefficient convolutions.

    Attributes
    ----------
    coefficients: list of numpy.ndarray
        ``C0 .. Cd``, all of the same ambient size.
    """
    def __init__(self, coefficients):
        """
        Examples
        --------
        >>> LaxPolynomial([np.eye(2), np.zeros((2, 2)), np.eye(2)])
        <LaxPolynomial: degree 2 over 2x2>
        """
        coefficients = [np.asarray(c, dtype=float) for c in coefficients]
        if not coefficients:
            raise ValueError("A Lax polynomial needs at least one coefficient.")
        shape = coefficients[0].shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ValueError(f"Coefficients must be square matrices, got shape {shape}.")
        if any(c.shape != shape for c in coefficients):
            raise ValueError("All coefficients must have the same shape.")
        self.coefficients = [freeze(c) for c in coefficients]

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def size(self):
        return self.coefficients[0].shape[0]

    def __repr__(self):
        return "<LaxPolynomial: degree %s over %sx%s>" % (self.degree, self.size, self.size)

    def __getitem__(self, power):
        if 0 <= power <= self.degree:
            return self.coefficients[power]
        return np.zeros((self.size, self.size))

    def __add__(self, other):
        degree = max(self.degree, other.degree)
        return LaxPolynomial([self[p] + other[p] for p in range(degree + 1)])

    def __sub__(self, other):
        degree = max(self.degree, other.degree)
        return LaxPolynomial([self[p] - other[p] for p in range(degree + 1)])

    def __matmul__(self, other):
        if self.size != other.size:
            raise ValueError(f"Cannot multiply polynomials over {self.size}x{self.size} and {other.size}x{other.size}.")
        product = [np.zeros((self.size, self.size)) for _ in range(self.degree + other.degree + 1)]
        for i, A in enumerate(self.coefficients):
            for j, B in enumerate(other.coefficients):
                product[i + j] += A @ B
        return LaxPolynomial(product)

    def commutator(self, other):
        return self @ other - other @ self

    def power(self, exponent):
        result = LaxPolynomial([np.eye(self.size)])
        for _ in range(exponent):
            result = result @ self
        return result

    def trace_product(self, other):
        """Coefficients of ``tr(self(lambda) other(lambda))`` without forming the product."""
        traces = np.zeros(self.degree + other.degree + 1)
        for i, A in enumerate(self.coefficients):
            for j, B in enumerate(other.coefficients):
                traces[i + j] += np.sum(A * B.T)
        return traces

    def trace_power(self, exponent):
        """Coefficients of ``tr(self(lambda)^exponent)``, lowest power first."""
        if exponent == 0:
            return np.array([float(self.size)])
        return self.power(exponent - 1).trace_product(self)

    def evaluate(self, lam):
        return sum(lam ** p * C for p, C in enumerate(self.coefficients))


def hat_matrix(xi):
    """Embed an n x n matrix as the leading block of an (n+1) x (n+1) matrix."""
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[0]
    result = np.zeros((n + 1, n + 1))
    result[:n, :n] = xi
    return result


def hat_vector(eta):
    """The skew (n+1) x (n+1) matrix with ``eta`` as last column and ``-eta`` as last row."""
    eta = np.asarray(eta, dtype=float)
    n = eta.shape[0]
    upper = np.zeros((n + 1, n + 1))
    upper[:n, n] = eta
    return upper - upper.T


class _Slot:
    """One lambda-coefficient slot of a Lax matrix: its power, embedding and gradient pullback."""
    def __init__(self, power, part, embed, pullback, skew=True):
        self.power = power
        self.part = part
        self.embed = embed
        self.pullback = pullback
        self.skew = skew


def _identity(X):
    return np.asarray(X, dtype=float)


def _slots(spec):
    """Variable slots and constant coefficients of the Lax matrix at L = 0 in K-variables."""
    family = spec.family
    if family not in LAX_FAMILIES:
        raise ValueError(f"Family {family} has no polynomial Lax pair.")
    n = spec.n
    if family == "manakov_gyro":
        J = np.asarray(spec.J)
        momentum = _Slot(0, "momentum", _identity, lambda G: G)
        return [momentum], {1: _Constant(np.diag(J ** 2), skew=False)}
    if family == "belyaev_e_n":
        field = _Slot(0, "field", hat_vector, lambda G: G[:n, n].copy())
        momentum = _Slot(1, "momentum", hat_matrix, lambda G: as_skew(G[:n, :n]))
        alpha1, alpha2 = spec.alpha
        return [field, momentum], {2: _Constant((alpha1 + alpha2) * hat_vector(spec.chi))}
    field = _Slot(0, "field", _identity, lambda G: G)
    momentum = _Slot(1, "momentum", _identity, lambda G: G)
    if family == "totally_symmetric":
        scale = 2 * spec.alpha[0]
    else:
        scale = sum(spec.alpha)
    return [field, momentum], {2: _Constant(scale * np.asarray(spec.chi))}


class _Constant:
    def __init__(self, matrix, skew=True):
        self.matrix = matrix
        self.skew = skew


def _assemble(spec, slots, constants, parts):
    degree = max([s.power for s in slots] + list(constants))
    size = spec.n + 1 if spec.family == "belyaev_e_n" else spec.n
    coefficients = [np.zeros((size, size)) for _ in range(degree + 1)]
    for slot in slots:
        coefficients[slot.power] = coefficients[slot.power] + slot.embed(parts[slot.part])
    for power, constant in constants.items():
        coefficients[power] = coefficients[power] + constant.matrix
    return LaxPolynomial(coefficients)


def _companion(spec, Omega):
    """The second matrix of the pair, ``Omega + lambda chi`` or ``Omega + lambda J``."""
    if spec.family == "manakov_gyro":
        return LaxPolynomial([Omega, np.diag(spec.J)])
    if spec.family == "belyaev_e_n":
        return LaxPolynomial([hat_matrix(Omega), hat_vector(spec.chi)])
    return LaxPolynomial([Omega, spec.chi])


def build_lax(spec, x):
    """
    Lax pair of the family of ``spec`` at ``x``.

    Parameters
    ----------
    spec: ModelSpec
        Spec of a Lax family; callers validate it.
    x: PhasePoint
        Point in either representation; it is read in M-variables.

    Returns
    -------
    lax, companion: LaxPolynomial
        Lagrange and bitop: ``Gamma + lambda (M+L) + lambda^2 (alpha1+alpha2) chi`` with
        ``Omega + lambda chi``. Totally symmetric: the same with ``2 alpha1 chi``.
        Belyaev: the hatted versions over so(n+1). Manakov: ``M + L + lambda J^2``
        with ``Omega + lambda J``.

    Raises
    ------
    ValueError
        For families without a Lax pair.

    Examples
    --------
    >>> from gyrotop.models import example_spec, generic_point
    >>> spec = example_spec("manakov_gyro", 4)
    >>> lax, companion = build_lax(spec, generic_point(spec, np.random.default_rng(0)))
    >>> lax.degree, companion.degree
    (1, 1)
    """
    slots, constants = _slots(spec)
    x = x.to_magnetic(spec.L)
    parts = {"momentum": x.momentum + spec.L, "field": x.field}
    Omega = angular_velocity(spec, x.momentum)
    return _assemble(spec, slots, constants, parts), _companion(spec, Omega)


def lax_derivative(spec, x):
    """Time derivative of the Lax matrix along the flow, from the closed-form vector field."""
    slots, _ = _slots(spec)
    x = x.to_magnetic(spec.L)
    momentum_rate, field_rate = vector_field(spec, x)
    return _assemble(spec, slots, {}, {"momentum": momentum_rate, "field": field_rate})


def lax_residual(spec, x):
    """
    Defect of the Lax equation ``dL/dt = [L, A]`` at ``x``.

    Returns
    -------
    residual: float
        Largest Frobenius norm over the lambda-coefficients of ``dL/dt - [L, A]``.
    """
    lax, companion = build_lax(spec, x)
    defect = lax_derivative(spec, x) - lax.commutator(companion)
    return max(float(np.linalg.norm(C)) for C in defect.coefficients)


def _kept_powers(letters, length):
    """
    Powers of lambda in a trace of ``length`` letters that can vary with the point.

    A letter is ``(power, variable, skew)``. A power is kept when some word
    reaching it holds a variable letter and an even number of skew letters;
    the other traces vanish or are constant.
    """
    states = {(0, False, 0)}
    for _ in range(length):
        states = {(p + power, has_variable or variable, (parity + skew) % 2)
                  for p, has_variable, parity in states
                  for power, variable, skew in letters}
    return sorted({p for p, has_variable, parity in states if has_variable and parity == 0})


class _TracePowerField:
    """Coefficients of ``tr(X(lambda)^exponent)`` for a Lax-type matrix ``X`` built from a point.

    The last point is cached with the power ``X^(exponent-1)`` so that all
    coefficients of one exponent share the work.
    """
    def __init__(self, build, slots, exponent, project=None):
        self.build = build
        self.slots = slots
        self.exponent = exponent
        self.project = project
        self._cache = None

    def _power(self, x):
        cached = self._cache
        if cached is not None and cached[0] is x:
            return cached[1], cached[2]
        X = self.build(x)
        P = X.power(self.exponent - 1)
        traces = P.trace_product(X)
        self._cache = (x, P, traces)
        return P, traces

    def value(self, x, power):
        _, traces = self._power(x)
        return traces[power] if power < len(traces) else 0.0

    def gradient(self, x, power):
        P, _ = self._power(x)
        d_momentum, d_field = zero_tangent(x)
        for slot in self.slots:
            A = self.exponent * P[power - slot.power]
            G = A.T - A
            pulled = slot.pullback(G)
            if slot.part == "momentum":
                if self.project is not None:
                    pulled = self.project(pulled)
                d_momentum = d_momentum + pulled
            else:
                d_field = d_field + pulled
        return d_momentum, d_field


def _standard_parts(spec, x):
    if x.representation == "magnetic":
        return {"momentum": x.momentum + spec.L, "field": x.field}
    return {"momentum": x.momentum, "field": x.field}


def spectral_invariants(spec):
    """
    Spectral first integrals: lambda-coefficients of ``tr(L0(lambda)^2k)``.

    ``L0`` is the Lax matrix with ``M`` replaced by ``K`` and no gyroscope
    term, ``k = 1..[N/2]`` with ``N`` the size of the Lax matrix. Coefficients
    that are constant or vanish identically are left out.

    Parameters
    ----------
    spec: ModelSpec
        Spec of a Lax family. Fields read points of ``spec.representation``.

    Returns
    -------
    family: IntegralFamily
        Members of kind ``spectral`` labelled ``s{k}[{p}]`` for the
        coefficient of ``lambda^p`` in the trace of the ``2k``-th power.
    """
    slots, constants = _slots(spec)
    size = spec.n + 1 if spec.family == "belyaev_e_n" else spec.n
    letters = [(s.power, True, s.skew) for s in slots] + [(p, False, c.skew) for p, c in constants.items()]

    def build(x):
        return _assemble(spec, slots, constants, _standard_parts(spec, x))

    fields = []
    for k in range(1, size // 2 + 1):
        expansion = _TracePowerField(build, slots, 2 * k)
        kept = _kept_powers(letters, 2 * k)
        top = 2 * k * max(letter[0] for letter in letters)
        dropped = sorted(set(range(top + 1)) - set(kept))
        if dropped:
            logger.debug("%s: dropping constant or vanishing coefficients %s of tr(L^%s)", spec.family, dropped, 2 * k)
        fields += [_coefficient_field(spec, expansion, p, f"s{k}[{p}]", "spectral") for p in kept]
    return IntegralFamily(spec.model, spec.n, fields)


def _coefficient_field(spec, expansion, power, label, kind):
    def value(x):
        return expansion.value(x, power)

    def gradient(x):
        return expansion.gradient(x, power)
    return ScalarField(label, value, gradient, kind, spec.model)


def noether_integrals(spec):
    """Linear functions ``<K, b>`` on an orthonormal basis ``b`` of the symmetry subalgebra."""
    h = spec.subalgebra()
    field_zero = None
    if spec.model == "so_so":
        field_zero = np.zeros((spec.n, spec.n))
    elif spec.model == "e_n":
        field_zero = np.zeros(spec.n)
    fields = []
    for basis, label in zip(h.basis, h.labels):
        field = linear_field(spec.model, basis, field_zero, label=label, kind="noether")
        if spec.representation == "magnetic":
            field = field.shifted(spec.L)
        fields.append(field)
    return IntegralFamily(spec.model, spec.n, fields)


def shift_integrals(spec):
    """
    Argument-shift integrals ``tr((K_h + lambda I^-1 L)^2i)`` and the Noether functions of h.

    For the free body and for a spec without gyroscope only the Noether
    functions are returned.

    Returns
    -------
    family: IntegralFamily
        Members of kind ``shift`` labelled ``h{i}[{p}]`` followed by members of kind ``noether``.

    Raises
    ------
    ValueError
        If the family has no symmetry subalgebra.
    """
    h = spec.subalgebra()
    noether = noether_integrals(spec)
    if spec.family == "manakov_gyro" or not np.any(spec.L):
        return noether
    shift = freeze(angular_velocity(spec, spec.L))
    momentum = _Slot(0, "momentum", _identity, lambda G: G)

    def build(x):
        return LaxPolynomial([h.project(_standard_parts(spec, x)["momentum"]), shift])

    fields = []
    for i in range(1, spec.n // 2 + 1):
        expansion = _TracePowerField(build, [momentum], 2 * i, project=h.project)
        fields += [_coefficient_field(spec, expansion, p, f"h{i}[{p}]", "shift") for p in range(2 * i)]
    return IntegralFamily(spec.model, spec.n, fields) + noether
