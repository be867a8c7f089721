"""Phase points, scalar fields and the Lie-Poisson brackets of so(n), so(n)xso(n) and e(n)."""
import logging
from itertools import combinations
import numpy as np

from .skew import MODELS, as_skew, basis_bivector, commutator, from_upper, inner, pairing, random_skew, upper

logger = logging.getLogger(__name__)

REPRESENTATIONS = ("magnetic", "standard")
KINDS = ("casimir", "noether", "spectral", "shift", "hamiltonian", "integral", "function")


def _check_model(model):
    if model not in MODELS:
        raise ValueError(f"Unknown model tag '{model}', expected one of {MODELS}.")


def dimension(model, n):
    """Number of coordinates of the phase space ``model`` in dimension ``n``."""
    _check_model(model)
    size = n * (n - 1) // 2
    if model == "so_so":
        return 2 * size
    if model == "e_n":
        return size + n
    return size


def flatten(model, momentum, field):
    """Coordinates of a ``(momentum, field)`` pair, upper triangles first.

    The Euclidean product of two flattened pairs equals :func:`gyrotop.skew.pairing`.
    """
    _check_model(model)
    parts = [upper(momentum)]
    if model == "so_so":
        parts.append(upper(field))
    elif model == "e_n":
        parts.append(np.asarray(field, dtype=float))
    return np.concatenate(parts)


def unflatten(model, n, coordinates):
    """Inverse of :func:`flatten`."""
    coordinates = np.asarray(coordinates, dtype=float)
    if coordinates.shape != (dimension(model, n),):
        raise ValueError(f"Expected {dimension(model, n)} coordinates for model {model} with n={n}, got {coordinates.shape}.")
    size = n * (n - 1) // 2
    momentum = from_upper(coordinates[:size], n)
    if model == "so_so":
        return momentum, from_upper(coordinates[size:], n)
    if model == "e_n":
        return momentum, coordinates[size:].copy()
    return momentum, None


class PhasePoint:
    """A point of one of the Lie-Poisson phase spaces.

    Attributes
    ----------
    model: str
        ``"so"``, ``"so_so"`` or ``"e_n"``.
    momentum: numpy.ndarray
        Skew n x n matrix; M in the magnetic representation, K = M + L in the standard one.
    field: numpy.ndarray or None
        Skew matrix Gamma (``so_so``), n-vector Gamma (``e_n``) or ``None`` (``so``).
    representation: str
        ``"magnetic"`` or ``"standard"``.
    """
    def __init__(self, model, momentum, field=None, representation="standard"):
        """
        Raises
        ------
        ValueError
            If the model or representation is unknown or the parts do not fit together.

        Examples
        --------
        >>> PhasePoint("e_n", [[0, 1, 0], [-1, 0, 0], [0, 0, 0]], [0, 0, 1])
        <PhasePoint: e_n n=3 standard>
        """
        _check_model(model)
        if representation not in REPRESENTATIONS:
            raise ValueError(f"Unknown representation '{representation}', expected one of {REPRESENTATIONS}.")
        momentum = as_skew(momentum)
        n = momentum.shape[0]
        if model == "so":
            if field is not None:
                raise ValueError("The so model has no field part.")
        elif field is None:
            raise ValueError(f"The {model} model needs a field part.")
        elif model == "so_so":
            field = np.asarray(field, dtype=float)
            if field.shape != (n, n):
                raise ValueError(f"The field of a so_so point must be {n}x{n}, got {field.shape}.")
            field = as_skew(field)
        else:
            field = np.asarray(field, dtype=float)
            if field.shape != (n,):
                raise ValueError(f"The field of an e_n point must be a {n}-vector, got {field.shape}.")
        momentum.flags.writeable = False
        if field is not None:
            field.flags.writeable = False
        self.model = model
        self.momentum = momentum
        self.field = field
        self.representation = representation

    @property
    def n(self):
        return self.momentum.shape[0]

    def __repr__(self):
        return "<PhasePoint: %s n=%s %s>" % (self.model, self.n, self.representation)

    def to_vector(self):
        return flatten(self.model, self.momentum, self.field)

    @classmethod
    def from_vector(cls, model, n, coordinates, representation="standard"):
        momentum, field = unflatten(model, n, coordinates)
        return cls(model, momentum, field, representation)

    def moved(self, tangent, dt=1.0):
        """The point ``x + dt * tangent`` with the same model and representation."""
        d_momentum, d_field = tangent
        field = None if self.field is None else self.field + dt * np.asarray(d_field)
        return PhasePoint(self.model, self.momentum + dt * np.asarray(d_momentum), field, self.representation)

    def with_momentum(self, momentum, representation=None):
        return PhasePoint(self.model, momentum, self.field, representation or self.representation)

    def to_standard(self, L):
        """Switch from M to K = M + L; a standard point is returned unchanged."""
        if self.representation == "standard":
            return self
        return self.with_momentum(self.momentum + L, "standard")

    def to_magnetic(self, L):
        """Switch from K to M = K - L; a magnetic point is returned unchanged."""
        if self.representation == "magnetic":
            return self
        return self.with_momentum(self.momentum - L, "magnetic")


def zero_tangent(x):
    return np.zeros_like(x.momentum), None if x.field is None else np.zeros_like(x.field)


class ScalarField:
    """A labelled scalar function on a phase space with its gradient.

    The gradient is the pair ``(dF/dmomentum, dF/dfield)`` represented through
    the scalar product of the phase space, so a coordinate ``K[i, j]`` has
    gradient ``E_i ^ E_j``. Fields without an analytic gradient fall back to
    central finite differences.

    Attributes
    ----------
    label: str
        Name used in reports.
    kind: str
        One of ``casimir``, ``noether``, ``spectral``, ``shift``,
        ``hamiltonian``, ``integral`` or ``function``.
    model: str or None
        Phase space the field lives on; ``None`` accepts any.
    linear: tuple or None
        ``(a, b, c)`` when the field is the affine function ``<(a, b), x> + c``.
    """
    def __init__(self, label, value, gradient=None, kind="function", model=None, linear=None):
        if kind not in KINDS:
            raise ValueError(f"Unknown field kind '{kind}', expected one of {KINDS}.")
        self.label = label
        self._value = value
        self._gradient = gradient
        self.kind = kind
        self.model = model
        self.linear = linear

    def __repr__(self):
        return "<ScalarField: %s (%s)>" % (self.label, self.kind)

    def __call__(self, x):
        return float(self._value(x))

    @property
    def analytic(self):
        return self._gradient is not None

    def gradient(self, x):
        if self._gradient is not None:
            return self._gradient(x)
        return finite_difference_gradient(self, x)

    def relabel(self, label, kind=None):
        return ScalarField(label, self._value, self._gradient, kind or self.kind, self.model, self.linear)

    def __add__(self, other):
        if not isinstance(other, ScalarField):
            other = constant_field(other, self.model)
        model = self.model or other.model
        linear = None
        if self.linear is not None and other.linear is not None:
            linear = _add_linear(self.linear, other.linear)
        gradient = None
        if self.analytic and other.analytic:
            def gradient(x):
                return _add_pairs(self.gradient(x), other.gradient(x))
        return ScalarField(f"({self.label} + {other.label})", lambda x: self(x) + other(x), gradient,
                           model=model, linear=linear)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ScalarField):
            factor = float(other)
            linear = None
            if self.linear is not None:
                a, b, c = self.linear
                linear = (factor * a, None if b is None else factor * b, factor * c)
            gradient = None
            if self.analytic:
                def gradient(x):
                    return _scale_pair(factor, self.gradient(x))
            return ScalarField(f"{factor:g}*{self.label}", lambda x: factor * self(x), gradient,
                               self.kind, self.model, linear)
        gradient = None
        if self.analytic and other.analytic:
            def gradient(x):
                return _add_pairs(_scale_pair(other(x), self.gradient(x)), _scale_pair(self(x), other.gradient(x)))
        return ScalarField(f"{self.label}*{other.label}", lambda x: self(x) * other(x), gradient,
                           model=self.model or other.model)

    __rmul__ = __mul__

    def shifted(self, L, scale=1.0, label=None):
        """
        Precompose with the momentum shift ``K = M + scale*L``.

        The returned field reads a point in M-variables, moves it to
        ``K`` and evaluates the original field there. Gradients are
        unchanged by the shift.
        """
        L = np.asarray(L, dtype=float)

        def move(x):
            return PhasePoint(x.model, x.momentum + scale * L, x.field, x.representation)

        gradient = None
        if self.analytic:
            def gradient(x):
                return self.gradient(move(x))
        linear = None
        if self.linear is not None:
            a, b, c = self.linear
            linear = (a, b, c + scale * inner(a, L))
        return ScalarField(label or self.label, lambda x: self(move(x)), gradient, self.kind, self.model, linear)


def _add_pairs(first, second):
    return first[0] + second[0], None if first[1] is None else first[1] + second[1]


def _scale_pair(factor, pair):
    return factor * pair[0], None if pair[1] is None else factor * pair[1]


def _add_linear(first, second):
    return (first[0] + second[0], None if first[1] is None else first[1] + second[1], first[2] + second[2])


def constant_field(value, model=None):
    value = float(value)

    def gradient(x):
        return zero_tangent(x)
    return ScalarField(f"{value:g}", lambda x: value, gradient, model=model)


def finite_difference_gradient(field, x, step=None):
    """
    Central finite-difference gradient of ``field`` at ``x``.

    The step is ``1e-6 * (1 + |x|)`` unless given; accuracy is about ``1e-8``
    for smooth fields at unit scale.
    """
    base = x.to_vector()
    if step is None:
        step = 1e-6 * (1.0 + np.linalg.norm(base))
    derivative = np.zeros_like(base)
    for index in range(base.size):
        probe = np.zeros_like(base)
        probe[index] = step
        forward = PhasePoint.from_vector(x.model, x.n, base + probe, x.representation)
        backward = PhasePoint.from_vector(x.model, x.n, base - probe, x.representation)
        derivative[index] = (field(forward) - field(backward)) / (2 * step)
    return unflatten(x.model, x.n, derivative)


def linear_field(model, momentum_coefficient, field_coefficient=None, constant=0.0, label=None, kind="function"):
    """
    The affine field ``x -> <(a, b), x> + c``.

    Parameters
    ----------
    model: str
        Phase space tag.
    momentum_coefficient: array_like
        Skew matrix ``a``.
    field_coefficient: array_like or None
        Skew matrix or vector ``b``; zero when omitted (ignored for ``so``).
    constant: float
        Offset ``c``.
    """
    _check_model(model)
    a = as_skew(momentum_coefficient)
    n = a.shape[0]
    if model == "so":
        b = None
    elif field_coefficient is None:
        b = np.zeros((n, n)) if model == "so_so" else np.zeros(n)
    else:
        b = np.asarray(field_coefficient, dtype=float)
    constant = float(constant)

    def value(x):
        return pairing(model, (a, b), (x.momentum, x.field)) + constant

    def gradient(x):
        return a, b
    return ScalarField(label or "linear", value, gradient, kind, model, (a, b, constant))


def coordinate_field(model, n, part, i, j=None):
    """
    A single phase-space coordinate as a linear field.

    ``part`` is ``"momentum"`` (entry ``(i, j)``) or ``"field"`` (entry
    ``(i, j)`` of a matrix field or component ``i`` of a vector field).
    Indices are 0-based.
    """
    _check_model(model)
    a = np.zeros((n, n))
    b = None if model == "so" else (np.zeros((n, n)) if model == "so_so" else np.zeros(n))
    if part == "momentum":
        a = basis_bivector(n, i, j)
        label = f"K[{i + 1},{j + 1}]"
    elif part == "field" and model == "so_so":
        b = basis_bivector(n, i, j)
        label = f"G[{i + 1},{j + 1}]"
    elif part == "field" and model == "e_n":
        b[i] = 1.0
        label = f"G[{i + 1}]"
    else:
        raise ValueError(f"No '{part}' coordinates on model {model}.")
    return linear_field(model, a, b, label=label)


def quadratic_field(model, n, linear, quadratic, label="polynomial"):
    """
    The polynomial ``v -> linear.v + v.Q.v/2`` in flattened coordinates ``v``.

    ``quadratic`` is symmetrised before use.
    """
    linear = np.asarray(linear, dtype=float)
    quadratic = np.asarray(quadratic, dtype=float)
    quadratic = 0.5 * (quadratic + quadratic.T)

    def value(x):
        v = x.to_vector()
        return float(linear @ v + 0.5 * v @ quadratic @ v)

    def gradient(x):
        return unflatten(model, n, linear + quadratic @ x.to_vector())
    return ScalarField(label, value, gradient, model=model)


def random_quadratic_field(model, n, rng, label="polynomial"):
    size = dimension(model, n)
    return quadratic_field(model, n, rng.uniform(-1, 1, size), rng.uniform(-1, 1, (size, size)), label)


def _check_gyroscope(L, n):
    if L is None:
        return np.zeros((n, n))
    L = np.asarray(L, dtype=float)
    if L.shape != (n, n):
        raise ValueError(f"The gyroscope momentum must be {n}x{n}, got {L.shape}.")
    if np.any(L != -L.T):
        raise ValueError("The gyroscope momentum must be skew-symmetric.")
    return L


def bracket_from_gradients(x, first, second, L=None):
    """
    Lie-Poisson bracket of two functions given their gradients at ``x``.

    With ``L`` the bracket is the magnetic one; ``L = 0`` gives the standard bracket.
    """
    L = _check_gyroscope(L, x.n)
    a_f, b_f = first
    a_g, b_g = second
    value = -inner(x.momentum + L, commutator(a_f, a_g))
    if x.model == "so_so":
        value -= inner(x.field, commutator(a_f, b_g) + commutator(b_f, a_g))
    elif x.model == "e_n":
        value -= float(x.field @ (a_f @ b_g - a_g @ b_f))
    return value


def bracket(L_gyro, F, G, x):
    """
    Poisson bracket ``{F, G}`` at ``x``.

    Parameters
    ----------
    L_gyro: array_like or None
        Gyroscope momentum of the magnetic bracket; ``None`` or zero gives
        the standard bracket in K-variables.
    F, G: ScalarField
        Fields on the model of ``x``.
    x: PhasePoint
        Evaluation point.

    Returns
    -------
    value: float
        ``-<M+L, [aF, aG]> - <Gamma, [aF, bG] + [bF, aG]>`` on so(n) x so(n),
        ``-<M+L, [aF, aG]> - Gamma.(aF bG - aG bF)`` on e(n), first term only on so(n),
        where ``a`` and ``b`` are the momentum and field gradients.

    Raises
    ------
    ValueError
        If a field belongs to another model or ``L_gyro`` is not skew.

    Examples
    --------
    >>> K13 = coordinate_field("so_so", 3, "momentum", 0, 2)
    >>> K32 = coordinate_field("so_so", 3, "momentum", 2, 1)
    >>> x = PhasePoint("so_so", [[0, 2, 0], [0, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 0, 0], [0, 0, 0]])
    >>> bracket(None, K13, K32, x)
    -2.0
    """
    for field in (F, G):
        if field.model is not None and field.model != x.model:
            raise ValueError(f"Field '{field.label}' lives on {field.model}, the point on {x.model}.")
    return bracket_from_gradients(x, F.gradient(x), G.gradient(x), L_gyro)


def bracket_field(L_gyro, F, G):
    """
    The field ``x -> {F, G}(x)``.

    For two affine fields the result is affine and carries an exact
    gradient; otherwise the gradient is taken by finite differences.
    """
    label = "{%s, %s}" % (F.label, G.label)
    model = F.model or G.model
    if F.linear is not None and G.linear is not None and model is not None:
        a_f, b_f, _ = F.linear
        a_g, b_g, _ = G.linear
        n = a_f.shape[0]
        L = _check_gyroscope(L_gyro, n)
        a = -commutator(a_f, a_g)
        constant = inner(L, a)
        if model == "so_so":
            b = -(commutator(a_f, b_g) + commutator(b_f, a_g))
        elif model == "e_n":
            b = -(a_f @ b_g - a_g @ b_f)
        else:
            b = None
        return linear_field(model, a, b, constant, label=label)
    return ScalarField(label, lambda x: bracket(L_gyro, F, G, x), model=model)


def hamiltonian_vector_field(L_gyro, H, x):
    """
    Vector field ``x_i' = {x_i, H}`` generated by ``H``, coordinate by coordinate.

    Returns
    -------
    tangent: tuple
        ``(momentum rate, field rate)`` in the shapes of ``x``.
    """
    if H.model is not None and H.model != x.model:
        raise ValueError(f"Field '{H.label}' lives on {H.model}, the point on {x.model}.")
    n = x.n
    gradient = H.gradient(x)
    size = dimension(x.model, n)
    rates = np.zeros(size)
    basis = np.eye(size)
    for index in range(size):
        coordinate = unflatten(x.model, n, basis[index])
        rates[index] = bracket_from_gradients(x, coordinate, gradient, L_gyro)
    return unflatten(x.model, n, rates)


class IntegralFamily:
    """A labelled list of scalar fields on one phase space.

    Attributes
    ----------
    model: str
        Phase space of every member.
    n: int
        Dimension.
    fields: list of ScalarField
        Members, in report order.
    """
    def __init__(self, model, n, fields=()):
        self.model = model
        self.n = n
        self.fields = list(fields)

    def __len__(self):
        return len(self.fields)

    def __iter__(self):
        return iter(self.fields)

    def __getitem__(self, index):
        return self.fields[index]

    def __add__(self, other):
        if (self.model, self.n) != (other.model, other.n):
            raise ValueError(f"Cannot join families on {self.model}/{self.n} and {other.model}/{other.n}.")
        return IntegralFamily(self.model, self.n, self.fields + other.fields)

    def __repr__(self):
        counts = {}
        for field in self.fields:
            counts[field.kind] = counts.get(field.kind, 0) + 1
        summary = ", ".join(f"{count} {kind}" for kind, count in counts.items())
        return "<IntegralFamily: %s on %s n=%s>" % (summary or "empty", self.model, self.n)

    @property
    def labels(self):
        return [field.label for field in self.fields]

    @property
    def kinds(self):
        return [field.kind for field in self.fields]

    def of_kind(self, *kinds):
        return IntegralFamily(self.model, self.n, [field for field in self.fields if field.kind in kinds])

    def check_point(self, x):
        if (x.model, x.n) != (self.model, self.n):
            raise ValueError(f"Point on {x.model}/{x.n} does not match family on {self.model}/{self.n}.")

    def values(self, x):
        self.check_point(x)
        return np.array([field(x) for field in self.fields])

    def gradient_matrix(self, x):
        """Flattened gradients, one row per member."""
        self.check_point(x)
        if not self.fields:
            return np.zeros((0, dimension(self.model, self.n)))
        return np.array([flatten(self.model, *field.gradient(x)) for field in self.fields])


def _power_sum_field(model, n, k):
    # tr(K^{2k}) on the momentum, for the free body
    def value(x):
        return np.trace(np.linalg.matrix_power(x.momentum, 2 * k))

    def gradient(x):
        return -4 * k * np.linalg.matrix_power(x.momentum, 2 * k - 1), None
    return ScalarField(f"C{k}", value, gradient, "casimir", model)


def _field_power_field(n, k):
    def value(x):
        return np.trace(np.linalg.matrix_power(x.field, 2 * k))

    def gradient(x):
        return np.zeros((n, n)), -4 * k * np.linalg.matrix_power(x.field, 2 * k - 1)
    return ScalarField(f"P{k}", value, gradient, "casimir", "so_so")


def _mixed_trace_field(n, k):
    m = 2 * k - 1

    def value(x):
        return np.trace(x.momentum @ np.linalg.matrix_power(x.field, m))

    def gradient(x):
        powers = [np.linalg.matrix_power(x.field, j) for j in range(m)]
        A = sum(powers[m - 1 - j] @ x.momentum @ powers[j] for j in range(m))
        return -2 * np.linalg.matrix_power(x.field, m), A.T - A
    return ScalarField(f"Q{k}", value, gradient, "casimir", "so_so")


def bordered(momentum, field):
    """The (n+1)x(n+1) matrix with ``momentum`` in the leading block and ``field`` as last column."""
    n = momentum.shape[0]
    upper_part = np.zeros((n + 1, n + 1))
    upper_part[:n, :n] = np.triu(momentum, 1)
    upper_part[:n, n] = field
    return upper_part - upper_part.T


def adjugate(X):
    """Adjugate by cofactors; defined for singular matrices too."""
    size = X.shape[0]
    if size == 1:
        return np.ones((1, 1))
    cofactors = np.zeros_like(X)
    for i in range(size):
        for j in range(size):
            minor = np.delete(np.delete(X, i, axis=0), j, axis=1)
            cofactors[i, j] = (-1) ** (i + j) * np.linalg.det(minor)
    return cofactors.T


def _contracted_invariant_field(n, k):
    subsets = [list(indices) + [n] for indices in combinations(range(n), 2 * k - 1)]

    def value(x):
        K_hat = bordered(x.momentum, x.field)
        return sum(np.linalg.det(K_hat[np.ix_(s, s)]) for s in subsets)

    def gradient(x):
        K_hat = bordered(x.momentum, x.field)
        C = np.zeros((n + 1, n + 1))
        for s in subsets:
            C[np.ix_(s, s)] += adjugate(K_hat[np.ix_(s, s)]).T
        G = C - C.T
        return as_skew(G[:n, :n]), G[:n, n].copy()
    return ScalarField(f"q{k}", value, gradient, "casimir", "e_n")


def casimirs(model, n, representation="standard", L=None):
    """
    Casimir functions of the Lie-Poisson bracket on ``model``.

    Parameters
    ----------
    model: str
        ``"so_so"``: ``P_k = tr(Gamma^2k)``, ``Q_k = tr(K Gamma^(2k-1))``,
        ``k = 1..[n/2]``. ``"e_n"``: the contracted invariants ``q_k``,
        ``k = 1..[(n+1)/2]``, sums of principal minors of the bordered
        matrix through its last index. ``"so"``: ``C_k = tr(K^2k)``.
    n: int
        Dimension, at least 3.
    representation: str
        In the magnetic representation each Casimir is read at ``K = M + L``.
    L: array_like or None
        Gyroscope momentum for the magnetic representation.

    Returns
    -------
    family: IntegralFamily
        Members of kind ``casimir`` with analytic gradients.

    Raises
    ------
    ValueError
        For an unknown model or representation, or ``n < 3``.

    Examples
    --------
    >>> casimirs("so_so", 4)
    <IntegralFamily: 4 casimir on so_so n=4>
    """
    _check_model(model)
    if representation not in REPRESENTATIONS:
        raise ValueError(f"Unknown representation '{representation}', expected one of {REPRESENTATIONS}.")
    if n < 3:
        raise ValueError(f"Casimir families need n >= 3, got {n}.")
    if model == "so_so":
        fields = [_field_power_field(n, k) for k in range(1, n // 2 + 1)]
        fields += [_mixed_trace_field(n, k) for k in range(1, n // 2 + 1)]
    elif model == "e_n":
        fields = [_contracted_invariant_field(n, k) for k in range(1, (n + 1) // 2 + 1)]
    else:
        fields = [_power_sum_field(model, n, k) for k in range(1, n // 2 + 1)]
    if representation == "magnetic" and L is not None:
        L = _check_gyroscope(L, n)
        fields = [field.shifted(L) for field in fields]
    return IntegralFamily(model, n, fields)


def random_point(model, n, rng, representation="standard", scale=1.0):
    """Entries uniform in ``[-scale, scale]``, skew-symmetrised where needed."""
    momentum = random_skew(n, rng, scale)
    if model == "so_so":
        field = random_skew(n, rng, scale)
    elif model == "e_n":
        field = rng.uniform(-scale, scale, n)
    else:
        field = None
    return PhasePoint(model, momentum, field, representation)


def directional_derivative(F, x, tangent):
    """``dF(x)[tangent]`` through the phase-space scalar product."""
    gradient = F.gradient(x)
    return pairing(x.model, gradient, tangent)

