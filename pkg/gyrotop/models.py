"""Integrable heavy-top families with a gyroscope: specs, Hamiltonians and equations of motion."""
import logging
import numpy as np

from .poisson import REPRESENTATIONS, PhasePoint, ScalarField, random_point
from .skew import (SymmetryPattern, Subalgebra, as_skew, basis_bivector, commutator, freeze, hat3, inner,
                   pairing, project, vee3, wedge)

logger = logging.getLogger(__name__)

FAMILIES = {
    "manakov_gyro": "so",
    "lagrange_so_so": "so_so",
    "bitop": "so_so",
    "totally_symmetric": "so_so",
    "belyaev_e_n": "e_n",
    "classical3_euler": "e_n",
    "classical3_lagrange": "e_n",
    "classical3_kowalevski": "e_n",
}
CLASSICAL = ("classical3_euler", "classical3_lagrange", "classical3_kowalevski")
KOWALEVSKI_INERTIA = (1.0, 1.0, 0.5)
COMMUTATOR_TOLERANCE = 1e-12


class ModelValidationError(Exception):
    """Raised when a spec breaks the structural hypotheses of its family.

    Attributes
    ----------
    violations: list of str
        One message per broken hypothesis.
    """
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("Model validation failed: " + "; ".join(self.violations))


def mass_from_alpha(family, n, alpha):
    """
    The diagonal mass tensor of a family given by its block values.

    Examples
    --------
    >>> mass_from_alpha("lagrange_so_so", 4, [1.0, 2.0]).tolist()
    [1.0, 1.0, 2.0, 2.0]
    """
    alpha = [float(a) for a in alpha]
    if family == "totally_symmetric":
        return np.full(n, alpha[0])
    if len(alpha) != 2:
        raise ValueError(f"Family {family} needs alpha = [alpha1, alpha2], got {alpha}.")
    if family in ("lagrange_so_so", "bitop"):
        return np.array([alpha[0]] * 2 + [alpha[1]] * (n - 2))
    if family == "belyaev_e_n":
        return np.array([alpha[0]] * (n - 1) + [alpha[1]])
    raise ValueError(f"Family {family} is not parametrised by alpha.")


def classical_inertia(J):
    """Principal moments ``(J2+J3, J1+J3, J1+J2)`` of the so(3) Manakov operator."""
    J1, J2, J3 = J
    return np.array([J2 + J3, J1 + J3, J1 + J2])


class ModelSpec:
    """One member of an integrable family.

    Attributes
    ----------
    family: str
        Family tag, a key of ``FAMILIES``.
    n: int
        Dimension of the body.
    J: numpy.ndarray or None
        Diagonal mass tensor (``None`` for the classical n=3 families).
    inertia: numpy.ndarray or None
        Principal moments ``(A, B, C)`` of the classical families.
    chi: numpy.ndarray or None
        Field coupling: skew matrix on so(n) x so(n), vector on e(n),
        ``None`` for the free body.
    L: numpy.ndarray
        Gyroscope momentum as a skew n x n matrix (``hat3`` of the vector for classical tops).
    representation: str
        ``"magnetic"`` (M-variables) or ``"standard"`` (K-variables).
    """
    def __init__(self, family, n, J=None, chi=None, L=None, representation="magnetic", inertia=None):
        """
        Raises
        ------
        ValueError
            If the family or representation is unknown or the parts have the wrong shape.

        Examples
        --------
        >>> ModelSpec("bitop", 4, J=[1, 1, 2, 2])
        <ModelSpec: bitop n=4 magnetic>
        """
        if family not in FAMILIES:
            raise ValueError(f"Unknown family '{family}', expected one of {tuple(FAMILIES)}.")
        if representation not in REPRESENTATIONS:
            raise ValueError(f"Unknown representation '{representation}', expected one of {REPRESENTATIONS}.")
        self.family = family
        self.n = int(n)
        self.representation = representation
        if family in CLASSICAL:
            if self.n != 3:
                raise ValueError(f"Family {family} lives in dimension 3, got n={n}.")
            if inertia is None:
                inertia = KOWALEVSKI_INERTIA if family == "classical3_kowalevski" else (1.0, 1.0, 1.0)
            self.inertia = freeze(inertia)
            if self.inertia.shape != (3,):
                raise ValueError(f"The inertia of a classical top has three moments, got {self.inertia.shape}.")
            self.J = None
        else:
            if J is None:
                raise ValueError(f"Family {family} needs a mass tensor J.")
            self.J = freeze(J)
            if self.J.shape != (self.n,):
                raise ValueError(f"The mass tensor must have {self.n} entries, got {self.J.shape}.")
            self.inertia = classical_inertia(self.J) if self.n == 3 else None
        self.chi = self._read_chi(chi)
        self.L = self._read_gyroscope(L)

    def _read_chi(self, chi):
        if self.model == "so":
            if chi is not None and np.any(np.asarray(chi, dtype=float) != 0):
                raise ValueError("The free body has no field coupling chi.")
            return None
        if self.model == "e_n":
            chi = np.zeros(self.n) if chi is None else np.asarray(chi, dtype=float)
            if chi.shape != (self.n,):
                raise ValueError(f"chi must be a {self.n}-vector for {self.family}, got shape {chi.shape}.")
            return freeze(chi)
        chi = np.zeros((self.n, self.n)) if chi is None else np.asarray(chi, dtype=float)
        if chi.shape != (self.n, self.n):
            raise ValueError(f"chi must be a {self.n}x{self.n} skew matrix for {self.family}, got shape {chi.shape}.")
        return freeze(as_skew(chi))

    def _read_gyroscope(self, L):
        if L is None:
            return freeze(np.zeros((self.n, self.n)))
        L = np.asarray(L, dtype=float)
        if self.family in CLASSICAL and L.shape == (3,):
            return freeze(hat3(L))
        if L.shape != (self.n, self.n):
            raise ValueError(f"L must be a {self.n}x{self.n} skew matrix, got shape {L.shape}.")
        return freeze(as_skew(L))

    @property
    def model(self):
        return FAMILIES[self.family]

    @property
    def classical(self):
        return self.family in CLASSICAL

    def __repr__(self):
        return "<ModelSpec: %s n=%s %s>" % (self.family, self.n, self.representation)

    def replace(self, **changes):
        """A copy with some of ``family, n, J, chi, L, representation, inertia`` changed."""
        arguments = dict(family=self.family, n=self.n, J=self.J, chi=self.chi, L=self.L,
                         representation=self.representation, inertia=self.inertia if self.classical else None)
        arguments.update(changes)
        return ModelSpec(**arguments)

    @property
    def alpha(self):
        """Block values ``(alpha1, alpha2)``, or ``(alpha1,)`` for the totally symmetric body."""
        if self.family in ("lagrange_so_so", "bitop", "belyaev_e_n"):
            return float(self.J[0]), float(self.J[-1])
        if self.family == "totally_symmetric":
            return (float(self.J[0]),)
        raise ValueError(f"Family {self.family} has no alpha parameters.")

    def pattern(self):
        """The block structure of J the family prescribes."""
        if self.family in ("lagrange_so_so", "bitop"):
            return SymmetryPattern((2, self.n - 2), self.alpha)
        if self.family == "belyaev_e_n":
            return SymmetryPattern((self.n - 1, 1), self.alpha)
        if self.family == "manakov_gyro":
            return SymmetryPattern.from_diagonal(self.J)
        raise ValueError(f"Family {self.family} has no symmetry pattern.")

    def subalgebra(self):
        """
        Symmetry subalgebra h of the family.

        Block subalgebras for the Lagrange, bitop, Belyaev and Manakov
        families; the centralizer of chi for the totally symmetric body.

        Raises
        ------
        ValueError
            For the classical families, which carry no such structure here.
        """
        if self.family == "totally_symmetric":
            return Subalgebra.centralizer(self.chi)
        return Subalgebra.from_pattern(self.pattern())

    def weights(self):
        """Matrix ``W`` with ``M = W * Omega`` entrywise."""
        if self.classical:
            A, B, C = self.inertia
            W = np.array([[0.0, C, B], [C, 0.0, A], [B, A, 0.0]])
            return W
        W = self.J[:, None] + self.J[None, :]
        np.fill_diagonal(W, 0.0)
        return W


def manakov_apply(J, Omega):
    """
    Manakov inertia operator ``M = J Omega + Omega J``.

    Parameters
    ----------
    J: array_like
        Diagonal of the mass tensor.
    Omega: array_like
        Skew matrix.

    Returns
    -------
    M: numpy.ndarray
        ``M[i, j] = (J[i] + J[j]) * Omega[i, j]``.

    Examples
    --------
    >>> manakov_apply([1, 2, 3], basis_bivector(3, 0, 1))[0, 1]
    3.0
    """
    J = np.asarray(J, dtype=float)
    Omega = as_skew(Omega)
    return as_skew((J[:, None] + J[None, :]) * Omega)


def manakov_invert(J, M):
    """Inverse of :func:`manakov_apply`, ``Omega[i, j] = M[i, j] / (J[i] + J[j])``."""
    J = np.asarray(J, dtype=float)
    M = as_skew(M)
    W = J[:, None] + J[None, :]
    if np.any(W[np.triu_indices(len(J), 1)] == 0):
        raise ValueError("The Manakov operator is singular: some J[i] + J[j] vanish.")
    np.fill_diagonal(W, 1.0)
    return as_skew(M / W)


def angular_velocity(spec, M):
    """``Omega = I^-1 M`` for the inertia operator of ``spec``."""
    W = spec.weights()
    np.fill_diagonal(W, 1.0)
    return as_skew(np.asarray(M, dtype=float) / W)


def apply_inertia(spec, Omega):
    return as_skew(spec.weights() * np.asarray(Omega, dtype=float))


def hamiltonian_offset(spec):
    """The constant ``H(M, Gamma) - H1(M + L, Gamma) = <L, I^-1 L> / 2``."""
    return 0.5 * inner(spec.L, angular_velocity(spec, spec.L))


def _check_point(spec, x):
    if x.model != spec.model or x.n != spec.n:
        raise ValueError(f"Point on {x.model} n={x.n} does not match {spec.family} on {spec.model} n={spec.n}.")


def _potential(spec, x):
    if spec.model == "so":
        return 0.0
    return pairing(spec.model, (np.zeros((spec.n, spec.n)), spec.chi), (x.momentum, x.field))


def hamiltonian(spec, x):
    """
    Energy of the system at ``x``.

    A magnetic point gives ``H(M, Gamma) = <M, I^-1 M>/2 + <chi, Gamma>``;
    a standard point gives ``H1(K, Gamma) = <K, I^-1 K>/2 - <K, I^-1 L> + <Gamma, chi>``.

    Raises
    ------
    ValueError
        If ``x`` lives on another phase space than ``spec``.

    Examples
    --------
    >>> spec = ModelSpec("totally_symmetric", 3, J=[0.5, 0.5, 0.5])
    >>> x = PhasePoint("so_so", basis_bivector(3, 0, 1), np.zeros((3, 3)), "magnetic")
    >>> hamiltonian(spec, x)
    0.5
    """
    _check_point(spec, x)
    if x.representation == "magnetic":
        return 0.5 * inner(x.momentum, angular_velocity(spec, x.momentum)) + _potential(spec, x)
    K = x.momentum
    return (0.5 * inner(K, angular_velocity(spec, K)) - inner(K, angular_velocity(spec, spec.L))
            + _potential(spec, x))


def hamiltonian_field(spec, representation=None):
    """The Hamiltonian as a :class:`~gyrotop.poisson.ScalarField` in the given representation."""
    representation = representation or spec.representation
    label = "H" if representation == "magnetic" else "H1"

    def value(x):
        return hamiltonian(spec, x.with_momentum(x.momentum, representation))

    def gradient(x):
        if representation == "magnetic":
            Omega = angular_velocity(spec, x.momentum)
        else:
            Omega = angular_velocity(spec, x.momentum - spec.L)
        return Omega, spec.chi
    return ScalarField(label, value, gradient, "hamiltonian", spec.model)


def cross_product_field(inertia, l, chi, m, gamma):
    """
    Euler-Poisson equations of a heavy top with a gyroscope in R^3.

    ``m' = (m + l) x omega + gamma x chi``, ``gamma' = gamma x omega``, ``omega = m / I``.

    Returns
    -------
    m_rate, gamma_rate: numpy.ndarray
    """
    omega = np.asarray(m, dtype=float) / np.asarray(inertia, dtype=float)
    m_rate = np.cross(np.asarray(m) + np.asarray(l), omega) + np.cross(gamma, chi)
    gamma_rate = np.cross(gamma, omega)
    return m_rate, gamma_rate


def vector_field(spec, x):
    """
    Closed-form equations of motion at ``x``.

    Parameters
    ----------
    spec: ModelSpec
        Validated spec.
    x: PhasePoint
        Point on the phase space of ``spec``; its representation picks the
        equations: ``M' = [M+L, Omega] + ...`` with ``Omega = I^-1 M``, or
        ``K' = [K, Omega] + ...`` with ``Omega = I^-1 (K - L)``.

    Returns
    -------
    tangent: tuple
        ``(momentum rate, field rate)``. The field rate is ``[Gamma, Omega]``
        on so(n) x so(n) and ``-Omega Gamma`` on e(n); the momentum rate adds
        ``[Gamma, chi]`` or ``chi ^ Gamma``. Classical tops use the
        cross-product form.
    """
    _check_point(spec, x)
    magnetic = x.representation == "magnetic"
    if spec.classical:
        l = vee3(spec.L)
        m = vee3(x.momentum) if magnetic else vee3(x.momentum) - l
        m_rate, gamma_rate = cross_product_field(spec.inertia, l, spec.chi, m, x.field)
        return hat3(m_rate), gamma_rate
    Omega = angular_velocity(spec, x.momentum if magnetic else x.momentum - spec.L)
    K = x.momentum + spec.L if magnetic else x.momentum
    momentum_rate = commutator(K, Omega)
    if spec.model == "so_so":
        return momentum_rate + commutator(x.field, spec.chi), commutator(x.field, Omega)
    if spec.model == "e_n":
        return momentum_rate + wedge(spec.chi, x.field), -Omega @ x.field
    return momentum_rate, None


def _off_support(matrix, allowed):
    """Entries of ``matrix`` outside the 0-based upper index pairs ``allowed``."""
    mask = np.zeros(matrix.shape, dtype=bool)
    for i, j in allowed:
        mask[i, j] = mask[j, i] = True
    return np.where(mask, 0.0, matrix)


def _commutes(A, B):
    C = commutator(A, B)
    scale = max(1.0, float(np.max(np.abs(A))) * float(np.max(np.abs(B))))
    return float(np.max(np.abs(C), initial=0.0)) <= COMMUTATOR_TOLERANCE * scale


def validate(spec):
    """
    Check the structural hypotheses of the family of ``spec``.

    Returns
    -------
    violations: list of str
        Empty when ``spec`` is valid.

    Examples
    --------
    >>> spec = ModelSpec("lagrange_so_so", 3, J=[1, 1, 2], chi=basis_bivector(3, 0, 1), L=basis_bivector(3, 0, 2))
    >>> validate(spec)
    ['L is not in h: lagrange_so_so needs L in so(2)+so(1)']
    """
    violations = []
    family, n = spec.family, spec.n
    if spec.J is not None and np.any(spec.J <= 0):
        violations.append(f"J must be positive, got {spec.J.tolist()}")
    if spec.inertia is not None and spec.classical and np.any(spec.inertia <= 0):
        violations.append(f"I must be positive, got {spec.inertia.tolist()}")
    if violations:
        return violations
    if family == "bitop" and n != 4:
        violations.append("bitop requires n=4")
    if family in ("lagrange_so_so", "belyaev_e_n") and n < 3:
        violations.append(f"{family} requires n >= 3")
    if family in ("lagrange_so_so", "bitop", "belyaev_e_n"):
        expected = mass_from_alpha(family, n, [spec.J[0], spec.J[-1]])
        if np.any(spec.J != expected):
            violations.append(f"J of {family} must follow the pattern of alpha, got {spec.J.tolist()}")
        elif spec.J[0] == spec.J[-1]:
            violations.append(f"{family} needs alpha1 != alpha2")
    if family == "totally_symmetric" and np.any(spec.J != spec.J[0]):
        violations.append(f"totally_symmetric needs J = alpha1*Id, got {spec.J.tolist()}")
    if family == "manakov_gyro":
        try:
            SymmetryPattern.from_diagonal(spec.J)
        except ValueError as error:
            violations.append(str(error))
    if violations:
        return violations

    if family == "lagrange_so_so" and np.any(_off_support(spec.chi, [(0, 1)]) != 0):
        violations.append("chi must be chi12 E1^E2 for lagrange_so_so")
    if family == "bitop" and np.any(_off_support(spec.chi, [(0, 1), (2, 3)]) != 0):
        violations.append("chi must be chi12 E1^E2 + chi34 E3^E4 for bitop")
    if family == "belyaev_e_n" and np.any(spec.chi[:-1] != 0):
        violations.append("chi must be chi_n e_n for belyaev_e_n")

    if family in ("lagrange_so_so", "bitop", "belyaev_e_n", "manakov_gyro"):
        outside = project(spec.pattern(), spec.L)[1]
        if np.any(outside != 0):
            violations.append(f"L is not in h: {family} needs L in {_block_name(spec.pattern())}")
    if family == "totally_symmetric" and not _commutes(spec.L, spec.chi):
        violations.append("L is not in h: totally_symmetric needs [L, chi] = 0")
    if family == "manakov_gyro" and not _commutes(spec.L, np.diag(spec.J)):
        violations.append("manakov_gyro needs [L, J] = 0")

    if spec.classical:
        A, B, C = spec.inertia
        l = vee3(spec.L)
        if family == "classical3_euler" and np.any(spec.chi != 0):
            violations.append("classical3_euler needs chi = 0")
        if family == "classical3_lagrange":
            if A != B:
                violations.append("classical3_lagrange needs I = diag(A, A, C)")
            if np.any(spec.chi[:2] != 0):
                violations.append("classical3_lagrange needs chi = (0, 0, chi3)")
            if np.any(l[:2] != 0):
                violations.append("classical3_lagrange needs L = (0, 0, eta)")
        if family == "classical3_kowalevski":
            if tuple(spec.inertia) != KOWALEVSKI_INERTIA:
                violations.append("classical3_kowalevski needs I = diag(1, 1, 1/2)")
            if np.any(spec.chi[1:] != 0):
                violations.append("classical3_kowalevski needs chi = (chi1, 0, 0)")
            if np.any(l[:2] != 0):
                violations.append("classical3_kowalevski needs L = (0, 0, eta)")
    return violations


def _block_name(pattern):
    return "+".join(f"so({length})" for length in pattern.lengths)


def validated(spec):
    """Return ``spec`` or raise :class:`ModelValidationError` with the violation list."""
    violations = validate(spec)
    if violations:
        raise ModelValidationError(violations)
    return spec


def _classical_parts(spec, x):
    """Momentum vector ``K = M + L`` and field of a classical point."""
    k = vee3(x.momentum)
    if x.representation == "magnetic":
        k = k + vee3(spec.L)
    return k, np.asarray(x.field)


def _kowalevski(spec, K, gamma):
    chi1 = spec.chi[0]
    eta = vee3(spec.L)[2]
    K1, K2, K3 = K
    a = K1 ** 2 - K2 ** 2 - 2 * chi1 * gamma[0]
    b = 2 * K1 * K2 - 2 * chi1 * gamma[1]
    value = a ** 2 + b ** 2 + 8 * eta * (K3 - 2 * eta) * (K1 ** 2 + K2 ** 2) - 16 * chi1 * eta * K1 * gamma[2]
    d_momentum = np.array([
        4 * a * K1 + 4 * b * K2 + 16 * eta * (K3 - 2 * eta) * K1 - 16 * chi1 * eta * gamma[2],
        -4 * a * K2 + 4 * b * K1 + 16 * eta * (K3 - 2 * eta) * K2,
        8 * eta * (K1 ** 2 + K2 ** 2),
    ])
    d_field = np.array([-4 * chi1 * a, -4 * chi1 * b, -16 * chi1 * eta * K1])
    return value, d_momentum, d_field


def classical3_integral(spec, x):
    """
    Fourth integral of a classical top at ``x``.

    Euler: ``<M+L, M+L>``. Lagrange: ``M3``. Kowalevski: the quartic
    ``(K1^2-K2^2-2chi1 G1)^2 + (2K1K2-2chi1 G2)^2 + 8eta(K3-2eta)(K1^2+K2^2) - 16chi1 eta K1 G3``
    read on the total momentum ``K = M + L``.

    Raises
    ------
    ValueError
        If ``spec`` is not a classical n=3 family.

    Examples
    --------
    >>> spec = ModelSpec("classical3_euler", 3, inertia=[1, 2, 3], L=[0, 1, 0])
    >>> x = PhasePoint("e_n", hat3([1, 0, 0]), [0, 0, 1], "magnetic")
    >>> classical3_integral(spec, x)
    2.0
    """
    return fourth_integral(spec)(x)


def fourth_integral(spec):
    """The fourth integral of a classical top as a scalar field with its gradient."""
    if not spec.classical:
        raise ValueError(f"Family {spec.family} has no classical fourth integral.")

    def parts(x):
        _check_point(spec, x)
        K, gamma = _classical_parts(spec, x)
        if spec.family == "classical3_euler":
            return float(K @ K), 2 * K, np.zeros(3)
        if spec.family == "classical3_lagrange":
            M3 = K[2] - vee3(spec.L)[2]
            return float(M3), np.array([0.0, 0.0, 1.0]), np.zeros(3)
        return _kowalevski(spec, K, gamma)

    def value(x):
        return parts(x)[0]

    def gradient(x):
        _, d_momentum, d_field = parts(x)
        return hat3(d_momentum), d_field
    return ScalarField("F", value, gradient, "integral", "e_n")


def classical_point(m, gamma, representation="magnetic"):
    """The e(3) phase point of a classical top with momentum vector ``m``."""
    return PhasePoint("e_n", hat3(m), gamma, representation)


def _dyadic_coefficients(count, rng):
    # distinct values 1 + j/64 in [1, 2]
    return 1.0 + rng.choice(65, size=count, replace=False) / 64.0


def generic_gyroscope(spec, rng):
    """
    A copy of ``spec`` with a generic gyroscope momentum in its symmetry subalgebra.

    The coefficients on the orthonormal basis of h are distinct dyadic
    numbers in ``[1, 2]``.
    """
    h = spec.subalgebra()
    coefficients = _dyadic_coefficients(len(h), rng)
    L = sum((c * b for c, b in zip(coefficients, h.basis)), np.zeros((spec.n, spec.n)))
    if spec.family != "totally_symmetric":
        L = project(spec.pattern(), L)[0]
    return spec.replace(L=as_skew(L))


def generic_point(spec, rng, representation=None, scale=1.0):
    """A phase point of ``spec`` with entries uniform in ``[-scale, scale]``."""
    return random_point(spec.model, spec.n, rng, representation or spec.representation, scale)


def example_spec(family, n=None, seed=0, representation="magnetic"):
    """
    A validated spec of ``family`` with fixed parameters and a generic gyroscope.

    Used as a reference point for benchmarks and certification.
    """
    rng = np.random.default_rng(seed)
    if family in CLASSICAL:
        if family == "classical3_euler":
            return validated(ModelSpec(family, 3, L=[0.3, -0.2, 0.5], representation=representation,
                                       inertia=[1.0, 2.0, 3.0]))
        if family == "classical3_lagrange":
            return validated(ModelSpec(family, 3, chi=[0.0, 0.0, 0.7], L=[0.0, 0.0, 0.4],
                                       representation=representation, inertia=[1.0, 1.0, 1.5]))
        return validated(ModelSpec(family, 3, chi=[1.0, 0.0, 0.0], L=[0.0, 0.0, 0.3],
                                   representation=representation, inertia=KOWALEVSKI_INERTIA))
    if family == "bitop":
        n = 4
    n = n or 4
    if family in ("lagrange_so_so", "bitop"):
        chi = 0.8 * basis_bivector(n, 0, 1)
        if family == "bitop":
            chi = chi + 0.6 * basis_bivector(n, 2, 3)
        spec = ModelSpec(family, n, J=mass_from_alpha(family, n, [1.0, 1.5]), chi=chi, representation=representation)
    elif family == "totally_symmetric":
        spec = ModelSpec(family, n, J=mass_from_alpha(family, n, [0.75]), chi=as_skew(rng.uniform(-1, 1, (n, n))),
                         representation=representation)
    elif family == "belyaev_e_n":
        chi = np.zeros(n)
        chi[-1] = 0.9
        spec = ModelSpec(family, n, J=mass_from_alpha(family, n, [1.0, 1.5]), chi=chi, representation=representation)
    else:
        J = np.repeat(np.arange(1.0, n // 2 + 2), 2)[:n]
        spec = ModelSpec(family, n, J=J, representation=representation)
    return validated(generic_gyroscope(spec, rng))
