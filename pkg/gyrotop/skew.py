"""Small-matrix algebra over so(n).

Skew-symmetric matrices are plain ``numpy`` arrays. Every constructor here
writes the strict upper triangle and mirrors it, so the results are skew
exactly, not approximately.
"""
from dataclasses import dataclass
from itertools import combinations
import numpy as np


def _check_square(A, name="matrix"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"The {name} must be a square matrix, got shape {A.shape}.")
    return A


def _check_same_dimension(A, B):
    if A.shape != B.shape:
        raise ValueError(f"Dimension mismatch: {A.shape} and {B.shape}.")


def freeze(array):
    """Return a read-only float copy of ``array``."""
    frozen = np.array(array, dtype=float)
    frozen.flags.writeable = False
    return frozen


def as_skew(A):
    """
    Build the skew-symmetric matrix with the strict upper triangle of ``A``.

    Parameters
    ----------
    A: array_like
        Square matrix; only the entries above the diagonal are read.

    Returns
    -------
    skew: numpy.ndarray
        Matrix ``U - U.T`` where ``U`` is the strict upper triangle of ``A``.

    Raises
    ------
    ValueError
        If ``A`` is not square.

    Examples
    --------
    >>> as_skew([[5, 1], [7, 5]]).tolist()
    [[0.0, 1.0], [-1.0, 0.0]]
    """
    A = _check_square(A)
    upper = np.triu(A, 1)
    return upper - upper.T


def from_triples(n, triples):
    """
    Build an n x n skew matrix from ``[i, j, value]`` triples (1-based indices).

    Repeated pairs add up; a triple with ``i > j`` contributes ``-value`` to
    the ``(j, i)`` entry.
    """
    upper = np.zeros((n, n))
    for i, j, value in triples:
        if i == j:
            raise ValueError(f"Skew entries need two distinct indices, got ({i}, {j}).")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"Index pair ({i}, {j}) is outside 1..{n}.")
        if i < j:
            upper[i - 1, j - 1] += value
        else:
            upper[j - 1, i - 1] -= value
    return as_skew(upper)


def to_triples(A):
    """Non-zero upper entries of a skew matrix as 1-based ``[i, j, value]`` triples."""
    A = _check_square(A)
    return [[i + 1, j + 1, float(A[i, j])] for i, j in combinations(range(A.shape[0]), 2) if A[i, j] != 0]


def upper(A):
    """Coordinates ``A[i, j]``, ``i < j``, in row-major order."""
    A = _check_square(A)
    rows, cols = np.triu_indices(A.shape[0], 1)
    return A[rows, cols]


def from_upper(coordinates, n):
    """Inverse of :func:`upper`."""
    coordinates = np.asarray(coordinates, dtype=float)
    if coordinates.shape != (n * (n - 1) // 2,):
        raise ValueError(f"Expected {n * (n - 1) // 2} coordinates for so({n}), got {coordinates.shape}.")
    U = np.zeros((n, n))
    U[np.triu_indices(n, 1)] = coordinates
    return U - U.T


def wedge(u, v):
    """
    Wedge product of two vectors, ``(u^v)[i, j] = u[i]*v[j] - u[j]*v[i]``.

    Parameters
    ----------
    u, v: array_like
        Vectors of the same length n.

    Returns
    -------
    bivector: numpy.ndarray
        Skew n x n matrix.

    Raises
    ------
    ValueError
        If the vectors have different lengths.

    Examples
    --------
    >>> wedge([1, 0, 0], [0, 1, 0]).tolist()
    [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim != 1 or u.shape != v.shape:
        raise ValueError(f"Wedge needs two vectors of equal length, got {u.shape} and {v.shape}.")
    product = np.outer(u, v)
    return product - product.T


def basis_bivector(n, i, j):
    """``E_i ^ E_j`` in so(n) for 0-based indices."""
    e = np.eye(n)
    return wedge(e[i], e[j])


def commutator(A, B):
    """
    Matrix commutator ``[A, B] = AB - BA``.

    Raises
    ------
    ValueError
        If the matrices have different dimensions.
    """
    A = _check_square(A)
    B = _check_square(B)
    _check_same_dimension(A, B)
    return A @ B - B @ A


def inner(A, B):
    """
    Invariant scalar product on so(n), ``<A, B> = -tr(AB)/2``.

    On skew matrices this equals ``sum(A * B) / 2``, which is how it is
    evaluated.

    Examples
    --------
    >>> e12 = basis_bivector(3, 0, 1)
    >>> float(inner(e12, e12))
    1.0
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _check_same_dimension(A, B)
    return 0.5 * float(np.sum(A * B))


MODELS = ("so", "so_so", "e_n")


def pairing(model, x, y):
    """
    Scalar product on the phase space of ``model``.

    Parameters
    ----------
    model: str
        ``"so"`` (free body), ``"so_so"`` (so(n) x so(n)) or ``"e_n"``
        (so(n) x R^n).
    x, y: tuple
        ``(momentum, field)`` pairs; the field is ``None`` for ``"so"``.

    Returns
    -------
    value: float
        ``<xi1, xi2> + <eta1, eta2>`` with the invariant product on the
        matrix parts and the Euclidean product on the vector part of e(n).

    Raises
    ------
    ValueError
        If ``model`` is unknown.
    """
    if model not in MODELS:
        raise ValueError(f"Unknown model tag '{model}', expected one of {MODELS}.")
    value = inner(x[0], y[0])
    if model == "so_so":
        value += inner(x[1], y[1])
    elif model == "e_n":
        value += float(np.dot(x[1], y[1]))
    return value


@dataclass(frozen=True)
class SymmetryPattern:
    """Block structure ``J_1 = ... = J_l1 = a_1, ..., J_(n-lp+1) = ... = J_n = a_p`` of a mass tensor.

    Attributes
    ----------
    lengths: tuple of int
        Block lengths ``l_1, ..., l_p``.
    values: tuple of float
        Pairwise distinct block values ``a_1, ..., a_p``.
    """
    lengths: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(int(l) for l in self.lengths))
        object.__setattr__(self, "values", tuple(float(a) for a in self.values))
        if len(self.lengths) != len(self.values):
            raise ValueError("A symmetry pattern needs one value per block.")
        if any(l <= 0 for l in self.lengths):
            raise ValueError(f"Block lengths must be positive, got {self.lengths}.")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"Block values must be pairwise distinct, got {self.values}.")

    @classmethod
    def from_diagonal(cls, J):
        """Group consecutive equal entries of ``J``; raises if a value reappears later."""
        J = [float(j) for j in J]
        lengths, values = [], []
        for j in J:
            if values and j == values[-1]:
                lengths[-1] += 1
            else:
                lengths.append(1)
                values.append(j)
        if len(set(values)) != len(values):
            raise ValueError(f"Equal entries of the mass tensor {J} must form consecutive blocks.")
        return cls(tuple(lengths), tuple(values))

    @property
    def n(self):
        return sum(self.lengths)

    def __repr__(self):
        return "<SymmetryPattern: %s>" % ", ".join(f"{l}x{a:g}" for l, a in zip(self.lengths, self.values))

    def labels(self):
        """Block index of every coordinate 0..n-1."""
        return np.repeat(np.arange(len(self.lengths)), self.lengths)

    def diagonal(self):
        return np.repeat(np.array(self.values), self.lengths)

    def mask(self):
        """Boolean n x n mask of index pairs inside one block."""
        labels = self.labels()
        return labels[:, None] == labels[None, :]


def project(pattern, X):
    """
    Split ``X`` into its block part (in so(l1)+...+so(lp)) and the rest.

    Parameters
    ----------
    pattern: SymmetryPattern
        Block structure of dimension n.
    X: array_like
        Skew n x n matrix.

    Returns
    -------
    X_h, X_v: numpy.ndarray
        ``X_h`` keeps the entries with both indices in one block, ``X_v`` the
        others; ``X_h + X_v == X`` and ``<X_h, X_v> == 0``.

    Raises
    ------
    ValueError
        If the pattern dimension differs from the matrix dimension.
    """
    X = _check_square(X)
    if pattern.n != X.shape[0]:
        raise ValueError(f"Pattern of dimension {pattern.n} does not fit a {X.shape[0]}x{X.shape[0]} matrix.")
    mask = pattern.mask()
    return np.where(mask, X, 0.0), np.where(mask, 0.0, X)


def hat3(v):
    """
    The matrix of ``x -> v x x`` in so(3).

    Examples
    --------
    >>> vee3(hat3([1.0, 2.0, 3.0])).tolist()
    [1.0, 2.0, 3.0]
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"hat3 needs a 3-vector, got shape {v.shape}.")
    upper = np.zeros((3, 3))
    upper[0, 1] = -v[2]
    upper[0, 2] = v[1]
    upper[1, 2] = -v[0]
    return upper - upper.T


def vee3(A):
    """Inverse of :func:`hat3`."""
    A = _check_square(A)
    if A.shape != (3, 3):
        raise ValueError(f"vee3 needs a 3x3 matrix, got shape {A.shape}.")
    if np.any(A != -A.T):
        raise ValueError("vee3 needs a skew-symmetric matrix.")
    return np.array([A[2, 1], A[0, 2], A[1, 0]])


def random_skew(n, rng, scale=1.0):
    """Entries uniform in ``[-scale, scale]``, skew-symmetrised."""
    return as_skew(rng.uniform(-scale, scale, size=(n, n)))


class Subalgebra:
    """A subalgebra h of so(n) with an orthonormal basis.

    Built either from the blocks of a :class:`SymmetryPattern`
    (``so(l1) + ... + so(lp)``) or as the centralizer of a matrix. The
    orthogonal complement in so(n) is v.

    Attributes
    ----------
    n: int
        Ambient dimension.
    basis: list of numpy.ndarray
        Orthonormal basis of h with respect to :func:`inner`.
    labels: list of str
        Name of each basis element.
    pattern: SymmetryPattern or None
        Set for block subalgebras, whose projection is exact masking.
    """
    def __init__(self, n, basis, labels, pattern=None):
        self.n = n
        self.basis = [freeze(b) for b in basis]
        self.labels = list(labels)
        self.pattern = pattern

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return "<Subalgebra: dim %s in so(%s)>" % (len(self), self.n)

    @classmethod
    def from_pattern(cls, pattern):
        n = pattern.n
        mask = pattern.mask()
        pairs = [(i, j) for i, j in combinations(range(n), 2) if mask[i, j]]
        basis = [basis_bivector(n, i, j) for i, j in pairs]
        labels = [f"K[{i + 1},{j + 1}]" for i, j in pairs]
        return cls(n, basis, labels, pattern=pattern)

    @classmethod
    def centralizer(cls, X, rel_tol=1e-10):
        """The subalgebra ``{Y in so(n) : [Y, X] = 0}``, from the null space of ``ad_X``."""
        X = _check_square(X)
        n = X.shape[0]
        pairs = list(combinations(range(n), 2))
        ad = np.column_stack([upper(commutator(X, basis_bivector(n, i, j))) for i, j in pairs])
        _, sigma, vt = np.linalg.svd(ad)
        cutoff = rel_tol * max(sigma[0] if sigma.size else 0.0, 1.0)
        rank = int(np.sum(sigma > cutoff))
        null = vt[rank:]
        basis = [from_upper(row, n) for row in null]
        labels = [f"<K,h{a + 1}>" for a in range(len(basis))]
        return cls(n, basis, labels)

    def project(self, X):
        """Orthogonal projection of ``X`` onto h."""
        if self.pattern is not None:
            return project(self.pattern, X)[0]
        X = _check_square(X)
        result = np.zeros((self.n, self.n))
        for b in self.basis:
            result += inner(X, b) * b
        return as_skew(result)

    def contains(self, X, tol=1e-12):
        X = _check_square(X)
        return float(np.max(np.abs(X - self.project(X)), initial=0.0)) <= tol * max(1.0, float(np.max(np.abs(X), initial=0.0)))

    def is_commutative(self, tol=1e-12):
        return all(np.max(np.abs(commutator(a, b))) <= tol for a, b in combinations(self.basis, 2))
