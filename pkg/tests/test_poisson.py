import pytest
import numpy as np
from itertools import combinations
from gyrotop.poisson import (IntegralFamily, PhasePoint, ScalarField, bracket, bracket_field, casimirs,
                             constant_field, coordinate_field, dimension, finite_difference_gradient, flatten,
                             linear_field, random_point, random_quadratic_field)
from gyrotop.skew import basis_bivector, pairing, random_skew, vee3


def delta(i, j):
    return 1.0 if i == j else 0.0


# ------------- Test phase spaces -------------
def test_dimension():
    assert dimension("so", 4) == 6
    assert dimension("so_so", 3) == 6
    assert dimension("e_n", 3) == 6
    assert dimension("e_n", 5) == 15

    with pytest.raises(ValueError) as exception:
        dimension("su", 3)
    assert "Unknown model tag 'su'" in str(exception.value)


def test_flatten_matches_pairing():
    rng = np.random.default_rng(0)
    for model in ("so", "so_so", "e_n"):
        x = random_point(model, 4, rng)
        y = random_point(model, 4, rng)
        assert x.to_vector().shape == (dimension(model, 4),)
        assert x.to_vector() @ y.to_vector() == pytest.approx(
            pairing(model, (x.momentum, x.field), (y.momentum, y.field)), abs=1e-14)
        z = PhasePoint.from_vector(model, 4, x.to_vector())
        assert np.array_equal(z.momentum, x.momentum)


def test_phase_point():
    x = PhasePoint("e_n", basis_bivector(3, 0, 1), [0, 0, 1], "magnetic")
    assert str(x) == "<PhasePoint: e_n n=3 magnetic>"
    assert x.n == 3
    L = 2 * basis_bivector(3, 1, 2)
    K = x.to_standard(L)
    assert K.representation == "standard"
    assert np.array_equal(K.momentum, x.momentum + L)
    assert np.array_equal(K.to_magnetic(L).momentum, x.momentum)
    assert K.to_standard(L) is K
    moved = x.moved((basis_bivector(3, 0, 2), np.array([1.0, 0, 0])), dt=0.5)
    assert moved.momentum[0, 2] == 0.5 and moved.field.tolist() == [0.5, 0.0, 1.0]
    # points are immutable
    with pytest.raises(ValueError):
        x.momentum[0, 1] = 5.0


def test_phase_point_errors():
    with pytest.raises(ValueError) as exception:
        PhasePoint("so", np.zeros((3, 3)), np.zeros(3))
    assert "The so model has no field part." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        PhasePoint("so_so", np.zeros((3, 3)))
    assert "The so_so model needs a field part." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        PhasePoint("e_n", np.zeros((3, 3)), np.zeros(4))
    assert "The field of an e_n point must be a 3-vector, got (4,)." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        PhasePoint("so_so", np.zeros((3, 3)), np.zeros((4, 4)))
    assert "The field of a so_so point must be 3x3, got (4, 4)." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        PhasePoint("so", np.zeros((3, 3)), representation="body")
    assert "Unknown representation 'body'" in str(exception.value)


# ------------- Test brackets -------------
def test_structure_relations_so():
    n = 4
    x = random_point("so", n, np.random.default_rng(1))
    K = x.momentum
    pairs = list(combinations(range(n), 2))
    for a, b in pairs:
        for c, d in pairs:
            F = coordinate_field("so", n, "momentum", a, b)
            G = coordinate_field("so", n, "momentum", c, d)
            expected = -(delta(b, c) * K[a, d] - delta(a, c) * K[b, d] - delta(b, d) * K[a, c] + delta(a, d) * K[b, c])
            assert bracket(None, F, G, x) == pytest.approx(expected, abs=1e-15)


def test_structure_relations_e_n():
    n = 4
    x = random_point("e_n", n, np.random.default_rng(2))
    gamma = x.field
    for a, b in combinations(range(n), 2):
        M = coordinate_field("e_n", n, "momentum", a, b)
        for k in range(n):
            G = coordinate_field("e_n", n, "field", k)
            expected = -gamma[a] * delta(b, k) + gamma[b] * delta(a, k)
            assert bracket(None, M, G, x) == pytest.approx(expected, abs=1e-15)
    for i, j in combinations(range(n), 2):
        assert bracket(None, coordinate_field("e_n", n, "field", i), coordinate_field("e_n", n, "field", j), x) == 0.0


def test_structure_relations_so_so():
    n = 3
    x = random_point("so_so", n, np.random.default_rng(3))
    G = x.field
    pairs = list(combinations(range(n), 2))
    for a, b in pairs:
        for c, d in pairs:
            K_ab = coordinate_field("so_so", n, "momentum", a, b)
            G_cd = coordinate_field("so_so", n, "field", c, d)
            G_ab = coordinate_field("so_so", n, "field", a, b)
            expected = -(delta(b, c) * G[a, d] - delta(a, c) * G[b, d] - delta(b, d) * G[a, c] + delta(a, d) * G[b, c])
            assert bracket(None, K_ab, G_cd, x) == pytest.approx(expected, abs=1e-15)
            assert bracket(None, G_ab, G_cd, x) == 0.0


def test_magnetic_bracket_is_shifted():
    # {K_ab, K_cd}_L at M equals the standard bracket at K = M + L
    n = 4
    rng = np.random.default_rng(4)
    L = random_skew(n, rng)
    x = random_point("so_so", n, rng, "magnetic")
    F = coordinate_field("so_so", n, "momentum", 0, 1)
    G = coordinate_field("so_so", n, "momentum", 1, 3)
    assert bracket(L, F, G, x) == pytest.approx(bracket(None, F, G, x.to_standard(L)), abs=1e-15)
    assert bracket(L, F, G, x) == pytest.approx(-(x.momentum[0, 3] + L[0, 3]), abs=1e-15)


def test_antisymmetry():
    rng = np.random.default_rng(5)
    for model in ("so", "so_so", "e_n"):
        F = random_quadratic_field(model, 4, rng)
        G = random_quadratic_field(model, 4, rng)
        L = random_skew(4, rng)
        x = random_point(model, 4, rng, "magnetic")
        assert bracket(L, F, G, x) == pytest.approx(-bracket(L, G, F, x), abs=1e-13)
        assert abs(bracket(L, F, F, x)) < 1e-13


def test_bracket_errors():
    x = random_point("e_n", 3, np.random.default_rng(6))
    F = coordinate_field("so_so", 3, "momentum", 0, 1)
    G = coordinate_field("e_n", 3, "field", 0)
    with pytest.raises(ValueError) as exception:
        bracket(None, F, G, x)
    assert "Field 'K[1,2]' lives on so_so, the point on e_n." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        bracket(np.eye(3), G, G, x)
    assert "The gyroscope momentum must be skew-symmetric." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        coordinate_field("so", 3, "field", 0, 1)
    assert "No 'field' coordinates on model so." in str(exception.value)


def _field_coefficient(model, rng):
    if model == "so_so":
        return random_skew(4, rng)
    if model == "e_n":
        return rng.uniform(-1, 1, 4)
    return None


def test_bracket_of_linear_fields():
    rng = np.random.default_rng(7)
    L = random_skew(4, rng)
    for model in ("so", "so_so", "e_n"):
        F = linear_field(model, random_skew(4, rng), _field_coefficient(model, rng), 0.3)
        G = linear_field(model, random_skew(4, rng), _field_coefficient(model, rng))
        FG = bracket_field(L, F, G)
        assert FG.linear is not None
        assert FG.label == "{linear, linear}"
        for _ in range(3):
            x = random_point(model, 4, rng, "magnetic")
            assert FG(x) == pytest.approx(bracket(L, F, G, x), abs=1e-14)


# ------------- Test Casimirs -------------
def test_casimir_counts():
    assert len(casimirs("so_so", 5)) == 4
    assert len(casimirs("e_n", 4)) == 2
    assert len(casimirs("e_n", 5)) == 3
    assert len(casimirs("so", 5)) == 2
    assert str(casimirs("e_n", 3)) == "<IntegralFamily: 2 casimir on e_n n=3>"
    assert casimirs("so_so", 4).labels == ["P1", "P2", "Q1", "Q2"]

    with pytest.raises(ValueError) as exception:
        casimirs("so", 2)
    assert "Casimir families need n >= 3, got 2." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        casimirs("so", 4, representation="body")
    assert "Unknown representation 'body'" in str(exception.value)


def test_e3_casimirs():
    x = random_point("e_n", 3, np.random.default_rng(8))
    q1, q2 = casimirs("e_n", 3)
    assert q1(x) == pytest.approx(x.field @ x.field, abs=1e-14)
    assert q2(x) == pytest.approx((vee3(x.momentum) @ x.field) ** 2, abs=1e-14)


@pytest.mark.parametrize("model,n", [("so", 4), ("so", 5), ("so_so", 3), ("so_so", 4), ("e_n", 3), ("e_n", 4),
                                     ("e_n", 5)])
def test_casimirs_commute(model, n):
    rng = np.random.default_rng(9)
    family = casimirs(model, n)
    for _ in range(5):
        x = random_point(model, n, rng)
        G = random_quadratic_field(model, n, rng)
        for C in family:
            assert abs(bracket(None, C, G, x)) < 1e-10


def test_magnetic_casimirs():
    rng = np.random.default_rng(10)
    L = random_skew(4, rng)
    family = casimirs("so_so", 4, "magnetic", L)
    x = random_point("so_so", 4, rng, "magnetic")
    standard = casimirs("so_so", 4)
    for C, C0 in zip(family, standard):
        assert C(x) == pytest.approx(C0(x.to_standard(L)), rel=1e-13)
        assert abs(bracket(L, C, random_quadratic_field("so_so", 4, rng), x)) < 1e-10


@pytest.mark.parametrize("model,n", [("so", 4), ("so_so", 4), ("e_n", 4), ("e_n", 5)])
def test_casimir_gradients(model, n):
    x = random_point(model, n, np.random.default_rng(11))
    for C in casimirs(model, n):
        analytic = flatten(model, *C.gradient(x))
        numeric = flatten(model, *finite_difference_gradient(C, x))
        assert np.allclose(analytic, numeric, atol=1e-6)


# ------------- Test scalar fields -------------
def test_field_algebra():
    rng = np.random.default_rng(12)
    x = random_point("so_so", 3, rng)
    F = random_quadratic_field("so_so", 3, rng, "F")
    G = coordinate_field("so_so", 3, "field", 0, 2)
    assert (F + G)(x) == pytest.approx(F(x) + G(x))
    assert (F - 2.0)(x) == pytest.approx(F(x) - 2.0)
    assert (3 * G)(x) == pytest.approx(3 * x.field[0, 2])
    assert (3 * G).linear is not None
    product = F * G
    assert product.label == "F*G[1,3]"
    assert np.allclose(flatten("so_so", *product.gradient(x)),
                       flatten("so_so", *finite_difference_gradient(product, x)), atol=1e-6)
    assert constant_field(2.5)(x) == 2.5


def test_shifted_field():
    n = 3
    L = basis_bivector(n, 0, 1)
    F = coordinate_field("so", n, "momentum", 0, 1)
    shifted = F.shifted(L, scale=2.0)
    x = PhasePoint("so", 0.5 * basis_bivector(n, 0, 1))
    assert shifted(x) == 2.5
    assert shifted.linear[2] == 2.0
    assert np.array_equal(shifted.gradient(x)[0], F.gradient(x)[0])


def test_scalar_field_errors():
    with pytest.raises(ValueError) as exception:
        ScalarField("E", lambda x: 0.0, kind="energy")
    assert "Unknown field kind 'energy'" in str(exception.value)


def test_integral_family():
    rng = np.random.default_rng(13)
    family = casimirs("e_n", 4) + IntegralFamily("e_n", 4, [coordinate_field("e_n", 4, "field", 3)])
    assert len(family) == 3
    assert family.kinds == ["casimir", "casimir", "function"]
    assert len(family.of_kind("casimir")) == 2
    x = random_point("e_n", 4, rng)
    assert family.values(x)[2] == x.field[3]
    assert family.gradient_matrix(x).shape == (3, 10)
    assert IntegralFamily("e_n", 4).gradient_matrix(x).shape == (0, 10)

    with pytest.raises(ValueError) as exception:
        family + casimirs("so", 4)
    assert "Cannot join families on e_n/4 and so/4." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        family.values(random_point("e_n", 3, rng))
    assert "Point on e_n/3 does not match family on e_n/4." in str(exception.value)
