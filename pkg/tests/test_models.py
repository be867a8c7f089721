import pytest
import numpy as np
from gyrotop.models import (CLASSICAL, FAMILIES, ModelSpec, ModelValidationError, angular_velocity, classical_point,
                            classical3_integral, cross_product_field, example_spec, fourth_integral,
                            generic_point, hamiltonian, hamiltonian_field, hamiltonian_offset, manakov_apply,
                            manakov_invert, mass_from_alpha, validate, validated, vector_field)
from gyrotop.poisson import directional_derivative, flatten, hamiltonian_vector_field
from gyrotop.skew import basis_bivector, inner, random_skew, vee3

SPECS = [("lagrange_so_so", 3), ("lagrange_so_so", 4), ("bitop", 4), ("totally_symmetric", 3),
         ("totally_symmetric", 5), ("belyaev_e_n", 3), ("belyaev_e_n", 4), ("manakov_gyro", 4),
         ("manakov_gyro", 5), ("classical3_euler", 3), ("classical3_lagrange", 3), ("classical3_kowalevski", 3)]


# ------------- Test ModelSpec -------------
def test_model_spec():
    spec = ModelSpec("bitop", 4, J=[1, 1, 2, 2], chi=basis_bivector(4, 0, 1))
    assert str(spec) == "<ModelSpec: bitop n=4 magnetic>"
    assert spec.model == "so_so"
    assert spec.alpha == (1.0, 2.0)
    assert spec.pattern().lengths == (2, 2)
    assert np.array_equal(spec.L, np.zeros((4, 4)))
    assert spec.weights()[0, 3] == 3.0 and spec.weights()[2, 2] == 0.0

    standard = spec.replace(representation="standard")
    assert str(standard) == "<ModelSpec: bitop n=4 standard>"
    assert np.array_equal(standard.chi, spec.chi)


def test_classical_spec():
    spec = ModelSpec("classical3_euler", 3, inertia=[1, 2, 3], L=[0.1, 0.2, 0.3])
    assert spec.classical and spec.J is None
    assert vee3(spec.L).tolist() == [0.1, 0.2, 0.3]
    assert spec.weights().tolist() == [[0.0, 3.0, 2.0], [3.0, 0.0, 1.0], [2.0, 1.0, 0.0]]
    assert ModelSpec("classical3_kowalevski", 3).inertia.tolist() == [1.0, 1.0, 0.5]
    # the Manakov operator on so(3) is a classical inertia tensor
    assert ModelSpec("manakov_gyro", 3, J=[1, 2, 3]).inertia.tolist() == [5.0, 4.0, 3.0]


def test_model_spec_errors():
    with pytest.raises(ValueError) as exception:
        ModelSpec("heavy_top", 3, J=[1, 1, 1])
    assert "Unknown family 'heavy_top'" in str(exception.value)

    with pytest.raises(ValueError) as exception:
        ModelSpec("classical3_euler", 4)
    assert "Family classical3_euler lives in dimension 3, got n=4." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        ModelSpec("bitop", 4)
    assert "Family bitop needs a mass tensor J." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        ModelSpec("manakov_gyro", 4, J=[1, 1, 2, 2], chi=basis_bivector(4, 0, 1))
    assert "The free body has no field coupling chi." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        ModelSpec("belyaev_e_n", 4, J=[1, 1, 1, 2], chi=[0, 0, 1])
    assert "chi must be a 4-vector for belyaev_e_n, got shape (3,)." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        ModelSpec("bitop", 4, J=[1, 1, 2, 2], L=np.zeros((3, 3)))
    assert "L must be a 4x4 skew matrix, got shape (3, 3)." in str(exception.value)

    with pytest.raises(ValueError) as exception:
        ModelSpec("manakov_gyro", 4, J=[1, 2, 3, 4]).alpha
    assert "Family manakov_gyro has no alpha parameters." in str(exception.value)


def test_mass_from_alpha():
    assert mass_from_alpha("bitop", 4, [1, 2]).tolist() == [1.0, 1.0, 2.0, 2.0]
    assert mass_from_alpha("belyaev_e_n", 4, [1, 2]).tolist() == [1.0, 1.0, 1.0, 2.0]
    assert mass_from_alpha("totally_symmetric", 3, [0.5]).tolist() == [0.5, 0.5, 0.5]

    with pytest.raises(ValueError) as exception:
        mass_from_alpha("bitop", 4, [1.0])
    assert "Family bitop needs alpha = [alpha1, alpha2], got [1.0]." in str(exception.value)


# ------------- Test validation -------------
def test_validate_structure():
    assert validate(ModelSpec("bitop", 5, J=[1, 1, 2, 2, 2])) == ["bitop requires n=4"]
    assert validate(ModelSpec("lagrange_so_so", 4, J=[1, 2, 2, 2])) == [
        "J of lagrange_so_so must follow the pattern of alpha, got [1.0, 2.0, 2.0, 2.0]"]
    assert validate(ModelSpec("belyaev_e_n", 4, J=[1, 1, 1, 1])) == ["belyaev_e_n needs alpha1 != alpha2"]
    assert validate(ModelSpec("totally_symmetric", 3, J=[1, 1, 2])) == [
        "totally_symmetric needs J = alpha1*Id, got [1.0, 1.0, 2.0]"]
    assert validate(ModelSpec("manakov_gyro", 4, J=[1, 2, 1, 2])) == [
        "Equal entries of the mass tensor [1.0, 2.0, 1.0, 2.0] must form consecutive blocks."]
    assert validate(ModelSpec("bitop", 4, J=[1, 1, -2, -2])) == ["J must be positive, got [1.0, 1.0, -2.0, -2.0]"]


def test_validate_couplings():
    spec = ModelSpec("bitop", 4, J=[1, 1, 2, 2], chi=basis_bivector(4, 0, 2))
    assert validate(spec) == ["chi must be chi12 E1^E2 + chi34 E3^E4 for bitop"]
    spec = ModelSpec("belyaev_e_n", 4, J=[1, 1, 1, 2], chi=[0.1, 0, 0, 1])
    assert validate(spec) == ["chi must be chi_n e_n for belyaev_e_n"]
    spec = ModelSpec("belyaev_e_n", 4, J=[1, 1, 1, 2], chi=[0, 0, 0, 1], L=basis_bivector(4, 2, 3))
    assert validate(spec) == ["L is not in h: belyaev_e_n needs L in so(3)+so(1)"]
    chi = basis_bivector(3, 0, 1)
    spec = ModelSpec("totally_symmetric", 3, J=[1, 1, 1], chi=chi, L=basis_bivector(3, 1, 2))
    assert validate(spec) == ["L is not in h: totally_symmetric needs [L, chi] = 0"]
    assert validate(spec.replace(L=2.5 * chi)) == []


def test_validate_classical():
    spec = ModelSpec("classical3_euler", 3, inertia=[1, 2, 3], chi=[0, 0, 1])
    assert validate(spec) == ["classical3_euler needs chi = 0"]
    spec = ModelSpec("classical3_lagrange", 3, inertia=[1, 2, 3], chi=[1, 0, 1], L=[0, 1, 1])
    assert validate(spec) == ["classical3_lagrange needs I = diag(A, A, C)",
                              "classical3_lagrange needs chi = (0, 0, chi3)",
                              "classical3_lagrange needs L = (0, 0, eta)"]
    spec = ModelSpec("classical3_kowalevski", 3, inertia=[1, 1, 1], chi=[0, 1, 0])
    assert validate(spec) == ["classical3_kowalevski needs I = diag(1, 1, 1/2)",
                              "classical3_kowalevski needs chi = (chi1, 0, 0)"]
    spec = ModelSpec("classical3_euler", 3, inertia=[1, 0, 3])
    assert validate(spec) == ["I must be positive, got [1.0, 0.0, 3.0]"]


def test_validated():
    spec = ModelSpec("bitop", 4, J=[1, 1, 2, 2])
    assert validated(spec) is spec
    with pytest.raises(ModelValidationError) as exception:
        validated(ModelSpec("manakov_gyro", 4, J=[1, 1, 2, 2], L=basis_bivector(4, 0, 2)))
    assert exception.value.violations == ["L is not in h: manakov_gyro needs L in so(2)+so(2)",
                                          "manakov_gyro needs [L, J] = 0"]
    assert str(exception.value).startswith("Model validation failed: L is not in h")


@pytest.mark.parametrize("family,n", SPECS)
def test_example_specs(family, n):
    spec = example_spec(family, n if family not in CLASSICAL else None)
    assert validate(spec) == []
    assert spec.model == FAMILIES[family]
    assert np.any(spec.L != 0)


# ------------- Test energy -------------
def test_manakov_operator():
    J = [1.0, 2.0, 4.0]
    Omega = random_skew(3, np.random.default_rng(0))
    M = manakov_apply(J, Omega)
    assert np.allclose(M, np.diag(J) @ Omega + Omega @ np.diag(J), atol=1e-15)
    assert np.allclose(manakov_invert(J, M), Omega, atol=1e-15)

    with pytest.raises(ValueError) as exception:
        manakov_invert([1.0, -1.0, 2.0], M)
    assert "The Manakov operator is singular" in str(exception.value)


@pytest.mark.parametrize("family,n", SPECS)
def test_hamiltonian_offset(family, n):
    spec = example_spec(family, n if family not in CLASSICAL else None)
    x = generic_point(spec, np.random.default_rng(1), "magnetic")
    offset = hamiltonian(spec, x) - hamiltonian(spec, x.to_standard(spec.L))
    assert offset == pytest.approx(hamiltonian_offset(spec), abs=1e-13)
    assert hamiltonian_offset(spec) == pytest.approx(0.5 * inner(spec.L, angular_velocity(spec, spec.L)))


def test_hamiltonian_errors():
    spec = example_spec("bitop")
    x = generic_point(example_spec("belyaev_e_n", 4), np.random.default_rng(2))
    with pytest.raises(ValueError) as exception:
        hamiltonian(spec, x)
    assert "Point on e_n n=4 does not match bitop on so_so n=4." in str(exception.value)


# ------------- Test equations of motion -------------
@pytest.mark.parametrize("family,n", SPECS)
@pytest.mark.parametrize("representation", ["magnetic", "standard"])
def test_vector_field_is_hamiltonian(family, n, representation):
    spec = example_spec(family, n if family not in CLASSICAL else None, representation=representation)
    L_gyro = spec.L if representation == "magnetic" else None
    H = hamiltonian_field(spec)
    rng = np.random.default_rng(3)
    for _ in range(3):
        x = generic_point(spec, rng)
        closed = flatten(spec.model, *vector_field(spec, x))
        generated = flatten(spec.model, *hamiltonian_vector_field(L_gyro, H, x))
        assert np.allclose(closed, generated, atol=1e-12)


@pytest.mark.parametrize("family,n", SPECS)
def test_energy_is_conserved(family, n):
    spec = example_spec(family, n if family not in CLASSICAL else None)
    H = hamiltonian_field(spec)
    x = generic_point(spec, np.random.default_rng(4))
    assert abs(directional_derivative(H, x, vector_field(spec, x))) < 1e-12


def test_cross_product_form():
    spec = example_spec("classical3_kowalevski")
    m, gamma = np.array([0.3, -0.5, 0.8]), np.array([0.6, 0.0, 0.8])
    m_rate, gamma_rate = cross_product_field(spec.inertia, vee3(spec.L), spec.chi, m, gamma)
    d_momentum, d_field = vector_field(spec, classical_point(m, gamma))
    assert np.allclose(vee3(d_momentum), m_rate, atol=1e-15)
    assert np.array_equal(d_field, gamma_rate)
    omega = m / spec.inertia
    assert np.allclose(gamma_rate, np.cross(gamma, omega), atol=1e-15)


# ------------- Test the fourth integral -------------
@pytest.mark.parametrize("family", CLASSICAL)
def test_fourth_integral_is_conserved(family):
    spec = example_spec(family)
    F = fourth_integral(spec)
    rng = np.random.default_rng(5)
    for _ in range(5):
        x = generic_point(spec, rng)
        assert abs(directional_derivative(F, x, vector_field(spec, x))) < 1e-11


def test_fourth_integral_values():
    spec = ModelSpec("classical3_euler", 3, inertia=[1, 2, 3], L=[0, 1, 0])
    x = classical_point([1, 0, 0], [0, 0, 1])
    assert classical3_integral(spec, x) == 2.0
    spec = example_spec("classical3_lagrange")
    assert classical3_integral(spec, classical_point([0.1, 0.2, 0.3], [0, 0, 1])) == pytest.approx(0.3)
    assert classical3_integral(spec, classical_point([0.1, 0.2, 0.3], [0, 0, 1]).to_standard(spec.L)) == \
        pytest.approx(0.3)

    with pytest.raises(ValueError) as exception:
        fourth_integral(example_spec("bitop"))
    assert "Family bitop has no classical fourth integral." in str(exception.value)


def test_kowalevski_without_gyroscope():
    # with L = 0 the quartic is |(K1 + iK2)^2 - 2chi1(G1 + iG2)|^2
    spec = ModelSpec("classical3_kowalevski", 3, chi=[1.0, 0, 0])
    m, gamma = np.array([0.4, -0.3, 0.9]), np.array([0.2, 0.5, -0.7])
    z = (m[0] + 1j * m[1]) ** 2 - 2 * (gamma[0] + 1j * gamma[1])
    assert classical3_integral(spec, classical_point(m, gamma)) == pytest.approx(abs(z) ** 2, abs=1e-14)
