"""Functions to load run configurations and write reports."""
import json
import os
import numpy as np

from .checks import DEFAULT_TOLERANCES
from .integrate import METHODS
from .models import CLASSICAL, FAMILIES, ModelSpec, classical_point, generic_point, mass_from_alpha, validated
from .poisson import REPRESENTATIONS, PhasePoint
from .skew import from_triples

NECESSARY_KEYS = ("family", "n")
OPTIONAL_KEYS = ("J", "alpha", "I", "chi", "L", "representation", "init", "integrator", "dt", "T", "convergence_dt",
                 "m_transformed", "seed", "tolerances")
INIT_KEYS = ("momentum", "field")


class RunConfig:
    """A validated spec with the parameters of one run.

    Attributes
    ----------
    spec: ModelSpec
        Validated system.
    init: PhasePoint or None
        Initial point; ``None`` draws one from the seeded generator.
    integrator: str
        ``"rk4"`` or ``"implicit_midpoint"`` (default is ``"rk4"``).
    dt, T: float
        Step and final time (defaults 1e-3 and 10).
    convergence_dt: float or None
        Coarse step of the convergence study, 0.02 if unset.
    m_transformed: float
        Mass of the transformed body for the Zhukovskiy trace (default is 1).
    seed: int
        Seed of every random draw of the run (default is 0).
    tolerances: dict
        Overrides of :data:`gyrotop.checks.DEFAULT_TOLERANCES`.
    """
    def __init__(self, spec, init=None, integrator="rk4", dt=1e-3, T=10.0, convergence_dt=None, m_transformed=1.0,
                 seed=0, tolerances=None):
        self.spec = spec
        self.init = init
        self.integrator = integrator
        self.dt = dt
        self.T = T
        self.convergence_dt = convergence_dt
        self.m_transformed = m_transformed
        self.seed = seed
        self.tolerances = dict(tolerances or {})

    def __repr__(self):
        return "<RunConfig: %s n=%s %s dt=%g T=%g seed=%s>" % (
            self.spec.family, self.spec.n, self.integrator, self.dt, self.T, self.seed)

    def initial_point(self, rng):
        """The configured initial point, or a unit-scale draw from ``rng``."""
        if self.init is not None:
            return self.init
        return generic_point(self.spec, rng)


def load_config(file_path):
    """
        Loads a run configuration from a JSON file.

        The file holds one dictionary, for example
        {"family": "manakov_gyro", "n": 4, "J": [1, 1, 2, 2], "L": [[1, 2, 0.5], [3, 4, 0.7]], ...}.
        Skew-symmetric objects are lists of [i, j, value] triples with 1-based
        indices, vectors are lists of reals. The key reference is ``configs/SCHEMA.md``.

        Parameters
        ----------
        file_path: str or pathlib.Path
            Path of the JSON file.

        Returns
        -------
        config: RunConfig
            Validated spec and run parameters.

        Raises
        ------
        OSError
            If the file does not exist.
        TypeError
            If the file is not JSON or a value has the wrong type.
        KeyError
            If a required key is missing or an unknown key is present.
        ValueError
            If a value is not allowed.
        ModelValidationError
            If the model violates the hypotheses of its family.

        Examples
        --------
        >>> load_config("configs/bitop.json")
        <RunConfig: bitop n=4 rk4 dt=0.001 T=10 seed=0>
        """
    does_file_exist(file_path)

    if not str(file_path).endswith(".json"):
        raise TypeError("Input data must be JSON.")
    with open(file_path, encoding="utf-8") as file:
        try:
            dic = json.load(file)
        except json.JSONDecodeError:
            raise TypeError("Input data must be JSON.")

    # Checks if the dictionary structure is as expected
    is_well_structured(dic)
    return dict_to_config(dic)


def dict_to_config(dic):
    """Converts a configuration dictionary into a RunConfig."""
    family = dic["family"]
    n = dic["n"]
    check_family(family)
    check_dimension(n)
    spec = dict_to_spec(dic)

    init = None
    if "init" in dic:
        init = dict_to_point(spec, dic["init"])

    integrator = dic.get("integrator", "rk4")
    check_choice("integrator", integrator, METHODS)
    dt = dic.get("dt", 1e-3)
    T = dic.get("T", 10.0)
    check_positive("dt", dt)
    check_positive("T", T)
    if T < dt:
        raise ValueError(f"T={T} must be at least one step dt={dt}.")
    convergence_dt = dic.get("convergence_dt")
    if convergence_dt is not None:
        check_positive("convergence_dt", convergence_dt)
    m_transformed = dic.get("m_transformed", 1.0)
    check_positive("m_transformed", m_transformed)
    seed = dic.get("seed", 0)
    check_seed(seed)
    tolerances = dic.get("tolerances", {})
    check_tolerances(tolerances)
    return RunConfig(spec, init, integrator, float(dt), float(T), convergence_dt, float(m_transformed), seed,
                     tolerances)


def dict_to_spec(dic):
    """Builds the ModelSpec and validates it against its family."""
    family = dic["family"]
    n = dic["n"]
    model = FAMILIES[family]
    representation = dic.get("representation", "magnetic")
    check_choice("representation", representation, REPRESENTATIONS)

    if family in CLASSICAL:
        for key in ("J", "alpha"):
            if key in dic:
                raise ValueError(f"Classical families take principal moments I, not {key}.")
        inertia = None
        if "I" in dic:
            check_vector("I", dic["I"], 3)
            check_positive_entries("I", dic["I"])
            inertia = dic["I"]
        chi = dic.get("chi")
        if chi is not None:
            check_vector("chi", chi, 3)
        L = dic.get("L")
        if L is not None:
            check_vector("L", L, 3)
        spec = ModelSpec(family, n, chi=chi, L=L, representation=representation, inertia=inertia)
        return validated(spec)

    if "I" in dic:
        raise ValueError("Principal moments I are only used by the classical n=3 families.")
    J = mass_tensor(dic, family, n)
    chi = None
    if "chi" in dic:
        if model == "e_n":
            check_vector("chi", dic["chi"], n)
            chi = dic["chi"]
        else:
            chi = skew_from_config("chi", dic["chi"], n)
    L = skew_from_config("L", dic["L"], n) if "L" in dic else None
    return validated(ModelSpec(family, n, J=J, chi=chi, L=L, representation=representation))


def mass_tensor(dic, family, n):
    """The diagonal mass tensor from ``J`` or from the block values ``alpha``."""
    if ("J" in dic) == ("alpha" in dic):
        raise KeyError(f"Family {family} needs exactly one of the keys J and alpha.")
    if "J" in dic:
        check_vector("J", dic["J"], n)
        check_positive_entries("J", dic["J"])
        return dic["J"]
    alpha = dic["alpha"]
    if type(alpha) != list:
        raise TypeError("alpha must be a list of numbers.")
    check_positive_entries("alpha", alpha)
    return mass_from_alpha(family, n, alpha)


def skew_from_config(name, triples, n):
    check_triples(name, triples, n)
    return from_triples(n, [tuple(triple) for triple in triples])


def dict_to_point(spec, init):
    """The initial point in the representation of ``spec``."""
    if type(init) != dict:
        raise TypeError("init must be a dictionary with keys momentum and field.")
    for key in init:
        if key not in INIT_KEYS:
            raise KeyError(f"Unknown key '{key}' in init. Allowed keys are momentum and field.")
    if "momentum" not in init:
        raise KeyError("Missing key momentum in init.")
    n = spec.n
    if spec.classical:
        check_vector("init.momentum", init["momentum"], 3)
        if "field" not in init:
            raise KeyError("Missing key field in init.")
        check_vector("init.field", init["field"], 3)
        return classical_point(init["momentum"], init["field"], spec.representation)
    momentum = skew_from_config("init.momentum", init["momentum"], n)
    if spec.model == "so":
        if "field" in init:
            raise ValueError(f"Family {spec.family} has no field part.")
        return PhasePoint("so", momentum, None, spec.representation)
    if "field" not in init:
        raise KeyError("Missing key field in init.")
    if spec.model == "e_n":
        check_vector("init.field", init["field"], n)
        field = np.asarray(init["field"], dtype=float)
    else:
        field = skew_from_config("init.field", init["field"], n)
    return PhasePoint(spec.model, momentum, field, spec.representation)


def write_report(path, checks):
    """
    Write a JSON report ``{"checks": [{name, max_residual, tolerance, pass}, ...]}``.

    Parameters
    ----------
    path: str or pathlib.Path
    checks: list of CheckResult
        In report order.
    """
    report = {"checks": [check.to_dict() for check in checks]}
    with open(path, "w", encoding="utf-8") as file_obj:
        json.dump(report, file_obj, indent=2)
        file_obj.write("\n")


# -------function for load config file-----------
def does_file_exist(file_path):
    """Tests if a file path exists."""
    if not os.path.exists(file_path):
        raise OSError("File is not accessible.")


def is_well_structured(dic):
    """Checks if the dictionary structure is as expected."""
    if type(dic) != dict:
        raise TypeError("The input data should be a dictionary")

    for key in NECESSARY_KEYS:
        if key not in dic.keys():
            raise KeyError("Missing keys in dictionary. Must have keys family and n.")

    for key in dic.keys():
        if key not in NECESSARY_KEYS + OPTIONAL_KEYS:
            raise KeyError(f"Unknown key '{key}' in dictionary.")


# -------function for validation-----------
def _is_number(value):
    return type(value) in (int, float)


def check_family(family):
    if type(family) != str:
        raise TypeError("Family must be string.")
    if family not in FAMILIES:
        raise ValueError(f"Unknown family '{family}'. Families are {', '.join(FAMILIES)}.")


def check_dimension(n):
    if type(n) != int:
        raise TypeError("The dimension n must be integer.")
    if n < 3:
        raise ValueError(f"The dimension n must be at least 3, got {n}.")


def check_choice(name, value, options):
    if type(value) != str:
        raise TypeError(f"{name} must be string.")
    if value not in options:
        raise ValueError(f"{name} must be one of {', '.join(options)}, got '{value}'.")


def check_vector(name, vector, length):
    """General function to check a list of reals of a given length."""
    if type(vector) != list:
        raise TypeError(f"{name} {vector} must be a list of numbers.")
    if len(vector) != length:
        raise ValueError(f"{name} {vector} must have {length} entries.")
    for value in vector:
        if not _is_number(value):
            raise TypeError(f"Entries of {name} must be numbers.")


def check_positive_entries(name, vector):
    for value in vector:
        if not _is_number(value):
            raise TypeError(f"Entries of {name} must be numbers.")
        if value <= 0:
            raise ValueError(f"Entries of {name} must be positive.")


def check_triples(name, triples, n):
    """Checks a skew-symmetric matrix given as [i, j, value] triples with 1-based indices."""
    if type(triples) != list:
        raise TypeError(f"{name} must be a list of [i, j, value] triples.")
    for triple in triples:
        if type(triple) != list or len(triple) != 3:
            raise TypeError(f"{name} must be a list of [i, j, value] triples, got {triple}.")
        i, j, value = triple
        if type(i) != int or type(j) != int:
            raise TypeError(f"Indices in {name} must be integer, got {triple}.")
        if not _is_number(value):
            raise TypeError(f"Values in {name} must be numbers, got {triple}.")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"Indices in {name} must lie between 1 and {n}, got {triple}.")
        if i == j:
            raise ValueError(f"A skew-symmetric matrix has no diagonal entry, got {triple} in {name}.")


def check_positive(name, value):
    if not _is_number(value):
        raise TypeError(f"{name} must be a number.")
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}.")


def check_seed(seed):
    if type(seed) != int:
        raise TypeError("The seed must be integer.")
    if seed < 0:
        raise ValueError("The seed must not be negative.")


def check_tolerances(tolerances):
    if type(tolerances) != dict:
        raise TypeError("tolerances must be a dictionary of check names and numbers.")
    for name, value in tolerances.items():
        if name not in DEFAULT_TOLERANCES:
            raise KeyError(f"Unknown tolerance '{name}'.")
        check_positive(f"tolerance {name}", value)
