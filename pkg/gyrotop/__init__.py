from gyrotop.skew import SymmetryPattern, Subalgebra, as_skew, commutator, from_triples, hat3, inner, vee3, wedge
from gyrotop.poisson import IntegralFamily, PhasePoint, ScalarField, bracket, casimirs
from gyrotop.models import ModelSpec, ModelValidationError, example_spec, hamiltonian, validate, vector_field
from gyrotop.lax import LaxPolynomial, build_lax, lax_residual, shift_integrals, spectral_invariants
from gyrotop.integrate import ConvergenceError, Trajectory, simulate, step
from gyrotop.diagnostics import (completeness_count, crosscheck_so3, independence_rank, involution_matrix,
                                 poisson_map_check)
from gyrotop.zhukovskiy import ZhGeometry, zh_state, zh_trace, zh_verify
from gyrotop.load import load_config
