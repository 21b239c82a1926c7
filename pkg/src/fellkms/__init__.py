"""KMS states and traces for twisted groupoid algebras, lattices and k-graphs."""

__version__ = "0.1.0"

from .algebra import (AlgElement, LinearFunctional, TraceSpace, convolve, evolve, gram_matrix,
                      i_norm, kms_defect, positivity_check, star, trace_space)
from .circle import UnitCircleValue, parse_angle
from .errors import DepthExceededError, InputError, NotAStateError, PreconditionError
from .groupoid import (FiniteGroupoid, OneCocycle, TwoCocycle, action_groupoid, coboundary,
                       group_as_groupoid, isotropy, pair_groupoid, validate_groupoid,
                       validate_one_cocycle, validate_two_cocycle)
from .lattice import (Bicharacter, LatticeSubgroup, antisym_pairing, lattice_trace_from_character,
                      omega_from_generators, restriction_upsilon, z_omega)
from .measures import UnitMeasure, quasi_invariance_residual, quasi_invariant_extremes
from .states import (TraceField, assemble_theta, check_condition_II, extract_pair,
                     gauge_vanishing_check, kms_simplex)
