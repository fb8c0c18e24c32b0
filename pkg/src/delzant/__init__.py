"""Toric manifolds as symplectic quotients of C^d.

The package realizes compact toric manifolds and their canonical
bundles from integer matrix data: exact lattice checks, moment
polytopes, moment maps through the level-set retraction, Guillemin
potentials with Legendre duals, coordinate atlases, and
Landau-Ginzburg superpotentials with cross-convention checks.
"""

from .config import load_config, load_presentation, to_presentation
from .coords import (ActionAnglePoint, Chart, action_angle,
                     from_action_angle, km_fiber_transition, make_chart,
                     make_km_chart, superpotential_aa, superpotential_homog,
                     to_chart, torus_coords, transition, transition_exponents)
from .errors import (AnchorError, ChartDomainError, ConditioningError,
                     ConfigError, ConsistencyError, ContractError,
                     DomainError, NonDelzantVertexError, NonSmoothError,
                     RankError, ShapeError, SolverError, ToricError)
from .kahler import GuilleminPotential, fulton_moment_p1, fulton_potential_p1
from .lattice import (DelzantReport, IntegerMatrix, PairReport,
                      ToricPresentation, check_exact_pair, delzant_check,
                      extend_to_canonical, kernel_basis, lattices_equal,
                      right_inverse, vertex_right_inverse)
from .polytope import (HalfSpaceSet, VertexRecord, enumerate_vertices,
                       kappa_from_level)
from .reduction import (RetractionResult, cardano_lambda_kp1, in_ua,
                        moment_map, moment_map_closed_kpn,
                        moment_map_closed_pn, moment_n, moment_td, retract)

__version__ = "0.1.0"
