"""Quantum trace matrices, centers and ranks of quantum tori for stated SL(n) skein algebras."""
from .errors import *  # noqa: F401,F403
from .lattice import (Lattice, ambient_index, antisym_normal_form, hermite_normal_form,
                      index, integer_kernel, kernel_mod, lattice_equal, lattice_sum,
                      smith_normal_form)
from .unity import RootParams, derive_params
from .surface import (ExtendedTriangulation, SurfaceSpec, Triangulation, attach_triangles,
                      builtin, builtin_examples, classify, load_surface, parse_surface)
from .ntriang import (LabeledIntMatrix, SmallVertex, VertexSet, balanced_lattice,
                      h_matrix, n_triangulation, quiver_matrix, small_vertices)
from .trace import (identity_checks, k_matrix, kbar_matrix, p_bar, p_lambda, skeleton,
                    verify_blocks)
from .torus import (QuantumTorus, center_lattice, center_theorem_check, is_central,
                    pi_degree, rank_formula, rank_over_center)
from .reduced import (mu_triangulation, reduced_blocks, reduced_center_check,
                      reduced_rank, reversal_properties)
from .cohomology import (cochain_complex, cocycle_count, exact_sequence_check,
                         restricted_cocycle_count)

__version__ = "0.1.0"
