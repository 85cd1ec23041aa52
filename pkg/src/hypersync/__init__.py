"""Multi-body diffusion operators on hypergraphs and synchronization of coupled maps."""

from .hypergraph import (
    Hyperedge,
    Hypergraph,
    clique_expansion,
    degree,
    diameter,
    is_connected,
    largest_connected_component,
    validate,
)
from .operators import (
    apply_pointwise,
    build_Bm,
    build_C,
    build_Lw,
    clique_laplacian,
    dirichlet_energy,
    edge_operator,
    incidence,
)
from .spectra import Spectrum, eig_sym, is_diffusion_matrix, nonzero_extremes, operator_norm
from .dynamics import (
    MapSpec,
    Trajectory,
    simulate_continuous,
    simulate_discrete,
    step_continuous_rk4,
    step_discrete,
    sync_error,
    variational_discrete,
)

__version__ = "0.1.0"
