"""Tropical Fermat-Weber points: exact polytrope, gradient descent and a grid oracle."""

__version__ = "0.1.0"

from .covector import (
    CellDescription,
    TypeData,
    cell_inequalities,
    cell_membership,
    half_sector,
    type_data,
)
from .descent import DescentConfig, descend, directional_derivative, gradient, line_search_step, subgradient
from .errors import (
    DimensionError,
    InternalError,
    InvalidInput,
    NegativeCycle,
    TiePresent,
    TropFWError,
    UnboundedDirection,
)
from .flow import build_network, max_flow_oracle, residual, solve_mcf
from .oracle import GridSpec, default_grid, grid_minimize, verify_polytrope
from .solver import FWPolytrope, fw_membership, solve, tropical_vertex_check
from .tropical import fw_objective, normalize, trop_ball_generators, trop_distance
