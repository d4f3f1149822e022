"""Finite-dimensional reduction of evolution operators of linear RFDEs and REs."""

from discretize.assemble import Blocks, assemble_blocks, assemble_weighted_residuals
from discretize.basis import LegendreBasis, PiecewiseBasis
from discretize.config import DiscConfig, Method
from discretize.context import DiscContext, build_context, piecewise_partition, uniform_pieces
from discretize.reduce import EvolutionMatrix, assemble, build_evolution_matrix, solve_reduced
from discretize.rows import RowPair, fs_row, v_row
