"""Truncated matrix-basis Moyal algebra."""

from moyal_lab.moyal.algebra import (
    adjoint,
    anticommutator,
    approximate_unit,
    commutator,
    coordinate_field,
    eval_field,
    integral,
    interior_defect,
    special_field,
    star,
)
from moyal_lab.moyal.basis import basis_eval
from moyal_lab.moyal.fourier import grid_inner_product, symplectic_fourier
from moyal_lab.moyal.params import Field, GridField, MoyalParams
from moyal_lab.moyal.quadrature import coeffs_from_function, coeffs_from_grid, grid_from_field
