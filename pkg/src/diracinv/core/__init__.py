from .algebra import (
    B,
    I2,
    SIGMA2,
    SIGMA3,
    c_alpha,
    commutator_b,
    conj_b,
    op_norm,
    potential_matrix,
    rotation,
)
from .grid import DEFAULT_MESH_SIZE, Mesh, Spline6, spline_fit_deriv, uniform_mesh
from .special import legendre_eval, sph_bessel_seq, sph_bessel_table

__all__ = [
    "B",
    "I2",
    "SIGMA2",
    "SIGMA3",
    "c_alpha",
    "commutator_b",
    "conj_b",
    "op_norm",
    "potential_matrix",
    "rotation",
    "DEFAULT_MESH_SIZE",
    "Mesh",
    "Spline6",
    "spline_fit_deriv",
    "uniform_mesh",
    "legendre_eval",
    "sph_bessel_seq",
    "sph_bessel_table",
]
