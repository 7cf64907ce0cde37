"""Transmission problems for inclusions of finite negative order."""

from ._core import (
    Domain,
    DomainError,
    Error,
    ParseError,
    Region,
    Solution,
    boundary_geometry,
    classify,
    ellipse_check,
    eval_psi,
    faber_coefficients,
    grunsky,
    invert_psi,
    linear_functional_degree,
    load_fixture,
    np_matrix,
    np_matrix_nystrom,
    nu_complex_residual,
    solve,
    solve_uniform,
    synth,
    tau,
    validate,
)

__all__ = [
    "Domain",
    "DomainError",
    "Error",
    "ParseError",
    "Region",
    "Solution",
    "boundary_geometry",
    "classify",
    "ellipse_check",
    "eval_psi",
    "faber_coefficients",
    "grunsky",
    "invert_psi",
    "linear_functional_degree",
    "load_fixture",
    "np_matrix",
    "np_matrix_nystrom",
    "nu_complex_residual",
    "solve",
    "solve_uniform",
    "synth",
    "tau",
    "validate",
]
