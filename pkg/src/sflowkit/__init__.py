"""Spectral flow and bifurcation certificates for 2-component Dirichlet systems."""
from .coefficients import CoefficientPath, FormBounds, SymMat2, coefficient_matrix, form_bounds, uniform_bound
from .comparison import (Certificate, CountBound, certify_bifurcation, count_formula_M, count_formula_N,
                         gamma_count, min_bifurcation_count)
from .expr import diff_lambda, evaluate, parse, to_str
from .galerkin import assemble, eigen_track, morse_index, sflow_galerkin, tail_norm
from .index import (HalfInt, block, cutoff_k0, enumerate_crossings_constant, signature,
                    spectral_flow_constant, szulkin_jump_points)
from .numerics import Numerics
from .ode import crossing_form, find_crossings, kernel, local_sflow, posdef_test, shoot, total_sflow_crossings
from .probe import branch_probe, discretize
from .spectrum import DomainSpec, Spectrum, fd_spectrum_interval, interval_spectrum, rectangle_spectrum

__version__ = "0.1.0"
