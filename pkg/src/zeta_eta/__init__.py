"""Numerics for the branch-tracked logarithm of zeta, its iterated integrals,
their smoothed Dirichlet-polynomial approximations, and desk-scale
value-distribution experiments on the critical line.
"""

__version__ = "0.1.0"

from .approx import (ApproxConfig, ResidualReport, dirichlet_poly, lambda_x,
                     lambda_prime_x, p_f, relzz_decompose, residual,
                     von_mangoldt, w_x, y_m)
from .branch import BranchPath, big_s, branch_path, log_zeta, log_zeta_with_err
from .distribution import (GridSpec, MeasureEstimate, gaussian_tail,
                           measure_sigma, measure_t_m, moment_residual,
                           tail_table)
from .errors import (BeyondSieve, BeyondTable, BudgetExceeded, EmptyFile,
                     HypothesisViolated, InvalidFamily, NearSingularity,
                     NotSorted, NumericalError, OnNegativeRealAxisCut,
                     OnSingularity, OutOfStrip, ParseError, PoleAtOne,
                     ValidationError, ZeroCoincidesWithS, ZetaEtaError)
from .eta import (EtaValue, c_m, c_m_with_err, eta_iterated, eta_vertical,
                  route_check, s_m, zero_sum_polynomial)
from .kernels import (DEFAULT_KERNEL, Kernel, boundary_derivative, e_star,
                      make_kernel, u_f_h, u_m_eval, v_f_h)
from .precision import DEFAULT_PRECISION, SCAN_PRECISION, EvalPrecision
from .zeros import (ZeroRecord, ZeroStore, builtin_store, count_window,
                    inject_hypothetical, load_zeros, rvmf_check, sigma_xt)
from .zeta import hardy_z, log_gamma, theta, zeta, zeta_log_deriv

__all__ = [
    "__version__",
    # zeta / branch
    "zeta", "zeta_log_deriv", "log_gamma", "theta", "hardy_z",
    "BranchPath", "branch_path", "log_zeta", "log_zeta_with_err", "big_s",
    # zeros
    "ZeroRecord", "ZeroStore", "load_zeros", "builtin_store", "rvmf_check",
    "count_window", "sigma_xt", "inject_hypothetical",
    # kernels / special functions
    "Kernel", "DEFAULT_KERNEL", "make_kernel", "u_f_h", "v_f_h",
    "boundary_derivative", "e_star", "u_m_eval",
    # eta
    "EtaValue", "c_m", "c_m_with_err", "eta_vertical", "eta_iterated",
    "route_check", "s_m", "zero_sum_polynomial",
    # approx
    "ApproxConfig", "ResidualReport", "von_mangoldt", "dirichlet_poly",
    "y_m", "residual", "p_f", "relzz_decompose", "w_x", "lambda_x",
    "lambda_prime_x",
    # distribution
    "GridSpec", "MeasureEstimate", "gaussian_tail", "measure_sigma",
    "measure_t_m", "moment_residual", "tail_table",
    # precision
    "EvalPrecision", "DEFAULT_PRECISION", "SCAN_PRECISION",
    # errors
    "ZetaEtaError", "ValidationError", "NumericalError", "PoleAtOne",
    "NearSingularity", "OnSingularity", "BudgetExceeded", "ParseError",
    "NotSorted", "EmptyFile", "BeyondTable", "OutOfStrip", "InvalidFamily",
    "OnNegativeRealAxisCut", "BeyondSieve", "ZeroCoincidesWithS",
    "HypothesisViolated",
]
