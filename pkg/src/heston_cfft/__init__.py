"""Convolution-FFT pricing engine for European options under the Heston model.

Builds on a branch-safe joint characteristic function of the log-price and
variance; prices by convolving payoffs with the increment kernel on
truncated centered grids, with damping and shifting schemes controlling the
boundary error, an adaptive-quadrature oracle as ground truth, a log-strike
FFT baseline, and analytic truncation/discretization error bounds.
"""
from .bounds import (ErrorBoundInputs, OrderFit, calibrate_coefficient_constant,
                     calibrate_envelope_constant, discretization_bound,
                     empirical_order, price_error_bound, truncation_bound)
from .carr_madan import carr_madan_prices
from .charfn import (AsymptoticConstants, CharFnIntermediates, PoleInGError,
                     SingularFrequencyError, asymptotics, intermediates, joint_cf,
                     kernel_psi, log_kernel_psi, log_original_cf, original_cf,
                     psi_gradient)
from .engine import (DampingInfeasibleError, ShiftCoefficients, ShiftDampConfig,
                     ShiftScheme, call_payoff_samples, cfft1_prob, cfft1_price,
                     cfft2_price, damping_feasible, exponential_shift,
                     heaviside_samples, linear_shift)
from .grids import (Grid, SampledFunction, build_grid, dft_centered,
                    dft_centered_values, idft_centered, idft_centered_values,
                    trapezoid_weights)
from .model import (CoeffMode, ConfigError, HestonParams, MarketState, Measure,
                    MeasureCoefficients, ParameterError, VarianceBoundary,
                    coefficients, feller_classify, load_params)
from .quadrature import (OraclePrice, QuadratureConfig, QuadratureFailure, prob,
                         prob_detail, price_call, price_call_detail)
from .reports import CSV_COLUMNS, PriceReport, clip_probability, load_report_schema

__version__ = "0.1.0"

__all__ = [
    "AsymptoticConstants", "CharFnIntermediates", "CoeffMode", "ConfigError",
    "CSV_COLUMNS", "DampingInfeasibleError", "ErrorBoundInputs", "Grid",
    "HestonParams", "MarketState", "Measure", "MeasureCoefficients", "OraclePrice",
    "OrderFit", "ParameterError", "PoleInGError", "PriceReport", "QuadratureConfig",
    "QuadratureFailure", "SampledFunction", "ShiftCoefficients", "ShiftDampConfig",
    "ShiftScheme", "SingularFrequencyError", "VarianceBoundary", "asymptotics",
    "build_grid", "calibrate_coefficient_constant", "calibrate_envelope_constant",
    "call_payoff_samples", "carr_madan_prices", "cfft1_prob", "cfft1_price",
    "cfft2_price", "clip_probability", "coefficients", "damping_feasible",
    "dft_centered", "dft_centered_values", "discretization_bound",
    "empirical_order", "exponential_shift", "feller_classify", "heaviside_samples",
    "idft_centered", "idft_centered_values", "intermediates", "joint_cf",
    "kernel_psi", "linear_shift", "load_params", "load_report_schema",
    "log_kernel_psi", "log_original_cf", "original_cf", "price_call",
    "price_call_detail", "price_error_bound", "prob", "prob_detail",
    "psi_gradient", "trapezoid_weights", "truncation_bound",
]
