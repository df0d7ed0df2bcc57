"""Harmonic-mean and normalized-coordinate tools for implied volatility smiles."""

from .arbitrage import DiagnosticsReport, butterfly_functional, check_ssvi_slice, diagnose, mass_at_zero
from .blackscholes import bs_call, d_pair, density_from_smile, norm_cdf
from .parameterizations import (
    Smile,
    SsviParams,
    SviParams,
    Surface,
    flat_smile,
    flat_surface,
    sampled_smile,
    ssvi_smile,
    ssvi_surface,
    svi_smile,
)
from .pricing import QuadratureConfig, sqrt_price, ssvi_sqrt_asymptotic, ssvi_sqrt_quadrature
from .transform import f_p, g_p_numeric, h_of_k, harmonic_reconstruct, ssvi_g_half, ssvi_v_half

__version__ = "0.1.0"

__all__ = [
    "DiagnosticsReport",
    "QuadratureConfig",
    "Smile",
    "SsviParams",
    "SviParams",
    "Surface",
    "bs_call",
    "butterfly_functional",
    "check_ssvi_slice",
    "d_pair",
    "density_from_smile",
    "diagnose",
    "f_p",
    "flat_smile",
    "flat_surface",
    "g_p_numeric",
    "h_of_k",
    "harmonic_reconstruct",
    "mass_at_zero",
    "norm_cdf",
    "sampled_smile",
    "sqrt_price",
    "ssvi_g_half",
    "ssvi_sqrt_asymptotic",
    "ssvi_sqrt_quadrature",
    "ssvi_smile",
    "ssvi_surface",
    "ssvi_v_half",
    "svi_smile",
]
