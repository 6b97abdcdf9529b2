"""Permutation-generalized zeta sums over continued-fraction digit swaps."""
# ruff: noqa: F401

__version__ = "0.1.0"

from .cf import cf_expand, cf_value, gauss_map, s_pq, swap_digits  # noqa: E402
from .mobius import MobiusPiece, SeriesTruncation, analytic_zeta_12, f_series, mobius_cell_integral, mobius_coeffs  # noqa: E402
from .spectral import SpectrumFit, fit_slope, power_spectrum  # noqa: E402
from .sums import (  # noqa: E402
    GridSpec,
    SumSpec,
    eta_sum,
    partial_zeta,
    phase_trace,
    shadow_identity_residual,
    strip_scan,
    zeta_baseline_sum,
    zeta_pq_sum,
)
from .zeros import ZeroRecord, ZeroSeries, refine_zero, scan_zero_candidates, zero_series  # noqa: E402
