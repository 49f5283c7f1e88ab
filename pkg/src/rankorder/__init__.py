"""Rank-order coding under temporal noise: transition probabilities, capacity,
efficiency, information rate and symbol duration, with Monte Carlo and
quadrature cross-checks."""

from .analysis import (AtypicalFinding, SweepRecord, optimal_point, performance, scan_atypical,
                       sweep, tradeoff_curve)
from .core import (ChannelParams, GaussianNoiseParams, Permutation, arrival_order, exp_latency_pdf,
                   index_to_perm, perm_to_index, sample_gaussian_latencies, sample_latencies)
from .duration import (OrderStatPdf, mc_duration, mean_duration_analytic, order_stat_mean,
                       order_stat_pdf)
from .errors import CapabilityError, DataError, ParameterError, RankOrderError, ValidationError
from .info import (PerformanceReport, capacity_symmetric, efficiency, efficiency_asymptote, entropy,
                   mutual_information, rate, rate_coding_bound)
from .mc import CountTable, Estimate, McConfig, run_chunked
from .transition import (AcbDecomposition, TransitionMatrix, TransitionRow, analytic_row,
                         build_matrix, decompose_acb, mc_row, mc_row_gaussian, quadrature_row)

__version__ = "0.1.0"
