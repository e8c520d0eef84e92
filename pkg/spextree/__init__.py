"""
This package constructs the spectral extremal graphs of forbidden trees, classifies trees and checks the predictions
against exhaustive and join-form oracles.
"""
try:
    from ._version import *
except ImportError:  # running from a source tree that was never built
    __version__ = "0.0.0"

from ._data_structures import (Graph, SpectralValue, SpectralMethod, QuotientMatrix, TreeProfile, SpiderProfile,
                               CoveringFamily, ExtremalSet, GraphDescriptor, Family, Prediction, PredictionKind,
                               EmbeddingWitness, EmbeddingStatus, VerificationReport, Outcome)
from ._errors import *
from .extremal import classify, bounds, ex_brute, diameter_classification, spider_forcing_order
from .graphs import (construct_S, construct_K_ab_p, construct_G_nl, join, spectral_radius, quotient_S,
                     quotient_spectral_radius, join_bound, closed_form_rho_S0)
from .trees import parse_tree, load_tree, profile, spider_profile, covering_family, diameter_spider
from .verifier import contains_tree, is_family_free, spex_exhaustive, spex_joinform, verify_prediction
