"""Geometric Gauss sums over F_q[t] and v-adic gamma values, computed exactly to a stated precision."""

from .ffield import FFElem, FieldSpec, build_field, embed, frobenius, trace_norm
from .gamma import GammaEngine, gamma_engine
from .gauss import (
    GroupRingElem,
    ari_gauss,
    ari_monomial,
    gauss_monomial,
    geo_gauss,
    scalar_product_oracle,
    tilde_gauss,
    two_var_monomial,
)
from .lab import VerificationReport
from .poly import AFrac, Poly, QDigits, RatFunc, a_fractional, parse_poly, q_digits
from .series import PrecisionError, Series
from .vadic import CyclotomicContext, make_context, unramified

__version__ = "0.1.0"

__all__ = [
    "AFrac",
    "CyclotomicContext",
    "FFElem",
    "FieldSpec",
    "GammaEngine",
    "GroupRingElem",
    "Poly",
    "PrecisionError",
    "QDigits",
    "RatFunc",
    "Series",
    "VerificationReport",
    "a_fractional",
    "ari_gauss",
    "ari_monomial",
    "build_field",
    "embed",
    "frobenius",
    "gamma_engine",
    "gauss_monomial",
    "geo_gauss",
    "make_context",
    "parse_poly",
    "q_digits",
    "scalar_product_oracle",
    "tilde_gauss",
    "trace_norm",
    "two_var_monomial",
    "unramified",
]
