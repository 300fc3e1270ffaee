"""Hurwitz continued fractions over the Gaussian integers.

Exact arithmetic in Z[i] and Q(i), HCF expansions with Q-pairs, the
expansion discrepancy dd, circle-inversion geometry of cylinders and
prototype sets, and counting routines for bounded-quotient words.
"""

from .enclosures import ComplexBox, Interval, RefinableComplex, nearest_gaussian_integer_certified, parse_oracle
from .errors import DomainError, GeometryInconsistency, InsufficientPrecision, Undecidable
from .gaussian import GaussianInt, GaussianRational, gaussian_gcd, nearest_gaussian_integer
from .hcf import (
    HcfExpansion,
    PartialQuotientSeq,
    QPair,
    build_discrepancy_instance,
    dd,
    evaluate,
    hcf_expand_rational,
    hcf_expand_stream,
    make_vk,
    make_vk_tilde,
    mobius_apply,
    qpair,
)
from .rcf import rcf_check_prefix_property, rcf_expand_rational

__version__ = "0.1.0"

__all__ = [
    "ComplexBox",
    "DomainError",
    "GaussianInt",
    "GaussianRational",
    "GeometryInconsistency",
    "HcfExpansion",
    "InsufficientPrecision",
    "Interval",
    "PartialQuotientSeq",
    "QPair",
    "RefinableComplex",
    "Undecidable",
    "build_discrepancy_instance",
    "dd",
    "evaluate",
    "gaussian_gcd",
    "hcf_expand_rational",
    "hcf_expand_stream",
    "make_vk",
    "make_vk_tilde",
    "mobius_apply",
    "nearest_gaussian_integer",
    "nearest_gaussian_integer_certified",
    "parse_oracle",
    "qpair",
    "rcf_check_prefix_property",
    "rcf_expand_rational",
]
