"""Exact Liouville-property decisions for translation-invariant Levy-type operators."""

from .errors import LiouvilleError
from .operator import (
    Atom,
    BallSupport,
    LevyOperator,
    Sphere,
    StableSubspace,
    Verdict,
    canonicalize,
    c_mu,
    decide,
    period_group,
    support_group,
)
from .scalar import FieldDescriptor, Scalar, make_field, parse_scalar
from .subgroup import ClosedSubgroup, GeneratorSet, closure, equals, is_dense, member, one_annihilator
from .verify import OracleConfig, apply_to_wave, check_annihilator, density_oracle, symbol, zero_set_scan

__all__ = [
    "LiouvilleError",
    "Atom", "BallSupport", "LevyOperator", "Sphere", "StableSubspace", "Verdict",
    "canonicalize", "c_mu", "decide", "period_group", "support_group",
    "FieldDescriptor", "Scalar", "make_field", "parse_scalar",
    "ClosedSubgroup", "GeneratorSet", "closure", "equals", "is_dense", "member", "one_annihilator",
    "OracleConfig", "apply_to_wave", "check_annihilator", "density_oracle", "symbol", "zero_set_scan",
]
