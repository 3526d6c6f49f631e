"""Exact arithmetic for Thompson-like groups acting on self-similar Cantor sets."""

from .cantor import (
    Address,
    AffineIFS,
    AperiodicWitness,
    GenericityKind,
    PointSide,
    check_genericity,
    classify_point,
    evaluate_address,
    gaps_up_to,
    sparseness_bound,
    standard_interval,
    validate_ifs,
)
from .exact import Rational, ScaleElement, factorize, relation_lattice, scale_value
from .patterns import (
    CubeSymmetry,
    NVElement,
    apply_nv,
    compose_nv,
    inverse_nv,
    stabilizer_rank,
    tangent_hull_type,
)
from .plmaps import (
    MultiGerm,
    PLMap,
    StandardGerm,
    apply_address,
    compose_pl,
    extend_multigerm,
    from_symbol,
    germ_compose,
    germ_extend,
    inverse_pl,
    slope_spectrum,
    stabilizer,
    to_symbol,
)
from .trees import GroupElement, Symbol, Variant, abelianization_F, classify, compose

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
