"""Exact arithmetic for sl2 conformal blocks, weighted stability and
effective cones of rank-2 parabolic moduli on the projective line."""

from .conformal import (
    BlockSpec,
    DoubleSequence,
    enumerate_paths,
    height,
    product_compatible,
    rank_fusion,
    rank_sections,
)
from .cones import (
    DivisorClass,
    RationalCone,
    decompose,
    extremality_certificate,
    git_cone_membership,
    git_effective_generators,
    moduli_effective_generators,
    surgery,
)
from .models import ModelDescription, ThetaClass, classify_model, theta_class, wall_walk
from .weights import (
    ParabolicWeight,
    PointConfig,
    Wall,
    classify_linearization,
    picard_rank_git,
    same_chamber,
    stability,
    walls_containing,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSpec",
    "DivisorClass",
    "DoubleSequence",
    "ModelDescription",
    "ParabolicWeight",
    "PointConfig",
    "RationalCone",
    "ThetaClass",
    "Wall",
    "classify_linearization",
    "classify_model",
    "decompose",
    "enumerate_paths",
    "extremality_certificate",
    "git_cone_membership",
    "git_effective_generators",
    "height",
    "moduli_effective_generators",
    "picard_rank_git",
    "product_compatible",
    "rank_fusion",
    "rank_sections",
    "same_chamber",
    "stability",
    "surgery",
    "theta_class",
    "wall_walk",
    "walls_containing",
]
