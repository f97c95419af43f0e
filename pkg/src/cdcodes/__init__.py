"""Constant dimension subspace codes from (parallel) linkage constructions.

Finite-field linear algebra, Gabidulin MRD codes and their rank
distributions, explicit code constructions with brute-force distance
verification, and exact lower bounds on A_q(n, d, k) with certificates.
"""

from .bounds import (
    BoundCertificate,
    KnownValueRegistry,
    best_bound,
    bound_improved_linkage,
    bound_parallel,
    bound_rrmc,
    registry_lookup,
)
from .constructions import (
    ParallelLinkageParams,
    ScRepresentation,
    generalized_parallel_linkage,
    lifted_mrd,
    linkage,
    parallel_linkage,
)
from .field import FieldElement, FieldSpec, extension_embed, field_arith, field_create
from .matrix import MatrixOverFq, hconcat, rank, rref, vstack
from .rankmetric import (
    GabidulinCode,
    MrdCodeSpec,
    RankDistribution,
    delsarte_rank_distribution,
    gabidulin_enumerate,
    gaussian_binomial,
    mrd_size,
    restricted_subcode,
)
from .subspace import (
    ConstantDimensionCode,
    Sample,
    Subspace,
    subspace_distance,
    subspace_from_matrix,
    verify_cdc,
)

__version__ = "0.1.0"
