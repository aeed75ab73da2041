"""Subspace clustering via exact and randomized CUR (skeleton) decompositions."""

from .cluster import (
    LabelVector,
    clustering_error,
    connected_components,
    kmeans,
    ncut_value,
    pcc_cluster,
    spectral_cluster,
)
from .cur import (
    CurFactors,
    IndexSelection,
    RankDeficientSelection,
    SelectionFailed,
    cur_factorize,
    cur_sample,
    select_uniform,
)
from .linalg import (
    SvdTriple,
    matrix_power,
    nuclear_norm,
    numerical_rank,
    pinv,
    skinny_svd,
)
from .pipeline import (
    ProtoConfig,
    RcurConfig,
    RcurResult,
    cluster_noise_free,
    proto_cluster,
    rcur_cluster,
)
from .simgen import (
    SimilarityMatrix,
    coefficient_matrix,
    elementwise_power,
    enforce_diagonal,
    gram_similarity,
    median_aggregate,
    normalize_columns,
    sim_baseline,
    similarity_noise_free,
    threshold_volumetric,
)
from .synth import (
    SyntheticInstance,
    UnionModel,
    random_union_model,
    run_sweep,
    sample_instance,
)

__version__ = "0.1.0"
