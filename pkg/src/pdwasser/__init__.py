"""Exact p-Wasserstein distances between persistence diagrams, the isometric
embedding of finite l_p point sets into diagram space, and Hilbert
embeddability certificates for finite metric spaces."""

from .diagram import (
    DiagramPoint,
    PartialMatching,
    PersistenceDiagram,
    empty_distance,
    linf_distance,
    matching_cost,
    persistence_cost,
)
from .exceptions import (
    BoundViolation,
    DiagramParseError,
    InvalidMatching,
    InvalidPointError,
    IsometryViolation,
    SizeLimitExceeded,
)
from .hilbert import (
    DistortionReport,
    EmbeddingCertificate,
    HilbertCertifier,
    Verdict,
    certify,
    distortion_probe,
    gram_from_distances,
    mds_embed,
)
from .lemma import (
    LemmaEmbedding,
    choose_truncation,
    deviant_matching_bounds,
    embedding_constant,
    lemma_embed,
    project_head,
    project_tail,
    verify_isometry,
)
from .matching import (
    WassersteinDistance,
    WassersteinResult,
    brute_force_wasserstein,
    build_assignment,
    distance_matrix,
    solve_assignment,
    wasserstein,
)
from .metric import FiniteMetricSpace

__version__ = "0.1.0"
