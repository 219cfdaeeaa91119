"""crossalign: unsupervised cross-domain embedding alignment.

Two embedding domains are aligned by a shared encoder, refined per domain
with an Infomax ICA objective under orthogonality regularization, and
scored by cosine-similarity retrieval (Recall@K, mAP). A paired-CCA
solver provides the supervised oracle and the pseudo-label baseline, and
a seeded two-view generator supplies ground-truthed synthetic data.
"""

__version__ = "0.1.0"

from .alignment import (
    CovarianceBundle,
    SharedEncoder,
    alignment_fnorm,
    apply_encoder,
    compute_covariances,
    identity_alignment,
)
from .cca import CcaSolution, cca_fit, cca_objective, pseudo_pair, trace_alignment
from .errors import (
    CrossAlignError,
    NumericalError,
    SingularMapError,
    ValidationError,
)
from .infomax import (
    amari_distance,
    entropy_term,
    infomax_loss,
    mean_abs_off_diagonal,
    objective_gradients,
    objective_terms,
    pearson_correlation_matrix,
    regularizer,
    transform,
)
from .mapfile import MapPairFile, load_map_pair, save_map_pair
from .retrieval import (
    MetricsReport,
    RetrievalTask,
    average_precision,
    cosine_similarity,
    evaluate,
    recall_at_k,
    retrieve,
)
from .store import (
    DomainTag,
    EmbeddingMatrix,
    center,
    concat_embeddings,
    l2_normalize_rows,
    load_embeddings,
    save_embeddings,
)
from .synth import (
    SourceDistribution,
    SyntheticDataset,
    generate_distractors,
    generate_views,
    make_random_mixing,
    relative_rotation,
    sample_sources,
)
from .training import (
    AdamState,
    LinearMapPair,
    TrainConfig,
    adam_step,
    analytic_gradient,
    initialize_pair,
    total_objective,
    train,
)
