"""Weighted-average ensembling of classifier prediction matrices.

Members contribute row-stochastic prediction matrices; the ensemble is a
convex combination of them, with weights found by scoring random draws
from a symmetric Dirichlet over the probability simplex against a
validation split.
"""

from .core import (
    ClassCatalog,
    LabelVector,
    Member,
    MemberSet,
    PredictionMatrix,
    WeightVector,
    argmax_class,
    predicted_classes,
    validate_matrix,
)
from .ensemble import (
    RepeatReport,
    RepeatRun,
    SearchConfig,
    SearchResult,
    combine,
    dirichlet_batch,
    dirichlet_sample,
    evaluate_ensemble,
    run_repeated,
    search_weights,
    trial_weights,
)
from .errors import (
    DirblendError,
    FileFormatError,
    ParseError,
    ValidationError,
)
from .metrics import (
    ConfusionMatrix,
    MetricSummary,
    accuracy,
    confusion,
    cross_entropy,
    format_percent,
    per_class_summary,
    summarize,
)
from .split import (
    SplitAssignment,
    SplitSpec,
    split_sizes,
    stratified_split,
)
from .synth import (
    SynthMemberSpec,
    gen_complementary_pair,
    gen_labels,
    gen_member,
    gen_member_set,
)

__version__ = "0.1.0"

__all__ = [
    "ClassCatalog",
    "ConfusionMatrix",
    "DirblendError",
    "FileFormatError",
    "LabelVector",
    "Member",
    "MemberSet",
    "MetricSummary",
    "ParseError",
    "PredictionMatrix",
    "RepeatReport",
    "RepeatRun",
    "SearchConfig",
    "SearchResult",
    "SplitAssignment",
    "SplitSpec",
    "SynthMemberSpec",
    "ValidationError",
    "WeightVector",
    "accuracy",
    "argmax_class",
    "combine",
    "confusion",
    "cross_entropy",
    "dirichlet_batch",
    "dirichlet_sample",
    "evaluate_ensemble",
    "format_percent",
    "gen_complementary_pair",
    "gen_labels",
    "gen_member",
    "gen_member_set",
    "per_class_summary",
    "predicted_classes",
    "run_repeated",
    "search_weights",
    "split_sizes",
    "stratified_split",
    "summarize",
    "trial_weights",
    "validate_matrix",
    "__version__",
]
