"""Variability-aware ML model selection.

Feature models with cross-tree constraints, a text format for them, the
scikit-learn algorithm-selection knowledge base, an assumption-driven
recommender with justification traces, a not-working evaluation loop, and
an adaptation engine that re-selects when assumptions change.
"""

from .adaptation import (
    AdaptationReport,
    AssumptionDelta,
    FeatureDiff,
    FieldChange,
    StaleDeltaError,
    apply_delta,
    reselect,
)
from .analysis import (
    PartialConfiguration,
    PropagationResult,
    TooLargeError,
    Verdict,
    Violation,
    enumerate_configurations,
    is_valid_configuration,
    propagate,
    valid_selection_masks,
)
from .dot import InvalidHighlightError, export_dot
from .dsl import (
    ParseDiagnostic,
    ParseError,
    SourceSpan,
    parse_formula,
    parse_model,
    serialize_model,
    structurally_equal,
)
from .evaluation import (
    Decision,
    MetricsReport,
    Ranking,
    Session,
    WorkingCriterion,
    WrongTechniqueError,
    EmptyChainError,
    compare_baselines,
    load_baselines,
    load_report,
    new_session,
    packaged_baselines,
    packaged_reference_report,
    parse_criterion,
    submit_metrics,
)
from .formula import (
    And,
    AttrCompare,
    FeatureLiteral,
    Formula,
    Iff,
    Implies,
    MissingAttributeError,
    Not,
    Or,
    formula_text,
)
from .knowledge import (
    CheckReport,
    FallbackEdge,
    KnowledgeBase,
    KnowledgeBaseError,
    load_knowledge_base,
    self_check,
)
from .model import (
    AttributeDecl,
    Configuration,
    Feature,
    FeatureModel,
    Group,
    NamedConstraint,
    WellFormednessReport,
    eval_formula,
    validate_model,
)
from .recommend import (
    ModelingAssumptions,
    NoRecommendation,
    NotRecommendedError,
    RecommendationChain,
    TraceEntry,
    as_configuration,
    classify_problem,
    heart_failure_assumptions,
    recommend,
)

__version__ = "0.1.0"
