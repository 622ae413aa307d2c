"""Simulated long-term replayability of GUI test cases across application versions."""

from .analysis import (
    CategoryDistribution,
    ClassificationRecord,
    ReplicationSet,
    aggregate,
    cross_sectional,
    longitudinal,
    replicate,
)
from .classifier import Category, ChainClassifier, classify_chain, classify_pair
from .efg import EventFlowGraph, derive_efg, is_valid_sequence, reaching_prefix
from .errors import (
    ModelError,
    MutationError,
    NoWalkPossible,
    ParseError,
    ReplaySimError,
    ReportIOError,
    Unreachable,
    ValidationError,
    VersionMismatch,
)
from .evolution import (
    EquivalenceMapping,
    MutationKind,
    MutationOp,
    VersionChain,
    compose,
    load_chain,
    load_mapping,
    map_event,
    mutate,
)
from .generator import (
    GenerationParams,
    TestCase,
    TestSuite,
    effective_sequence,
    generate_all_length2,
    generate_random,
)
from .model import GuiModel, compute_widget_id, load_gui_model, model_digest
from .report import emit_report

__version__ = "0.1.0"
