"""Transform stakeholder cognitive maps into value trees.

Pipeline: cognitive map -> value cognitive map -> ends-means map ->
value tree, with client decisions recorded in replayable transcripts.
"""

from .model import (
    CognitiveMap,
    EndsMeansMap,
    InfluenceArc,
    Node,
    Sign,
    ValueCognitiveMap,
    ValueLiteral,
    ValueTree,
    negate,
    validate_cognitive_map,
    validate_emm,
    validate_tree,
    validate_vcm,
)
from .mapping import MappingEntry, ValueMapping, apply_mapping
from .emm import run_algorithm1, transform_rule
from .tree import build_value_tree, compare_trees, find_conflicts, prune_by_shortest_path
from .decisions import (
    AutoProvider,
    DecisionRequest,
    DecisionTranscript,
    InteractiveProvider,
    PendingDecision,
    ScriptedProvider,
    SuspendingProvider,
    replay,
)
from .pipeline import PipelineResult, run_pipeline

__all__ = [
    "CognitiveMap",
    "EndsMeansMap",
    "InfluenceArc",
    "Node",
    "Sign",
    "ValueCognitiveMap",
    "ValueLiteral",
    "ValueTree",
    "negate",
    "validate_cognitive_map",
    "validate_emm",
    "validate_tree",
    "validate_vcm",
    "MappingEntry",
    "ValueMapping",
    "apply_mapping",
    "run_algorithm1",
    "transform_rule",
    "build_value_tree",
    "compare_trees",
    "find_conflicts",
    "prune_by_shortest_path",
    "AutoProvider",
    "DecisionRequest",
    "DecisionTranscript",
    "InteractiveProvider",
    "PendingDecision",
    "ScriptedProvider",
    "SuspendingProvider",
    "replay",
    "PipelineResult",
    "run_pipeline",
]

__version__ = "0.1.0"
