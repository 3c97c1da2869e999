"""Resolution of textual ellipsis (bridging) over a terminological knowledge base."""

from importlib import resources

from .centering import CenteringHistory, CenteringState, CfEntry, Markable, Utterance, rank_cf
from .discourse import DiscourseError, load_discourse
from .evaluation import EvalReport, run_eval, sample_pairs
from .evaluator import (
    CPList,
    PathMarker,
    PatternSets,
    build_cp_list,
    classify_path,
    evaluate_paths,
    includes,
    is_metonymic,
    is_plausible,
    is_stronger_than,
)
from .kb import KBError, KnowledgeBase, Schema, TextKB, TypingError, load_kb
from .paths import ConceptualPath, SearchConfig, find_connected_paths, is_cyclic, well_formed_paths
from .resolver import (
    Outcome,
    ResolutionResult,
    ResolutionSession,
    Status,
    preferred_conceptual_bridge,
    resolve_and_update,
    resolve_discourse,
    should_trigger,
)


def data_path(name: str) -> str:
    """Filesystem path of a bundled data file (``demo.kb``, ``fragment.dis``, ...)."""
    return str(resources.files(__name__).joinpath("data", name))


def load_demo_kb() -> KnowledgeBase:
    with open(data_path("demo.kb"), encoding="utf-8") as fh:
        return load_kb(fh)


__all__ = [
    "CPList", "CenteringHistory", "CenteringState", "CfEntry", "ConceptualPath", "DiscourseError",
    "EvalReport", "KBError", "KnowledgeBase", "Markable", "Outcome", "PathMarker", "PatternSets",
    "ResolutionResult", "ResolutionSession", "Schema", "SearchConfig", "Status", "TextKB",
    "TypingError", "Utterance", "build_cp_list", "classify_path", "data_path", "evaluate_paths",
    "find_connected_paths", "includes", "is_cyclic", "is_metonymic", "is_plausible",
    "is_stronger_than", "load_demo_kb", "load_discourse", "load_kb", "preferred_conceptual_bridge",
    "rank_cf", "resolve_and_update", "resolve_discourse", "run_eval", "sample_pairs",
    "should_trigger", "well_formed_paths",
]
