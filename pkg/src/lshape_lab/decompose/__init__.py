from ..scene import Scene
from .classes import EXACT, HEURISTIC, PivotChoice, SixClasses, pick_pivot, reflect_diagonal, reflect_shape, six_classes, supports
from .driver import DecompositionReport, LevelRecord, f3_analysis, f3_final_check, run_decomposition
from .prep import PREP_CLASSES, GroundPrep, prepare_grounded

__all__ = [
    "Scene", "EXACT", "HEURISTIC", "PivotChoice", "SixClasses", "pick_pivot", "reflect_diagonal",
    "reflect_shape", "six_classes", "supports", "DecompositionReport", "LevelRecord", "f3_analysis",
    "f3_final_check", "run_decomposition", "PREP_CLASSES", "GroundPrep", "prepare_grounded",
]
