"""Hypergraph b-matching for user contribution bounding."""

from .baselines import BaselineResult, exact_optimal, greedy
from .bsp import parallel_run, phase_stats
from .engine import EngineConfig, RoundTrace, run
from .formats import FORMAT_VERSION, parse_edge_list, serialize_edge_list
from .generator import Fixed, GeneratorSpec, Uniform, ZipfPopularity, ZipfSize, generate
from .hypergraph import CapacityMap, Hyperedge, Hypergraph, build, degree, validate
from .metrics import RunReport, compare, report
from .ordering import PerUserOrdering, UniversalRandom, WeightDescending, mix64, rank

__all__ = [
    "BaselineResult", "CapacityMap", "EngineConfig", "FORMAT_VERSION", "Fixed", "GeneratorSpec",
    "Hyperedge", "Hypergraph", "PerUserOrdering", "RoundTrace", "RunReport", "Uniform",
    "UniversalRandom", "WeightDescending", "ZipfPopularity", "ZipfSize", "build", "compare",
    "degree", "exact_optimal", "generate", "greedy", "mix64", "parallel_run", "parse_edge_list",
    "phase_stats", "rank", "report", "run", "serialize_edge_list", "validate",
]
