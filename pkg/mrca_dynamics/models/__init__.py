from mrca_dynamics.models.params import (
    CustomSpec,
    HyperbolicSpec,
    LogStableSpec,
    MeasureSpec,
    ParetoSpec,
    StableBranchingParams,
    StableSpec,
    SubordinatorDraw,
    dump_measure_spec,
    parse_measure_spec,
)
from mrca_dynamics.models.results import (
    ClassificationReport,
    ComparisonResult,
    CriterionValue,
    JumpChainSample,
    PathSample,
    RecordSet,
    SuiteResult,
    TestReport,
)

__all__ = [
    "StableSpec",
    "HyperbolicSpec",
    "ParetoSpec",
    "LogStableSpec",
    "CustomSpec",
    "MeasureSpec",
    "parse_measure_spec",
    "dump_measure_spec",
    "StableBranchingParams",
    "SubordinatorDraw",
    "PathSample",
    "JumpChainSample",
    "RecordSet",
    "CriterionValue",
    "ClassificationReport",
    "ComparisonResult",
    "TestReport",
    "SuiteResult",
]
