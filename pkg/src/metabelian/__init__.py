"""Metabelian p-groups, transfer kernels and p-class number theorems."""

import logging

from ._base import DEFAULT_BUDGET, Budget
from ._exceptions import (
    AbelianImpossible,
    BudgetExceeded,
    ClassificationError,
    DetailedError,
    GroupMismatch,
    HypothesisRequired,
    Inconsistent,
    InconsistentPresentation,
    InfiniteQuotient,
    InvalidCombination,
    InvariantUndefined,
    KindMismatch,
    MetabelianError,
    MissingW,
    NoMatch,
    ParameterError,
    ParityViolation,
    ParseError,
    SchemaError,
)
from ._version import __version__
from .abelian import (
    AbelianCoordinates,
    AbelianPresentation,
    abelian_invariants,
    group_element_reduce,
    smith_normal_form,
)
from .arithmetic import (
    classify,
    cohomology_kernel_rule,
    consistency_check,
    fuzz_records,
    predict_clF1,
    predict_direct,
    predict_quadratic,
    relate_class_numbers,
)
from .dataset import bundled_rows, load_csv, reproduce_tables, serialize_csv
from .invariants import (
    abelianization_of_maximal,
    gamma2_of_maximal,
    invariant_e,
    invariant_k,
    invariant_s,
    maximal_subgroups,
    report,
    two_step_centralizer_chain,
    verify_closed_forms,
)
from .models import (
    AbelianGroup,
    AmbiguousResult,
    ClassifierResult,
    DiffReport,
    FamilyDescriptor,
    FieldRecord,
    InvariantReport,
    KappaType,
    QuadraticPrediction,
    TableRow,
    TransferKernel,
)
from .pcgroup import (
    Element,
    PcGroup,
    Subgroup,
    build,
    comm,
    commutator_subgroup,
    inv,
    lower_central_series,
    mul,
    normal_closure,
    power,
    subgroup_closure,
)
from .presentations import (
    classic2,
    coclass1,
    elementary_abelian,
    from_descriptor,
    nebelung,
    solve_tails,
)
from .transfer import kappa, nu, orbit_canonical, transfer_kernel, transfer_kernels, type_names

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "__version__",
    "Budget",
    "DEFAULT_BUDGET",
    # errors
    "MetabelianError",
    "DetailedError",
    "ParameterError",
    "InfiniteQuotient",
    "InconsistentPresentation",
    "GroupMismatch",
    "BudgetExceeded",
    "InvariantUndefined",
    "NoMatch",
    "ClassificationError",
    "InvalidCombination",
    "AbelianImpossible",
    "ParityViolation",
    "Inconsistent",
    "MissingW",
    "HypothesisRequired",
    "KindMismatch",
    "ParseError",
    "SchemaError",
    # abelian
    "AbelianGroup",
    "AbelianPresentation",
    "AbelianCoordinates",
    "smith_normal_form",
    "abelian_invariants",
    "group_element_reduce",
    # groups
    "PcGroup",
    "Element",
    "Subgroup",
    "build",
    "mul",
    "inv",
    "power",
    "comm",
    "subgroup_closure",
    "normal_closure",
    "commutator_subgroup",
    "lower_central_series",
    "FamilyDescriptor",
    "elementary_abelian",
    "coclass1",
    "classic2",
    "nebelung",
    "from_descriptor",
    "solve_tails",
    # invariants and transfer
    "InvariantReport",
    "maximal_subgroups",
    "abelianization_of_maximal",
    "gamma2_of_maximal",
    "two_step_centralizer_chain",
    "invariant_s",
    "invariant_e",
    "invariant_k",
    "report",
    "verify_closed_forms",
    "TransferKernel",
    "KappaType",
    "transfer_kernel",
    "transfer_kernels",
    "kappa",
    "nu",
    "orbit_canonical",
    "type_names",
    # arithmetic
    "FieldRecord",
    "ClassifierResult",
    "AmbiguousResult",
    "QuadraticPrediction",
    "cohomology_kernel_rule",
    "relate_class_numbers",
    "predict_direct",
    "predict_quadratic",
    "classify",
    "consistency_check",
    "predict_clF1",
    "fuzz_records",
    # dataset
    "TableRow",
    "DiffReport",
    "bundled_rows",
    "load_csv",
    "serialize_csv",
    "reproduce_tables",
]
