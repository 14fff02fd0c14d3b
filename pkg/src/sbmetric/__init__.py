"""S_b-metric spaces: axiom checks, certified Picard iteration, and a
fixed-point linear solver."""

import logging

from .axioms import (
    AxiomFamily,
    AxiomReport,
    Verdict,
    check_axioms,
    check_not_b_generated,
    check_quasi_symmetry,
    check_symmetry,
    estimate_min_b,
)
from .errors import (
    CertificateError,
    DegenerateError,
    InputError,
    PreconditionError,
    SbMetricError,
    SingularMatrixError,
    UnknownNameError,
)
from .fixpoint import (
    CertKind,
    ContractionCertificate,
    IterationTrace,
    SelfMap,
    Termination,
    apriori_tail_bound,
    certify,
    check_generalized,
    estimate_contraction_h,
    parse_map,
    picard,
    verify_fixed_point,
)
from .linsys import (
    Form,
    LinearSystem,
    column_sum_norm,
    direct_solve,
    solve_iterative,
    to_fixed_point_form,
)
from .metrics import (
    BMetricSpec,
    SbMetricSpec,
    builtin,
    builtin_bmetric,
    evaluate,
    induce_b_from_sb,
    induce_s_from_metric,
    induce_sb_from_b,
    resolve,
)
from .sampling import SamplerConfig
from .spaces import FiniteSpace, RealSpace
from .topology import (
    diameter,
    in_closed_ball,
    in_open_ball,
    is_bounded,
    point_set_distance,
    set_set_distance,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"
