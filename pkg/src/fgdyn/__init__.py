"""Computational dynamics of free group automorphisms.

Words are plain strings over ``a..z`` with upper case letters as inverses.
The modules build on each other: words, automorphisms, dynamics (growth and
periodic classes), boundary (attracting fixed points), laminations,
cannon_thurston (ending laminations and identifications) and subgroups.
"""

__version__ = "0.1.0"

from .automorphisms import (
    Automorphism,
    TwistedLift,
    apply,
    apply_cyclic,
    compose,
    cyclic_permutation,
    fibonacci,
    format_automorphism,
    identity,
    invert,
    load_automorphism,
    parse_automorphism,
    power,
    tribonacci,
    twisted_lift,
    verify_inverse,
)
from .boundary import (
    BoundaryPrefix,
    Comparison,
    FixedPointSet,
    collect_attracting_points,
    iterate_to_fixed_point,
    same_point,
)
from .cannon_thurston import (
    EndingLaminationSet,
    IdentificationGraph,
    assemble_singular_lines,
    ending_lamination_set,
    identification_graph,
)
from .dynamics import (
    GrowthProfile,
    NoObstructionFound,
    NotHyperbolic,
    certify_hyperbolicity,
    find_periodic_classes,
    growth_profile,
    perron_root,
)
from .errors import (
    BudgetExceeded,
    FgdynError,
    InputError,
    InvariantViolation,
    InverseNotFound,
    NoConvergence,
    NoStabilization,
    PreconditionError,
)
from .laminations import (
    Attracted,
    LaminationFingerprint,
    LimitLine,
    LineClass,
    NotObserved,
    attraction_test,
    common_lamination_check,
    fingerprint_equal,
    fingerprints,
    lamination_fingerprint,
    weak_limit_lines,
)
from .subgroups import (
    LeafVerdict,
    NotQuasiconvex,
    QCNoObstructionFound,
    RayVerdict,
    StallingsGraph,
    carries_leaf,
    carries_ray,
    has_infinite_index,
    qc_verdict,
    stallings_graph,
)
from .words import (
    Alphabet,
    CyclicWord,
    Word,
    cyclic_reduce,
    enumerate_cyclic_words,
    free_reduce,
    inverse,
    is_conjugate,
    reduce,
)
