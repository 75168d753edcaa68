"""Approximation fixpoint toolkit: finite lattices, precision-monotone pair
functions, their well-founded fixed points, identity checking and
logic-program semantics."""
from .errors import (
    AFPError,
    CapExceeded,
    FixpointError,
    LatticeError,
    NotPMonotone,
    ProgramSyntaxError,
    ShapeMismatch,
)
from .fixpoint import double_wf, stable_fixed_point_function, stable_function, stable_set, well_founded
from .identities import SCHEMAS, IdentityReport, check, search_counterexample
from .lattice import (
    FiniteLattice,
    PowersetLattice,
    ProductShape,
    build_lattice,
    chain,
    dual,
    lfp,
    powerset,
    product,
    two,
    verify_lattice,
)
from .lp import analyze, gl_oracle, parse_program, stable_models_aft, wf_model
from .morphism import (
    ApproxMorphism,
    classify,
    compose,
    count_morphisms,
    enumerate_morphisms,
    from_function,
    identity,
    make_morphism,
    product_morphism,
    tupling,
)

__version__ = "0.1.0"
