"""signorbit: greedy sign-choice rotation orbits and their certificates.

The system iterates z_n = z_{n-1} +- e^(2 pi i alpha n), always picking the
sign that minimizes |z_n|.  This package simulates orbits, detects and
certifies eventual periodicity of the sign sequence, computes the induced
circle and disk geometry, renders min-ambiguity fields over initial values,
and exposes everything through a CLI and an HTTP service.
"""

from .diophantine import Convergent, ConvergentList, convergents, nearest_int_distance
from .dynamics import (
    Orbit,
    OrbitStatus,
    Params,
    StatusKind,
    StepResult,
    Symmetry,
    apply_symmetry,
    min_ambiguity,
    rotation_batch,
    run_orbit,
    stability_radius,
    step,
    unit_rotation,
)
from .expr import ExpressionError, format_complex, format_real, parse_complex, parse_real
from .mapper import Field, FieldSpec, decode_raw_f32, encode_field, field_sidecar, render_field
from .periodicity import (
    Certificate,
    CertificationError,
    CircleStructure,
    PeriodHypothesis,
    certify_constant,
    certify_periodic,
    certify_periodic_best,
    circle_structure,
    detect_sign_period,
    lipschitz_bound_constant,
    period_sum,
    sampling_check,
)
from .regions import (
    Ball,
    HalfPlane,
    Intersection,
    Region,
    RegionError,
    Side,
    Translate,
    Union_,
    constant_sign_disks,
    eval_region,
    eval_region_grid,
    lemma2_ball,
    periodic_forward_balls,
    preimage_chain,
    preimage_predicate,
    rasterize_region,
    region_from_json,
    region_to_json,
)
from .search import (
    AlphaSampler,
    DoublingOutcome,
    RunRecord,
    SearchConfig,
    period_stats,
    random_search,
    run_case,
    verify_period_doubling,
)

__version__ = "0.1.0"
