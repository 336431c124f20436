"""Exact constructions over ordered subfields of the reals."""

from .exactfield import (
    CSpecError,
    DigitPrefix,
    DomainError,
    FieldElement,
    Ordering,
    RadicandMismatch,
    compare,
    digits_to_value,
    extract_digits,
    field_arith,
    in_rationals,
    parse_cspec,
    to_decimal,
)
from .plcalc import (
    Piece,
    PiecewisePoly,
    pl_antiderivative,
    pl_eval,
    pl_integral,
    pl_max_abs_slope,
    pl_sup_dist,
    pq_derivative_at,
)

from .probes import (
    evaluation_identity_check,
    modulus_scan,
    pointwise_zero_derivative_witness,
    step_blowup,
)
from .propp import (
    convergence_report,
    integral_partial,
    segment,
    segment_integral,
    truncation,
)
from .render import RenderOptions, render_svg
from .riemann import (
    TaggedPartition,
    rational_fn_right_sum,
    right_sum,
    sum_convergence_table,
    tagged_sum,
)

__version__ = "0.1.0"
