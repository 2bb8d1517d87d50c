"""Binary MDS array codes over F2[x]/(1 + x^p) with exact XOR accounting.

Two classic RAID-style families (EVENODD and RDP diagonals), a windowed
erasure decoder built on a sparse LU elimination of Vandermonde systems,
a Cramer-rule reference decoder, closed-form cost evaluators, and a file
sharding CLI.
"""

from .codes import (
    EVENODD,
    RDP,
    AugmentedArray,
    CodeParams,
    CodewordArray,
    algebraic_encode,
    augment,
    augment_evenodd,
    augment_rdp,
    deaugment,
    encode,
    encode_evenodd,
    encode_rdp,
    find_mds_violation,
    make_params,
    mds_check,
    shorten_check,
    validate,
    verify_parity,
)
from .costmodel import (
    CostBreakdown,
    comparison_report,
    predict_blaum_roth,
    predict_decode,
    predict_lu,
)
from .decoder import (
    DecodePlan,
    ErasureSpec,
    decode,
    decode_evenodd,
    decode_fallback,
    decode_rdp,
    erase,
    plan,
    reencode_parity,
)
from .errors import (
    ArrayCodeError,
    FormatError,
    InputError,
    ParameterError,
    UnrecoverableErasureError,
)
from .ring import (
    QuotientPoly,
    RingPoly,
    XorTally,
    add,
    div_binomial,
    div_one_plus_xd_any,
    div_one_plus_xd_even,
    mul,
    parity_at_one,
    reduce_mod_mp,
    residue,
    shift,
)
from .vandermonde import (
    ExponentTuple,
    RingMatrix,
    build_vandermonde,
    lu_factors,
    solve_cramer,
    solve_lu,
)

__version__ = "0.1.0"
