"""smoothlab: a desk-scale laboratory for smooth numbers and 3-term progressions.

Modules
-------
arith    primes, multiplicative tables, Ramanujan sums, modular inverses
smooth   greatest-prime-factor sieve, smooth sets, residue-class counts
saddle   saddle-point exponents and multiplicative correction factors
fourier  exponential sums, major/minor arcs, L^p moments
wtrick   the W-trick frame, its weight, and the major-arc constants
roth     3-term progression counting and the end-to-end pipeline
verify   the acceptance checks behind ``smoothlab verify-all``
cli      command-line entry points
"""

from .arith import (
    mod_inverse,
    multiplicative_tables,
    primes_upto,
    ramanujan_sum,
    ramanujan_sum_bruteforce,
)
from .fourier import arc_decomposition, exp_sum, lp_moment, minor_arc_sup, spectrum, tau
from .roth import (
    APWitness,
    NoProgressionError,
    TransferenceReport,
    count_3aps_brute,
    count_3aps_spectral,
    find_3ap_pipeline,
    transference_audit,
    trilinear_form,
)
from .roth_params import PipelineParams
from .saddle import alpha_empirical, bt_ratio, c_w_constant, g_q, gamma_rq, solve_alpha
from .smooth import (
    SmoothSet,
    SmoothSieve,
    build_sieve,
    granville_deviation,
    psi_coprime,
    psi_progression,
    rankin_tail,
    smooth_set,
    w_smooth_divisors,
)
from .wtrick import (
    WContext,
    make_context,
    map_to_Ab,
    nu,
    nu_fourier_max,
    nu_total,
    select_b,
    sigma_aq_brute,
    sigma_aq_closed,
    segment_mass_audit,
    weight_sequence,
)

__version__ = "0.1.0"
