"""Squares in Piatetski-Shapiro sequences: exact counts, bounds and exponent pairs."""

from .arith import (
    CertifiedFloorResult,
    PrecisionPolicy,
    floor_pow,
    frac_part_certified,
    parse_c,
    pow_interval,
)
from .bounds import (
    BoundProfile,
    error_bound_lsz,
    error_bound_theorem,
    main_term_Q,
    main_term_Qfrak,
    tau_lsz,
    tau_new,
)
from .counting import CountReport, DecompositionReport, count_Q, count_Qfrak, decompose_S0_E1_E2
from .exppairs import ExponentPair, apply_word, derived_exponents, process_A, process_B
from .sieves import count_squarefree_upto, is_squarefree, mobius_sieve, squarefree_part

__version__ = "0.1.0"
