"""Exact perturbative spectral theory of the open TASEP.

T-Q relations solved order by order in the counting fugacity, the
boundary transfer matrix and its charges, closed and residue-based charge
series, floating-point oracles and a Gillespie simulator.
"""

from .algebra import (
    BSeries,
    MuSeries,
    Poly,
    Rational,
    Series,
    as_rational,
    binomial,
    poly_reverse,
    series_compose,
    series_exp,
    series_log,
    series_reversion,
)
from .charges import (
    ChargeSeries,
    ResidueContext,
    i_r_closed,
    lambda_mu_composed,
    make_context,
    mu_closed,
    mu_constraint_series,
    residue_series,
)
from .errors import (
    ConvergenceError,
    DomainError,
    InsufficientStatisticsError,
    PreconditionError,
    SolverInconsistencyError,
    TasepError,
)
from .mc import CurrentStats, SimConfig, simulate, validate_first_cumulant
from .numerics import RootReport, aberth_roots, charpoly_exact, perron_eigenvalue, spectrum_via_charpoly
from .operators import (
    ModelParams,
    OperatorPoly,
    build_markov,
    build_transfer,
    build_twisted_periodic,
    check_commutativity,
    higher_charge,
    markov_matrix,
    transfer_at,
)
from .tq import (
    BetheRootSet,
    TQSolution,
    bethe_residual,
    charge_from_lambda,
    check_equivalence,
    lambda_of_mu,
    q0_closed,
    solve_tq_equivalent,
    solve_tq_original,
)

__version__ = "0.1.0"
