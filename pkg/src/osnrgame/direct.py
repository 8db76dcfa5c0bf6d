"""Direct solution of the mixed allocation problem.

Feasibility analysis (diagonal-dominance conditions on targets and player
parameters), the one-shot linear solve of the stacked system, residual
verification, and the condition-number power bounds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SingularMatrixError, UsageError
from .link import SystemMatrix, linear_to_db
from .model import ServicePartition, StackedSystem, osnr_all

SINGULARITY_RTOL = 1e-12


@dataclass(frozen=True)
class FeasibilityReport:
    """Row-by-row dominance conditions and the resulting solvability flags."""

    seeker_condition: np.ndarray  # per seeker: gamma_i < 1 / sum_j Gamma_ij
    player_condition: np.ndarray  # per player: a_i > sum_{j!=i} Gamma_ij
    strictly_diagonally_dominant: bool
    nonsingular: bool
    margins: np.ndarray  # per stacked row: |diag| - off-diagonal abs sum

    @property
    def all_conditions_hold(self) -> bool:
        return bool(np.all(self.seeker_condition) and np.all(self.player_condition))


@dataclass(frozen=True)
class BoundsReport:
    """Power bounds from the condition number of the stacked matrix.

    The inf-norm bounds are guaranteed to bracket the solution only when
    preconditions_hold (player row sums exceed seeker row sums and player
    right-hand sides exceed seeker right-hand sides) on top of strict
    diagonal dominance. upper_inf is None when there are no players.
    """

    preconditions_hold: bool
    lower_inf: float
    upper_inf: float | None
    kappa_inf: float
    euclid_lower: float
    euclid_upper: float | None


@dataclass(frozen=True)
class Solution:
    """A solved power allocation plus its verification residuals."""

    u: np.ndarray
    osnr: np.ndarray
    osnr_db: np.ndarray
    seeker_residuals: np.ndarray  # relative |OSNR_i - gamma_i| / gamma_i
    player_foc_residuals: np.ndarray  # |a_i u_i + X_{-i} - a_i beta_i / alpha_i|
    nonnegative: bool


def _factor(gamma_bar: np.ndarray):
    """LU-factor the stacked matrix, raising when the smallest pivot falls
    under the singularity threshold."""
    norm = np.linalg.norm(gamma_bar, np.inf)
    with warnings.catch_warnings():
        # singular input is diagnosed via the pivot test below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(gamma_bar)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if norm == 0 or smallest < SINGULARITY_RTOL * norm:
        raise SingularMatrixError(
            f"stacked matrix is numerically singular (smallest pivot {smallest:.3e})",
            smallest_pivot=smallest,
        )
    return lu, piv


def check_feasibility(
    stack: StackedSystem, sys: SystemMatrix, partition: ServicePartition
) -> FeasibilityReport:
    """Evaluate the per-row dominance hypotheses and factorization-based
    nonsingularity of the stacked matrix. Always returns a report."""
    gamma = sys.gamma
    row_sums = gamma.sum(axis=1)

    seeker_ok = np.array(
        [
            partition.roles[i].gamma * row_sums[i] < 1.0
            for i in partition.seekers
        ],
        dtype=bool,
    )
    player_ok = np.array(
        [
            partition.roles[i].a > row_sums[i] - gamma[i, i]
            for i in partition.players
        ],
        dtype=bool,
    )

    # rows are players-then-seekers while columns stay in channel order, so
    # the pivot of row r sits at that row's own channel column
    bar = stack.gamma_bar
    cols = np.array(stack.player_index + stack.seeker_index)
    diag = np.abs(bar[np.arange(bar.shape[0]), cols])
    off = np.abs(bar).sum(axis=1) - diag
    margins = diag - off
    dominant = bool(np.all(margins > 0))

    try:
        _factor(bar)
        nonsingular = True
    except SingularMatrixError:
        nonsingular = False

    return FeasibilityReport(
        seeker_condition=seeker_ok,
        player_condition=player_ok,
        strictly_diagonally_dominant=dominant,
        nonsingular=nonsingular,
        margins=margins,
    )


def verify(
    u: np.ndarray, stack: StackedSystem, sys: SystemMatrix, partition: ServicePartition
) -> Solution:
    """Package a power vector with its OSNR values and verification residuals."""
    u = np.asarray(u, dtype=float)
    osnr_vals = osnr_all(u, sys)
    osnr_dbs = np.array([linear_to_db(v) if v > 0 else np.nan for v in osnr_vals])

    seeker_res = np.array(
        [
            abs(osnr_vals[i] - partition.roles[i].gamma) / partition.roles[i].gamma
            for i in partition.seekers
        ]
    )
    foc_res = np.abs(stack.gamma_tilde @ u - stack.b_tilde)

    nonnegative = bool(np.all(u >= 0))
    if not nonnegative:
        warnings.warn(
            "direct solution has negative power components; the two-person "
            "nonnegativity condition on the network price is not met",
            stacklevel=2,
        )
    return Solution(
        u=u,
        osnr=osnr_vals,
        osnr_db=osnr_dbs,
        seeker_residuals=seeker_res,
        player_foc_residuals=foc_res,
        nonnegative=nonnegative,
    )


def solve_dsnp(
    stack: StackedSystem, sys: SystemMatrix, partition: ServicePartition
) -> Solution:
    """Solve the stacked system directly and verify the solution.

    One step of iterative refinement keeps the relative residual well under
    the verification tolerances.
    """
    lu, piv = _factor(stack.gamma_bar)
    u = scipy.linalg.lu_solve((lu, piv), stack.b_bar)
    resid = stack.b_bar - stack.gamma_bar @ u
    u = u + scipy.linalg.lu_solve((lu, piv), resid)
    return verify(u, stack, sys, partition)


def power_bounds(
    stack: StackedSystem, sys: SystemMatrix, partition: ServicePartition
) -> BoundsReport:
    """Bracket the max allocated power via the inf-norm condition number.

    T_i (player absolute row sums) must exceed S_k (seeker row-sum bound)
    and the player right-hand sides must exceed the seeker ones for the
    bracket to be guaranteed; the report always carries the numbers.
    """
    gamma = sys.gamma
    players = partition.players
    seekers = partition.seekers

    t_vals = np.array(
        [partition.roles[i].a + gamma[i].sum() - gamma[i, i] for i in players]
    )
    s_vals = np.array(
        [2.0 - 2.0 * partition.roles[k].gamma * gamma[k, k] for k in seekers]
    )
    pre = True
    if players and seekers:
        pre = bool(
            np.all(t_vals[:, None] > s_vals[None, :])
            and np.all(stack.b_tilde[:, None] > stack.b_hat[None, :])
        )

    _factor(stack.gamma_bar)
    inv = np.linalg.inv(stack.gamma_bar)
    kappa = float(
        np.linalg.norm(stack.gamma_bar, np.inf) * np.linalg.norm(inv, np.inf)
    )

    lower = 0.0
    if seekers and players:
        lower = max(partition.roles[k].gamma * sys.n0[k] for k in seekers) / max(
            2.0 * partition.roles[i].a for i in players
        )
    upper = None
    if players:
        upper = kappa * max(
            partition.roles[i].beta / partition.roles[i].alpha for i in players
        )

    n = stack.size
    return BoundsReport(
        preconditions_hold=pre,
        lower_inf=lower,
        upper_inf=upper,
        kappa_inf=kappa,
        euclid_lower=lower,
        euclid_upper=None if upper is None else np.sqrt(n) * upper,
    )


def solve_ccp(stack: StackedSystem, sys: SystemMatrix, partition: ServicePartition) -> Solution:
    """All-seekers special case: minimum total power meeting every target."""
    if stack.m != 0:
        raise UsageError("central-cost solve requires an all-seekers partition")
    return solve_dsnp(stack, sys, partition)


def solve_ne(stack: StackedSystem, sys: SystemMatrix, partition: ServicePartition) -> Solution:
    """All-players special case: the closed-form Nash equilibrium."""
    if stack.n != 0:
        raise UsageError("equilibrium solve requires an all-players partition")
    return solve_dsnp(stack, sys, partition)
