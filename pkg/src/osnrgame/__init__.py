"""Power control for differentiated services on WDM optical links.

Builds the channel-coupling matrix from a physical link description,
solves the mixed game-player/target-seeker allocation directly, falls back
to a least-squares dual when the targets are unattainable, and provides
the distributed OSNR-driven iteration with convergence diagnostics.
"""

from .direct import (
    BoundsReport,
    FeasibilityReport,
    Solution,
    check_feasibility,
    power_bounds,
    solve_ccp,
    solve_dsnp,
    solve_ne,
    verify,
)
from .iterate import (
    IterationConfig,
    IterationTrace,
    convergence_rate,
    player_update,
    run,
    seeker_equivalence_params,
    seeker_update,
    step,
)
from .link import (
    AseParams,
    ChannelSpec,
    GainProfile,
    Link,
    LinkNetwork,
    Span,
    SystemMatrix,
    build_system_matrix,
    evaluate_gain,
    span_ase,
)
from .model import (
    PlayerParams,
    SeekerParams,
    ServicePartition,
    StackedSystem,
    assemble,
    osnr,
    osnr_all,
    osnr_db,
    player_cost,
)
from .qp import (
    QpProblem,
    QpResult,
    build_qp,
    build_qp_from_stack,
    recover_primal,
    solve_dual,
    solve_qp,
)
from .run import RunReport, emit, execute
from .iterate import run  # noqa: F811 -- the .run submodule import shadows the name
from .scenario import (
    RunOptions,
    Scenario,
    demo3_scenario,
    demo30_scenario,
    load_scenario,
)

__version__ = "0.1.0"
