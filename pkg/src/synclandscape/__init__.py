"""Landscape laboratory for the network synchronization energy
``E(theta) = 1/2 sum_ij a_ij (1 - cos(theta_i - theta_j))``."""

from .certify import (
    Certificate,
    ErRegime,
    check_proposition,
    check_theorem1,
    deviation_bound,
    er_regime,
    first_order_residual,
    rip_probe,
)
from .descent import (
    Classification,
    DescentConfig,
    DescentOutcome,
    DescentTrace,
    StopReason,
    descend,
    multi_restart,
    random_init,
)
from .energy import (
    CircleEmbedding,
    OrderParameter,
    embedding,
    energy,
    gradient,
    hessian,
    order_parameter,
)
from .graphs import (
    GraphMetrics,
    WeightedGraph,
    gen_bipartite_wsg,
    gen_complete,
    gen_cycle,
    gen_er,
    gen_path,
    gen_wsg,
    load_edge_list,
    metrics,
    save_edge_list,
)
from .harness import GridSpec, PhaseCell, PRule, run_cell, run_grid
from .spectral import (
    CriticalPointReport,
    Verdict,
    bipartite_twisted_eigs,
    classify_critical,
    hessian_spectrum,
    path_critical_points,
    twisted_state,
    wsg_critical_k,
    wsg_hessian_eigs,
    wsg_lambda2_curve,
)

__version__ = "0.1.0"
