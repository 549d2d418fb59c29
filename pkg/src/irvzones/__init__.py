"""Split-IRV outcomes and exclusion zones on graph and continuous metrics."""

from .errors import (
    BudgetExceededError,
    DisconnectedGraphError,
    GraphFormatError,
    MalformedInstanceError,
)
from .graphs import (
    Graph,
    all_pairs_distances,
    load_graph,
    parse_edge_list,
    parse_graph6,
    to_graph6,
)
from .elections import (
    Branch,
    ElectionOutcome,
    FixedOrder,
    Round,
    Seeded,
    pairwise_contest,
    plurality_shares,
    possible_winners,
    run_irv,
)
from .zones import (
    ZoneCheckResult,
    ZoneReport,
    all_exclusion_zones,
    build_loss_graph,
    condorcet_positions,
    is_exclusion_zone,
    loss_closure,
    minimal_exclusion_zone,
    replay_witness,
)
from .gadget import (
    has_exact_cover,
    parse_rx3c,
    rx3c_gadget,
    validate_rx3c,
)
from .families import (
    FAMILY_KINDS,
    build_family,
    family_zone,
    is_all_pairwise_ties,
)
from .enumeration import (
    CensusRow,
    census_rows_csv,
    enumerate_connected_graphs,
    enumerate_trees,
    graphs_from_file,
    zone_census,
)
from .approx import (
    ApproxCheckReport,
    ApproxZoneReport,
    approx_minimal_zone,
    check_approx_zone,
    quiet_streak_target,
)
from .geometry import (
    FlagF,
    FlagZoneReport,
    Hyperrectangle,
    HyperrectReport,
    MCOutcome,
    MCShares,
    ProjectionReport,
    Rectangle,
    Scene,
    mc_irv_outcome,
    mc_vote_shares,
    verify_condorcet_hyperrect,
    verify_flag_zone,
    verify_projection,
)
from .chains import (
    ChainReport,
    ChainSpec,
    ChainStep,
    StepReport,
    builtin_chain,
    chain_to_text,
    parse_chain,
    verify_chain,
)

__version__ = "0.1.0"
