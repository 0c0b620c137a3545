"""Evolutionary prisoner's dilemma on heterogeneous Newman-Watts networks.

The package is organized bottom-up:

``network``
    Ring-lattice and hub-biased small-world graph generation, degree
    statistics, edge-list text I/O.
``game``
    Payoff accumulation and the two strategy-adoption rules.
``dynamics``
    Synchronous generational evolution and equilibrium measurement.
``sweep``
    Replicated parameter sweeps (temptation, hub fraction, grids, mean
    degree, heterogeneity curves) with reproducible seed derivation and
    CSV/JSON output.
``cli``
    ``hnwpd`` command-line front end: generate / run / sweep / stats.
"""

from .network import (
    DegreeStats,
    Graph,
    as_generator,
    degree_stats,
    generate_hnw,
    graphs_identical,
    read_edge_list,
    ring_lattice,
    write_edge_list,
)
from .game import (
    COOPERATE,
    DEFECT,
    RULE_ACCUMULATED,
    RULE_AVERAGE,
    GameParams,
    accumulate_payoffs,
    adoption_probabilities,
    adoption_probability,
    pair_payoff,
)
from .dynamics import (
    ABSORBED_ALL_C,
    ABSORBED_ALL_D,
    ABSORBED_NONE,
    SimProtocol,
    SimResult,
    apply_synchronous_update,
    generation_step,
    init_strategies,
    run_simulation,
)
from .sweep import (
    SweepRecord,
    SweepSpec,
    derive_seed,
    heterogeneity_curve,
    run_point,
    sweep_b,
    sweep_grid,
    sweep_hub_fraction,
    sweep_m,
    write_records_csv,
    write_records_json,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "DegreeStats",
    "ring_lattice",
    "generate_hnw",
    "degree_stats",
    "write_edge_list",
    "read_edge_list",
    "graphs_identical",
    "as_generator",
    "COOPERATE",
    "DEFECT",
    "RULE_ACCUMULATED",
    "RULE_AVERAGE",
    "GameParams",
    "pair_payoff",
    "accumulate_payoffs",
    "adoption_probability",
    "adoption_probabilities",
    "ABSORBED_NONE",
    "ABSORBED_ALL_C",
    "ABSORBED_ALL_D",
    "SimProtocol",
    "SimResult",
    "init_strategies",
    "generation_step",
    "apply_synchronous_update",
    "run_simulation",
    "SweepSpec",
    "SweepRecord",
    "derive_seed",
    "run_point",
    "sweep_hub_fraction",
    "sweep_b",
    "sweep_grid",
    "sweep_m",
    "heterogeneity_curve",
    "write_records_csv",
    "write_records_json",
    "__version__",
]
