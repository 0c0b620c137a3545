"""Synchronous generational dynamics and equilibrium measurement.

One generation: every node accumulates payoffs from the previous state,
draws one neighbor uniformly, and adopts that neighbor's strategy with the
rule's imitation probability; all replacements take effect simultaneously.
Per-generation randomness is drawn as whole arrays indexed by node id
(neighbor picks first, then adoption coins), so the update is independent
of any traversal order by construction — the same draws give the same next
state no matter how the nodes are visited.

A run executes a transient, then averages the cooperator frequency over a
measurement window. The uniform states are exact fixed points, so when
``early_absorb_exit`` is on a run that hits all-cooperate or all-defect
short-circuits with the exact absorbed average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .game import COOPERATE, DEFECT, GameParams, accumulate_payoffs, adoption_probabilities
from .network import Graph, as_generator

__all__ = [
    "ABSORBED_NONE",
    "ABSORBED_ALL_C",
    "ABSORBED_ALL_D",
    "SimProtocol",
    "SimResult",
    "init_strategies",
    "generation_step",
    "apply_synchronous_update",
    "run_simulation",
]

ABSORBED_NONE = "none"
ABSORBED_ALL_C = "all-C"
ABSORBED_ALL_D = "all-D"


@dataclass(frozen=True)
class SimProtocol:
    """Equilibration protocol for one dynamics run."""

    transient_generations: int = 10000
    measure_generations: int = 2000
    initial_coop_fraction: float = 0.5
    seed: int | None = None
    early_absorb_exit: bool = True

    def __post_init__(self) -> None:
        if self.transient_generations < 0:
            raise ValueError("transient_generations must be >= 0")
        if self.measure_generations < 1:
            raise ValueError("measure_generations must be >= 1")
        if not 0.0 <= self.initial_coop_fraction <= 1.0:
            raise ValueError("initial_coop_fraction must be in [0, 1]")


@dataclass(frozen=True)
class SimResult:
    """Outcome of one run.

    ``mean_coop_frequency`` is the plain mean of the per-generation
    cooperator fraction over the measurement window (exact absorbed value
    if the run hit a uniform state). ``coop_frequency_series`` holds one
    entry per executed generation when tracing was requested, else None.
    """

    mean_coop_frequency: float
    absorbed: str
    generations_executed: int
    coop_frequency_series: np.ndarray | None = None


def init_strategies(
    node_count: int,
    coop_fraction: float,
    rng: np.random.Generator | int | None = None,
) -> np.ndarray:
    """Random initial strategy vector with a fixed cooperator count.

    Exactly round-half-up(coop_fraction * node_count) cooperators are
    placed uniformly at random without replacement; everyone else defects.
    """
    if not 0.0 <= coop_fraction <= 1.0:
        raise ValueError(f"coop_fraction must be in [0, 1], got {coop_fraction}")
    rng = as_generator(rng)
    n_coop = int(math.floor(coop_fraction * node_count + 0.5))
    strategies = np.full(node_count, DEFECT, dtype=np.int8)
    if n_coop > 0:
        strategies[rng.choice(node_count, size=n_coop, replace=False)] = COOPERATE
    return strategies


def apply_synchronous_update(
    graph: Graph,
    strategies: np.ndarray,
    payoffs: np.ndarray,
    neighbor_picks: np.ndarray,
    adoption_draws: np.ndarray,
    params: GameParams,
) -> np.ndarray:
    """Next strategy vector given explicit per-node random draws.

    ``neighbor_picks[x]`` is an index into x's neighbor slice (0 <= pick <
    degree) and ``adoption_draws[x]`` a uniform variate in [0, 1). Exposed
    separately from :func:`generation_step` so the order-independence of
    the synchronous update can be exercised directly with fixed draws.
    """
    partners = graph.neighbors[graph.offsets[:-1] + neighbor_picks]
    degrees = graph.degrees
    prob = adoption_probabilities(
        payoffs, payoffs[partners], degrees, degrees[partners], params
    )
    return np.where(
        adoption_draws < prob, strategies[partners], strategies
    ).astype(np.int8)


def generation_step(
    graph: Graph,
    strategies: np.ndarray,
    params: GameParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """One synchronous generation: payoffs, neighbor draws, simultaneous
    replacement. The input vector is not modified."""
    payoffs = accumulate_payoffs(graph, strategies, params)
    picks = rng.integers(0, graph.degrees)
    draws = rng.random(graph.node_count)
    return apply_synchronous_update(graph, strategies, payoffs, picks, draws, params)


def _absorbed_state(coop_count: int, node_count: int) -> str:
    if coop_count == 0:
        return ABSORBED_ALL_D
    if coop_count == node_count:
        return ABSORBED_ALL_C
    return ABSORBED_NONE


def run_simulation(
    graph: Graph,
    params: GameParams,
    protocol: SimProtocol,
    rng: np.random.Generator | int | None = None,
    record_series: bool = False,
) -> SimResult:
    """Execute one full run under ``protocol``.

    The rng argument overrides ``protocol.seed``; one of the two must be
    given. The same (graph, params, protocol, seed) always produces an
    identical result, series included.
    """
    if rng is None:
        if protocol.seed is None:
            raise ValueError("either an rng or protocol.seed is required")
        rng = np.random.default_rng(protocol.seed)
    else:
        rng = as_generator(rng)

    n = graph.node_count
    strategies = init_strategies(n, protocol.initial_coop_fraction, rng)
    coop_count = int(strategies.sum())

    transient = protocol.transient_generations
    measure = protocol.measure_generations
    total = transient + measure
    series: list[float] = []
    window_sum = 0.0
    executed = 0
    absorbed = _absorbed_state(coop_count, n)

    for gen in range(1, total + 1):
        if protocol.early_absorb_exit and absorbed != ABSORBED_NONE:
            break
        strategies = generation_step(graph, strategies, params, rng)
        coop_count = int(strategies.sum())
        executed = gen
        rho = coop_count / n
        if record_series:
            series.append(rho)
        if gen > transient:
            window_sum += rho
        absorbed = _absorbed_state(coop_count, n)

    if protocol.early_absorb_exit and absorbed != ABSORBED_NONE:
        # Uniform states are exact fixed points: every unexecuted window
        # generation would have contributed the absorbed value.
        absorbed_rho = 1.0 if absorbed == ABSORBED_ALL_C else 0.0
        measured = max(executed - transient, 0)
        window_sum += absorbed_rho * (measure - measured)

    mean_rho = window_sum / measure
    return SimResult(
        mean_coop_frequency=mean_rho,
        absorbed=absorbed,
        generations_executed=executed,
        coop_frequency_series=np.array(series) if record_series else None,
    )
