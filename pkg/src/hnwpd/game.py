"""Pairwise game payoffs and imitation probabilities.

Strategies are pure: cooperate or defect, encoded as int8 codes 1 / 0 so
whole populations live in compact numpy vectors. The one-parameter payoff
matrix gives a cooperator 1 against a cooperator and 0 against a defector;
a defector earns the temptation ``b`` against a cooperator and 0 against a
defector. A node's payoff per round is the sum over its neighbor set.

Two imitation rules are provided. Under the accumulated rule a node x that
compares against a richer neighbor y adopts y's strategy with probability
(P_y - P_x) / (b * max(k_x, k_y)); under the average rule payoffs are
first divided by degree and the probability is (P̄_y - P̄_x) / b. Both
rules are strict: a neighbor whose (rule-relevant) payoff does not exceed
x's is never imitated, so the probability is 0 on ties and inferior
comparisons and provably stays in [0, 1] for any reachable payoffs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import Graph

__all__ = [
    "COOPERATE",
    "DEFECT",
    "RULE_ACCUMULATED",
    "RULE_AVERAGE",
    "GameParams",
    "pair_payoff",
    "accumulate_payoffs",
    "adoption_probability",
    "adoption_probabilities",
]

COOPERATE = 1
DEFECT = 0

RULE_ACCUMULATED = "accumulated"
RULE_AVERAGE = "average"
_RULES = (RULE_ACCUMULATED, RULE_AVERAGE)


@dataclass(frozen=True)
class GameParams:
    """Temptation parameter and update-rule selector.

    ``temptation`` must lie in [1, 2]. The game is a proper prisoner's
    dilemma only for 1 < b < 2; the boundary values are accepted (the
    b grid conventionally includes them) but flagged via ``proper_pd``.
    """

    temptation: float
    rule: str = RULE_ACCUMULATED

    def __post_init__(self) -> None:
        if not 1.0 <= self.temptation <= 2.0:
            raise ValueError(
                f"temptation must be in [1, 2], got {self.temptation}"
            )
        if self.rule not in _RULES:
            raise ValueError(f"rule must be one of {_RULES}, got {self.rule!r}")

    @property
    def proper_pd(self) -> bool:
        return 1.0 < self.temptation < 2.0


def pair_payoff(strategy_x: int, strategy_y: int, temptation: float) -> float:
    """Payoff to ``strategy_x`` from one encounter against ``strategy_y``."""
    if strategy_y != COOPERATE:
        return 0.0
    return 1.0 if strategy_x == COOPERATE else temptation


def accumulate_payoffs(
    graph: Graph, strategies: np.ndarray, params: GameParams
) -> np.ndarray:
    """Per-node payoff summed over the neighbor set.

    Equivalent to the closed form: a cooperator earns the number of its
    cooperating neighbors, a defector earns temptation times that count.
    """
    if strategies.shape != (graph.node_count,):
        raise ValueError(
            f"strategy vector length {strategies.shape} does not match "
            f"node count {graph.node_count}"
        )
    coop_neighbors = np.add.reduceat(
        strategies[graph.neighbors].astype(np.int64), graph.offsets[:-1]
    )
    return np.where(
        strategies == COOPERATE,
        coop_neighbors.astype(np.float64),
        params.temptation * coop_neighbors,
    )


def adoption_probability(
    payoff_x: float,
    payoff_y: float,
    degree_x: int,
    degree_y: int,
    params: GameParams,
) -> float:
    """Probability that x adopts the strategy of its chosen neighbor y.

    Zero unless y's comparison payoff (accumulated or degree-averaged,
    per ``params.rule``) strictly exceeds x's.
    """
    if degree_x < 1 or degree_y < 1:
        raise ValueError("degrees must be >= 1")
    if params.rule == RULE_AVERAGE:
        gap = payoff_y / degree_y - payoff_x / degree_x
        norm = params.temptation
    else:
        gap = payoff_y - payoff_x
        norm = params.temptation * max(degree_x, degree_y)
    return gap / norm if gap > 0.0 else 0.0


def adoption_probabilities(
    payoff_x: np.ndarray,
    payoff_y: np.ndarray,
    degree_x: np.ndarray,
    degree_y: np.ndarray,
    params: GameParams,
) -> np.ndarray:
    """Vectorized :func:`adoption_probability` over aligned arrays."""
    if params.rule == RULE_AVERAGE:
        gap = payoff_y / degree_y - payoff_x / degree_x
        norm = params.temptation
    else:
        gap = payoff_y - payoff_x
        norm = params.temptation * np.maximum(degree_x, degree_y)
    return np.where(gap > 0.0, gap / norm, 0.0)
