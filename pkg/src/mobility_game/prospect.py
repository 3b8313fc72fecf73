"""Prospect-theoretic travelers facing uncertain hub budgets.

Each hub's available funds are a lottery over quadrature nodes. A traveler
values the gain ``2 * n * payment`` of every budget realization ``n``
relative to the wealth-neutral reference point, through a loss-averse value
function and Prelec-weighted probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .mechanics import (
    Assignment,
    Game,
    congestion_cost,
    congestion_potential,
    disincentive,
    waiting_cost,
)
from .network import DomainError, NetworkSpec

DEFAULT_NODES = 33
REFERENCE_POLICIES = ("wealth-neutral", "status-quo")


@dataclass(frozen=True)
class ProspectParams:
    beta1: float = 0.88
    beta2: float = 0.88
    beta3: float = 1.0
    lam: float = 2.25

    def __post_init__(self):
        if not (0 < self.beta1 <= 1 and 0 < self.beta2 <= 1):
            raise DomainError("beta1, beta2 must lie in (0, 1]")
        if not 0 < self.beta3 <= 1:
            raise DomainError("beta3 must lie in (0, 1]")
        if self.lam < 1:
            raise DomainError("loss aversion lambda must be >= 1")

    @property
    def beta(self) -> float:
        # the subjective utility needs a single curvature on both sides
        if self.beta1 != self.beta2:
            raise DomainError("subjective utility requires beta1 == beta2")
        return self.beta1


@dataclass(frozen=True)
class BudgetLottery:
    """Discrete budget law: ascending ``nodes`` with probability ``masses``."""

    nodes: tuple[float, ...]
    masses: tuple[float, ...]

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        masses = tuple(float(p) for p in self.masses)
        if len(nodes) != len(masses) or not nodes:
            raise DomainError("lottery needs matching, non-empty nodes and masses")
        if any(b < a for a, b in zip(nodes, nodes[1:])):
            raise DomainError("lottery nodes must be sorted ascending")
        if any(p < 0 for p in masses) or abs(sum(masses) - 1.0) > 1e-12:
            raise DomainError("lottery masses must be nonnegative and sum to 1")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def gaussian(cls, mean: float, stddev: float, k: int = DEFAULT_NODES) -> "BudgetLottery":
        """Gauss-Hermite discretization of N(mean, stddev**2)."""
        if stddev < 0:
            raise DomainError("stddev must be nonnegative")
        if stddev == 0 or k == 1:
            return cls((float(mean),), (1.0,))
        x, w = np.polynomial.hermite_e.hermegauss(k)
        masses = w / math.fsum(w)
        return cls(tuple(mean + stddev * x), tuple(masses))

    @property
    def mean(self) -> float:
        return math.fsum(n * p for n, p in zip(self.nodes, self.masses))


@dataclass(frozen=True, eq=False)
class ProspectModel:
    """Behavioral parameters plus one budget lottery per budget-carrying hub.

    ``reference="wealth-neutral"`` anchors each traveler at the transfer they
    would get from a hub with zero funds; ``"status-quo"`` anchors at zero.
    Only the former keeps the game an exact potential game.
    """

    params: ProspectParams
    lotteries: Mapping[str, BudgetLottery] = field(default_factory=dict)
    reference: str = "wealth-neutral"

    def __post_init__(self):
        if self.reference not in REFERENCE_POLICIES:
            raise DomainError(f"reference must be one of {REFERENCE_POLICIES}")

    @classmethod
    def centered(cls, network: NetworkSpec, params: ProspectParams, stddev: float,
                 k: int = DEFAULT_NODES, reference: str = "wealth-neutral") -> "ProspectModel":
        """Lotteries centered on each hub's budget with zero-mean Gaussian noise."""
        lotteries = {v.id: BudgetLottery.gaussian(v.budget, stddev, k) for v in network.budget_hubs}
        return cls(params, lotteries, reference)

    def lottery(self, hub_id: str) -> BudgetLottery:
        try:
            return self.lotteries[hub_id]
        except KeyError:
            raise DomainError(f"no budget lottery for hub {hub_id!r}") from None

    def with_params(self, params: ProspectParams) -> "ProspectModel":
        return ProspectModel(params, self.lotteries, self.reference)


def value(z: float, z0: float, params: ProspectParams) -> float:
    """Reference-dependent value: concave over gains, loss-averse and convex over losses."""
    if z >= z0:
        return (z - z0) ** params.beta1
    return -params.lam * (z0 - z) ** params.beta2


def prelec_weight(p, beta3: float):
    """Prelec weighting ``exp(-(-log p)**beta3)`` with w(0)=0, w(1)=1."""
    arr = np.asarray(p, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or np.any(np.isnan(arr)):
        raise DomainError("probabilities must lie in [0, 1]")
    with np.errstate(divide="ignore"):
        out = np.exp(-np.power(-np.log(arr), beta3))
    out = np.where(arr == 0, 0.0, np.where(arr == 1, 1.0, out))
    return float(out) if out.ndim == 0 else out


def _value_array(x: np.ndarray, params: ProspectParams) -> np.ndarray:
    beta = params.beta
    mag = np.abs(x) ** beta
    return np.where(x >= 0, mag, -params.lam * mag)


def lottery_weights(lottery: BudgetLottery, params: ProspectParams) -> np.ndarray:
    return np.asarray(prelec_weight(np.asarray(lottery.masses), params.beta3), dtype=float)


def subjective_gain(payment, lottery: BudgetLottery, params: ProspectParams):
    """``sum_k v(2 n_k payment) w(p_k)``; vectorized over ``payment``."""
    pay = np.asarray(payment, dtype=float)
    nodes = np.asarray(lottery.nodes)
    w = lottery_weights(lottery, params)
    gains = 2.0 * np.multiply.outer(pay, nodes)
    out = _value_array(gains, params) @ w
    return float(out) if np.ndim(out) == 0 else out


def reference_point(assignment: Assignment, traveler: int) -> float:
    """Transfer the traveler would get from a hub holding no funds."""
    a = assignment.actions[traveler]
    others = sum(b.payment for k, b in enumerate(assignment.actions) if b.hub == a.hub and k != traveler)
    return others * others - (others + a.payment) ** 2


def _require_quadratic(game: Game):
    if game.config.pricing_exponent != 2.0:
        raise DomainError("prospect behavior is defined for the quadratic pricing mechanism only")


def expected_prospect(game: Game, assignment: Assignment, traveler: int, model: ProspectModel) -> float:
    """Subjective expected gain from the hub lottery (zero at origin/destination stops)."""
    _require_quadratic(game)
    a = assignment.actions[traveler]
    hub = game.network.hub(a.hub)
    if hub.is_terminal:
        return 0.0
    lottery = model.lottery(a.hub)
    if model.reference == "wealth-neutral":
        return subjective_gain(a.payment, lottery, model.params)
    z0 = 0.0
    others = sum(b.payment for k, b in enumerate(assignment.actions) if b.hub == a.hub and k != traveler)
    total = 0.0
    for n, p in zip(lottery.nodes, lottery.masses):
        z = (n - others) ** 2 - (n - others - a.payment) ** 2
        total += value(z, z0, model.params) * prelec_weight(p, model.params.beta3)
    return total


def prospect_utility(game: Game, assignment: Assignment, traveler: int, model: ProspectModel) -> float:
    _require_quadratic(game)
    a = assignment.actions[traveler]
    hub = game.network.hub(a.hub)
    if hub.is_terminal:
        z0 = 0.0
    elif model.reference == "wealth-neutral":
        z0 = reference_point(assignment, traveler)
    else:
        z0 = 0.0
    return (z0 + expected_prospect(game, assignment, traveler, model)
            - disincentive(game.travelers[traveler], a.payment)
            - congestion_cost(game, assignment, traveler)
            - waiting_cost(game, assignment, traveler))


def prospect_potential(game: Game, assignment: Assignment, model: ProspectModel) -> float:
    """Exact potential of the prospect game (wealth-neutral reference)."""
    _require_quadratic(game)
    net = game.network
    gains = 0.0
    paid: dict[str, float] = {}
    for a in assignment.actions:
        if not net.hub(a.hub).is_terminal:
            gains += subjective_gain(a.payment, model.lottery(a.hub), model.params)
            paid[a.hub] = paid.get(a.hub, 0.0) + a.payment
    wallet = -sum(disincentive(t, a.payment) for t, a in zip(game.travelers, assignment.actions))
    cohort = -sum(p * p for p in paid.values())
    return gains + cohort + wallet + congestion_potential(game, assignment)


def prospect_welfare(game: Game, assignment: Assignment, model: ProspectModel) -> float:
    return sum(prospect_utility(game, assignment, i, model) for i in range(game.size))
