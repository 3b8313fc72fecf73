"""Economic primitives of the rational-choice mobility game.

Pricing transfer at a hub, the empty-wallet disincentive, a traveler's
utility, and the exact potential whose unilateral differences reproduce
utility differences.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .network import (
    DomainError,
    NetworkSpec,
    StructuralError,
    latency,
    latency_integral,
    vehicle_count,
)

WAITING_MODES = ("type", "hub")


class EmptyWalletError(ArithmeticError):
    """Disincentive is unbounded: empty wallet and nothing paid."""


@dataclass(frozen=True)
class TravelerProfile:
    id: int
    wallet: float
    wallet_max: float
    eta: float

    def __post_init__(self):
        if not self.wallet_max > 0:
            raise DomainError(f"traveler {self.id}: wallet_max must be positive")
        if not 0 <= self.wallet <= self.wallet_max:
            raise DomainError(f"traveler {self.id}: wallet must lie in [0, wallet_max]")
        if not 0 < self.eta < 1:
            raise DomainError(f"traveler {self.id}: eta must lie in (0, 1)")


@dataclass(frozen=True)
class Action:
    route: int
    hub: str
    service_type: int
    payment: float

    @property
    def discrete(self) -> tuple[int, str, int]:
        return (self.route, self.hub, self.service_type)


@dataclass(frozen=True)
class Assignment:
    """Joint action profile; ``actions[i]`` belongs to traveler ``i``."""

    network: NetworkSpec
    actions: tuple[Action, ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))

    def __len__(self):
        return len(self.actions)

    def with_action(self, traveler: int, action: Action) -> "Assignment":
        actions = list(self.actions)
        actions[traveler] = action
        return Assignment(self.network, tuple(actions))

    def hub_payments(self) -> dict[str, float]:
        totals: dict[str, float] = {}
        for a in self.actions:
            totals[a.hub] = totals.get(a.hub, 0.0) + a.payment
        return totals

    def road_loads(self) -> dict[str, float]:
        """Weighted service count J_e for every road of the network."""
        counts: Counter = Counter()
        for a in self.actions:
            for eid in self.network.route(a.route).edges:
                counts[eid, a.service_type] += 1
        loads = {e.id: 0.0 for e in self.network.roads}
        for (eid, h), n in counts.items():
            st = self.network.service_type(h)
            loads[eid] += st.traffic_weight * vehicle_count(n, st.max_capacity)
        return loads


@dataclass(frozen=True)
class MechanicsConfig:
    """Unit conversions and pricing/waiting variants.

    ``waiting="type"`` queues a traveler with the others boarding the same
    service type at the hub; ``waiting="hub"`` uses the whole hub cohort.
    """

    zeta1: float = 1.0
    zeta2: float = 1.0
    pricing_exponent: float = 2.0
    waiting: str = "type"

    def __post_init__(self):
        if not (self.zeta1 > 0 and self.zeta2 > 0):
            raise DomainError("zeta1 and zeta2 must be positive")
        if not self.pricing_exponent > 0:
            raise DomainError("pricing_exponent must be positive")
        if self.waiting not in WAITING_MODES:
            raise DomainError(f"waiting must be one of {WAITING_MODES}")


@dataclass(frozen=True, eq=False)
class Game:
    """A mobility game instance: network, travelers and mechanics settings."""

    network: NetworkSpec
    travelers: tuple[TravelerProfile, ...]
    config: MechanicsConfig = field(default_factory=MechanicsConfig)

    def __post_init__(self):
        object.__setattr__(self, "travelers", tuple(self.travelers))
        if [t.id for t in self.travelers] != list(range(len(self.travelers))):
            raise StructuralError("traveler ids must be 0..I-1 in order")

    @property
    def size(self) -> int:
        return len(self.travelers)

    def payment_bounds(self, traveler: int, type_id: int) -> tuple[float, float]:
        lo = self.network.service_type(type_id).min_payment
        hi = self.travelers[traveler].wallet_max
        return min(lo, hi), hi

    def check_action(self, traveler: int, action: Action) -> None:
        net = self.network
        route = net.route(action.route)
        if action.hub not in route.hubs_en_route:
            raise StructuralError(f"traveler {traveler}: hub {action.hub} not on route {action.route}")
        if action.service_type not in net.hub(action.hub).service_rate:
            raise StructuralError(
                f"traveler {traveler}: hub {action.hub} offers no service type {action.service_type}")
        lo, hi = self.payment_bounds(traveler, action.service_type)
        if not lo - 1e-12 <= action.payment <= hi + 1e-12:
            raise DomainError(f"traveler {traveler}: payment {action.payment} outside [{lo}, {hi}]")

    def check(self, assignment: Assignment) -> None:
        if assignment.network is not self.network:
            raise StructuralError("assignment refers to a different network")
        if len(assignment) != self.size:
            raise StructuralError(f"expected {self.size} actions, got {len(assignment)}")
        for i, a in enumerate(assignment.actions):
            self.check_action(i, a)


def price_power(x: float, p: float) -> float:
    """``|x|**p``, the real even power (``x**(2/3)`` read as ``cbrt(x)**2``).

    For ``p = 2`` this is ``x**2``; an even function keeps the mechanism's
    incentive to bring the hub balance to zero from either side.
    """
    if p == 2.0:
        return x * x
    return abs(x) ** p


def pricing_transfer(budget: float, others_paid: float, payment: float, exponent: float = 2.0) -> float:
    """Transfer a traveler receives from a hub.

    ``F(b - others) - F(b - others - payment)`` with ``F(x) = |x|**exponent``.
    Negative values are fees.
    """
    before = budget - others_paid
    after = before - payment
    return price_power(before, exponent) - price_power(after, exponent)


def pricing(game: Game, assignment: Assignment, traveler: int) -> float:
    a = assignment.actions[traveler]
    hub = game.network.hub(a.hub)
    if hub.is_terminal:
        return 0.0
    others = sum(b.payment for k, b in enumerate(assignment.actions) if b.hub == a.hub and k != traveler)
    return pricing_transfer(hub.budget, others, a.payment, game.config.pricing_exponent)


def disincentive(profile: TravelerProfile, payment: float) -> float:
    """Empty-wallet disincentive ``wallet_max / (wallet + eta * payment)``."""
    if payment < 0:
        raise DomainError("payment must be nonnegative")
    denom = profile.wallet + profile.eta * payment
    if denom <= 0:
        raise EmptyWalletError(f"traveler {profile.id}: empty wallet with zero payment")
    return profile.wallet_max / denom


@dataclass(frozen=True)
class UtilityTerms:
    tau: float
    disincentive: float
    congestion: float
    waiting: float

    @property
    def total(self) -> float:
        return self.tau - self.disincentive - self.congestion - self.waiting


def waiting_cost(game: Game, assignment: Assignment, traveler: int) -> float:
    a = assignment.actions[traveler]
    hub = game.network.hub(a.hub)
    if hub.is_terminal:
        return 0.0
    try:
        rate = hub.service_rate[a.service_type]
    except KeyError:
        raise StructuralError(f"hub {a.hub} has no service rate for type {a.service_type}") from None
    if game.config.waiting == "type":
        queue = sum(1 for b in assignment.actions if b.hub == a.hub and b.service_type == a.service_type)
    else:
        queue = sum(1 for b in assignment.actions if b.hub == a.hub)
    return game.config.zeta2 * queue / rate


def congestion_cost(game: Game, assignment: Assignment, traveler: int,
                    loads: dict[str, float] | None = None) -> float:
    if loads is None:
        loads = assignment.road_loads()
    net = game.network
    route = net.route(assignment.actions[traveler].route)
    return game.config.zeta1 * sum(latency(net.road(eid), loads[eid]) for eid in route.edges)


def utility_terms(game: Game, assignment: Assignment, traveler: int) -> UtilityTerms:
    a = assignment.actions[traveler]
    return UtilityTerms(
        tau=pricing(game, assignment, traveler),
        disincentive=disincentive(game.travelers[traveler], a.payment),
        congestion=congestion_cost(game, assignment, traveler),
        waiting=waiting_cost(game, assignment, traveler),
    )


def utility(game: Game, assignment: Assignment, traveler: int) -> float:
    """Risk-neutral utility of ``traveler`` under ``assignment``."""
    return utility_terms(game, assignment, traveler).total


def welfare(game: Game, assignment: Assignment) -> float:
    """Social welfare: sum of all travelers' utilities."""
    return sum(utility(game, assignment, i) for i in range(game.size))


def congestion_potential(game: Game, assignment: Assignment) -> float:
    """Latency and waiting parts shared by the rational and prospect potentials."""
    net, cfg = game.network, game.config
    loads = assignment.road_loads()
    lat = sum(latency_integral(net.road(eid), j) for eid, j in loads.items())

    wait = 0.0
    if cfg.waiting == "type":
        queues = Counter((a.hub, a.service_type) for a in assignment.actions)
        for (v, h), n in queues.items():
            hub = net.hub(v)
            if not hub.is_terminal:
                wait += n * (n + 1) / (2.0 * hub.service_rate[h])
    else:
        cohorts = Counter(a.hub for a in assignment.actions)
        for a in assignment.actions:
            hub = net.hub(a.hub)
            if not hub.is_terminal:
                wait += (cohorts[a.hub] + 1) / (2.0 * hub.service_rate[a.service_type])
    return -cfg.zeta1 * lat - cfg.zeta2 * wait


def potential(game: Game, assignment: Assignment) -> float:
    """Exact potential of the rational game.

    Pricing enters as ``-sum_v F(b_v - P_v)``: leaving hub v raises this by
    exactly the transfer the leaver was receiving there.
    """
    p = game.config.pricing_exponent
    paid = assignment.hub_payments()
    price = -sum(price_power(v.budget - paid.get(v.id, 0.0), p) for v in game.network.budget_hubs)
    wallet = -sum(disincentive(t, a.payment) for t, a in zip(game.travelers, assignment.actions))
    return price + wallet + congestion_potential(game, assignment)


def initial_payment(game: Game, traveler: int, type_id: int) -> float:
    lo, hi = game.payment_bounds(traveler, type_id)
    return min(max(game.network.service_type(type_id).base_fare, lo), hi)


def make_assignment(game: Game, triples: Sequence[tuple[int, str, int, float]]) -> Assignment:
    """Build and validate an assignment from ``(route, hub, type, payment)`` tuples."""
    assignment = Assignment(game.network, tuple(Action(*t) for t in triples))
    game.check(assignment)
    return assignment

