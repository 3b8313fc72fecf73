"""Transportation multigraph, service types, routes and derived congestion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

if TYPE_CHECKING:
    from .mechanics import Assignment


class StructuralError(ValueError):
    """Raised when an id does not resolve or the network is malformed."""


class DomainError(ValueError):
    """Raised when a numeric argument falls outside its domain."""


@dataclass(frozen=True)
class ServiceType:
    """A mode of transportation (car, bus, bike, ...).

    ``min_payment`` is the lowest ticket a traveler of this type may pay;
    ``base_fare`` only seeds initial payments.
    """

    id: int
    label: str
    traffic_weight: float = 1.0
    max_capacity: int = 1
    base_fare: float = 0.0
    min_payment: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.traffic_weight <= 1.0:
            raise DomainError(f"service type {self.id}: traffic_weight must lie in [0, 1]")
        if int(self.max_capacity) != self.max_capacity or self.max_capacity < 1:
            raise DomainError(f"service type {self.id}: max_capacity must be a positive integer")
        if self.base_fare < 0 or self.min_payment < 0:
            raise DomainError(f"service type {self.id}: fares must be nonnegative")


@dataclass(frozen=True)
class Road:
    id: str
    tail: str
    head: str
    xi1: float = 5.0
    xi2: float = 3.0

    def __post_init__(self):
        if self.xi1 <= 0:
            raise DomainError(f"road {self.id}: latency slope xi1 must be positive")
        if self.xi2 < 0:
            raise DomainError(f"road {self.id}: latency intercept xi2 must be nonnegative")


@dataclass(frozen=True)
class Hub:
    """A node where travelers may stop, switch mode and trade with the hub budget."""

    id: str
    budget: float = 0.0
    service_rate: Mapping[int, float] = field(default_factory=dict, hash=False)
    is_origin: bool = False
    is_destination: bool = False

    def __post_init__(self):
        for h, rate in self.service_rate.items():
            if not rate > 0:
                raise DomainError(f"hub {self.id}: service rate for type {h} must be positive")

    @property
    def is_terminal(self) -> bool:
        # origin and destination carry no budget
        return self.is_origin or self.is_destination


@dataclass(frozen=True)
class Route:
    id: int
    edges: tuple[str, ...]
    hubs_en_route: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    """Directed multigraph with a single origin-destination pair and a route catalog."""

    hubs: tuple[Hub, ...]
    roads: tuple[Road, ...]
    routes: tuple[Route, ...]
    service_types: tuple[ServiceType, ...]

    def __post_init__(self):
        object.__setattr__(self, "hubs", tuple(self.hubs))
        object.__setattr__(self, "roads", tuple(self.roads))
        object.__setattr__(self, "routes", tuple(self.routes))
        object.__setattr__(self, "service_types", tuple(self.service_types))
        self._validate()

    def _validate(self):
        hub_ids = [v.id for v in self.hubs]
        road_ids = [e.id for e in self.roads]
        type_ids = [h.id for h in self.service_types]
        route_ids = [r.id for r in self.routes]
        for kind, ids in (("hub", hub_ids), ("road", road_ids),
                          ("service type", type_ids), ("route", route_ids)):
            if len(set(ids)) != len(ids):
                raise StructuralError(f"duplicate {kind} id")
        origins = [v.id for v in self.hubs if v.is_origin]
        dests = [v.id for v in self.hubs if v.is_destination]
        if len(origins) != 1 or len(dests) != 1:
            raise StructuralError("network needs exactly one origin and one destination hub")
        if not self.routes:
            raise StructuralError("route catalog is empty")
        if not self.service_types:
            raise StructuralError("no service types defined")

        hub_set, type_set = set(hub_ids), set(type_ids)
        for e in self.roads:
            for end in (e.tail, e.head):
                if end not in hub_set:
                    raise StructuralError(f"road {e.id}: unknown hub {end!r}")
        for v in self.hubs:
            for h in v.service_rate:
                if h not in type_set:
                    raise StructuralError(f"hub {v.id}: unknown service type {h!r}")

        roads = {e.id: e for e in self.roads}
        hubs = {v.id: v for v in self.hubs}
        for r in self.routes:
            if not r.edges:
                raise StructuralError(f"route {r.id}: no roads")
            node = origins[0]
            path_nodes = [node]
            for eid in r.edges:
                if eid not in roads:
                    raise StructuralError(f"route {r.id}: unknown road {eid!r}")
                e = roads[eid]
                if e.tail != node:
                    raise StructuralError(f"route {r.id}: road {eid} does not continue the path at {node}")
                node = e.head
                path_nodes.append(node)
            if node != dests[0]:
                raise StructuralError(f"route {r.id}: does not end at the destination")
            for v in r.hubs_en_route:
                if v not in hubs:
                    raise StructuralError(f"route {r.id}: unknown hub {v!r}")
                if v not in path_nodes:
                    raise StructuralError(f"route {r.id}: hub {v} is not on the path")
                if not hubs[v].service_rate:
                    raise StructuralError(f"route {r.id}: hub {v} offers no service type")

    # id lookups are hot in the evaluators, so they go through cached dicts
    def hub(self, hub_id: str) -> Hub:
        try:
            return self._hub_index[hub_id]
        except KeyError:
            raise StructuralError(f"unknown hub {hub_id!r}") from None

    def road(self, road_id: str) -> Road:
        try:
            return self._road_index[road_id]
        except KeyError:
            raise StructuralError(f"unknown road {road_id!r}") from None

    def route(self, route_id: int) -> Route:
        try:
            return self._route_index[route_id]
        except KeyError:
            raise StructuralError(f"unknown route {route_id!r}") from None

    def service_type(self, type_id: int) -> ServiceType:
        try:
            return self._type_index[type_id]
        except KeyError:
            raise StructuralError(f"unknown service type {type_id!r}") from None

    @property
    def _hub_index(self) -> dict[str, Hub]:
        return self._index("hubs")

    @property
    def _road_index(self) -> dict[str, Road]:
        return self._index("roads")

    @property
    def _route_index(self) -> dict[int, Route]:
        return self._index("routes")

    @property
    def _type_index(self) -> dict[int, ServiceType]:
        return self._index("service_types")

    def _index(self, attr):
        cache = self.__dict__.setdefault("_cache", {})
        if attr not in cache:
            cache[attr] = {x.id: x for x in getattr(self, attr)}
        return cache[attr]

    @property
    def origin(self) -> Hub:
        return next(v for v in self.hubs if v.is_origin)

    @property
    def destination(self) -> Hub:
        return next(v for v in self.hubs if v.is_destination)

    @property
    def budget_hubs(self) -> tuple[Hub, ...]:
        """Hubs that redistribute funds (everything except origin/destination)."""
        return tuple(v for v in self.hubs if not v.is_terminal)

    def discrete_options(self) -> list[tuple[int, str, int]]:
        """All (route, hub, type) triples, in tie-break order."""
        options = []
        for r in sorted(self.routes, key=lambda r: r.id):
            for v in sorted(r.hubs_en_route):
                for h in sorted(self.hub(v).service_rate):
                    options.append((r.id, v, h))
        return options

    def with_budgets(self, budgets: Mapping[str, float]) -> "NetworkSpec":
        hubs = []
        for v in self.hubs:
            if v.id in budgets:
                v = Hub(v.id, float(budgets[v.id]), dict(v.service_rate), v.is_origin, v.is_destination)
            hubs.append(v)
        return NetworkSpec(tuple(hubs), self.roads, self.routes, self.service_types)


def vehicle_count(travelers: int, capacity: int) -> int:
    """Vehicles needed for ``travelers`` riders of a type that seats ``capacity``."""
    return -(-travelers // capacity)


def services_on_road(assignment: Assignment, road_id: str) -> float:
    """Weighted number of vehicles on a road.

    Travelers of the same type on the same road pool into vehicles of that
    type, so ``J_e = sum_h w_h * ceil(n_eh / cap_h)``.
    """
    network = assignment.network
    network.road(road_id)
    per_type: dict[int, int] = {}
    for a in assignment.actions:
        if road_id in network.route(a.route).edges:
            per_type[a.service_type] = per_type.get(a.service_type, 0) + 1
    total = 0.0
    for h, n in per_type.items():
        st = network.service_type(h)
        total += st.traffic_weight * vehicle_count(n, st.max_capacity)
    return total


def latency(road: Road, j_e: float) -> float:
    """Affine travel time ``xi1 * J_e + xi2`` of a road carrying ``j_e`` services."""
    if j_e < 0:
        raise DomainError(f"service count must be nonnegative, got {j_e}")
    return road.xi1 * j_e + road.xi2


def latency_integral(road: Road, j_e: float) -> float:
    """Sum of latencies c(1) + ... + c(J_e).

    A fractional load adds its fractional part of the next step, so a
    unit increment of the load always changes the sum by c(new load).
    """
    if j_e < 0:
        raise DomainError(f"service count must be nonnegative, got {j_e}")
    whole = math.floor(j_e)
    frac = j_e - whole
    total = road.xi1 * whole * (whole + 1) / 2.0 + road.xi2 * whole
    if frac > 0:
        total += frac * latency(road, whole + 1)
    return total


def hub_cohort(assignment: Assignment, hub_id: str) -> frozenset[int]:
    """Travelers who stop at ``hub_id`` (the querying traveler included)."""
    assignment.network.hub(hub_id)
    return frozenset(i for i, a in enumerate(assignment.actions) if a.hub == hub_id)


def service_queue(assignment: Assignment, hub_id: str, type_id: int) -> frozenset[int]:
    """Travelers who board service type ``type_id`` at ``hub_id``."""
    assignment.network.hub(hub_id)
    assignment.network.service_type(type_id)
    return frozenset(
        i for i, a in enumerate(assignment.actions)
        if a.hub == hub_id and a.service_type == type_id
    )

