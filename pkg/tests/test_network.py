import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from instances import random_network
from mobility_game.mechanics import Action, Assignment
from mobility_game.network import (
    DomainError,
    Hub,
    NetworkSpec,
    Road,
    Route,
    ServiceType,
    StructuralError,
    hub_cohort,
    latency,
    latency_integral,
    service_queue,
    services_on_road,
    vehicle_count,
)
from mobility_game.scenario import load_scenario


def two_hub_network(**overrides):
    parts = dict(
        hubs=(Hub("O", is_origin=True), Hub("A", 5.0, {1: 1.0, 2: 2.0}),
              Hub("B", -3.0, {1: 1.5}), Hub("D", is_destination=True)),
        roads=(Road("e1", "O", "A"), Road("e2", "A", "D"), Road("e3", "O", "B"),
               Road("e4", "B", "D"), Road("e5", "A", "B")),
        routes=(Route(1, ("e1", "e2"), ("A",)), Route(2, ("e3", "e4"), ("B",)),
                Route(3, ("e1", "e5", "e4"), ("A", "B"))),
        service_types=(ServiceType(1, "car"), ServiceType(2, "bus", 0.5, 3)),
    )
    parts.update(overrides)
    return NetworkSpec(**parts)


def test_fig3_builtin_layout():
    net = load_scenario("fig3").network
    assert sorted(e.id for e in net.roads) == ["e1", "e2", "e3", "e4", "e5"]
    assert sorted(v.id for v in net.hubs) == ["A", "B", "D", "O"]
    assert [r.edges for r in net.routes] == [("e1", "e4"), ("e2", "e5"), ("e2", "e3", "e4")]
    assert net.origin.id == "O" and net.destination.id == "D"
    assert [v.id for v in net.budget_hubs] == ["A", "B"]


def test_service_type_invariants():
    with pytest.raises(DomainError):
        ServiceType(1, "x", traffic_weight=1.5)
    with pytest.raises(DomainError):
        ServiceType(1, "x", max_capacity=0)
    with pytest.raises(DomainError):
        ServiceType(1, "x", min_payment=-1)


def test_road_and_hub_invariants():
    with pytest.raises(DomainError):
        Road("e", "O", "D", xi1=0.0)
    with pytest.raises(DomainError):
        Road("e", "O", "D", xi2=-1.0)
    with pytest.raises(DomainError):
        Hub("A", 1.0, {1: 0.0})


@pytest.mark.parametrize("change, message", [
    (dict(routes=(Route(1, ("e1", "e9"), ("A",)),)), "unknown road"),
    (dict(routes=(Route(1, ("e1", "e4"), ("A",)),)), "does not continue"),
    (dict(routes=(Route(1, ("e1", "e2"), ("B",)),)), "not on the path"),
    (dict(routes=(Route(1, ("e1",), ("A",)),)), "does not end"),
    (dict(routes=()), "empty"),
])
def test_route_validation(change, message):
    with pytest.raises(StructuralError, match=message):
        two_hub_network(**change)


def test_duplicate_and_terminal_validation():
    net = two_hub_network()
    with pytest.raises(StructuralError, match="duplicate"):
        two_hub_network(roads=net.roads + (Road("e1", "O", "A"),))
    with pytest.raises(StructuralError, match="exactly one origin"):
        two_hub_network(hubs=net.hubs + (Hub("O2", is_origin=True),))
    with pytest.raises(StructuralError, match="unknown service type"):
        two_hub_network(hubs=(net.hubs[0], Hub("A", 1.0, {7: 1.0})) + net.hubs[2:])


def test_lookup_errors():
    net = two_hub_network()
    with pytest.raises(StructuralError):
        net.hub("Z")
    with pytest.raises(StructuralError):
        net.route(99)
    assert net.road("e5").head == "B"


def test_discrete_options_are_sorted():
    opts = two_hub_network().discrete_options()
    assert opts == sorted(opts)
    assert (3, "A", 2) in opts and (3, "B", 1) in opts and (2, "A", 1) not in opts


@given(st.integers(0, 200), st.integers(1, 50))
def test_vehicle_count_is_ceiling(n, cap):
    assert vehicle_count(n, cap) == math.ceil(n / cap)


def test_services_on_road_pools_by_type():
    net = two_hub_network()
    # three buses (capacity 3, weight 0.5) and two cars share e1
    acts = [Action(1, "A", 2, 0.0)] * 3 + [Action(3, "A", 1, 0.0)] * 2
    a = Assignment(net, tuple(acts))
    assert services_on_road(a, "e1") == pytest.approx(0.5 * 1 + 1.0 * 2)
    assert services_on_road(a, "e4") == pytest.approx(2.0)
    assert services_on_road(a, "e3") == 0.0
    # a fourth bus needs a second vehicle
    a4 = Assignment(net, tuple(acts) + (Action(1, "A", 2, 0.0),))
    assert services_on_road(a4, "e1") == pytest.approx(0.5 * 2 + 2)
    assert a4.road_loads()["e1"] == services_on_road(a4, "e1")


def test_latency():
    road = Road("e", "O", "D", 5.0, 3.0)
    assert latency(road, 0) == 3.0
    assert latency(road, 4) == 23.0
    with pytest.raises(DomainError):
        latency(road, -1)


@given(st.floats(0, 50), st.floats(0.1, 10), st.floats(0, 10))
def test_latency_integral_increment(j, xi1, xi2):
    road = Road("e", "O", "D", xi1, xi2)
    step = latency_integral(road, j + 1) - latency_integral(road, j)
    assert step == pytest.approx(latency(road, j + 1), rel=1e-9, abs=1e-9)


def test_latency_integral_oracle():
    road = Road("e", "O", "D", 5.0, 3.0)
    # c(1)+c(2)+c(3) = 8 + 13 + 18
    assert latency_integral(road, 3) == 39.0
    assert latency_integral(road, 0) == 0.0


def test_cohort_and_queue():
    net = two_hub_network()
    a = Assignment(net, (Action(1, "A", 1, 0), Action(3, "A", 2, 0), Action(3, "B", 1, 0), Action(1, "A", 1, 0)))
    assert hub_cohort(a, "A") == frozenset({0, 1, 3})
    assert service_queue(a, "A", 1) == frozenset({0, 3})
    assert service_queue(a, "B", 1) == frozenset({2})
    with pytest.raises(StructuralError):
        hub_cohort(a, "Z")


def test_with_budgets_replaces_only_named_hubs():
    net = two_hub_network().with_budgets({"A": 9.2})
    assert net.hub("A").budget == 9.2 and net.hub("B").budget == -3.0


@given(st.integers(0, 10_000))
def test_random_networks_validate(seed):
    net = random_network(np.random.default_rng(seed))
    assert len(net.hubs) <= 6 and len(net.roads) <= 8
    assert net.discrete_options()
