"""Random small instances shared by the property and acceptance tests."""

from __future__ import annotations

import numpy as np

from mobility_game.mechanics import Action, Assignment, Game, MechanicsConfig, TravelerProfile
from mobility_game.network import Hub, NetworkSpec, Road, Route, ServiceType


def random_network(rng: np.random.Generator, max_hubs: int = 6, max_roads: int = 8,
                   n_types: int | None = None, capacity: int = 1, weights: bool = False,
                   rate_per_hub: bool = False) -> NetworkSpec:
    """Layered DAG from O to D with at least one route through an intermediate hub."""
    k = int(rng.integers(1, max_hubs - 1))
    mids = [f"v{j}" for j in range(k)]
    order = ["O", *mids, "D"]
    n_types = int(rng.integers(1, 4)) if n_types is None else n_types
    types = tuple(
        ServiceType(h, f"t{h}", float(rng.uniform(0.2, 1.0)) if weights else 1.0, capacity,
                    base_fare=float(rng.uniform(0, 2)), min_payment=float(rng.uniform(0, 1.5)))
        for h in range(1, n_types + 1))

    # a spine guarantees a route through the first intermediate hub
    edges = {("O", mids[0]), (mids[0], "D")}
    candidates = [(a, b) for x, a in enumerate(order) for b in order[x + 1:] if (a, b) != ("O", "D")]
    rng.shuffle(candidates)
    for pair in candidates:
        if len(edges) >= max_roads:
            break
        if rng.random() < 0.5:
            edges.add(pair)
    roads = tuple(Road(f"e{j}", a, b, float(rng.uniform(0.5, 6)), float(rng.uniform(0, 4)))
                  for j, (a, b) in enumerate(sorted(edges, key=lambda e: (order.index(e[0]), order.index(e[1])))))

    hubs = []
    for v in order:
        if v in ("O", "D"):
            hubs.append(Hub(v, 0.0, {}, v == "O", v == "D"))
            continue
        offered = [t.id for t in types if rng.random() < 0.7] or [types[0].id]
        base = float(rng.uniform(0.5, 3))
        rates = {h: (base if rate_per_hub else float(rng.uniform(0.5, 3))) for h in offered}
        hubs.append(Hub(v, float(rng.normal(0, 10)), rates))

    out: dict[str, list] = {}
    for e in roads:
        out.setdefault(e.tail, []).append(e)
    paths = []

    def walk(node, trail, seen):
        if node == "D":
            paths.append(list(trail))
            return
        for e in out.get(node, []):
            if e.head not in seen:
                walk(e.head, trail + [e], seen | {e.head})
    walk("O", [], {"O"})

    routes = []
    for path in paths:
        inner = [e.head for e in path[:-1]]
        stops = [v for v in inner if rng.random() < 0.7] or inner[:1]
        if stops:
            routes.append(Route(len(routes) + 1, tuple(e.id for e in path), tuple(stops)))
    return NetworkSpec(tuple(hubs), roads, tuple(routes), types)


def random_game(rng: np.random.Generator, max_travelers: int = 12, pricing_exponent: float = 2.0,
                waiting: str = "type", **net_kwargs) -> Game:
    net = random_network(rng, **net_kwargs)
    size = int(rng.integers(1, max_travelers + 1))
    travelers = tuple(TravelerProfile(i, 2.0, 10.0, float(rng.uniform(0.01, 0.99))) for i in range(size))
    return Game(net, travelers, MechanicsConfig(pricing_exponent=pricing_exponent, waiting=waiting))


def random_action(game: Game, traveler: int, rng: np.random.Generator) -> Action:
    options = game.network.discrete_options()
    r, v, h = options[int(rng.integers(len(options)))]
    lo, hi = game.payment_bounds(traveler, h)
    return Action(r, v, h, float(rng.uniform(lo, hi)))


def random_profile(game: Game, rng: np.random.Generator) -> Assignment:
    return Assignment(game.network, tuple(random_action(game, i, rng) for i in range(game.size)))
