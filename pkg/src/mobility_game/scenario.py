"""Scenario files: schema, validation with location diagnostics, seeded populations.

A scenario is a JSON tree::

    {
      "name": "fig3",
      "network": {"hubs": [...], "roads": [...], "routes": [...], "service_types": [...]},
      "travelers": {"count": 12, "wallet_max": 10, "wallet_init": 2,
                    "eta": {"mean": 0, "stddev": 1, "clip": [0.01, 0.99]}},
      "budget_law": {"kind": "gaussian", "mean": 0, "stddev": 10}
                    | {"kind": "fixed", "values": {"A": 9.2, "B": 15.1}},
      "latency": {"xi1": 5, "xi2": 3},            # optional, overrides every road
      "mechanics": {"pricing_exponent": 2, "zeta1": 1, "zeta2": 1, "waiting": "type"},
      "behavior": "rational",
      "prospect": {"beta1": 0.88, "beta2": 0.88, "beta3": 1, "lam": 2.25,
                   "lottery_stddev": 10, "nodes": 33, "reference": "wealth-neutral"},
      "seed": 0,
      "n_starts": 10
    }

Gaussian laws are parameterized by their standard deviation.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .equilibrium import BEHAVIORS
from .mechanics import WAITING_MODES, Game, MechanicsConfig, TravelerProfile
from .network import DomainError, Hub, NetworkSpec, Road, Route, ServiceType, StructuralError
from .prospect import DEFAULT_NODES, REFERENCE_POLICIES, ProspectModel, ProspectParams

BUILTIN = ("fig3", "table1")
ETA_CLIP = (0.01, 0.99)


class ScenarioError(ValueError):
    """Invalid scenario file; ``location`` is a JSON path like ``$.network.routes[1]``."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass(frozen=True)
class BudgetLaw:
    kind: str = "gaussian"
    mean: float = 0.0
    stddev: float = 10.0
    values: Mapping[str, float] = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class EtaLaw:
    mean: float = 0.0
    stddev: float = 1.0
    clip: tuple[float, float] = ETA_CLIP


@dataclass(frozen=True)
class ProspectSpec:
    beta1: float = 0.88
    beta2: float = 0.88
    beta3: float = 1.0
    lam: float = 2.25
    lottery_stddev: float = 10.0
    nodes: int = DEFAULT_NODES
    reference: str = "wealth-neutral"

    @property
    def params(self) -> ProspectParams:
        return ProspectParams(self.beta1, self.beta2, self.beta3, self.lam)


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    name: str
    network: NetworkSpec
    traveler_count: int
    wallet_max: float = 10.0
    wallet_init: float = 2.0
    budget_law: BudgetLaw = field(default_factory=BudgetLaw)
    eta_law: EtaLaw = field(default_factory=EtaLaw)
    latency: tuple[float, float] | None = None
    mechanics: MechanicsConfig = field(default_factory=MechanicsConfig)
    behavior: str = "rational"
    prospect: ProspectSpec = field(default_factory=ProspectSpec)
    seed: int = 0
    n_starts: int = 10

    def __eq__(self, other):
        if not isinstance(other, ScenarioConfig):
            return NotImplemented
        return to_dict(self) == to_dict(other)

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class Population:
    travelers: tuple[TravelerProfile, ...]
    budgets: dict[str, float]


# parsing -----------------------------------------------------------------

def _get(node: Mapping, key: str, where: str, kind=None, default=...):
    if not isinstance(node, Mapping):
        raise ScenarioError(where, "expected an object")
    if key not in node:
        if default is ...:
            raise ScenarioError(f"{where}.{key}", "missing required field")
        return default
    val = node[key]
    if kind is not None and not _is_kind(val, kind):
        raise ScenarioError(f"{where}.{key}", f"expected {_kind_name(kind)}, got {type(val).__name__}")
    return val


def _is_kind(val, kind) -> bool:
    if kind is float:
        return isinstance(val, (int, float)) and not isinstance(val, bool)
    if kind is int:
        return isinstance(val, int) and not isinstance(val, bool)
    return isinstance(val, kind)


def _kind_name(kind) -> str:
    return {float: "number", int: "integer", str: "string", bool: "boolean",
            list: "array", dict: "object"}.get(kind, str(kind))


def _check_keys(node: Mapping, allowed: set[str], where: str):
    for key in node:
        if key not in allowed:
            raise ScenarioError(f"{where}.{key}", "unknown field")


def _wrap(where: str, fn, *args, **kwargs):
    # re-raise constructor validation errors with the location attached
    try:
        return fn(*args, **kwargs)
    except (DomainError, StructuralError) as exc:
        raise ScenarioError(where, str(exc)) from None


def _parse_network(node: Any, where: str) -> NetworkSpec:
    _check_keys(node, {"hubs", "roads", "routes", "service_types"}, where)
    types = []
    for k, t in enumerate(_get(node, "service_types", where, list)):
        w = f"{where}.service_types[{k}]"
        _check_keys(t, {"id", "label", "traffic_weight", "max_capacity", "base_fare", "min_payment"}, w)
        types.append(_wrap(w, ServiceType,
                           _get(t, "id", w, int), _get(t, "label", w, str),
                           float(_get(t, "traffic_weight", w, float, 1.0)),
                           _get(t, "max_capacity", w, int, 1),
                           float(_get(t, "base_fare", w, float, 0.0)),
                           float(_get(t, "min_payment", w, float, 0.0))))
    type_ids = {t.id for t in types}

    hubs = []
    for k, v in enumerate(_get(node, "hubs", where, list)):
        w = f"{where}.hubs[{k}]"
        _check_keys(v, {"id", "budget", "service_rate", "origin", "destination"}, w)
        rates_raw = _get(v, "service_rate", w, dict, {})
        rates = {}
        for h, r in rates_raw.items():
            try:
                hid = int(h)
            except ValueError:
                raise ScenarioError(f"{w}.service_rate.{h}", "service type keys must be integers") from None
            if hid not in type_ids:
                raise ScenarioError(f"{w}.service_rate.{h}", f"unknown service type {hid}")
            if not _is_kind(r, float):
                raise ScenarioError(f"{w}.service_rate.{h}", "expected number")
            rates[hid] = float(r)
        hubs.append(_wrap(w, Hub, _get(v, "id", w, str), float(_get(v, "budget", w, float, 0.0)),
                          rates, _get(v, "origin", w, bool, False), _get(v, "destination", w, bool, False)))
    hub_ids = {v.id for v in hubs}

    roads = []
    for k, e in enumerate(_get(node, "roads", where, list)):
        w = f"{where}.roads[{k}]"
        _check_keys(e, {"id", "tail", "head", "xi1", "xi2"}, w)
        for end in ("tail", "head"):
            if _get(e, end, w, str) not in hub_ids:
                raise ScenarioError(f"{w}.{end}", f"unknown hub {e[end]!r}")
        roads.append(_wrap(w, Road, _get(e, "id", w, str), e["tail"], e["head"],
                           float(_get(e, "xi1", w, float, 5.0)), float(_get(e, "xi2", w, float, 3.0))))
    road_ids = {e.id for e in roads}

    routes = []
    for k, r in enumerate(_get(node, "routes", where, list)):
        w = f"{where}.routes[{k}]"
        _check_keys(r, {"id", "edges", "hubs"}, w)
        edges = _get(r, "edges", w, list)
        for j, eid in enumerate(edges):
            if eid not in road_ids:
                raise ScenarioError(f"{w}.edges[{j}]", f"unknown road {eid!r}")
        en_route = _get(r, "hubs", w, list)
        for j, vid in enumerate(en_route):
            if vid not in hub_ids:
                raise ScenarioError(f"{w}.hubs[{j}]", f"unknown hub {vid!r}")
        routes.append(Route(_get(r, "id", w, int), tuple(edges), tuple(en_route)))

    return _wrap(where, NetworkSpec, tuple(hubs), tuple(roads), tuple(routes), tuple(types))


def from_dict(tree: Any) -> ScenarioConfig:
    """Validate a parsed JSON tree into a :class:`ScenarioConfig`."""
    where = "$"
    if not isinstance(tree, Mapping):
        raise ScenarioError(where, "scenario must be a JSON object")
    _check_keys(tree, {"name", "network", "travelers", "budget_law", "latency", "mechanics",
                       "behavior", "prospect", "seed", "n_starts"}, where)
    network = _parse_network(_get(tree, "network", where, dict), "$.network")

    tw = "$.travelers"
    trav = _get(tree, "travelers", where, dict)
    _check_keys(trav, {"count", "wallet_max", "wallet_init", "eta"}, tw)
    count = _get(trav, "count", tw, int)
    if count < 2:
        raise ScenarioError(f"{tw}.count", "at least two travelers are required")
    wallet_max = float(_get(trav, "wallet_max", tw, float, 10.0))
    wallet_init = float(_get(trav, "wallet_init", tw, float, 2.0))
    if not 0 <= wallet_init <= wallet_max or wallet_max <= 0:
        raise ScenarioError(tw, "need 0 <= wallet_init <= wallet_max and wallet_max > 0")
    ew = f"{tw}.eta"
    eta = _get(trav, "eta", tw, dict, {})
    _check_keys(eta, {"mean", "stddev", "clip"}, ew)
    clip = tuple(float(x) for x in _get(eta, "clip", ew, list, list(ETA_CLIP)))
    if len(clip) != 2 or not 0 < clip[0] <= clip[1] < 1:
        raise ScenarioError(f"{ew}.clip", "clip must be [lo, hi] inside (0, 1)")
    eta_law = EtaLaw(float(_get(eta, "mean", ew, float, 0.0)),
                     float(_get(eta, "stddev", ew, float, 1.0)), clip)
    if eta_law.stddev < 0:
        raise ScenarioError(f"{ew}.stddev", "must be nonnegative")

    bw = "$.budget_law"
    law = _get(tree, "budget_law", where, dict, {"kind": "gaussian"})
    kind = _get(law, "kind", bw, str)
    if kind == "gaussian":
        _check_keys(law, {"kind", "mean", "stddev"}, bw)
        budget_law = BudgetLaw("gaussian", float(_get(law, "mean", bw, float, 0.0)),
                               float(_get(law, "stddev", bw, float, 10.0)))
        if budget_law.stddev < 0:
            raise ScenarioError(f"{bw}.stddev", "must be nonnegative")
    elif kind == "fixed":
        _check_keys(law, {"kind", "values"}, bw)
        values = _get(law, "values", bw, dict)
        budget_ids = {v.id for v in network.budget_hubs}
        for vid, b in values.items():
            if vid not in budget_ids:
                raise ScenarioError(f"{bw}.values.{vid}", f"unknown budget hub {vid!r}")
            if not _is_kind(b, float):
                raise ScenarioError(f"{bw}.values.{vid}", "expected number")
        missing = budget_ids - set(values)
        if missing:
            raise ScenarioError(f"{bw}.values", f"missing budgets for {sorted(missing)}")
        budget_law = BudgetLaw("fixed", values={k: float(values[k]) for k in sorted(values)})
    else:
        raise ScenarioError(f"{bw}.kind", "must be 'gaussian' or 'fixed'")

    latency = None
    if "latency" in tree:
        lw = "$.latency"
        lat = _get(tree, "latency", where, dict)
        _check_keys(lat, {"xi1", "xi2"}, lw)
        latency = (float(_get(lat, "xi1", lw, float)), float(_get(lat, "xi2", lw, float)))
        _wrap(lw, Road, "probe", "probe", "probe", *latency)

    mw = "$.mechanics"
    mech = _get(tree, "mechanics", where, dict, {})
    _check_keys(mech, {"pricing_exponent", "zeta1", "zeta2", "waiting"}, mw)
    waiting = _get(mech, "waiting", mw, str, "type")
    if waiting not in WAITING_MODES:
        raise ScenarioError(f"{mw}.waiting", f"must be one of {WAITING_MODES}")
    mechanics = _wrap(mw, MechanicsConfig, float(_get(mech, "zeta1", mw, float, 1.0)),
                      float(_get(mech, "zeta2", mw, float, 1.0)),
                      float(_get(mech, "pricing_exponent", mw, float, 2.0)), waiting)

    behavior = _get(tree, "behavior", where, str, "rational")
    if behavior not in BEHAVIORS:
        raise ScenarioError("$.behavior", f"must be one of {BEHAVIORS}")

    pw = "$.prospect"
    pt = _get(tree, "prospect", where, dict, {})
    _check_keys(pt, {"beta1", "beta2", "beta3", "lam", "lottery_stddev", "nodes", "reference"}, pw)
    reference = _get(pt, "reference", pw, str, "wealth-neutral")
    if reference not in REFERENCE_POLICIES:
        raise ScenarioError(f"{pw}.reference", f"must be one of {REFERENCE_POLICIES}")
    prospect = ProspectSpec(float(_get(pt, "beta1", pw, float, 0.88)),
                            float(_get(pt, "beta2", pw, float, 0.88)),
                            float(_get(pt, "beta3", pw, float, 1.0)),
                            float(_get(pt, "lam", pw, float, 2.25)),
                            float(_get(pt, "lottery_stddev", pw, float, 10.0)),
                            _get(pt, "nodes", pw, int, DEFAULT_NODES), reference)
    _wrap(pw, lambda: prospect.params)
    if prospect.lottery_stddev < 0 or prospect.nodes < 1:
        raise ScenarioError(pw, "lottery_stddev must be >= 0 and nodes >= 1")

    seed = _get(tree, "seed", where, int, 0)
    if not 0 <= seed < 2 ** 64:
        raise ScenarioError("$.seed", "seed must be a 64-bit unsigned integer")
    n_starts = _get(tree, "n_starts", where, int, 10)
    if n_starts < 1:
        raise ScenarioError("$.n_starts", "must be positive")

    return ScenarioConfig(
        name=_get(tree, "name", where, str, "scenario"),
        network=network, traveler_count=count, wallet_max=wallet_max, wallet_init=wallet_init,
        budget_law=budget_law, eta_law=eta_law, latency=latency, mechanics=mechanics,
        behavior=behavior, prospect=prospect, seed=seed, n_starts=n_starts,
    )


def load_scenario(source: str | Path) -> ScenarioConfig:
    """Load a scenario file, or a built-in by name (``"fig3"``, ``"table1"``)."""
    if str(source) in BUILTIN:
        text = resources.files("mobility_game.scenarios").joinpath(f"{source}.json").read_text("utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno} column {exc.colno}", f"parse error: {exc.msg}") from None
    return from_dict(tree)


# canonical form ----------------------------------------------------------

def network_to_dict(net: NetworkSpec) -> dict:
    return {
        "service_types": [
            {"id": t.id, "label": t.label, "traffic_weight": t.traffic_weight,
             "max_capacity": t.max_capacity, "base_fare": t.base_fare, "min_payment": t.min_payment}
            for t in net.service_types],
        "hubs": [
            {"id": v.id, "budget": v.budget,
             "service_rate": {str(h): r for h, r in sorted(v.service_rate.items())},
             "origin": v.is_origin, "destination": v.is_destination}
            for v in net.hubs],
        "roads": [{"id": e.id, "tail": e.tail, "head": e.head, "xi1": e.xi1, "xi2": e.xi2}
                  for e in net.roads],
        "routes": [{"id": r.id, "edges": list(r.edges), "hubs": list(r.hubs_en_route)}
                   for r in net.routes],
    }


def to_dict(config: ScenarioConfig) -> dict:
    law = config.budget_law
    if law.kind == "fixed":
        budget = {"kind": "fixed", "values": dict(sorted(law.values.items()))}
    else:
        budget = {"kind": "gaussian", "mean": law.mean, "stddev": law.stddev}
    tree = {
        "name": config.name,
        "network": network_to_dict(config.network),
        "travelers": {"count": config.traveler_count, "wallet_max": config.wallet_max,
                      "wallet_init": config.wallet_init,
                      "eta": {"mean": config.eta_law.mean, "stddev": config.eta_law.stddev,
                              "clip": list(config.eta_law.clip)}},
        "budget_law": budget,
        "mechanics": {"pricing_exponent": config.mechanics.pricing_exponent,
                      "zeta1": config.mechanics.zeta1, "zeta2": config.mechanics.zeta2,
                      "waiting": config.mechanics.waiting},
        "behavior": config.behavior,
        "prospect": {"beta1": config.prospect.beta1, "beta2": config.prospect.beta2,
                     "beta3": config.prospect.beta3, "lam": config.prospect.lam,
                     "lottery_stddev": config.prospect.lottery_stddev,
                     "nodes": config.prospect.nodes, "reference": config.prospect.reference},
        "seed": config.seed,
        "n_starts": config.n_starts,
    }
    if config.latency is not None:
        tree["latency"] = {"xi1": config.latency[0], "xi2": config.latency[1]}
    return tree


def dump_scenario(config: ScenarioConfig) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_dict(config), sort_keys=True, indent=2) + "\n"


def scenario_hash(config: ScenarioConfig) -> str:
    """Content hash of everything except the seed, so replications share it."""
    tree = to_dict(config)
    tree.pop("seed")
    blob = json.dumps(tree, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


# population --------------------------------------------------------------

def sample_population(config: ScenarioConfig, seed: int | None = None) -> Population:
    """Hub budgets, then one eta per traveler, from a single seeded stream."""
    rng = np.random.default_rng(config.seed if seed is None else seed)
    hubs = config.network.budget_hubs
    law = config.budget_law
    if law.kind == "fixed":
        budgets = {v.id: float(law.values[v.id]) for v in hubs}
    else:
        draws = rng.normal(law.mean, law.stddev, size=len(hubs))
        budgets = {v.id: float(b) for v, b in zip(hubs, draws)}
    eta = config.eta_law
    raw = rng.normal(eta.mean, eta.stddev, size=config.traveler_count)
    etas = clip_eta(raw, eta.clip)
    travelers = tuple(TravelerProfile(i, config.wallet_init, config.wallet_max, float(e))
                      for i, e in enumerate(etas))
    return Population(travelers, budgets)


def clip_eta(raw, clip: tuple[float, float] = ETA_CLIP) -> np.ndarray:
    return np.clip(np.asarray(raw, dtype=float), clip[0], clip[1])


def build_game(config: ScenarioConfig, seed: int | None = None,
               population: Population | None = None) -> Game:
    """Instantiate the game: sampled budgets and travelers on the scenario network."""
    if population is None:
        population = sample_population(config, seed)
    net = config.network.with_budgets(population.budgets)
    if config.latency is not None:
        xi1, xi2 = config.latency
        roads = tuple(Road(e.id, e.tail, e.head, xi1, xi2) for e in net.roads)
        net = NetworkSpec(net.hubs, roads, net.routes, net.service_types)
    return Game(net, population.travelers, config.mechanics)


def build_prospect(config: ScenarioConfig, game: Game, beta3: float | None = None) -> ProspectModel:
    spec = config.prospect
    params = spec.params if beta3 is None else replace(spec.params, beta3=beta3)
    return ProspectModel.centered(game.network, params, spec.lottery_stddev, spec.nodes, spec.reference)
