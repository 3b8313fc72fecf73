import copy
import json

import numpy as np
import pytest

from mobility_game.scenario import (
    ScenarioError,
    build_game,
    clip_eta,
    dump_scenario,
    from_dict,
    load_scenario,
    network_to_dict,
    sample_population,
    scenario_hash,
    to_dict,
)


@pytest.fixture
def tree():
    return to_dict(load_scenario("fig3"))


def test_builtins_load():
    fig3 = load_scenario("fig3")
    t1 = load_scenario("table1")
    assert network_to_dict(fig3.network) == network_to_dict(t1.network)
    assert t1.budget_law.kind == "fixed"
    assert sample_population(t1).budgets == {"A": 9.2, "B": 15.1}
    assert fig3.budget_law.kind == "gaussian" and fig3.budget_law.stddev == 10.0


def test_dangling_edge_reports_location(tree):
    tree["network"]["routes"][0]["edges"][1] = "e99"
    with pytest.raises(ScenarioError) as err:
        from_dict(tree)
    assert err.value.location == "$.network.routes[0].edges[1]"


def test_unknown_field_rejected(tree):
    tree["travelers"]["colour"] = "red"
    with pytest.raises(ScenarioError) as err:
        from_dict(tree)
    assert err.value.location.startswith("$.travelers")


def test_wrong_type_and_small_count(tree):
    bad = copy.deepcopy(tree)
    bad["travelers"]["count"] = "twelve"
    with pytest.raises(ScenarioError, match="count"):
        from_dict(bad)
    tree["travelers"]["count"] = 1
    with pytest.raises(ScenarioError) as err:
        from_dict(tree)
    assert err.value.location == "$.travelers.count"


def test_parse_error_has_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "name": "x",\n  oops\n}\n')
    with pytest.raises(ScenarioError) as err:
        load_scenario(path)
    assert err.value.location.startswith("line 3")


def test_round_trip(tmp_path):
    for name in ("fig3", "table1"):
        cfg = load_scenario(name)
        path = tmp_path / f"{name}.json"
        path.write_text(dump_scenario(cfg))
        again = load_scenario(path)
        assert again == cfg
        assert dump_scenario(again) == dump_scenario(cfg)


def test_population_is_deterministic():
    cfg = load_scenario("fig3")
    a, b = sample_population(cfg, 42), sample_population(cfg, 42)
    assert a == b
    assert sample_population(cfg, 43) != a
    etas = np.array([t.eta for t in a.travelers])
    assert np.all((etas >= 0.01) & (etas <= 0.99))


def test_population_draw_order():
    # budgets come first from the stream, then etas
    cfg = load_scenario("fig3")
    rng = np.random.default_rng(5)
    budgets = rng.normal(0.0, 10.0, size=2)
    etas = np.clip(rng.normal(0.0, 1.0, size=cfg.traveler_count), 0.01, 0.99)
    pop = sample_population(cfg, 5)
    assert list(pop.budgets.values()) == pytest.approx(list(budgets))
    assert [t.eta for t in pop.travelers] == pytest.approx(list(etas))


def test_clip_eta():
    assert clip_eta([-0.4, 0.5, 1.7]).tolist() == [0.01, 0.5, 0.99]


def test_hash_ignores_seed_only():
    cfg = load_scenario("fig3")
    h = scenario_hash(cfg)
    assert len(h) == 16
    assert scenario_hash(cfg.with_(seed=99)) == h
    assert scenario_hash(cfg.with_(traveler_count=5)) != h
    assert scenario_hash(cfg.with_(n_starts=3)) != h


def test_latency_override(tree):
    tree["latency"] = {"xi1": 2.0, "xi2": 1.0}
    game = build_game(from_dict(tree), 0)
    assert all((e.xi1, e.xi2) == (2.0, 1.0) for e in game.network.roads)


def test_build_game_sizes():
    game = build_game(load_scenario("table1").with_(traveler_count=4), 0)
    assert game.size == 4
    assert game.network.hub("A").budget == 9.2


def test_dump_is_canonical_json():
    text = dump_scenario(load_scenario("fig3"))
    assert text.endswith("\n")
    assert json.loads(text) == to_dict(load_scenario("fig3"))
