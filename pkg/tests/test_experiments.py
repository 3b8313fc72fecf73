import csv
import io
import json
import statistics

import numpy as np
import pytest

from mobility_game.equilibrium import price_of_anarchy, random_assignment, run_dynamics
from mobility_game.experiments import (
    SWEEP_COLUMNS,
    SweepResult,
    derive_seed,
    emit_report,
    equilibrium_csv,
    equilibrium_json,
    run_poa_sweep,
    run_prospect_sweep,
    sweep_csv,
    sweep_json,
)
from mobility_game.scenario import ProspectSpec, build_game, load_scenario


@pytest.fixture(scope="module")
def small():
    return load_scenario("fig3").with_(traveler_count=3, n_starts=2)


@pytest.fixture(scope="module")
def poa_sweep(small):
    return run_poa_sweep(small, 2, 3, 2, ("t1", "t2"), n_starts=2, optimum_starts=1)


def test_poa_sweep_rows(poa_sweep):
    assert len(poa_sweep.rows) == 2 * 2 * 2
    assert {r.variant for r in poa_sweep.rows} == {"t1", "t2"}
    assert all(r.status == "ok" for r in poa_sweep.rows)
    # variants share the population of a replication
    by_key = {}
    for r in poa_sweep.rows:
        by_key.setdefault((r.I, r.replication), set()).add(r.seed)
    assert all(len(s) == 1 for s in by_key.values())


def test_medians_recomputed(poa_sweep):
    med = poa_sweep.medians("t1")
    for size in (2, 3):
        vals = [r.poa for r in poa_sweep.rows if r.I == size and r.variant == "t1" and r.poa is not None]
        assert med[size] == (statistics.median(vals) if vals else None)


def test_csv_and_json_agree(poa_sweep):
    rows = list(csv.DictReader(io.StringIO(sweep_csv(poa_sweep))))
    tree = json.loads(sweep_json(poa_sweep))
    assert len(rows) == len(tree["rows"]) == len(poa_sweep.rows)
    for c_row, j_row in zip(rows, tree["rows"]):
        assert list(c_row) == list(SWEEP_COLUMNS)
        if j_row["poa"] is None:
            assert c_row["poa"] == ""
        else:
            assert float(c_row["poa"]) == j_row["poa"]
        assert int(c_row["seed"]) == j_row["seed"]


def test_empty_sweep_is_header_only():
    text = sweep_csv(SweepResult("I", []))
    assert text == ",".join(SWEEP_COLUMNS) + "\n"


def test_sweep_argument_checks(small):
    with pytest.raises(ValueError):
        run_poa_sweep(small, 1, 3, 1)
    with pytest.raises(ValueError):
        run_poa_sweep(small, 2, 3, 1, ("t3",))
    with pytest.raises(ValueError):
        run_prospect_sweep(small, [0.0], 1)


def test_prospect_sweep_row_count(small):
    values = [round(0.1 * k, 1) for k in range(1, 11)]
    res = run_prospect_sweep(small.with_(traveler_count=2), values, 5, n_starts=1, optimum_starts=1)
    assert len(res.rows) == 50
    assert res.axis == "beta3" and set(res.medians()) == set(values)


def test_degenerate_prospect_matches_rational(small):
    spec = ProspectSpec(beta1=1.0, beta2=1.0, beta3=1.0, lam=1.0, lottery_stddev=0.0, nodes=1)
    cfg = small.with_(prospect=spec)
    seed = derive_seed(cfg.seed, cfg.traveler_count, 0)
    rational = price_of_anarchy(build_game(cfg, seed), n_starts=2, seed=seed, optimum_starts=1)
    res = run_prospect_sweep(cfg, [1.0], 1, n_starts=2, optimum_starts=1)
    row = res.rows[0]
    assert row.welfare_opt == pytest.approx(rational.welfare_opt, abs=1e-6)
    assert row.welfare_worst_nash == pytest.approx(rational.welfare_worst_nash, abs=1e-6)
    if rational.poa is not None:
        assert row.poa == pytest.approx(rational.poa, abs=1e-6)


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(0, 3, 1) == derive_seed(0, 3, 1)
    assert len({derive_seed(0, i, r) for i in range(2, 13) for r in range(20)}) == 220


def test_equilibrium_reports(tmp_path):
    cfg = load_scenario("table1")
    game = build_game(cfg, 0)
    rep = run_dynamics(game, random_assignment(game, np.random.default_rng(0)))
    rows = list(csv.DictReader(io.StringIO(equilibrium_csv(game, rep))))
    assert len(rows) == game.size
    assert list(rows[0])[:6] == ["id", "type", "route", "rho1", "rho2", "rho3"]
    assert all(sum(int(r[f"rho{k}"]) for k in (1, 2, 3)) == 1 for r in rows)
    tree = json.loads(equilibrium_json(game, rep, seed=0))
    assert tree["seed"] == 0 and len(tree["actions"]) == game.size
    path = tmp_path / "eq.json"
    text = emit_report(rep, "json", path, game=game, seed=0)
    assert path.read_text() == text
    with pytest.raises(ValueError):
        emit_report(rep, "xml", None, game=game)
