"""Seeded sweeps over traveler count and rational index, plus report emission."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .equilibrium import (
    BestResponseConfig,
    EquilibriumReport,
    PoAReport,
    price_of_anarchy,
)
from .mechanics import Game, pricing, utility
from .prospect import prospect_utility
from .scenario import ScenarioConfig, build_game, build_prospect, scenario_hash

log = logging.getLogger(__name__)

VARIANTS = {"t1": 2.0, "t2": 2.0 / 3.0}
SWEEP_COLUMNS = ("scenario_hash", "seed", "I", "variant", "replication", "poa", "convention",
                 "bound", "welfare_opt", "welfare_worst_nash", "converged", "rounds", "status")
TRAVELER_COLUMNS = ("id", "type", "route", "hub", "payment", "tau", "utility")


@dataclass
class SweepRow:
    scenario_hash: str
    seed: int
    I: int
    variant: str
    replication: int
    poa: float | None = None
    convention: str = "undefined"
    bound: float = math.nan
    welfare_opt: float = math.nan
    welfare_worst_nash: float = math.nan
    converged: bool = False
    rounds: int = 0
    status: str = "ok"


@dataclass
class SweepResult:
    """One row per (sweep point, replication); ``axis`` names the swept parameter."""

    axis: str
    values: list
    rows: list[SweepRow] = field(default_factory=list)

    def medians(self, variant: str | None = None) -> dict:
        """Median PoA per axis value over rows with a defined ratio."""
        out = {}
        for x in self.values:
            vals = [r.poa for r in self.rows
                    if _axis_value(self.axis, r) == x and r.poa is not None
                    and (variant is None or r.variant == variant)]
            out[x] = statistics.median(vals) if vals else None
        return out


def _axis_value(axis: str, row: SweepRow):
    if axis == "I":
        return row.I
    return float(row.variant.split("=", 1)[1])


def derive_seed(base: int, *keys: int) -> int:
    """Independent 64-bit child seed for a sweep cell."""
    ss = np.random.SeedSequence([base, *keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _poa_row(row: SweepRow, report: PoAReport) -> SweepRow:
    row.poa = report.poa
    row.convention = report.convention
    row.bound = report.bound
    row.welfare_opt = report.welfare_opt
    row.welfare_worst_nash = report.welfare_worst_nash
    row.converged = report.converged
    row.rounds = report.rounds
    if report.poa is None:
        row.status = "undefined"
    return row


def run_poa_sweep(config: ScenarioConfig, i_min: int = 2, i_max: int = 12, replications: int = 20,
                  variants: Sequence[str] = ("t1", "t2"), *, n_starts: int | None = None,
                  optimum_starts: int = 4, enumeration_cap: int = 2_000,
                  br_config: BestResponseConfig = BestResponseConfig()) -> SweepResult:
    """PoA against traveler count for each pricing variant.

    Replication ``r`` at size ``I`` uses the same population for every
    variant, so variants are compared on paired draws.
    """
    if i_min < 2 or i_max < i_min:
        raise ValueError("need 2 <= i_min <= i_max")
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}; expected one of {sorted(VARIANTS)}")
    starts = config.n_starts if n_starts is None else n_starts
    digest = scenario_hash(config)
    result = SweepResult("I", list(range(i_min, i_max + 1)))
    for size in result.values:
        for r in range(replications):
            seed = derive_seed(config.seed, size, r)
            for variant in variants:
                mech = replace(config.mechanics, pricing_exponent=VARIANTS[variant])
                cfg = replace(config, traveler_count=size, mechanics=mech)
                row = SweepRow(digest, seed, size, variant, r)
                try:
                    game = build_game(cfg, seed)
                    report = price_of_anarchy(game, "rational", br_config, n_starts=starts,
                                              seed=seed, optimum_starts=optimum_starts,
                                              enumeration_cap=enumeration_cap)
                    _poa_row(row, report)
                except Exception as exc:  # noqa: BLE001 - flagged per row, sweep continues
                    log.warning("I=%d rep=%d %s failed: %s", size, r, variant, exc)
                    row.status = f"error: {type(exc).__name__}"
                result.rows.append(row)
    return result


def run_prospect_sweep(config: ScenarioConfig, beta3_values: Sequence[float], replications: int = 5, *,
                       n_starts: int | None = None, optimum_starts: int = 4, enumeration_cap: int = 2_000,
                       br_config: BestResponseConfig = BestResponseConfig()) -> SweepResult:
    """PoA of prospect-theoretic travelers against the rational index beta3.

    Equilibria are computed under each ``beta3``; welfare and the social
    optimum are measured at ``beta3 = 1``.
    """
    values = [float(b) for b in beta3_values]
    for b in values:
        if not 0 < b <= 1:
            raise ValueError(f"beta3 must lie in (0, 1], got {b}")
    starts = config.n_starts if n_starts is None else n_starts
    digest = scenario_hash(config)
    result = SweepResult("beta3", values)
    for b in values:
        for r in range(replications):
            seed = derive_seed(config.seed, config.traveler_count, r)
            row = SweepRow(digest, seed, config.traveler_count, f"beta3={b!r}", r)
            try:
                game = build_game(config, seed)
                behavior_model = build_prospect(config, game, beta3=b)
                measure = build_prospect(config, game, beta3=1.0)
                report = price_of_anarchy(game, "prospect", br_config, behavior_model, n_starts=starts,
                                          seed=seed, welfare_prospect=measure,
                                          optimum_starts=optimum_starts,
                                          enumeration_cap=enumeration_cap)
                _poa_row(row, report)
            except Exception as exc:  # noqa: BLE001
                log.warning("beta3=%r rep=%d failed: %s", b, r, exc)
                row.status = f"error: {type(exc).__name__}"
            result.rows.append(row)
    return result


# emission ------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def sweep_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in result.rows:
        writer.writerow([_fmt(getattr(row, c)) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def sweep_json(result: SweepResult) -> str:
    rows = [{c: _json_num(getattr(row, c)) for c in SWEEP_COLUMNS} for row in result.rows]
    return json.dumps({"axis": result.axis, "values": result.values, "rows": rows}, indent=2) + "\n"


def _json_num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def traveler_rows(game: Game, report: EquilibriumReport, prospect=None) -> list[dict]:
    """Per-traveler layout: id, service type, route indicators, hub, payment, tau, utility."""
    net = game.network
    route_ids = sorted(r.id for r in net.routes)
    rows = []
    for i, a in enumerate(report.assignment.actions):
        u = (utility(game, report.assignment, i) if prospect is None
             else prospect_utility(game, report.assignment, i, prospect))
        row = {"id": i + 1, "type": net.service_type(a.service_type).label, "route": a.route}
        for rid in route_ids:
            row[f"rho{rid}"] = int(a.route == rid)
        row.update({"hub": a.hub, "service_type": a.service_type, "payment": a.payment,
                    "tau": pricing(game, report.assignment, i), "utility": u})
        rows.append(row)
    return rows


def equilibrium_csv(game: Game, report: EquilibriumReport, prospect=None) -> str:
    rows = traveler_rows(game, report, prospect)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0]) if rows else list(TRAVELER_COLUMNS)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in header])
    return buf.getvalue()


def equilibrium_json(game: Game, report: EquilibriumReport, prospect=None, **meta) -> str:
    tree = dict(meta)
    tree.update({
        "behavior": report.behavior,
        "is_nash": report.is_nash,
        "converged": report.converged,
        "rounds": report.rounds_used,
        "welfare": report.welfare,
        "travelers": traveler_rows(game, report, prospect),
        "actions": [{"route": a.route, "hub": a.hub, "service_type": a.service_type,
                     "payment": a.payment} for a in report.assignment.actions],
    })
    return json.dumps(tree, indent=2) + "\n"


def emit_report(result: SweepResult | EquilibriumReport, fmt: str, path: str | Path | None,
                game: Game | None = None, prospect=None, **meta) -> str:
    """Render ``result`` as CSV or JSON; write it to ``path`` when given."""
    if fmt not in ("csv", "json"):
        raise ValueError("format must be 'csv' or 'json'")
    if isinstance(result, SweepResult):
        text = sweep_csv(result) if fmt == "csv" else sweep_json(result)
    else:
        if game is None:
            raise ValueError("an equilibrium report needs its game")
        text = (equilibrium_csv(game, result, prospect) if fmt == "csv"
                else equilibrium_json(game, result, prospect, **meta))
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
