"""Experiment grids: axis definitions, per-cell runs, CSV/JSON emission.

Each sweep cell is one (axis value, policy, reservation, seed) scenario.
Cells are independent and may run in parallel; results are merged in
scenario-id order so the output never depends on scheduling. Completed
cells are cached as JSON under ``<out>/cells`` and skipped on re-runs.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import engine, metrics
from .config import ConfigError, RunConfig
from .model import MetricsReport, PriceBook, SlaTerms

CSV_COLUMNS = [
    "scenario_id", "axis_value", "policy", "reservation", "seed",
    "avg_delay_s", "total_delay_s", "max_delay_s", "min_delay_s",
    "avg_processing_s", "total_cost_usd", "sla_violation_pct", "penalty_usd",
]

AXES = ("apps", "deadline_variation", "free_resource", "battery", "fluctuation")

# Band grids for the variation studies. Free-resource variation widens in
# 10-point steps; battery availability moves up in 15-point windows; the
# fluctuation grid keeps its lower bound and stretches the upper one.
UP_BANDS = [(0.0, 0.10), (0.10, 0.20), (0.20, 0.30), (0.30, 0.40), (0.40, 0.50), (0.50, 0.60)]
BA_BANDS = [(5.0, 15.0), (15.0, 30.0), (30.0, 45.0), (45.0, 60.0), (60.0, 75.0), (75.0, 90.0)]
AF_BANDS = [(0.10, 0.10 + 0.10 * k) for k in range(1, 10)]


def axis_cells(axis: str) -> list[tuple[str, dict]]:
    """(label, scenario overrides) for every cell of the axis."""
    if axis == "apps":
        return [(str(n), {"app_count": n}) for n in range(70, 561, 70)]
    if axis == "deadline_variation":
        return [(str(pct), {"deadline_variation_pct": float(pct)})
                for pct in range(10, 81, 10)]
    if axis == "free_resource":
        return [(f"UP{i+1}", {"utilisation_band": band}) for i, band in enumerate(UP_BANDS)]
    if axis == "battery":
        return [(f"BA{i+1}", {"battery_range": band}) for i, band in enumerate(BA_BANDS)]
    if axis == "fluctuation":
        return [(f"AF{i+1}", {"utilisation_band": band}) for i, band in enumerate(AF_BANDS)]
    raise ConfigError(f"axis: unknown axis {axis!r} (choose from {', '.join(AXES)})")


def scenario_id(axis: str, value: str, policy: str, reservation: bool, seed: int) -> str:
    return f"{axis}-{value}-{policy}-res{'on' if reservation else 'off'}-s{seed}"


def run_cell(scenario: engine.Scenario, prices: PriceBook, sla: SlaTerms) -> MetricsReport:
    trace = engine.run(scenario)
    return metrics.build_report(trace, prices, sla)


def report_row(sid: str, axis_value: str, report: MetricsReport) -> dict:
    return {
        "scenario_id": sid,
        "axis_value": axis_value,
        "policy": report.policy,
        "reservation": "on" if report.reservation else "off",
        "seed": str(report.seed),
        "avg_delay_s": f"{report.avg_delay:.6f}",
        "total_delay_s": f"{report.total_delay:.6f}",
        "max_delay_s": f"{report.max_delay:.6f}",
        "min_delay_s": f"{report.min_delay:.6f}",
        "avg_processing_s": f"{report.avg_processing:.6f}",
        "total_cost_usd": f"{report.usage_cost:.9f}",
        "sla_violation_pct": f"{report.sla_violation_pct:.4f}",
        "penalty_usd": f"{report.penalty_cost:.6f}",
    }


def _mean_row(rows: list[dict], axis_value: str, policy: str, reservation: str) -> dict:
    numeric = ["avg_delay_s", "total_delay_s", "max_delay_s", "min_delay_s",
               "avg_processing_s", "total_cost_usd", "sla_violation_pct", "penalty_usd"]
    out = {
        "scenario_id": f"mean-{axis_value}-{policy}-res{reservation}",
        "axis_value": axis_value,
        "policy": policy,
        "reservation": reservation,
        "seed": "mean",
    }
    for col in numeric:
        values = [float(r[col]) for r in rows]
        out[col] = f"{sum(values) / len(values):.6f}" if values else "0.000000"
    return out


def _cell_worker(args) -> tuple[str, dict]:
    sid, axis_value, scenario, prices, sla = args
    report = run_cell(scenario, prices, sla)
    return sid, report_row(sid, axis_value, report)


def sweep(
    cfg: RunConfig,
    axis: str,
    seeds: int,
    out_dir: str,
    workers: int = 1,
    policies: list[str] | None = None,
    reservations: list[bool] | None = None,
) -> Path:
    """Run the full grid for one axis and write the aggregated CSV.

    Returns the CSV path. Rows cover every (cell, policy, reservation,
    seed) plus one mean row per (cell, policy, reservation).
    """
    policies = policies or cfg.policy_set
    reservations = reservations if reservations is not None else cfg.reservation_set
    cells_dir = Path(out_dir) / "cells"
    cells_dir.mkdir(parents=True, exist_ok=True)

    jobs = []
    all_ids = []
    for value, overrides in axis_cells(axis):
        for policy in policies:
            for reservation in reservations:
                for seed in range(1, seeds + 1):
                    sid = scenario_id(axis, value, policy, reservation, seed)
                    all_ids.append((sid, value, policy, reservation))
                    if (cells_dir / f"{sid}.json").exists():
                        continue
                    scenario = dataclasses.replace(
                        cfg.scenario, seed=seed, policy=policy,
                        reservation=reservation, label=sid, **overrides)
                    jobs.append((sid, value, scenario, cfg.prices, cfg.sla))

    if jobs:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                done = list(pool.map(_cell_worker, jobs))
        else:
            done = [_cell_worker(job) for job in jobs]
        for sid, row in done:
            (cells_dir / f"{sid}.json").write_text(json.dumps(row, sort_keys=True))

    rows = []
    grouped: dict[tuple[str, str, str], list[dict]] = {}
    for sid, value, policy, reservation in all_ids:
        row = json.loads((cells_dir / f"{sid}.json").read_text())
        rows.append(row)
        grouped.setdefault((value, policy, "on" if reservation else "off"), []).append(row)
    for (value, policy, res), group in sorted(grouped.items()):
        rows.append(_mean_row(group, value, policy, res))
    rows.sort(key=lambda r: (r["axis_value"], r["policy"], r["reservation"],
                             r["seed"] == "mean", r["seed"].zfill(8)))

    csv_path = Path(out_dir) / f"sweep-{axis}.csv"
    write_csv(csv_path, rows)
    return csv_path


def write_csv(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def run_scenario(cfg: RunConfig, out_dir: str) -> tuple[Path, Path]:
    """Execute one configured scenario for every policy x reservation cell.

    Writes one CSV (a row per cell) and one JSON file with the full reports.
    """
    rows = []
    reports = {}
    for policy in cfg.policy_set:
        for reservation in cfg.reservation_set:
            sid = scenario_id("run", str(cfg.scenario.app_count), policy,
                              reservation, cfg.scenario.seed)
            scenario = dataclasses.replace(cfg.scenario, policy=policy,
                                           reservation=reservation, label=sid)
            report = run_cell(scenario, cfg.prices, cfg.sla)
            rows.append(report_row(sid, str(cfg.scenario.app_count), report))
            reports[sid] = _report_json(report)
    rows.sort(key=lambda r: r["scenario_id"])
    out = Path(out_dir)
    csv_path = out / "run.csv"
    write_csv(csv_path, rows)
    json_path = out / "run.json"
    json_path.write_text(json.dumps(reports, sort_keys=True, indent=2))
    return csv_path, json_path


def _report_json(report: MetricsReport) -> dict:
    data = dataclasses.asdict(report)
    data["tc_per_request"] = [round(v, 12) for v in report.tc_per_request]
    return data
