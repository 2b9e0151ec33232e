"""One full simulated scenario, multi-criteria against the greedy baseline.

Seventy applications of ten tasks each arrive at a two-cluster fleet.
Both policies see the same workload, fleet and fluctuation traces; only
the placement decisions differ. Billing counts are workload-driven, so
costs match to the cent while delays and violations diverge.
"""

import dataclasses

from fogsim.engine import Scenario, run
from fogsim.metrics import build_report
from fogsim.model import PriceBook, SlaTerms

scenario = Scenario(
    seed=42,
    app_count=70,
    clusters=2,
    devices_per_cluster=6,
    submit_interval=5.0,
    fluctuation_interval=2.0,
    deadline_range=(6.0, 16.0),
    distance_range=(5.0, 30.0),
    device_mips=(3000.0, 6000.0),
    initial_utilisation=(0.2, 0.55),
)

print(f"{'metric':28} {'multi-criteria':>16} {'baseline':>16}")
print("-" * 62)
reports = {}
for policy in ("mc", "baseline"):
    trace = run(dataclasses.replace(scenario, policy=policy))
    reports[policy] = build_report(trace, PriceBook(), SlaTerms())

rows = [
    ("requests completed", "requests", "{:d}"),
    ("avg packet delay (s)", "avg_delay", "{:.3f}"),
    ("total delay (s)", "total_delay", "{:.1f}"),
    ("avg processing (s)", "avg_processing", "{:.3f}"),
    ("sla violation (%)", "sla_violation_pct", "{:.2f}"),
    ("penalty ($)", "penalty_cost", "{:.2f}"),
    ("usage cost ($)", "usage_cost", "{:.6f}"),
    ("migrations", "migrations", "{:d}"),
]
for label, attr, fmt in rows:
    mc_val = fmt.format(getattr(reports["mc"], attr))
    ba_val = fmt.format(getattr(reports["baseline"], attr))
    print(f"{label:28} {mc_val:>16} {ba_val:>16}")
