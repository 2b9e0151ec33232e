"""A miniature experiment grid: battery bands, three seeds, CSV output.

The same machinery drives the full studies from the command line, e.g.

    fogsim sweep config.json --axis apps --seeds 20 --policy both --out results/

This demo keeps it small enough to finish in seconds and prints the
per-cell means it wrote.
"""

import tempfile
from pathlib import Path

from fogsim.config import RunConfig
from fogsim.engine import Scenario
from fogsim.experiments import sweep
from fogsim.model import PriceBook, SlaTerms

cfg = RunConfig(
    scenario=Scenario(
        app_count=10,
        clusters=2,
        devices_per_cluster=4,
        submit_interval=6.0,
        deadline_range=(6.0, 16.0),
        distance_range=(5.0, 30.0),
        device_mips=(3000.0, 6000.0),
        initial_utilisation=(0.2, 0.55),
    ),
    prices=PriceBook(),
    sla=SlaTerms(),
    policy_set=["mc"],
    reservation_set=[True],
)

with tempfile.TemporaryDirectory() as out:
    csv_path = sweep(cfg, "battery", seeds=3, out_dir=out, workers=2)
    print(f"wrote {Path(csv_path).name}; per-cell means:\n")
    for line in Path(csv_path).read_text().splitlines():
        cols = line.split(",")
        if cols[4] in ("seed", "mean"):
            print(f"  {cols[1]:>5} {cols[5]:>12} {cols[11]:>10}"
                  + ("   (axis, avg_delay_s, sla_violation_pct)" if cols[4] == "seed" else ""))
