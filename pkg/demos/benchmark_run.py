r"""
A small success-rate experiment
-------------------------------
The bench module sweeps maps, scenario files, agent counts and objective
counts, and streams one record per solve. Here: three bundled scenarios on
the empty 32x32 grid.
"""
import sys
from pathlib import Path

import lcbs
from lcbs.bench import ExperimentConfig, run_success_rate, success_rates, write_csv

data = Path(lcbs.__file__).parent / "data"
config = ExperimentConfig(
    maps=[str(data / "empty-32-32.map")],
    scenarios=3,
    agents=[4, 8],
    objectives=[2, 5],
    time_limit=2.0,
)
records = list(run_success_rate(config))
write_csv(records, sys.stdout)

#%%
for (name, n, d), rate in sorted(success_rates(records).items()):
    print(f"{name} n={n} d={d}: {rate:.0%}")
