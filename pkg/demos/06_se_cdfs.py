"""Spectral-efficiency CDFs: combiner comparison and impairment ablation.

Runs the desk-scale smoke experiment twice (three combiners; then the
aware combiner under single-impairment ablations), prints the summary
tables, and renders the two CDF figures when matplotlib is available.

    python demos/06_se_cdfs.py [--out-dir DIR]
"""

import argparse
from pathlib import Path

from cfmimo import ExperimentPlan, load_config, run_experiment, summarize

parser = argparse.ArgumentParser()
parser.add_argument("--out-dir", default="demo_results")
args = parser.parse_args()

config = Path(__file__).resolve().parent.parent / "configs" / "smoke.json"
scenario = load_config(config)
out = Path(args.out_dir)

print("combiner comparison (perfect vs aware vs unaware) ...")
run_experiment(scenario, ExperimentPlan(
    drops=5, realizations_per_drop=5, bussgang_samples=200,
    combiners=("aware", "unaware", "perfect"), seed=40,
    out_dir=str(out / "combiners")))

print("single-impairment ablations with the aware combiner ...")
run_experiment(scenario, ExperimentPlan(
    drops=5, realizations_per_drop=5, bussgang_samples=200,
    combiners=("aware",),
    ablations=("none", "no-lna", "no-pn", "no-iqi", "no-adc"), seed=50,
    out_dir=str(out / "ablations")))

for name in ("combiners", "ablations"):
    print(f"\n{name}:")
    tables = summarize(out / name)
    for (combiner, ablation), table in sorted(tables.items(), key=lambda x: -x[1]["median"]):
        print(f"  {combiner:8s} {ablation:7s}  n={table['count']:3d}  "
              f"median={table['median']:.3f}  p10={table['p10']:.3f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not installed; skipping figures "
          "(the frontend/ package renders the same plots from the CSVs)")
    raise SystemExit(0)

for name, group_key in (("combiners", 0), ("ablations", 1)):
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, table in sorted(summarize(out / name).items()):
        ax.plot(table["values"], table["percentiles"], label=key[group_key])
    ax.set_xlabel("spectral efficiency [bit/symbol]")
    ax.set_ylabel("CDF")
    ax.set_ylim(0, 1)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    target = out / f"cdf_{name}.png"
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")
