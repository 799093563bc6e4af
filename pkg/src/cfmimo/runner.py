"""Experiment orchestration: drops, realizations, ablations and persistence.

An :class:`ExperimentPlan` describes the Monte-Carlo loops; each (drop,
realization) pair is an independent work item whose randomness derives from
(master seed, stage tag, indices), so results are identical for any worker
count and rows come out in a fixed sorted order.  Ablation configurations
share the data/noise/channel randomness of the baseline, so their curves
differ only through the toggled impairment.

Output directory layout:

    results.csv   one row per (drop, realization, ue, combiner, ablation)
                  with the subcarrier-averaged SE; with per_subcarrier also
                  one row per subcarrier (columns m, se_m filled, se_avg
                  empty) after each average row
    run.json      resolved config, config hash, plan echo, solver counters
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .bussgang import estimate_statistics
from .channel import build_correlations, sample_channel
from .receiver import CombinerKind, evaluate_se, perfect_hardware_se
from .scenario import NetworkScenario, Toggles, drop_network, to_config

ABLATION_TAGS = ("none", "no-lna", "no-pn", "no-iqi", "no-adc")

CSV_COLUMNS = ("drop", "realization", "ue", "combiner", "ablation", "se_avg")
CSV_COLUMNS_SUBCARRIER = CSV_COLUMNS + ("m", "se_m")


@dataclass(frozen=True)
class ExperimentPlan:
    drops: int
    realizations_per_drop: int
    bussgang_samples: int
    combiners: tuple = ("aware", "unaware", "perfect")
    ablations: tuple = ("none",)
    seed: int = 0
    out_dir: str = "results"
    per_subcarrier: bool = False
    workers: int = 1

    def __post_init__(self):
        if min(self.drops, self.realizations_per_drop, self.bussgang_samples) < 1:
            raise ValueError("plan counts must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        for kind in self.combiners:
            CombinerKind(kind)
        for tag in self.ablations:
            if tag not in ABLATION_TAGS:
                raise ValueError(f"unknown ablation {tag!r}, expected one of {ABLATION_TAGS}")


def plan_from_scenario(scenario: NetworkScenario, **overrides) -> ExperimentPlan:
    """Plan defaults taken from the scenario's mc section."""
    base = dict(drops=scenario.mc.drops,
                realizations_per_drop=scenario.mc.channel_realizations,
                bussgang_samples=scenario.mc.bussgang_samples,
                seed=scenario.mc.seed)
    base.update(overrides)
    return ExperimentPlan(**base)


def apply_ablation(scenario: NetworkScenario, tag: str) -> NetworkScenario:
    """Disable one impairment on top of the scenario's own toggles."""
    if tag == "none":
        return scenario
    name = tag.removeprefix("no-")
    toggles = scenario.impairments.toggles.as_dict()
    if name not in toggles:
        raise ValueError(f"unknown ablation {tag!r}")
    toggles[name] = False
    impair = replace(scenario.impairments, toggles=Toggles(**toggles))
    return replace(scenario, impairments=impair)


def _se_rows(result, drop: int, realization: int, ablation: str, per_subcarrier: bool):
    rows = []
    avg = result.subcarrier_average()
    for k in range(result.se.shape[0]):
        se_avg = "" if np.isnan(avg[k]) else repr(float(avg[k]))
        base = {"drop": drop, "realization": realization, "ue": k,
                "combiner": result.kind.value, "ablation": ablation}
        rows.append({**base, "se_avg": se_avg, "m": "", "se_m": ""})
        if per_subcarrier:
            for m in range(result.se.shape[1]):
                val = result.se[k, m]
                rows.append({**base, "se_avg": "", "m": m,
                             "se_m": "" if np.isnan(val) else repr(float(val))})
    return rows


def _run_item(scenario: NetworkScenario, plan: ExperimentPlan, drop: int, realization: int):
    scen_drop = drop_network(scenario, (plan.seed, "drop", drop))
    correlations = build_correlations(scen_drop, (plan.seed, "corr", drop))
    channel = sample_channel(correlations, (plan.seed, "chan", drop, realization))

    rows, fallbacks = [], 0
    if CombinerKind.PERFECT_HARDWARE.value in plan.combiners:
        result = perfect_hardware_se(channel, scen_drop)
        fallbacks += result.metadata.get("pinv_fallbacks", 0)
        rows += _se_rows(result, drop, realization, "none", plan.per_subcarrier)

    impaired_kinds = [k for k in plan.combiners
                      if k != CombinerKind.PERFECT_HARDWARE.value]
    if impaired_kinds:
        for tag in plan.ablations:
            scen_abl = apply_ablation(scen_drop, tag)
            stats = estimate_statistics(channel, scen_abl, plan.bussgang_samples,
                                        (plan.seed, "buss", drop, realization))
            for kind in impaired_kinds:
                result = evaluate_se(stats, channel, scen_abl, CombinerKind(kind))
                fallbacks += result.metadata.get("pinv_fallbacks", 0)
                rows += _se_rows(result, drop, realization, tag, plan.per_subcarrier)
    return rows, fallbacks


def _run_item_packed(args):
    return _run_item(*args)


def config_hash(scenario: NetworkScenario) -> str:
    payload = json.dumps(to_config(scenario), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def run_experiment(scenario: NetworkScenario, plan: ExperimentPlan) -> dict:
    """Execute the plan; writes results.csv and run.json under plan.out_dir.

    Returns {"csv": path, "json": path, "rows": count}.
    """
    items = [(scenario, plan, d, j)
             for d in range(plan.drops)
             for j in range(plan.realizations_per_drop)]
    if plan.workers > 1:
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            outputs = list(pool.map(_run_item_packed, items))
    else:
        outputs = [_run_item_packed(item) for item in items]

    rows = [row for out in outputs for row in out[0]]
    fallbacks = sum(out[1] for out in outputs)
    missing = sum(1 for row in rows if row["se_avg"] == "" and row["m"] == "")

    order = {kind: i for i, kind in enumerate(plan.combiners)}
    abl_order = {tag: i for i, tag in enumerate(plan.ablations)}
    rows.sort(key=lambda r: (r["drop"], r["realization"],
                             abl_order.get(r["ablation"], -1),
                             order[r["combiner"]], r["ue"],
                             -1 if r["m"] == "" else r["m"]))

    out_dir = Path(plan.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "results.csv"
    columns = CSV_COLUMNS_SUBCARRIER if plan.per_subcarrier else CSV_COLUMNS
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)

    json_path = out_dir / "run.json"
    sidecar = {
        "config": to_config(scenario),
        "config_hash": config_hash(scenario),
        "plan": dataclasses.asdict(plan),
        "rows": len(rows),
        "pinv_fallbacks": fallbacks,
        "missing_se_rows": missing,
    }
    json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return {"csv": str(csv_path), "json": str(json_path), "rows": len(rows)}


def read_results(in_dir) -> list[dict]:
    path = Path(in_dir) / "results.csv"
    if not path.exists():
        raise FileNotFoundError(f"no results.csv under {in_dir}")
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def summarize(in_dir, per_subcarrier: bool = False) -> dict:
    """Empirical CDF tables grouped by (combiner, ablation).

    Each group maps to sorted SE values with plotting positions
    (i - 0.5) / n plus median and 10th-percentile summaries.  Rows with a
    missing SE (failed solves) are excluded.
    """
    column = "se_m" if per_subcarrier else "se_avg"
    groups: dict = {}
    for row in read_results(in_dir):
        if row.get(column, "") == "" or row[column] is None:
            continue
        key = (row["combiner"], row["ablation"])
        groups.setdefault(key, []).append(float(row[column]))
    if not groups:
        raise ValueError(f"no rows with a {column} value found")
    tables = {}
    for key, values in groups.items():
        values = np.sort(np.asarray(values))
        n = len(values)
        percentiles = (np.arange(1, n + 1) - 0.5) / n
        tables[key] = {
            "values": values,
            "percentiles": percentiles,
            "median": float(np.median(values)),
            "p10": float(np.percentile(values, 10)),
            "count": n,
        }
    return tables


def format_summary(tables: dict, fmt: str = "csv") -> str:
    """Render CDF tables as csv or json text."""
    if fmt == "csv":
        lines = ["combiner,ablation,se,percentile"]
        for (combiner, ablation), table in sorted(tables.items()):
            for value, pct in zip(table["values"], table["percentiles"]):
                lines.append(f"{combiner},{ablation},{float(value)!r},{float(pct)!r}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            f"{combiner}/{ablation}": {
                "se": [float(v) for v in table["values"]],
                "percentile": [float(p) for p in table["percentiles"]],
                "median": table["median"],
                "p10": table["p10"],
                "count": table["count"],
            }
            for (combiner, ablation), table in sorted(tables.items())
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown format {fmt!r} (expected 'csv' or 'json')")
