"""CSV/JSON report writers for regret benchmarks.

Files written into the output directory:

* ``regret.csv``  -- ``method,adversary,n,T,seed,regret,bound,ratio``, one row per episode
* ``summary.json`` -- per ``(method, adversary, n, T)`` mean regret, standard error, bound
* ``curves.csv``  -- ``method,adversary,n,T,round,cumcost``, seed-averaged cumulative cost
"""
import csv
import json
import math
import os
from collections import OrderedDict

import numpy as np

from ..errors import IoFailure

REGRET_HEADER = ["method", "adversary", "n", "T", "seed", "regret", "bound", "ratio"]
CURVE_HEADER = ["method", "adversary", "n", "T", "round", "cumcost"]


def _fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _group_key(row):
    return (row["method"], row["adversary"], int(row["n"]), int(row["T"]))


def summarize(results):
    groups = OrderedDict()
    for row in results:
        groups.setdefault(_group_key(row), []).append(row)
    summary = []
    for (method, adversary, n, T), rows in groups.items():
        regrets = np.array([r["regret"] for r in rows], dtype=float)
        stderr = float(regrets.std(ddof=1) / math.sqrt(len(regrets))) if len(regrets) > 1 else 0.0
        bound = rows[0].get("bound")
        summary.append({
            "method": method,
            "adversary": adversary,
            "n": n,
            "T": T,
            "seeds": len(rows),
            "mean_regret": float(regrets.mean()),
            "stderr": stderr,
            "bound": bound,
            "mean_ratio": float(regrets.mean() / bound) if bound else None,
            "max_regret": float(regrets.max()),
        })
    return summary


def emit_report(results, out_dir):
    """Write the regret CSV, JSON summary, and curve CSV; returns their paths."""
    try:
        os.makedirs(out_dir, exist_ok=True)
        regret_path = os.path.join(out_dir, "regret.csv")
        with open(regret_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(REGRET_HEADER)
            for row in results:
                writer.writerow([_fmt(row.get(k)) for k in REGRET_HEADER])

        summary_path = os.path.join(out_dir, "summary.json")
        with open(summary_path, "w") as fh:
            json.dump(summarize(results), fh, indent=2, sort_keys=True)
            fh.write("\n")

        curve_path = os.path.join(out_dir, "curves.csv")
        with open(curve_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CURVE_HEADER)
            groups = OrderedDict()
            for row in results:
                if "curve_rounds" in row:
                    groups.setdefault(_group_key(row), []).append(row)
            for (method, adversary, n, T), rows in groups.items():
                rounds = rows[0]["curve_rounds"]
                mean_curve = np.mean([r["curve_cost"] for r in rows], axis=0)
                for rnd, cost in zip(rounds, mean_curve):
                    writer.writerow([method, adversary, n, T, int(rnd), _fmt(float(cost))])
    except OSError as exc:
        raise IoFailure(f"could not write report to {out_dir}: {exc}") from exc
    return {"regret": regret_path, "summary": summary_path, "curves": curve_path}


def read_regret_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
