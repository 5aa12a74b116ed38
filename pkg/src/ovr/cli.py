"""Command-line entry point.

    ovr regret-bench --n 8,32 --T 1000 --seeds 20 --out runs/bench
    ovr train-logreg --sampler uniform,vrb --steps 50000 --seeds 5
    ovr train-kmeans --k 3 --batch 100 --steps 200
    ovr property-suite

Every flag can also come from ``--config FILE`` (a JSON object, or
``key = value`` lines with ``#`` comments); flags win over the file. The
resolved configuration is written to ``<out>/config.json`` together with a
``manifest.json``. Exit codes: 0 success, 1 usage, 2 data, 3 runtime.
"""
import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import (BadMix, ConflictingValues, ConfigError, MissingRequired, NoLabels,
                     OvrError, ParseError, TooFewPoints, UnknownFlag)
from .harness.adversaries import KINDS
from .harness.bench import METHODS, run_grid
from .harness.report import emit_report
from .vrb import theta_for_horizon

COMMANDS = ("regret-bench", "train-logreg", "train-kmeans", "property-suite")
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3

# flag name -> (type, help)
FLAGS = {
    "n": (str, "number of indices (comma list allowed for regret-bench)"),
    "T": (str, "horizon (comma list allowed for regret-bench)"),
    "theta": (float, "mixing coefficient; default (n/T)^(1/3), or 0.5 for k-means"),
    "L": (float, "bound on squared losses (default 1)"),
    "gamma": (float, "FTRL regularizer weight (default L)"),
    "seeds": (int, "number of seeds / episodes per cell"),
    "seed": (int, "master seed (default 0)"),
    "adversary": (str, "comma list of adversary kinds"),
    "sampler": (str, "comma list of samplers / methods"),
    "out": (str, "output directory (fallback: $OVR_OUT, then ./ovr-out)"),
    "jobs": (int, "worker processes for regret-bench"),
    "strict": (None, "raise on loss-bound violations instead of clamping"),
    "dataset": (str, "dataset path (default: synthetic imbalanced data)"),
    "format": (str, "dataset format: csv or libsvm"),
    "k": (int, "number of k-Means centers"),
    "batch": (int, "mini-batch size"),
    "steps": (int, "training steps (batches for k-Means)"),
    "optimizer": (str, "adagrad or sgd-strongly-convex"),
    "config": (str, "configuration file"),
}

DEFAULTS = {
    "regret-bench": {"seeds": 20, "seed": 0, "L": 1.0, "gamma": None, "theta": None,
                     "adversary": ",".join(KINDS), "sampler": "ftrl,vrb", "jobs": 1,
                     "strict": True},
    "train-logreg": {"seeds": 1, "seed": 0, "sampler": "uniform,vrb", "steps": 1000,
                     "batch": 1, "theta": None, "strict": False, "format": "csv",
                     "dataset": None, "optimizer": "adagrad"},
    "train-kmeans": {"seeds": 1, "seed": 0, "sampler": "uniform,vrb", "steps": 100,
                     "batch": 100, "k": 3, "theta": None, "strict": False,
                     "format": "csv", "dataset": None},
    "property-suite": {"seed": 0},
}
ALLOWED = {cmd: set(d) | {"out", "config"} for cmd, d in DEFAULTS.items()}
ALLOWED["regret-bench"] |= {"n", "T"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "unrecognized arguments" in message:
            raise UnknownFlag(message)
        raise ConfigError(message)


def _build_parser():
    parser = _Parser(prog="ovr", description="Online variance reduction experiments.")
    parser.add_argument("--version", action="version", version=f"ovr {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    for name, (typ, help_) in FLAGS.items():
        if typ is None:
            parser.add_argument(f"--{name}", action="store_const", const=True,
                                default=argparse.SUPPRESS, help=help_)
        else:
            parser.add_argument(f"--{name}", type=typ, default=argparse.SUPPRESS, help=help_)
    return parser


def read_config_file(path):
    with open(path) as fh:
        text = fh.read()
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    else:
        data = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            data[key] = value
    unknown = set(data) - set(FLAGS) - {"command"}
    if unknown:
        raise UnknownFlag(f"unknown keys in {path}: {sorted(unknown)}")
    return data


def _coerce(name, value):
    typ = FLAGS[name][0]
    if value is None:
        return None
    if typ is None:
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return bool(value)
    if typ is str:
        return str(value)
    try:
        return typ(value)
    except (TypeError, ValueError):
        raise ConfigError(f"--{name}: cannot interpret {value!r}") from None


def _int_list(name, text):
    try:
        values = [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--{name} must be an integer or comma list") from None
    if not values or any(v < 1 for v in values):
        raise ConfigError(f"--{name} values must be positive")
    return values


def _str_list(text):
    return [v.strip() for v in str(text).split(",") if v.strip()]


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    def theta_for(self, n, T):
        if self.values.get("theta") is not None:
            return self.values["theta"]
        return theta_for_horizon(n, T)

    def to_dict(self):
        return {"command": self.command, **self.values}


def parse_config(argv, env=None):
    """Resolve flags, config file, and defaults into a :class:`RunConfig`."""
    env = os.environ if env is None else env
    ns = vars(_build_parser().parse_args(argv))
    command = ns.pop("command")
    given = {}
    if "config" in ns:
        file_vals = read_config_file(ns["config"])
        if file_vals.get("command", command) != command:
            raise ConflictingValues(f"config file is for {file_vals['command']!r}, not {command!r}")
        file_vals.pop("command", None)
        given.update({k: _coerce(k, v) for k, v in file_vals.items()})
    given.update({k: _coerce(k, v) for k, v in ns.items()})

    stray = set(given) - ALLOWED[command]
    if stray:
        raise ConflictingValues(f"{command} does not take {sorted('--' + s for s in stray)}")

    values = dict(DEFAULTS[command])
    values.update(given)
    values.pop("config", None)
    values["out"] = given.get("out") or env.get("OVR_OUT") or "ovr-out"

    if command == "regret-bench":
        for req in ("n", "T"):
            if values.get(req) is None:
                raise MissingRequired(f"regret-bench requires --{req}")
        values["n"] = _int_list("n", values["n"])
        values["T"] = _int_list("T", values["T"])
        methods = _str_list(values["sampler"])
        kinds = _str_list(values["adversary"])
        bad = [m for m in methods if m not in METHODS] + [a for a in kinds if a not in KINDS]
        if bad:
            raise ConfigError(f"unknown sampler/adversary names: {bad}")
        values["sampler"], values["adversary"] = methods, kinds
        if values["theta"] is not None and "vrb" not in methods:
            raise ConflictingValues("--theta only applies to the vrb sampler")
        if values["gamma"] is not None and "ftrl" not in methods:
            raise ConflictingValues("--gamma only applies to the ftrl sampler")
        if values["L"] <= 0:
            raise ConfigError("--L must be positive")
        if values["gamma"] is None:
            values["gamma"] = values["L"]
        values["theta_by_cell"] = {
            f"n={n},T={T}": (values["theta"] if values["theta"] is not None
                             else theta_for_horizon(n, T))
            for n in values["n"] for T in values["T"]}
    elif command in ("train-logreg", "train-kmeans"):
        samplers = _str_list(values["sampler"])
        bad = [s for s in samplers if s not in ("uniform", "vrb", "vrb-doubling")]
        if bad:
            raise ConfigError(f"unknown samplers: {bad}")
        values["sampler"] = samplers
        if values["theta"] is not None and samplers == ["uniform"]:
            raise ConflictingValues("--theta has no effect with the uniform sampler")
        if values["format"] not in ("csv", "libsvm"):
            raise ConfigError("--format must be csv or libsvm")
        if values["dataset"] is None and "format" in given:
            raise ConflictingValues("--format given without --dataset")
    return RunConfig(command, values)


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_manifest(config):
    out = config["out"]
    os.makedirs(out, exist_ok=True)
    _write_json(os.path.join(out, "config.json"), config.to_dict())
    _write_json(os.path.join(out, "manifest.json"), {
        "command": config.command,
        "config": config.to_dict(),
        "library": "ovr",
        "version": __version__,
        "seed": config.get("seed"),
    })


def _write_metrics(path, result):
    cols = ["step", "trainloss", "gradnorm2", "cumsecond", "testcost"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for row in result.rows():
            writer.writerow(["" if row[c] is None else (repr(row[c]) if isinstance(row[c], float)
                                                         else row[c]) for c in cols])


def _load_training_data(config, labelled):
    from .trainers.data import load_dataset, synth_imbalanced
    if config["dataset"] is None:
        return synth_imbalanced(10_000, 5, (0.95, 0.04, 0.01), seed=config["seed"])
    if not os.path.exists(config["dataset"]):
        raise FileNotFoundError(config["dataset"])
    return load_dataset(config["dataset"], config["format"],
                        label_column=0 if labelled else None)


def _summarize_training(runs):
    summary = {}
    for sampler, finals in runs.items():
        arr = np.array(finals, dtype=float)
        summary[sampler] = {
            "runs": len(arr),
            "mean_cumsecond": float(arr.mean()),
            "stderr": float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0,
        }
    return summary


def _cmd_regret_bench(config):
    results = run_grid(config["sampler"], config["adversary"], config["n"], config["T"],
                       range(config["seeds"]), L=config["L"], gamma=config["gamma"],
                       theta=config["theta"], master_seed=config["seed"],
                       strict=config["strict"], jobs=config["jobs"])
    emit_report(results, config["out"])


def _cmd_train(config, kind):
    from .trainers.common import TrainerConfig, train_test_split
    from .trainers.kmeans import kmeanspp_init, train_kmeans
    from .trainers.logreg import train_logreg

    data = _load_training_data(config, labelled=(kind == "logreg"))
    finals = {}
    for sampler in config["sampler"]:
        finals[sampler] = []
        for s in range(config["seeds"]):
            episode_seed = [config["seed"], s]
            if kind == "logreg":
                tc = TrainerConfig(optimizer=config["optimizer"], sampler=sampler,
                                   steps=config["steps"], batch=config["batch"],
                                   theta=config["theta"], strict=config["strict"],
                                   eval_every=max(1, config["steps"] // 100))
                res = train_logreg(data, tc, seed=episode_seed)
            else:
                tc = TrainerConfig(sampler=sampler, steps=config["steps"], batch=config["batch"],
                                   theta=config["theta"], strict=config["strict"],
                                   eval_every=max(1, config["steps"] // 100),
                                   split_seed=config["seed"], init_seed=config["seed"] + s)
                train_idx, _ = train_test_split(data.n, tc.test_fraction, tc.split_seed)
                init = kmeanspp_init(data.points[train_idx], config["k"], tc.init_seed)
                res = train_kmeans(data, config["k"], tc, seed=episode_seed, init_centers=init)
            _write_metrics(os.path.join(config["out"], f"metrics_{sampler}_seed{s}.csv"), res)
            finals[sampler].append(float(res.cumsecond[-1]))
    _write_json(os.path.join(config["out"], "summary.json"), _summarize_training(finals))


def _cmd_property_suite(config):
    from .properties import run_property_suite
    report = run_property_suite(seed=config["seed"])
    _write_json(os.path.join(config["out"], "properties.json"), report)
    for name, entry in report.items():
        print(f"{'PASS' if entry['passed'] else 'FAIL'} {name}: {entry['detail']}")
    if not all(entry["passed"] for entry in report.values()):
        raise RuntimeError("property suite reported failures")


def dispatch(config):
    """Run a resolved configuration; returns the process exit code."""
    try:
        _write_manifest(config)
        if config.command == "regret-bench":
            _cmd_regret_bench(config)
        elif config.command == "train-logreg":
            _cmd_train(config, "logreg")
        elif config.command == "train-kmeans":
            _cmd_train(config, "kmeans")
        else:
            _cmd_property_suite(config)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, BadMix, NoLabels, TooFewPoints, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OvrError, RuntimeError, ValueError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except (ConfigError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return dispatch(config)


if __name__ == "__main__":
    sys.exit(main())
