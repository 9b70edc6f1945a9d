"""Experiment configuration, sweep runners, metrics persistence, plots.

Config files are line-oriented `key = value` with dotted keys for
nesting and `#` comments. Every absent key falls back to a documented
default, so an empty file is a valid config.

Metrics are written to two CSVs per run: metrics.csv holds only
deterministic columns (re-running the same config and seed reproduces
it byte for byte), timing.csv holds the measured wall clock.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .encoding import EncodingKind, StatePrep
from .errors import ConfigError, DataFormatError
from .federation import DelayParams, RoundRecord, model_delay, run_experiment
from .qstate import MAX_QUBITS
from .svgplot import line_chart
from .vqc import TrainConfig

METRICS_HEADER = [
    "round",
    "mean_train_loss",
    "mean_train_accuracy",
    "test_loss",
    "test_accuracy",
    "modeled_delay_s",
]
TIMING_HEADER = ["round", "wall_clock_s"]
POC1_HEADER = ["sweep", "n_devices", "qubits", "layers", "modeled_delay_s", "median_wall_clock_s"]

_CLASS_DEFAULTS = {"iris": 3, "mnist": 4, "synthetic": 3}


@dataclass
class ExperimentConfig:
    """One federated run, fully determined by these fields plus the seed."""

    dataset: str = "iris"
    n_devices: int = 4
    qubits: int = 4
    layers: int = 2
    rounds: int = 10
    encoding: EncodingKind = EncodingKind.VANILLA
    state_prep: StatePrep = StatePrep.ANGLE
    classes_per_device: int = 3
    classes: int = 0  # 0 resolves to the dataset default
    seed: int = 7
    weighted_average: bool = False
    train: TrainConfig = field(default_factory=TrainConfig)
    delay: DelayParams = field(default_factory=DelayParams)
    output_dir: Path = Path("out")
    data_dir: Path = Path("data")
    mnist_images: str = "digits-images-idx3-ubyte"
    mnist_labels: str = "digits-labels-idx1-ubyte"
    mnist_limit: int = 750
    image_side: int = 4
    synthetic_samples: int = 240
    synthetic_features: int = 0  # 0 resolves to qubits
    synthetic_samples_per_device: int = 0  # >0 scales the dataset with n_devices

    def __post_init__(self):
        if self.dataset not in _CLASS_DEFAULTS:
            raise ConfigError(
                f"dataset must be one of {sorted(_CLASS_DEFAULTS)}, got {self.dataset!r}"
            )
        for name, lo in [
            ("n_devices", 1),
            ("qubits", 1),
            ("layers", 1),
            ("rounds", 0),
            ("classes_per_device", 1),
            ("mnist_limit", 0),
            ("image_side", 0),
            ("synthetic_samples", 1),
            ("synthetic_features", 0),
            ("synthetic_samples_per_device", 0),
        ]:
            value = getattr(self, name)
            if value < lo:
                raise ConfigError(f"{name} must be >= {lo}, got {value}")
        if self.qubits > MAX_QUBITS:
            raise ConfigError(f"qubits must be <= {MAX_QUBITS}, got {self.qubits}")
        if self.classes == 0:
            self.classes = _CLASS_DEFAULTS[self.dataset]
        if self.classes < 2:
            raise ConfigError(f"classes must be >= 2, got {self.classes}")
        if self.classes > self.qubits:
            raise ConfigError(
                f"classes ({self.classes}) must be <= qubits ({self.qubits}): "
                "one readout qubit per class"
            )
        if self.classes_per_device > self.classes:
            raise ConfigError(
                f"classes_per_device ({self.classes_per_device}) must be <= "
                f"classes ({self.classes})"
            )
        self.output_dir = Path(self.output_dir)
        self.data_dir = Path(self.data_dir)


def _parse_bool(value: str, key: str) -> bool:
    if value.lower() in ("true", "yes", "1"):
        return True
    if value.lower() in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _parse_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _parse_float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _parse_enum(enum_cls, value: str, key: str):
    try:
        return enum_cls(value.lower())
    except ValueError:
        options = ", ".join(e.value for e in enum_cls)
        raise ConfigError(f"{key}: expected one of {options}, got {value!r}") from None


# key -> (target field, converter); converters get (value, key)
_KEYS = {
    "dataset": ("dataset", lambda v, k: v.lower()),
    "n_devices": ("n_devices", _parse_int),
    "qubits": ("qubits", _parse_int),
    "layers": ("layers", _parse_int),
    "rounds": ("rounds", _parse_int),
    "encoding": ("encoding", lambda v, k: _parse_enum(EncodingKind, v, k)),
    "state_prep": ("state_prep", lambda v, k: _parse_enum(StatePrep, v, k)),
    "classes_per_device": ("classes_per_device", _parse_int),
    "classes": ("classes", _parse_int),
    "seed": ("seed", _parse_int),
    "weighted_average": ("weighted_average", _parse_bool),
    "output_dir": ("output_dir", lambda v, k: Path(v)),
    "data.dir": ("data_dir", lambda v, k: Path(v)),
    "train.learning_rate": ("train.learning_rate", _parse_float),
    "train.local_epochs": ("train.local_epochs", _parse_int),
    "train.batch_size": ("train.batch_size", _parse_int),
    "delay.bandwidth_Bps": ("delay.bandwidth_Bps", _parse_float),
    "delay.per_device_latency_s": ("delay.per_device_latency_s", _parse_float),
    "mnist.images": ("mnist_images", lambda v, k: v),
    "mnist.labels": ("mnist_labels", lambda v, k: v),
    "mnist.limit": ("mnist_limit", _parse_int),
    "mnist.side": ("image_side", _parse_int),
    "synthetic.samples": ("synthetic_samples", _parse_int),
    "synthetic.features": ("synthetic_features", _parse_int),
    "synthetic.samples_per_device": ("synthetic_samples_per_device", _parse_int),
}


def parse_config(text) -> ExperimentConfig:
    """Parse `key = value` config text; unknown keys and bad values raise ConfigError."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    top: dict[str, object] = {}
    train: dict[str, object] = {}
    delay: dict[str, object] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {line_no}: unknown config key {key!r}")
        target, convert = _KEYS[key]
        parsed = convert(value, key)
        if target.startswith("train."):
            train[target.split(".", 1)[1]] = parsed
        elif target.startswith("delay."):
            delay[target.split(".", 1)[1]] = parsed
        else:
            top[target] = parsed
    if "data_dir" not in top and os.environ.get("QFLSIM_DATA_DIR"):
        top["data_dir"] = Path(os.environ["QFLSIM_DATA_DIR"])
    try:
        train_cfg = TrainConfig(**train)
        delay_cfg = DelayParams(**delay)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentConfig(train=train_cfg, delay=delay_cfg, **top)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_metrics(records: list[RoundRecord], path) -> None:
    """Deterministic per-round metrics; wall clock goes to write_timing instead."""
    _write_csv(
        path,
        METRICS_HEADER,
        (
            (r.round, r.mean_train_loss, r.mean_train_accuracy, r.test_loss,
             r.test_accuracy, r.modeled_delay_s)
            for r in records
        ),
    )


def write_timing(records: list[RoundRecord], path) -> None:
    _write_csv(path, TIMING_HEADER, ((r.round, r.wall_clock_s) for r in records))


def read_csv_columns(path, required: list[str]) -> dict[str, list[str]]:
    """Read a metrics CSV into columns, checking the required header names."""
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(f"metrics file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty metrics file") from None
        rows = list(reader)
    for column in required:
        if column not in header:
            raise DataFormatError(f"{path}: missing column {column!r}")
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    by_name = {name: [row[i] for row in rows] for i, name in enumerate(header)}
    return by_name


def run_single(config: ExperimentConfig, out_dir=None) -> list[RoundRecord]:
    """Run one experiment and persist metrics.csv + timing.csv."""
    out = Path(out_dir) if out_dir is not None else config.output_dir
    records = run_experiment(config)
    write_metrics(records, out / "metrics.csv")
    write_timing(records, out / "timing.csv")
    return records


def run_poc1(
    config: ExperimentConfig,
    device_counts: list[int],
    qubit_counts: list[int],
    repeats: int = 3,
) -> list[dict]:
    """Communication-delay sweeps: vary n at the base q, then q at the base n.

    Each sweep point is run `repeats` times with the same seed; metrics are
    identical across repeats, so repeats only serve the wall-clock median.
    Writes per-point metrics/timing CSVs and poc1_summary.csv.
    """
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    out = config.output_dir
    summary: list[dict] = []
    points = [("devices", n, config.qubits) for n in device_counts]
    points += [("qubits", config.n_devices, q) for q in qubit_counts]
    if config.rounds > 0 and points:
        # discarded warmup so cold-start costs don't inflate the first point
        run_experiment(replace(config, rounds=min(2, config.rounds)))
    for sweep, n, q in points:
        cfg = replace(config, n_devices=n, qubits=q)
        walls = []
        records = None
        for _ in range(repeats):
            records = run_experiment(cfg)
            if records:
                walls.append(float(np.mean([r.wall_clock_s for r in records])))
        tag = f"poc1_n{n}_q{q}"
        write_metrics(records, out / f"{tag}_metrics.csv")
        write_timing(records, out / f"{tag}_timing.csv")
        summary.append(
            {
                "sweep": sweep,
                "n_devices": n,
                "qubits": q,
                "layers": cfg.layers,
                "modeled_delay_s": model_delay(n, q, cfg.layers, cfg.delay),
                "median_wall_clock_s": float(np.median(walls)) if walls else 0.0,
            }
        )
    _write_csv(
        out / "poc1_summary.csv",
        POC1_HEADER,
        ([row[k] for k in POC1_HEADER] for row in summary),
    )
    return summary


def run_poc2(
    config: ExperimentConfig,
    layer_counts: list[int],
    encodings: list[EncodingKind],
) -> dict[tuple[int, str], list[RoundRecord]]:
    """Layer-count x encoding sweep under one shared seed and partition.

    Writes per-run metrics/timing CSVs plus poc2_summary.csv of final-round
    metrics.
    """
    out = config.output_dir
    results: dict[tuple[int, str], list[RoundRecord]] = {}
    summary_rows = []
    for k in layer_counts:
        for enc in encodings:
            cfg = replace(config, layers=k, encoding=enc)
            records = run_experiment(cfg)
            results[(k, enc.value)] = records
            tag = f"poc2_k{k}_{enc.value}"
            write_metrics(records, out / f"{tag}_metrics.csv")
            write_timing(records, out / f"{tag}_timing.csv")
            last = records[-1]
            summary_rows.append(
                (k, enc.value, last.mean_train_loss, last.mean_train_accuracy,
                 last.test_loss, last.test_accuracy)
            )
    _write_csv(
        out / "poc2_summary.csv",
        ["layers", "encoding", "final_train_loss", "final_train_accuracy",
         "final_test_loss", "final_test_accuracy"],
        summary_rows,
    )
    return results


def _floats(column: list[str]) -> list[float]:
    return [float(v) for v in column]


def emit_plots(directory) -> list[Path]:
    """Render SVG charts for every recognized metrics file in a directory.

    poc1_summary.csv -> delay vs devices / delay vs qubits; poc2 per-run
    files -> train/test loss vs round; a plain metrics.csv -> loss and
    accuracy curves. Raises DataFormatError when nothing is plottable.
    """
    directory = Path(directory)
    written: list[Path] = []

    summary_path = directory / "poc1_summary.csv"
    if summary_path.is_file():
        cols = read_csv_columns(
            summary_path, ["sweep", "n_devices", "qubits", "modeled_delay_s", "median_wall_clock_s"]
        )
        for sweep, x_name in (("devices", "n_devices"), ("qubits", "qubits")):
            idx = [i for i, s in enumerate(cols["sweep"]) if s == sweep]
            if not idx:
                continue
            xs = [float(cols[x_name][i]) for i in idx]
            modeled = [float(cols["modeled_delay_s"][i]) for i in idx]
            measured = [float(cols["median_wall_clock_s"][i]) for i in idx]
            path = directory / f"delay_vs_{sweep}.svg"
            line_chart(
                [("modeled delay", xs, modeled), ("measured round time", xs, measured)],
                f"Per-round delay vs {sweep}",
                x_name,
                "seconds",
                path,
            )
            written.append(path)

    poc2_files = sorted(directory.glob("poc2_k*_metrics.csv"))
    if poc2_files:
        train_series, test_series = [], []
        for path in poc2_files:
            cols = read_csv_columns(path, METRICS_HEADER)
            label = path.name[len("poc2_") : -len("_metrics.csv")]
            rounds = _floats(cols["round"])
            train_series.append((label, rounds, _floats(cols["mean_train_loss"])))
            if all(cols["test_loss"]):
                test_series.append((label, rounds, _floats(cols["test_loss"])))
        path = directory / "train_loss_vs_round.svg"
        line_chart(train_series, "Mean device train loss per round", "round", "loss", path)
        written.append(path)
        if test_series:
            path = directory / "test_loss_vs_round.svg"
            line_chart(test_series, "Global test loss per round", "round", "loss", path)
            written.append(path)

    single = directory / "metrics.csv"
    if single.is_file():
        cols = read_csv_columns(single, METRICS_HEADER)
        rounds = _floats(cols["round"])
        loss_series = [("train", rounds, _floats(cols["mean_train_loss"]))]
        acc_series = [("train", rounds, _floats(cols["mean_train_accuracy"]))]
        if all(cols["test_loss"]):
            loss_series.append(("test", rounds, _floats(cols["test_loss"])))
            acc_series.append(("test", rounds, _floats(cols["test_accuracy"])))
        for name, series, y_label in (
            ("loss_vs_round.svg", loss_series, "loss"),
            ("accuracy_vs_round.svg", acc_series, "accuracy"),
        ):
            path = directory / name
            line_chart(series, name[: -len(".svg")].replace("_", " "), "round", y_label, path)
            written.append(path)

    if not written:
        raise DataFormatError(f"no plottable metrics files in {directory}")
    return written
