"""Command-line front end.

    qflsim run <config>
    qflsim poc1 <config> --devices 2,4,8 --qubits 2,4,6
    qflsim poc2 <config> --layers 2,8 --encodings vanilla,mean,half
    qflsim plot <dir>

Exit codes: 0 success, 2 config error, 3 data error, 4 runtime error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench
from .encoding import EncodingKind
from .errors import ConfigError, DataFormatError, QflError


def _int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{flag}: expected comma-separated integers, got {text!r}") from None


def _encoding_list(text: str) -> list[EncodingKind]:
    kinds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            kinds.append(EncodingKind(part.lower()))
        except ValueError:
            options = ", ".join(e.value for e in EncodingKind)
            raise ConfigError(f"--encodings: expected any of {options}, got {part!r}") from None
    return kinds


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qflsim",
        description="Simulate federated training of variational quantum classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a config file")
    run.add_argument("config", help="path to a key = value config file")
    run.add_argument("--out", help="output directory (overrides config output_dir)")

    poc1 = sub.add_parser("poc1", help="communication-delay sweeps over devices and qubits")
    poc1.add_argument("config")
    poc1.add_argument("--devices", default="2,4,8", help="comma-separated device counts")
    poc1.add_argument("--qubits", default="2,4,6", help="comma-separated qubit counts")
    poc1.add_argument("--repeats", type=int, default=3, help="timing repeats per sweep point")
    poc1.add_argument("--out", help="output directory (overrides config output_dir)")

    poc2 = sub.add_parser("poc2", help="layer-count x encoding sweep")
    poc2.add_argument("config")
    poc2.add_argument("--layers", default="2,8", help="comma-separated layer counts")
    poc2.add_argument(
        "--encodings", default="vanilla,mean,half", help="comma-separated encoding names"
    )
    poc2.add_argument("--out", help="output directory (overrides config output_dir)")

    plot = sub.add_parser("plot", help="render SVG charts from metrics CSVs in a directory")
    plot.add_argument("directory")
    return parser


def _load(args) -> bench.ExperimentConfig:
    config = bench.load_config(args.config)
    if getattr(args, "out", None):
        config.output_dir = Path(args.out)
    return config


def _dispatch(args) -> None:
    if args.command == "run":
        config = _load(args)
        records = bench.run_single(config)
        if records:
            last = records[-1]
            print(
                f"round {last.round}: train_loss={last.mean_train_loss:.4f} "
                f"train_acc={last.mean_train_accuracy:.3f} "
                f"test_acc={last.test_accuracy:.3f}"
            )
        print(f"wrote {config.output_dir / 'metrics.csv'}")
    elif args.command == "poc1":
        config = _load(args)
        summary = bench.run_poc1(
            config,
            _int_list(args.devices, "--devices"),
            _int_list(args.qubits, "--qubits"),
            repeats=args.repeats,
        )
        for row in summary:
            print(
                f"{row['sweep']:>7} n={row['n_devices']} q={row['qubits']}: "
                f"modeled={row['modeled_delay_s']:.6f}s "
                f"measured={row['median_wall_clock_s']:.4f}s"
            )
        print(f"wrote {config.output_dir / 'poc1_summary.csv'}")
    elif args.command == "poc2":
        config = _load(args)
        results = bench.run_poc2(
            config, _int_list(args.layers, "--layers"), _encoding_list(args.encodings)
        )
        for (k, enc), records in results.items():
            last = records[-1]
            print(f"k={k} {enc}: final train_loss={last.mean_train_loss:.4f}")
        print(f"wrote {config.output_dir / 'poc2_summary.csv'}")
    else:
        for path in bench.emit_plots(args.directory):
            print(f"wrote {path}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DataFormatError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (QflError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
