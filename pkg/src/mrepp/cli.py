"""Command-line entry point.

Subcommands: simulate (emit a dataset CSV), run (full experiment), influence
(bound audit), slopes (convergence diagnostic). Exit codes: 0 success,
2 configuration error, 3 runtime failure.
"""

import os

# Pin BLAS threading before numpy loads so results are bit-reproducible
# across machines and --jobs settings (override via the environment).
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
             "NUMEXPR_NUM_THREADS", "VECLIB_MAXIMUM_THREADS"):
    os.environ.setdefault(_var, "1")

import argparse  # noqa: E402
import logging  # noqa: E402
import sys  # noqa: E402
from dataclasses import replace  # noqa: E402
from pathlib import Path  # noqa: E402

from . import __version__  # noqa: E402
from .config import load_config, with_seed  # noqa: E402
from .errors import ConfigError  # noqa: E402
from .harness import SLOPES_HEADER, influence_audit, run, slopes  # noqa: E402
from .simulate import generate, to_csv  # noqa: E402

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _common_flags(sub):
    sub.add_argument("--config", required=True, help="YAML experiment config")
    sub.add_argument("--seed", type=int, default=None, help="override the base seed")
    sub.add_argument("--out", default=None, help="override the output path")
    sub.add_argument("--jobs", type=int, default=None, help="parallel worker count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrepp",
                                     description="spatial GP prediction experiments")
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)
    for name, text in [("simulate", "generate one dataset CSV"),
                       ("run", "run the configured experiment"),
                       ("influence", "audit influence bounds over an (n, m) grid"),
                       ("slopes", "error-decay diagnostic over the n grid")]:
        _common_flags(commands.add_parser(name, help=text))
    return parser


def _load(args):
    config = load_config(args.config)
    if args.seed is not None:
        config = with_seed(config, args.seed)
    if args.out is not None:
        config = replace(config, output=args.out)
    if args.jobs is not None:
        config = replace(config, jobs=args.jobs)
    return config


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = _load(args)
        if args.command == "simulate":
            out = Path(config.output if args.out is None else args.out)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(to_csv(generate(config.scenario)))
            print(f"wrote {out}")
        elif args.command == "run":
            result = run(config)
            print(f"wrote {result.results_path} and {result.manifest_path}")
            for path in result.weights_paths.values():
                print(f"wrote {path}")
        elif args.command == "influence":
            lines = influence_audit(config)
            out = Path("influence.csv" if args.out is None else args.out)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text("\n".join(lines) + "\n")
            print(f"wrote {out}")
        elif args.command == "slopes":
            result_lines, fits = slopes(config)
            out = Path(config.output if args.out is None else args.out)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text("\n".join(result_lines) + "\n")
            summary = out.with_name(out.stem + ".slopes.csv")
            rows = [SLOPES_HEADER] + [
                f"{method},{slope:.12g},{stderr:.12g},{len(config.n_grid)}"
                for method, (slope, stderr) in sorted(fits.items())]
            summary.write_text("\n".join(rows) + "\n")
            print(f"wrote {out} and {summary}")
            for method, (slope, stderr) in sorted(fits.items()):
                print(f"  {method}: slope {slope:+.3f} (se {stderr:.3f})")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - surfaced as a runtime failure
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
