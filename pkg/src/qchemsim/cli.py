"""Command-line entry point: ``qchemsim {pea,dynamics,fold,qubo,cets}``.

Exit codes: 0 on success, 2 when the config or an input file is invalid,
3 when a problem exceeds the dense-oracle or enumeration caps.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import DomainError, ParseError, ResourceError
from .experiments import PIPELINES, load_config, run

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qchemsim", description="Run a statevector experiment pipeline.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="pipeline", required=True)
    for name in PIPELINES:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument("--config", type=Path, help="key = value config file ([section] per pipeline)")
        p.add_argument("--seed", type=int, help="RNG seed (overrides the config)")
        p.add_argument("--out", type=Path, help="output CSV path; side files get suffixes appended")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config is not None:
            try:
                text = args.config.read_text()
            except OSError as exc:
                raise DomainError(f"cannot read config: {exc}") from None
            base = args.config.parent
        else:
            text, base = "", Path(".")
        cfg = load_config(args.pipeline, text, base, seed=args.seed, out=args.out)
        outputs = run(cfg)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (DomainError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.out is None:
        sys.stdout.write(outputs[""])
        for suffix, body in outputs.items():
            if suffix:
                sys.stdout.write(f"\n# {suffix.lstrip('.')}\n{body}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
