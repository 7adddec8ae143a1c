"""Command-line entry point: run one scenario from a JSON config."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .runner import ConfigError, default_config, parse_config, run_scenario


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="drivenpacket",
        description="Evolve a wave packet under the Hamiltonian and invariant "
        "quantization schemes of a periodically forced particle and write "
        "density/moment time series plus a summary report.",
    )
    parser.add_argument("--config", metavar="PATH", help="JSON scenario document")
    parser.add_argument("--out-dir", metavar="PATH", help="output directory override")
    parser.add_argument(
        "--scheme",
        action="append",
        metavar="NAME",
        help="restrict to this scheme (repeatable): hamiltonian, S1, S2, S3",
    )
    parser.add_argument("--strict", action="store_true", help="escalate warnings and run oracle cross checks")
    parser.add_argument("--audit", action="store_true", help="print the published-vs-derived audit table")
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            with open(args.config) as fh:
                config = parse_config(fh.read())
        else:
            config = default_config()
        if args.scheme:
            config = parse_config_schemes(config, args.scheme)
        out_dir = args.out_dir if args.out_dir is not None else config.out_dir
        root = os.environ.get("DRIVENPACKET_OUT_ROOT")
        if root and not os.path.isabs(out_dir):
            out_dir = os.path.join(root, out_dir)
        config = replace(config, out_dir=out_dir)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    return run_scenario(config, strict=args.strict or None, echo_audit=args.audit)


def parse_config_schemes(config, names):
    from .runner import VALID_SCHEMES

    for name in names:
        if name not in VALID_SCHEMES:
            raise ConfigError(f"unknown scheme {name!r}; expected one of {VALID_SCHEMES}")
    return replace(config, schemes=tuple(names))


if __name__ == "__main__":
    raise SystemExit(main())
