"""Command line entry point: batch scenario runner and catalog listing.

Exit codes: 0 when every scenario passes, 1 when some check fails, 2 on
usage or configuration errors.  Output is deterministic; the
ISOFLOW_SEED environment variable is read nowhere because nothing here
is randomized.
"""

from __future__ import annotations

import argparse
import configparser
import sys

from . import __version__
from .catalog import Scenario, list_catalog, run_scenario
from .errors import IsoflowError
from .report import render_reports

__all__ = ["main", "load_scenarios"]


def load_scenarios(path: str, tol_override: float | None = None) -> list[Scenario]:
    """Parse a line-oriented config: one [section] per scenario."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep key case
    loaded = parser.read(path)
    if not loaded:
        raise IsoflowError(f"cannot read config file {path!r}")
    scenarios = []
    for section in parser.sections():
        params = dict(parser.items(section))
        construction = params.pop("construction", None)
        if construction is None:
            raise IsoflowError(f"scenario [{section}] does not name a construction")
        if tol_override is not None:
            params["resid_abs"] = repr(tol_override)
        scenarios.append(Scenario(section, construction, params))
    if not scenarios:
        raise IsoflowError(f"config file {path!r} defines no scenarios")
    return scenarios


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="isoflow",
        description="Exact finite-window checks for commuting families of isometries.",
        epilog="All runs are deterministic; ISOFLOW_SEED is ignored (no randomness).")
    sub = parser.add_subparsers(dest="command")
    run_parser = sub.add_parser("run", help="run the scenarios in a config file")
    run_parser.add_argument("config", help="path to a scenario config file")
    run_parser.add_argument("--tol", type=float, default=None,
                            help="override the resid_abs tolerance for every scenario")
    run_parser.add_argument("--out", default=None, help="also write the report to this path")
    sub.add_parser("list", help="print the construction catalog")
    args = parser.parse_args(argv)

    if args.command == "list":
        sys.stdout.write(list_catalog())
        return 0
    if args.command != "run":
        parser.print_usage(sys.stderr)
        return 2
    try:
        scenarios = load_scenarios(args.config, args.tol)
        reports = [run_scenario(s) for s in scenarios]
    except IsoflowError as exc:
        print(f"isoflow: error: {exc}", file=sys.stderr)
        return 2
    text = render_reports(reports, version=__version__)
    sys.stdout.write(text)
    if args.out is not None:
        with open(args.out, "w", newline="\n") as handle:
            handle.write(text)
    return 0 if all(r.overall for r in reports) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
