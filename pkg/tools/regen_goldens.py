#!/usr/bin/env python3
"""Regenerate the golden report files from the bundled configs.

Run from the repository root after an intentional report-format or
scenario change:

    python3 tools/regen_goldens.py
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from isoflow import __version__                      # noqa: E402
from isoflow.catalog import run_scenario             # noqa: E402
from isoflow.cli import load_scenarios               # noqa: E402
from isoflow.report import render_reports            # noqa: E402


def main() -> int:
    root = pathlib.Path(__file__).resolve().parent.parent
    golden_dir = root / "tests" / "golden"
    golden_dir.mkdir(parents=True, exist_ok=True)
    for config in sorted((root / "configs").glob("*.cfg")):
        scenarios = load_scenarios(str(config))
        text = render_reports([run_scenario(s) for s in scenarios], version=__version__)
        target = golden_dir / f"{config.stem}.txt"
        target.write_text(text, newline="\n")
        print(f"wrote {target.relative_to(root)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
