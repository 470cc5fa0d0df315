#!/usr/bin/env python
"""Run one or more experiment configs and write CSV + JSON reports."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ietshrink.experiments import ExperimentConfig, run_experiment


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("configs", nargs="+", type=Path)
    p.add_argument("--out", type=Path, default=Path("results"))
    args = p.parse_args()
    failures = 0
    for path in args.configs:
        cfg = ExperimentConfig.from_file(path)
        report = run_experiment(cfg)
        csv_path, _ = report.write(args.out / path.stem)
        failures += report.failures
        print(f"{path.name}: {len(report.rows)} rows -> {csv_path} ({report.failures} check failures)")
    return 2 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
