"""Run every experiment in configs/ through the CLI.

Usage: python scripts/run_experiments.py [--out out] [--seed N] [--strict]
Each config writes out/<name>/results.json and series.csv.
"""

import argparse
import sys
import time
from pathlib import Path

from setyoung.cli import main

ROOT = Path(__file__).resolve().parents[1]
COMMANDS = {
    "steiner_triangle": "steiner",
    "inclusion_radius_field": "inclusion",
    "inclusion_second_order": "inclusion",
    "fbm_check": "fbm-check",
}


def run_all(out: Path, seed=None, strict=False) -> int:
    worst = 0
    for cfg in sorted((ROOT / "configs").glob("*.json")):
        name = cfg.stem
        argv = [COMMANDS.get(name, name), "--config", str(cfg), "--out", str(out / name)]
        if seed is not None:
            argv += ["--seed", str(seed)]
        if strict:
            argv.append("--strict")
        t0 = time.perf_counter()
        code = main(argv)
        print(f"{name:24s} exit {code}  {time.perf_counter() - t0:6.1f}s")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--strict", action="store_true")
    a = ap.parse_args()
    sys.exit(run_all(Path(a.out), a.seed, a.strict))
