"""Plot the transverse trajectories saved by a scenario run.

Usage:
    python3 scripts/plot_trajectories.py RUN_DIR [--out FILE.png]

Reads every trajectory_*.csv under RUN_DIR (as written by the pairslit CLI)
and draws y1(t) and y2(t) for each pair, in micrometers against nanoseconds.
Requires matplotlib.
"""

import argparse
import csv
import sys
from pathlib import Path


def load_columns(path: Path) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {key: [float(r[key]) for r in rows] for key in rows[0]}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("run_dir", help="directory containing trajectory_*.csv")
    ap.add_argument("--out", default=None, help="output image (default: RUN_DIR/trajectories.png)")
    args = ap.parse_args(argv)

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("plot_trajectories.py requires matplotlib (pip install matplotlib)", file=sys.stderr)
        return 1

    run_dir = Path(args.run_dir)
    files = sorted(run_dir.glob("trajectory_*.csv"))
    if not files:
        print(f"no trajectory_*.csv files under {run_dir}", file=sys.stderr)
        return 1

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for path in files:
        cols = load_columns(path)
        t_ns = [1e9 * t for t in cols["t"]]
        ax.plot(t_ns, [1e6 * y for y in cols["y1"]], color="tab:blue", alpha=0.6, lw=0.9)
        ax.plot(t_ns, [1e6 * y for y in cols["y2"]], color="tab:red", alpha=0.6, lw=0.9)
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("y (um)")
    ax.set_title(f"{run_dir.name}: {len(files)} pairs (blue: particle 1, red: particle 2)")
    out = Path(args.out) if args.out else run_dir / "trajectories.png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
