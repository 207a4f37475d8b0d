#!/usr/bin/env python3
# Copyright 2026 The dqft Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Plots a dqft sweep CSV: wall time, EPR pairs and fidelity against n, one line per k."""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

PANELS = [
    ("wall_time_seconds", "median wall time [s]", "log"),
    ("epr_count", "EPR pairs per run", "linear"),
    ("fidelity_sampled", "sampled fidelity (100 shots)", "linear"),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", type=Path)
    parser.add_argument("-o", "--output", type=Path, default=Path("sweep.png"))
    parser.add_argument("--mode", default="telegate", choices=["telegate", "semiclassical"])
    args = parser.parse_args()

    df = pd.read_csv(args.csv)
    df = df[df["mode"] == args.mode]
    if df.empty:
        raise SystemExit(f"no {args.mode} rows in {args.csv}")
    summary = df.groupby(["k", "n"]).median(numeric_only=True).reset_index()

    fig, axes = plt.subplots(1, len(PANELS), figsize=(5 * len(PANELS), 4))
    for ax, (column, label, scale) in zip(axes, PANELS):
        for k, rows in summary.groupby("k"):
            ax.plot(rows["n"], rows[column], marker="o", label=f"k={k}")
        ax.set_xlabel("logical qubits n")
        ax.set_ylabel(label)
        ax.set_yscale(scale)
        ax.grid(alpha=0.3)
    axes[0].legend()
    fig.suptitle(f"{args.csv.name} ({args.mode})")
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
