"""Concentration of rescaled sampled profiles around the limit shape.

Prints one CSV table over several r, then the lattice diagnostic: the rescaled
profile only takes values on a grid of step 4*sqrt(6)*r, so at fixed epsilon
the best achievable deviation is set by where f(x) falls on that grid.

    python3 scripts/limit_shape_experiment.py --r 0.04,0.02,0.01 --samples 200 --seed 0
"""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass, field

from selfconj.limitshape import GibbsConfig, convergence_experiment, limit_shape_f, rows_to_csv, scale_factor


@dataclass
class ExperimentConfig:
    rs: list[float] = field(default_factory=lambda: [0.04, 0.02, 0.01])
    samples: int = 200
    seed: int = 0
    epsilon: float = 0.05
    x_grid: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])


def lattice_gap(r: float, x: float) -> float:
    """Distance from f(x) to the nearest value the rescaled step profile can take."""
    s = scale_factor(r)
    target = limit_shape_f(x)
    k = round(target / s)
    return min(abs(target - j * s) for j in (k - 1, k, k + 1))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--r", default="0.04,0.02,0.01")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.05)
    args = p.parse_args()
    cfg = ExperimentConfig([float(x) for x in args.r.split(",")], args.samples, args.seed, args.epsilon)

    rows = []
    for r in cfg.rs:
        rows += convergence_experiment(GibbsConfig(r, cfg.seed, samples=cfg.samples), cfg.x_grid, cfg.epsilon)
    print(rows_to_csv(rows), end="")
    print()
    print("r,x,lattice_step,nearest_lattice_gap")
    for r in cfg.rs:
        for x in cfg.x_grid:
            print(f"{r},{x},{scale_factor(r):.6g},{lattice_gap(r, x):.6g}")
    # standard deviation of f-tilde is of order sqrt(r); solve c*sqrt(r) = epsilon/2 from the finest run
    finest = [row for row in rows if row.r == min(cfg.rs)]
    spread = max(row.mean_abs_dev for row in finest)
    need = min(cfg.rs) * (cfg.epsilon / (1.65 * spread * math.sqrt(math.pi / 2))) ** 2
    print(f"\nrough r needed for 90% within {cfg.epsilon}: {need:.2g}")


if __name__ == "__main__":
    main()
