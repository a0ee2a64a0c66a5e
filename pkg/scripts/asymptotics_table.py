"""Coefficients of 1/(2 sinh(pi i z)) and the numeric approach of the typical partition.

    python3 scripts/asymptotics_table.py --l-max 19 --r 0.04,0.02,0.01,0.005 --z 0.1j,0.2j
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from selfconj.limitshape import (
    asymptotic_coefficients,
    asymptotic_target,
    render_coefficient,
    tau_T_numeric,
    typical_partition,
)


@dataclass
class AsymptoticsConfig:
    l_max: int = 19
    rs: list[float] = field(default_factory=lambda: [0.04, 0.02, 0.01, 0.005])
    zs: list[complex] = field(default_factory=lambda: [0.1j])


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--l-max", type=int, default=19)
    p.add_argument("--r", default="0.04,0.02,0.01,0.005")
    p.add_argument("--z", default="0.1j")
    args = p.parse_args()
    cfg = AsymptoticsConfig(args.l_max, [float(x) for x in args.r.split(",")], [complex(x) for x in args.z.split(",")])

    for k, c in asymptotic_coefficients(cfg.l_max):
        print(f"z^{k:<3} {render_coefficient(k, c)}")
    print("\nr,z,|Lambda|*r^2*96,|tau*T - 1/(2 sinh)|")
    for z in cfg.zs:
        for r in cfg.rs:
            lam = typical_partition(r)
            dev = abs(tau_T_numeric(lam, r, z) - asymptotic_target(z))
            print(f"{r},{z},{lam.size * r * r * 96:.6f},{dev:.6g}")


if __name__ == "__main__":
    main()
