"""Tabulate q-brackets of even Q-functions and their quasimodular decompositions.

    python3 scripts/bracket_table.py --max-weight 8 --q-order 40
"""

from __future__ import annotations

import argparse
import itertools
from dataclasses import dataclass

from selfconj.quasimod import bracket_bruteforce, decompose_quasimodular, monomial_label


@dataclass
class TableConfig:
    max_weight: int = 8
    q_order: int = 40


def even_tuples(max_weight: int) -> list[tuple[int, ...]]:
    out = set()
    for w in range(1, max_weight // 2 + 1):
        for k in range(1, w + 1):
            for c in itertools.product(range(1, w + 1), repeat=k):
                if sum(c) == w:
                    out.add(tuple(sorted((2 * x for x in c), reverse=True)))
    return sorted(out, key=lambda t: (sum(t), t))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-weight", type=int, default=8)
    p.add_argument("--q-order", type=int, default=40)
    args = p.parse_args()
    cfg = TableConfig(args.max_weight, args.q_order)
    for ells in even_tuples(cfg.max_weight):
        s = bracket_bruteforce(ells, cfg.q_order).series
        dec = decompose_quasimodular(s, sum(ells), cfg.q_order)
        name = "<" + " ".join(f"Q{x}" for x in ells) + ">"
        head = ", ".join(str(c) for c in s.q_coefficients()[:6])
        if dec.success:
            combo = " + ".join(f"({c})*{monomial_label(m)}" for c, m in zip(dec.coeffs, dec.basis) if c)
        else:
            combo = "no decomposition"
        print(f"{name:16} weight {sum(ells)}: {head}, ...")
        print(f"{'':16} = {combo}")


if __name__ == "__main__":
    main()
