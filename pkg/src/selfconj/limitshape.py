"""Sampling and asymptotics for random self-conjugate partitions, q = exp(-2 pi r).

Under the measure, the indicators ``alpha_k`` (is ``k`` a Frobenius arm) are
independent with ``P(alpha_k = 1) = q^(2k+1) / (1 + q^(2k+1))``, so exact
sampling is a finite product of Bernoulli draws once the tail is negligible.
This is the only floating-point module.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .partitions import Partition, profile, self_conjugate_from_arms
from .report import Report
from .series import inverse_sinh_coefficients

SQRT6 = math.sqrt(6.0)
X0 = SQRT6 * math.log(2.0) / math.pi  # zero of the rotated arm profile


@dataclass(frozen=True)
class GibbsConfig:
    r: float
    seed: int = 0
    cutoff_eps: float = 1e-12
    samples: int = 100

    def __post_init__(self) -> None:
        if not self.r > 0:
            raise ValueError("r must be positive")
        if self.samples < 0:
            raise ValueError("samples must be non-negative")
        if not self.cutoff_eps > 0:
            raise ValueError("cutoff_eps must be positive")

    @property
    def q(self) -> float:
        return math.exp(-2 * math.pi * self.r)

    @property
    def cutoff(self) -> int:
        """Least K with sum_{k>K} q^(2k+1) < cutoff_eps."""
        q = self.q
        # sum_{k>K} q^(2k+1) = q^(2K+3) / (1 - q^2)
        log_q = -2 * math.pi * self.r
        bound = math.log(self.cutoff_eps) + math.log1p(-q * q)
        K = max(0, math.ceil((bound / log_q - 3) / 2))
        while K > 0 and (2 * (K - 1) + 3) * log_q - math.log1p(-q * q) < math.log(self.cutoff_eps):
            K -= 1
        while (2 * K + 3) * log_q - math.log1p(-q * q) >= math.log(self.cutoff_eps):
            K += 1
        return K


def arm_probabilities(cfg: GibbsConfig) -> np.ndarray:
    k = np.arange(cfg.cutoff + 1)
    x = cfg.q ** (2 * k + 1)
    return x / (1 + x)


def _rng(cfg: GibbsConfig, index: int) -> np.random.Generator:
    # one substream per sample index, independent of how many are drawn
    return np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(index,)))


def sample_partition(cfg: GibbsConfig, index: int = 0) -> Partition:
    """Sample number ``index`` of the stream fixed by ``cfg.seed``."""
    probs = arm_probabilities(cfg)
    hits = _rng(cfg, index).random(probs.shape[0]) < probs
    arms = tuple(int(k) for k in np.nonzero(hits)[0][::-1])
    return self_conjugate_from_arms(arms)


def sample_partitions(cfg: GibbsConfig) -> Iterator[Partition]:
    for i in range(cfg.samples):
        yield sample_partition(cfg, i)


def _tail_sum(term, r: float, tol: float = 1e-16) -> float:
    q = math.exp(-2 * math.pi * r)
    total = []
    k = 0
    while True:
        x = q ** (2 * k + 1)
        t = term(k, x)
        total.append(t)
        if x < tol * 1e-3 and k > 0:
            break
        k += 1
    return math.fsum(total)


def expected_size(r: float) -> float:
    return _tail_sum(lambda k, x: (2 * k + 1) * x / (1 + x), r)


def expected_frobenius_length(r: float) -> float:
    return _tail_sum(lambda k, x: x / (1 + x), r)


def frobenius_length_variance(r: float) -> float:
    return _tail_sum(lambda k, x: x / (1 + x) ** 2, r)


def richardson(values: Sequence[float], rs: Sequence[float]) -> float:
    """Extrapolate to r = 0 assuming values = c0 + c1 r + c2 r^2 + ..."""
    n = len(values)
    A = np.vander(np.asarray(rs, dtype=float), n, increasing=True)
    return float(np.linalg.solve(A, np.asarray(values, dtype=float))[0])


# ---------------------------------------------------------------------------
# limit shape


def limit_shape_f(x: float) -> float:
    if x <= 0:
        raise ValueError("f is defined for x > 0")
    return SQRT6 / math.pi * math.log1p(-math.exp(-math.pi * x / SQRT6))


def limit_g(x: float) -> float:
    return -SQRT6 / math.pi * math.log1p(math.exp(-math.pi * x / SQRT6))


def limit_gbar(X: float) -> float:
    """Arm profile after rotating the picture by 90 degrees."""
    return -SQRT6 / math.pi * math.log(math.expm1(math.pi * X / SQRT6))


def limit_fbar(X: float) -> float:
    return X + limit_gbar(X)


def scale_factor(r: float) -> float:
    return 4 * SQRT6 * r


@dataclass(frozen=True)
class ShapeSample:
    partition: Partition
    r: float

    @cached_property
    def _profile(self):
        return profile(self.partition)

    def f_tilde(self, x: float) -> float:
        s = scale_factor(self.r)
        return s * self._profile.f(x / s)

    def g_tilde(self, x: float) -> float:
        s = scale_factor(self.r)
        return s * self._profile.g(x / s)


@dataclass(frozen=True)
class ConvergenceRow:
    r: float
    x: float
    epsilon: float
    fraction_within: float
    mean_abs_dev: float
    n_samples: int
    seed: int


CSV_COLUMNS = ("r", "x", "epsilon", "fraction_within", "mean_abs_dev", "n_samples", "seed")


def convergence_experiment(cfg: GibbsConfig, x_grid: Sequence[float], epsilon: float = 0.05) -> list[ConvergenceRow]:
    """Empirical concentration of the rescaled profile around the limit shape."""
    if any(x <= 0 for x in x_grid):
        raise ValueError("grid points must be positive")
    if not x_grid:
        return []
    s = scale_factor(cfg.r)
    devs = np.empty((cfg.samples, len(x_grid)))
    for i, lam in enumerate(sample_partitions(cfg)):
        prof = profile(lam)
        for j, x in enumerate(x_grid):
            devs[i, j] = abs(s * prof.f(x / s) - limit_shape_f(x))
    rows = []
    for j, x in enumerate(x_grid):
        col = devs[:, j]
        rows.append(
            ConvergenceRow(
                r=cfg.r,
                x=float(x),
                epsilon=epsilon,
                fraction_within=float(np.mean(col < epsilon)) if cfg.samples else float("nan"),
                mean_abs_dev=math.fsum(col) / cfg.samples if cfg.samples else float("nan"),
                n_samples=cfg.samples,
                seed=cfg.seed,
            )
        )
    return rows


def rows_to_csv(rows: Sequence[ConvergenceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([_fmt(getattr(row, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def _fmt(v) -> str:
    return f"{v:.12g}" if isinstance(v, float) else str(v)


# ---------------------------------------------------------------------------
# the typical partition and the 1/(2 sinh) asymptotics


def typical_partition(r: float) -> Partition:
    """Row lengths floor(-log(1 - exp(-4 pi r i)) / (4 pi r)), i = 1, 2, ...

    The floor is taken of the (positive) rescaled limit shape, so rows stop at
    the first zero and the partition is finite.
    """
    parts = []
    i = 1
    while True:
        val = math.floor(-math.log1p(-math.exp(-4 * math.pi * r * i)) / (4 * math.pi * r))
        if val <= 0:
            break
        parts.append(val)
        i += 1
    return Partition(tuple(parts))


def asymptotic_coefficients(L: int) -> list[tuple[int, Fraction]]:
    """``(k, c_k)`` with 1/(2 sinh(pi i z)) = sum_k c_k * i * pi^k * z^k, k = -1..L.

    Comes from 1/(2 sinh(X/2)) = X^-1 sum h_j X^j with X = 2 pi i z; only odd
    k occur and each (2 i)^k contributes a single power of i.
    """
    h = inverse_sinh_coefficients(L + 1)
    out = []
    for j, hj in enumerate(h):
        k = j - 1
        if k > L or k % 2 == 0 or not hj:
            continue
        # (2 pi i)^k = 2^k pi^k i^k, and i^k = i * (-1)^((k-1)/2) for odd k
        sign = -1 if ((k - 1) // 2) % 2 else 1
        out.append((k, hj * Fraction(2) ** k * sign))
    return out


def render_coefficient(k: int, c: Fraction) -> str:
    sign = "-" if c < 0 else ""
    c = abs(c)
    num = "" if c.numerator == 1 else f"{c.numerator}"
    pi = "pi" if k in (1, -1) else f"pi^{abs(k)}"
    z = "z" if abs(k) == 1 else f"z^{k}"
    if k < 0:
        return f"{sign}{num or 1}*i/({c.denominator}*pi*z)"
    front = f"{num}*" if num else ""
    return f"{sign}{front}i*{pi}/{c.denominator}*{z}"


def tau_T_numeric(lam: Partition, r: float, z: complex) -> complex:
    """tau * T(Lambda) at z -> tau z, with tau = 2 i r and q = exp(-2 pi r).

    2 i r sum_i exp(-4 pi z r (Lambda_i - i + 1/2)); the tail past the last
    part is summed in closed form (geometric series, continued analytically).
    """
    w = np.exp(4 * np.pi * z * r)
    parts = np.asarray(lam.parts, dtype=float)
    idx = np.arange(1, len(parts) + 1, dtype=float)
    head = np.sum(np.exp(-4 * np.pi * z * r * (parts - idx + 0.5)))
    ell = len(parts)
    tail = w ** (ell + 0.5) / (1 - w)
    return complex(2j * r * (head + tail))


def asymptotic_target(z: complex) -> complex:
    return complex(1 / (2 * np.sinh(np.pi * 1j * z)))


def verify_asymptotics(r_list: Sequence[float], z_list: Sequence[complex], L: int, tol: float = 1e-2) -> Report:
    """Exact coefficient list plus numeric approach of tau*T(Lambda) to 1/(2 sinh(pi i z))."""
    coeffs = asymptotic_coefficients(L)
    rows = []
    for z in z_list:
        devs = []
        for r in sorted(r_list, reverse=True):
            val = tau_T_numeric(typical_partition(r), r, z)
            dev = abs(val - asymptotic_target(z))
            devs.append((r, dev))
            rows.append({"r": r, "z": str(z), "deviation": dev})
        decreasing = all(b[1] < a[1] for a, b in zip(devs, devs[1:]))
        smallest = devs[-1][1]
        if not decreasing or smallest >= tol:
            return Report(
                "asymptotics of tau*T(Lambda)",
                L,
                False,
                {"z": str(z), "deviations": [[r, d] for r, d in devs], "tolerance": tol, "decreasing": decreasing},
                {"coefficients": [render_coefficient(k, c) for k, c in coeffs], "numeric": rows},
            )
    return Report(
        "asymptotics of tau*T(Lambda)",
        L,
        True,
        details={"coefficients": [render_coefficient(k, c) for k, c in coeffs], "numeric": rows, "tolerance": tol},
    )
