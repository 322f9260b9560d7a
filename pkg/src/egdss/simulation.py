"""Seeded Monte Carlo study of the rate MLEs and the interval for R.

Every replication draws from its own Philox stream keyed by
``(master_seed, n, m, replication)``, so a cell gives the same numbers no
matter how replications are split across workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import distribution as dist
from ._validation import ValidationError, check_level, check_rate
from .inference import ConvergenceError, _reliability_from_fits, fit_mle, moment_start
from .published import SIZES
from .reliability import r_closed_form

__all__ = [
    "SimulationSpec",
    "SimulationRow",
    "SimulationTable",
    "replication_rng",
    "run_replication",
    "run_cell",
    "run_table",
    "run_tables",
    "CSV_HEADER",
]

CSV_HEADER = "n,m,mean_l1,bias_l1,mse_l1,mean_l2,bias_l2,mse_l2,r_ci_low,r_ci_high,failures"
UNRELIABLE_FRACTION = 0.10


@dataclass(frozen=True)
class SimulationSpec:
    lam1: float
    lam2: float
    sizes: tuple = SIZES
    replications: int = 1000
    level: float = 0.95
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lam1", check_rate(self.lam1, "lam1"))
        object.__setattr__(self, "lam2", check_rate(self.lam2, "lam2"))
        object.__setattr__(self, "level", check_level(self.level))
        if int(self.replications) < 1:
            raise ValidationError(f"replications must be >= 1, got {self.replications}")
        object.__setattr__(self, "replications", int(self.replications))
        sizes = tuple((int(n), int(m)) for n, m in self.sizes)
        if not sizes:
            raise ValidationError("at least one (n, m) size is required")
        for n, m in sizes:
            if n < 2 or m < 2:
                raise ValidationError(f"sample sizes must be >= 2, got ({n}, {m})")
        object.__setattr__(self, "sizes", sizes)
        seed = int(self.master_seed)
        if not 0 <= seed < 2**64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {seed}")
        object.__setattr__(self, "master_seed", seed)

    @property
    def r_true(self) -> float:
        return r_closed_form(self.lam1, self.lam2)


@dataclass(frozen=True)
class SimulationRow:
    n: int
    m: int
    mean_l1: float
    bias_l1: float
    mse_l1: float
    mean_l2: float
    bias_l2: float
    mse_l2: float
    r_ci_low: float
    r_ci_high: float
    failures: int
    replications: int
    # Monte Carlo standard errors of the columns above
    se_mean_l1: float = math.nan
    se_mse_l1: float = math.nan
    se_mean_l2: float = math.nan
    se_mse_l2: float = math.nan
    mean_r: float = math.nan

    @property
    def unreliable(self) -> bool:
        return self.failures >= UNRELIABLE_FRACTION * self.replications

    def csv_fields(self) -> list:
        return [getattr(self, name) for name in CSV_HEADER.split(",")]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["unreliable"] = self.unreliable
        return out


@dataclass(frozen=True)
class SimulationTable:
    spec: SimulationSpec
    rows: tuple = field(default_factory=tuple)

    @property
    def r_true(self) -> float:
        return self.spec.r_true

    @property
    def unreliable(self) -> bool:
        return any(row.unreliable for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "lam1": self.spec.lam1,
            "lam2": self.spec.lam2,
            "r_true": self.r_true,
            "replications": self.spec.replications,
            "level": self.spec.level,
            "seed": self.spec.master_seed,
            "rows": [row.to_dict() for row in self.rows],
        }


def replication_rng(master_seed: int, n: int, m: int, rep: int) -> np.random.Generator:
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(n), int(m), int(rep)))
    return np.random.Generator(np.random.Philox(seq))


def _fit_with_retry(x: np.ndarray):
    try:
        return fit_mle(x)
    except ConvergenceError:
        try:
            return fit_mle(x, start=2.0 * moment_start(x))
        except ConvergenceError:
            return None


def run_replication(lam1, lam2, n, m, master_seed, rep, level=0.95):
    """One replication: ``(lam1_hat, lam2_hat, r_hat, ci_low, ci_high)`` or ``None`` on failure."""
    rng = replication_rng(master_seed, n, m, rep)
    x, _ = dist._draw(lam1, n, rng)
    y, _ = dist._draw(lam2, m, rng)
    f1 = _fit_with_retry(x)
    f2 = _fit_with_retry(y)
    if f1 is None or f2 is None:
        return None
    est = _reliability_from_fits(f1, f2, level)
    return (f1.lam_hat, f2.lam_hat, est.r_hat, est.ci_low, est.ci_high)


def _run_chunk(args):
    lam1, lam2, n, m, seed, reps, level = args
    return [run_replication(lam1, lam2, n, m, seed, r, level) for r in reps]


def _mean(values) -> float:
    return math.fsum(values) / len(values)


def _se(values) -> float:
    k = len(values)
    if k < 2:
        return math.nan
    mu = _mean(values)
    return math.sqrt(math.fsum((v - mu) ** 2 for v in values) / (k - 1) / k)


def _aggregate(spec: SimulationSpec, n: int, m: int, results) -> SimulationRow:
    ok = [r for r in results if r is not None]
    failures = len(results) - len(ok)
    if not ok:
        nan = math.nan
        return SimulationRow(n, m, nan, nan, nan, nan, nan, nan, nan, nan, failures, len(results))
    cols = list(zip(*ok))
    l1, l2, rh, lo, hi = (list(c) for c in cols)
    sq1 = [(v - spec.lam1) ** 2 for v in l1]
    sq2 = [(v - spec.lam2) ** 2 for v in l2]
    mean_l1, mean_l2 = _mean(l1), _mean(l2)
    return SimulationRow(
        n=n,
        m=m,
        mean_l1=mean_l1,
        bias_l1=_mean([v - spec.lam1 for v in l1]),
        mse_l1=_mean(sq1),
        mean_l2=mean_l2,
        bias_l2=_mean([v - spec.lam2 for v in l2]),
        mse_l2=_mean(sq2),
        r_ci_low=_mean(lo),
        r_ci_high=_mean(hi),
        failures=failures,
        replications=len(results),
        se_mean_l1=_se(l1),
        se_mse_l1=_se(sq1),
        se_mean_l2=_se(l2),
        se_mse_l2=_se(sq2),
        mean_r=_mean(rh),
    )


def run_cell(spec: SimulationSpec, n: int, m: int, threads: int = 1) -> SimulationRow:
    """Run ``spec.replications`` replications at sample sizes ``(n, m)``.

    Failed fits (after one retry from a shifted start) are counted in
    ``failures`` and left out of every average.  ``threads > 1`` spreads
    replications over worker processes without changing any output bit.
    """
    reps = list(range(spec.replications))
    threads = max(1, int(threads))
    base = (spec.lam1, spec.lam2, int(n), int(m), spec.master_seed)
    if threads == 1:
        results = _run_chunk((*base, reps, spec.level))
    else:
        chunks = [reps[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_run_chunk, [(*base, c, spec.level) for c in chunks]))
        results = [None] * len(reps)
        for c, part in zip(chunks, parts):
            for r, res in zip(c, part):
                results[r] = res
    return _aggregate(spec, int(n), int(m), results)


def run_table(spec: SimulationSpec, threads: int = 1) -> SimulationTable:
    return SimulationTable(spec, tuple(run_cell(spec, n, m, threads) for n, m in spec.sizes))


PARAMETER_PAIRS = ((0.5, 1.5), (1.0, 1.5), (1.0, 0.5))


def run_tables(seed: int, replications: int = 1000, threads: int = 1) -> list[SimulationTable]:
    """The three-table study: each parameter pair over every size in ``SIZES``."""
    return [
        run_table(SimulationSpec(l1, l2, SIZES, replications, 0.95, seed), threads)
        for l1, l2 in PARAMETER_PAIRS
    ]
