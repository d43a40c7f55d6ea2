"""Simulated null distributions, critical values, and Monte-Carlo p-values.

Reproducibility contract
------------------------
Replications are cut into fixed-size chunks. Chunk ``c`` of a null simulation
for sample size ``n`` draws from::

    numpy.random.default_rng(SeedSequence(seed, spawn_key=(0, n, c)))

and alternatives use ``spawn_key=(1, crc32(tag), n, c)``. The statistic does not
enter the key, so every statistic sees the same null samples (common random
numbers). Chunks may run on any number of threads; results are concatenated in
chunk order, so output never depends on ``workers``.
"""

import json
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .baseline import cvm_batch, cvm_statistic_estimated, ks_batch, ks_statistic_estimated
from .distributions import ParetoParams, as_sample, pareto_rvs
from .statistics import statistic_t_rank, statistic_v

STREAM_NULL = 0
STREAM_ALTERNATIVE = 1

STATISTICS = {
    "tn": ("T_n", _kernels.t_batch, statistic_t_rank),
    "vn": ("V_n", _kernels.v_batch, statistic_v),
    "ks": ("D_n", ks_batch, ks_statistic_estimated),
    "cvm": ("CvM", cvm_batch, cvm_statistic_estimated),
}

# one-sided (upper) critical values, levels 0.1 / 0.05 / 0.01
PAPER_LEVELS = (0.1, 0.05, 0.01)
PAPER_CRITICAL_VALUES = {
    "tn": {
        10: (0.09, 0.13, 0.22),
        20: (0.06, 0.09, 0.15),
        30: (0.05, 0.07, 0.11),
        40: (0.04, 0.06, 0.09),
        50: (0.04, 0.06, 0.09),
        100: (0.03, 0.04, 0.05),
    },
    "vn": {
        10: (0.36, 0.41, 0.56),
        20: (0.24, 0.28, 0.36),
        30: (0.19, 0.22, 0.28),
        40: (0.16, 0.19, 0.24),
        50: (0.15, 0.16, 0.21),
        100: (0.11, 0.12, 0.15),
    },
}

ALTERNATIVE_SIDES = ("greater", "two-sided")


@dataclass(frozen=True)
class SimulationConfig:
    """Monte-Carlo settings. ``workers`` only affects speed, never results."""

    reps: int = 10_000
    seed: int = 20_160_101
    n: int | None = None
    alpha_for_simulation: float = 1.0
    chunk_size: int = 1_000
    workers: int = field(default=1, compare=False)

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("reps must be positive")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        ParetoParams(self.alpha_for_simulation)

    def with_n(self, n):
        return self if n is None or n == self.n else _replace(self, n=n)

    def chunks(self):
        """``(chunk_index, size)`` pairs covering ``reps``."""
        full, rest = divmod(self.reps, self.chunk_size)
        out = [(c, self.chunk_size) for c in range(full)]
        if rest:
            out.append((full, rest))
        return out


def _replace(cfg, **kw):
    d = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    d.update(kw)
    return SimulationConfig(**d)


def stream_rng(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def alternative_key(alt):
    return zlib.crc32(repr(alt).encode())


def _label(statistic):
    try:
        return STATISTICS[statistic][0]
    except KeyError:
        raise ValueError(f"unknown statistic {statistic!r}; choose from {sorted(STATISTICS)}")


def _batch(statistic):
    _label(statistic)
    return STATISTICS[statistic][1]


def _map_chunks(fn, cfg):
    chunks = cfg.chunks()
    if cfg.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(fn, chunks))
    return [fn(c) for c in chunks]


def simulate_statistics(statistics, draw, cfg, key):
    """Evaluate several statistics on the same simulated samples.

    ``draw(size, rng)`` returns raw observations; rows are sorted here.
    Returns ``{statistic: values}`` in replication order.
    """
    n = cfg.n
    if n is None or n < 2:
        raise ValueError("a sample size n >= 2 is required")
    batches = [_batch(s) for s in statistics]

    def run(chunk):
        c, size = chunk
        rng = stream_rng(cfg.seed, *key, n, c)
        x = np.sort(draw((size, n), rng), axis=1)
        return [b(x) for b in batches]

    parts = _map_chunks(run, cfg)
    return {s: np.concatenate([p[i] for p in parts]) for i, s in enumerate(statistics)}


@lru_cache(maxsize=256)
def _null_cached(statistic, cfg):
    alpha = cfg.alpha_for_simulation
    vals = simulate_statistics(
        (statistic,), lambda size, rng: pareto_rvs(alpha, size, rng), cfg, (STREAM_NULL,)
    )[statistic]
    vals = np.sort(vals)
    vals.setflags(write=False)
    return vals


def simulate_null(statistic, cfg, n=None):
    """Sorted null values of ``statistic`` from Pareto(alpha_for_simulation) samples."""
    _label(statistic)
    return _null_cached(statistic, cfg.with_n(n))


def _upper_index(level, reps):
    # order statistic ceil((1 - level) * reps), 1-based; the epsilon absorbs
    # representation error such as (1 - 0.05) * 10000 = 9500.000000000002
    return min(max(math.ceil((1.0 - level) * reps - 1e-9), 1), reps)


def _lower_index(level, reps):
    return min(max(math.floor(level * reps + 1e-9) + 1, 1), reps)


def critical_value(statistic, n, level, cfg):
    """Upper critical value: order statistic ``ceil((1 - level) * reps)``."""
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    null = simulate_null(statistic, cfg, n)
    return float(null[_upper_index(level, null.size) - 1])


def critical_region(statistic, n, level, cfg, alternative="greater"):
    """``(lower, upper)`` rejection bounds; reject iff ``T < lower`` or ``T > upper``.

    For ``'two-sided'`` each tail gets ``level / 2``; the lower bound is the
    order statistic ``floor(level/2 * reps) + 1``.
    """
    if alternative == "greater":
        return -math.inf, critical_value(statistic, n, level, cfg)
    if alternative != "two-sided":
        raise ValueError(f"alternative must be one of {ALTERNATIVE_SIDES}")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    null = simulate_null(statistic, cfg, n)
    lo = float(null[_lower_index(level / 2, null.size) - 1])
    hi = float(null[_upper_index(level / 2, null.size) - 1])
    return lo, hi


def rejects(values, region):
    lo, hi = region
    values = np.asarray(values)
    return (values > hi) | (values < lo)


def p_value(statistic, observed, n, cfg, alternative="greater"):
    """``(1 + #{sim >= obs}) / (reps + 1)``; two-sided doubles the smaller tail."""
    null = simulate_null(statistic, cfg, n)
    reps = null.size
    upper = (1 + reps - np.searchsorted(null, observed, side="left")) / (reps + 1)
    if alternative == "greater":
        return float(upper)
    if alternative != "two-sided":
        raise ValueError(f"alternative must be one of {ALTERNATIVE_SIDES}")
    lower = (1 + np.searchsorted(null, observed, side="right")) / (reps + 1)
    return float(min(1.0, 2.0 * min(upper, lower)))


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # not a pytest class

    statistic: str
    label: str
    value: float
    n: int
    level: float
    alternative: str
    critical_value: float
    lower_critical_value: float | None
    p_value: float
    reject: bool
    reps: int
    seed: int
    alpha_for_simulation: float
    has_ties: bool

    def to_dict(self):
        return asdict(self)


def run_test(s, statistic, level, cfg, alternative="greater"):
    """Compute the statistic and decide: reject iff it falls strictly outside the bounds."""
    s = as_sample(s)
    if s.n < 2:
        raise ValueError("at least two observations are needed")
    label = _label(statistic)
    value = float(STATISTICS[statistic][2](s).value)
    lo, hi = critical_region(statistic, s.n, level, cfg, alternative)
    return TestOutcome(
        statistic=statistic,
        label=label,
        value=value,
        n=s.n,
        level=level,
        alternative=alternative,
        critical_value=hi,
        lower_critical_value=None if alternative == "greater" else lo,
        p_value=p_value(statistic, value, s.n, cfg, alternative),
        reject=bool(rejects(value, (lo, hi))),
        reps=cfg.reps,
        seed=cfg.seed,
        alpha_for_simulation=cfg.alpha_for_simulation,
        has_ties=s.has_ties,
    )


# --------------------------------------------------------------------------
# Tables
# --------------------------------------------------------------------------


@dataclass
class CriticalValueTable:
    statistic: str
    ns: tuple
    levels: tuple
    values: dict  # (n, level) -> critical value
    config: SimulationConfig

    def rows(self):
        for n in self.ns:
            for level in self.levels:
                yield n, level, self.values[(n, level)]

    def to_tsv(self):
        lines = ["n\tlevel\tcritical_value\treps\tseed"]
        for n, level, v in self.rows():
            lines.append(f"{n}\t{level:g}\t{v:.6f}\t{self.config.reps}\t{self.config.seed}")
        return "\n".join(lines) + "\n"

    def to_records(self):
        return [
            {
                "n": n,
                "level": level,
                "critical_value": v,
                "reps": self.config.reps,
                "seed": self.config.seed,
            }
            for n, level, v in self.rows()
        ]

    def to_json(self, manifest=None):
        doc = {"statistic": self.statistic, "rows": self.to_records()}
        if manifest is not None:
            doc["manifest"] = manifest
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_text(self):
        """Wide layout: one row per n, one column per level."""
        head = "n".rjust(5) + "".join(f"{lv:>9g}" for lv in self.levels)
        lines = [f"{_label(self.statistic)} upper critical values ({self.config.reps} reps)", head]
        for n in self.ns:
            lines.append(
                f"{n:>5d}" + "".join(f"{self.values[(n, lv)]:>9.4f}" for lv in self.levels)
            )
        return "\n".join(lines) + "\n"

    def compare_paper(self):
        """``[(n, level, simulated, printed, delta)]`` for cells in the printed tables."""
        printed = PAPER_CRITICAL_VALUES.get(self.statistic, {})
        out = []
        for n, level, v in self.rows():
            if n in printed and level in PAPER_LEVELS:
                ref = printed[n][PAPER_LEVELS.index(level)]
                out.append((n, level, v, ref, v - ref))
        return out

    def diagnostics(self):
        """Soft monotonicity checks; returns human-readable notes, never raises."""
        notes = []
        for n in self.ns:
            col = [self.values[(n, lv)] for lv in sorted(self.levels, reverse=True)]
            if any(b < a for a, b in zip(col, col[1:])):
                notes.append(f"n={n}: critical values not nondecreasing as level decreases")
        for lv in self.levels:
            row = [self.values[(n, lv)] for n in sorted(self.ns)]
            if any(b > a for a, b in zip(row, row[1:])):
                notes.append(f"level={lv:g}: critical values not nonincreasing in n")
        return notes


def critical_value_table(statistic, ns, levels, cfg):
    values = {(n, lv): critical_value(statistic, n, lv, cfg) for n in ns for lv in levels}
    return CriticalValueTable(statistic, tuple(ns), tuple(levels), values, cfg)
