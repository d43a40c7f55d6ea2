"""Power comparison of T_n, V_n, D_n and omega^2_n on the standard alternatives.

Critical values are simulated once per (test, n) and reused for every
alternative. Within a replication the same alternative sample is fed to all
four tests, so cross-test differences are not blurred by sampling noise.

T_n is applied two-sided here (equal tails of ``level / 2``) because that is
the variant whose powers match the published comparison; V_n, D_n and
omega^2_n reject for large values.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import POWER_ALTERNATIVES, Pareto
from .montecarlo import (
    STREAM_ALTERNATIVE,
    SimulationConfig,
    _label,
    alternative_key,
    critical_region,
    rejects,
    simulate_statistics,
)

TESTS = ("tn", "vn", "ks", "cvm")
DEFAULT_SIDES = {"tn": "two-sided", "vn": "greater", "ks": "greater", "cvm": "greater"}

# published powers at level 0.05: {n: {alternative: (T_n, V_n, D_n, omega^2_n)}}
PAPER_POWER = {
    20: {
        "log-normal": (0.6263, 0.6713, 0.5585, 0.6432),
        "half-normal": (0.6254, 0.6718, 0.5327, 0.6489),
        "weibull": (0.9984, 0.9988, 0.9893, 0.9990),
        "gamma": (0.9937, 0.9940, 0.9642, 0.9919),
        "log-gamma": (0.4654, 0.5282, 0.4096, 0.4643),
    },
    50: {
        "log-normal": (0.9877, 0.9758, 0.9520, 0.9841),
        "half-normal": (0.9697, 0.9691, 0.9268, 0.9763),
        "weibull": (1.0, 1.0, 1.0, 1.0),
        "gamma": (1.0, 1.0, 1.0, 1.0),
        "log-gamma": (0.9158, 0.8955, 0.8241, 0.9015),
    },
}


@dataclass(frozen=True)
class PowerCell:
    test: str
    alternative: str
    n: int
    power: float
    se: float
    reps: int
    lower_critical_value: float | None
    critical_value: float


@dataclass
class PowerReport:
    cells: list
    level: float
    config: SimulationConfig
    sides: dict = field(default_factory=lambda: dict(DEFAULT_SIDES))

    def cell(self, test, alternative, n):
        for c in self.cells:
            if (c.test, c.alternative, c.n) == (test, alternative, n):
                return c
        raise KeyError((test, alternative, n))

    def power(self, test, alternative, n):
        return self.cell(test, alternative, n).power

    @property
    def ns(self):
        return sorted({c.n for c in self.cells})

    @property
    def alternatives(self):
        seen = []
        for c in self.cells:
            if c.alternative not in seen:
                seen.append(c.alternative)
        return seen

    @property
    def tests(self):
        return [t for t in TESTS if any(c.test == t for c in self.cells)]

    def ordering_violations(self, slack=0.0):
        """Cells where T_n or V_n has lower power than D_n (minus ``slack``)."""
        bad = []
        for n in self.ns:
            for alt in self.alternatives:
                d = self.power("ks", alt, n)
                for t in ("tn", "vn"):
                    p = self.power(t, alt, n)
                    if p < d - slack:
                        bad.append((t, alt, n, p, d))
        return bad

    def compare_paper(self):
        """``[(test, alternative, n, simulated, printed, delta, se)]``."""
        out = []
        for c in self.cells:
            ref = PAPER_POWER.get(c.n, {}).get(c.alternative)
            if ref is None:
                continue
            printed = ref[TESTS.index(c.test)]
            out.append((c.test, c.alternative, c.n, c.power, printed, c.power - printed, c.se))
        return out

    def to_tsv(self):
        lines = ["n\talternative\ttest\tpower\tse\treps\tlower_cv\tupper_cv"]
        for c in self.cells:
            lo = "" if c.lower_critical_value is None else f"{c.lower_critical_value:.6f}"
            lines.append(
                f"{c.n}\t{c.alternative}\t{_label(c.test)}\t{c.power:.4f}\t{c.se:.4f}"
                f"\t{c.reps}\t{lo}\t{c.critical_value:.6f}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self):
        """Table-3 layout: rows (n, alternative), columns the tests."""
        tests = self.tests
        head = f"{'n':>4}  {'alternative':<12}" + "".join(f"{_label(t):>9}" for t in tests)
        lines = [head]
        for n in self.ns:
            for alt in self.alternatives:
                lines.append(
                    f"{n:>4}  {alt:<12}"
                    + "".join(f"{self.power(t, alt, n):>9.4f}" for t in tests)
                )
        return "\n".join(lines) + "\n"

    def to_json(self, manifest=None):
        doc = {
            "level": self.level,
            "sides": self.sides,
            "cells": [
                {
                    "n": c.n,
                    "alternative": c.alternative,
                    "test": c.test,
                    "power": c.power,
                    "se": c.se,
                    "reps": c.reps,
                    "lower_critical_value": c.lower_critical_value,
                    "critical_value": c.critical_value,
                }
                for c in self.cells
            ],
        }
        if manifest is not None:
            doc["manifest"] = manifest
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def binomial_se(p, reps):
    return math.sqrt(p * (1.0 - p) / reps)


def _power_cells(tests, alt_name, alt, n, level, cfg, sides):
    cfg = cfg.with_n(n)
    regions = {t: critical_region(t, n, level, cfg, sides[t]) for t in tests}
    values = simulate_statistics(
        tests, alt.rvs, cfg, (STREAM_ALTERNATIVE, alternative_key(alt))
    )
    cells = []
    for t in tests:
        p = float(np.mean(rejects(values[t], regions[t])))
        lo, hi = regions[t]
        cells.append(
            PowerCell(
                test=t,
                alternative=alt_name,
                n=n,
                power=p,
                se=binomial_se(p, cfg.reps),
                reps=cfg.reps,
                lower_critical_value=None if math.isinf(lo) else lo,
                critical_value=hi,
            )
        )
    return cells


def estimate_power(test, alternative, n, level, cfg, side=None):
    """Rejection frequency of ``test`` on samples from ``alternative``."""
    side = side or DEFAULT_SIDES[test]
    return _power_cells((test,), alternative.tag, alternative, n, level, cfg, {test: side})[0].power


def full_table(cfg, ns=(20, 50), level=0.05, alternatives=None, tests=TESTS, sides=None):
    """All (alternative, test, n) cells; defaults reproduce the published grid.

    ``alternatives`` maps display names to alternative objects; pass
    ``{"pareto": Pareto()}`` for a size row.
    """
    alternatives = POWER_ALTERNATIVES if alternatives is None else alternatives
    sides = dict(DEFAULT_SIDES, **(sides or {}))
    cells = []
    for n in ns:
        for name, alt in alternatives.items():
            cells.extend(_power_cells(tuple(tests), name, alt, n, level, cfg, sides))
    return PowerReport(cells=cells, level=level, config=cfg, sides=sides)


def size_row(cfg, ns=(20, 50), level=0.05, tests=TESTS, sides=None):
    return full_table(cfg, ns, level, {"pareto": Pareto(cfg.alpha_for_simulation)}, tests, sides)
