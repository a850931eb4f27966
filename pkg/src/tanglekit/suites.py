"""Self-check suites and the cross-responsible-set survey used by the CLI."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

from .construct import one_crossing_layout
from .detect import (
    associated_graph,
    count_cross_responsible,
    cross_responsible_sets,
    is_planar_graph,
    is_safe_pair,
    validate_unique,
)
from .gen import enumerate_up_to, random_tanglegram, seed_stream
from .layout import crossing_pairs, exact_crt


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures

    def fail(self, msg: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(msg)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures}


def _random_batch(samples: int, seed: int, lo: int, hi: int):
    seeds = seed_stream(seed)
    for i in range(samples):
        yield random_tanglegram(lo + i % (hi - lo + 1), next(seeds))


def kuratowski_suite(max_size: int, samples: int, seed: int) -> SuiteResult:
    """crt >= 1 exactly when a cross-responsible set exists."""
    res = SuiteResult("kuratowski-equivalence")
    pool = itertools.chain(enumerate_up_to(max_size), _random_batch(samples, seed, 6, 10))
    for tg in pool:
        res.checked += 1
        crt = exact_crt(tg).value
        has = count_cross_responsible(tg, stop_after=1) > 0
        if (crt >= 1) != has:
            res.fail(f"crt={crt} but cross-responsible sets present={has}: {tg!r}")
    return res


def main_theorem_suite(target: int, seed: int, max_draws: int = 200_000) -> SuiteResult:
    """Unique cross-responsible set implies a certified one-crossing layout."""
    res = SuiteResult("main-theorem")
    seeds = seed_stream(seed)
    for i in range(max_draws):
        if res.checked >= target:
            break
        tg = random_tanglegram(8 + i % 5, next(seeds))
        if count_cross_responsible(tg, stop_after=2) != 1:
            continue
        sets = cross_responsible_sets(tg)
        res.checked += 1
        bad = validate_unique(tg, sets[0])
        if bad:
            res.fail(f"{bad[0].check}: {tg!r}")
            continue
        try:
            cert = one_crossing_layout(tg)
        except Exception as exc:  # noqa: BLE001 - reported as a suite failure
            res.fail(f"{type(exc).__name__}: {exc}: {tg!r}")
            continue
        if len(crossing_pairs(tg, cert.layout)) != 1 or exact_crt(tg).value != 1:
            res.fail(f"not a one-crossing instance: {tg!r}")
    if res.checked < target:
        res.fail(f"found only {res.checked} instances with a unique cross-responsible set")
    return res


def safe_pair_suite(max_size: int) -> SuiteResult:
    """Safe pairs never cross in the solver's optimal witnesses."""
    res = SuiteResult("safe-pairs")
    for tg in enumerate_up_to(max_size):
        res.checked += 1
        r = exact_crt(tg)
        for e, f in crossing_pairs(tg, r.witness):
            if is_safe_pair(tg, e, f):
                res.fail(f"safe pair {e},{f} crosses in an optimal witness of {tg!r}")
    return res


def associated_graph_suite(max_size: int, samples: int, seed: int) -> SuiteResult:
    """The associated graph is planar exactly when there is no cross-responsible set."""
    res = SuiteResult("associated-graph")
    pool = itertools.chain(enumerate_up_to(max_size), _random_batch(samples, seed + 1, 6, 10))
    for tg in pool:
        res.checked += 1
        planar = is_planar_graph(associated_graph(tg))
        has = count_cross_responsible(tg, stop_after=1) > 0
        if planar == has:
            res.fail(f"associated graph planar={planar} but sets present={has}: {tg!r}")
    return res


def run_verify(max_size: int, samples: int, seed: int) -> list[SuiteResult]:
    return [
        kuratowski_suite(max_size, samples, seed),
        main_theorem_suite(max(1, samples // 4), seed),
        safe_pair_suite(max_size),
        associated_graph_suite(max_size, samples, seed),
    ]


def survey(size: int, samples: int, seed: int, budget: int | None = None) -> dict:
    """Bin random tanglegrams by their number of cross-responsible sets and
    record the largest crossing number seen in each bin."""
    bins: dict[int, dict] = defaultdict(lambda: {"count": 0, "max_crt": 0, "unproven": 0})
    seeds = seed_stream(seed)
    for _ in range(samples):
        tg = random_tanglegram(size, next(seeds))
        k = count_cross_responsible(tg)
        r = exact_crt(tg, budget)
        b = bins[k]
        b["count"] += 1
        b["max_crt"] = max(b["max_crt"], r.value)
        if not r.optimal:
            b["unproven"] += 1
    return {"size": size, "samples": samples, "seed": seed, "bins": {k: bins[k] for k in sorted(bins)}}
