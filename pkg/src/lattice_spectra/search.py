"""Simulated annealing over connected regions of fixed size.

The objective is the slack of one inequality at one k; low slack means the
region is close to making the inequality an equality.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .eigensolver import full_spectrum
from .errors import DomainError, KRangeError, StuckError
from .inequalities import (
    TOL_INEQ,
    InequalityRecord,
    check_first_eig_bound,
    check_first_gap,
    check_hp,
    check_hp_alt,
    check_ppw,
    check_ppw_alt,
    check_ratio_bound,
    check_recursion,
    check_variance,
    check_yang1,
    check_yang2,
    check_yang2_alt,
    full_report,
)
from .operator import assemble
from .region import (
    Point,
    Region,
    cut_vertices,
    ball_region,
    box_region,
    is_connected,
    lattice_neighbors,
    new_region,
    path_region,
)
from .rng import SplitMix64

log = logging.getLogger(__name__)

# stands in for +inf slack; orders after every finite value
SENTINEL = 1e300

CHECKERS: dict[str, Callable] = {
    "ppw": check_ppw,
    "hp": check_hp,
    "yang1": check_yang1,
    "yang2": check_yang2,
    "ratio_bound": check_ratio_bound,
    "variance": check_variance,
    "yang2_alt_root": lambda s, k: check_yang2_alt(s, k)[0],
    "yang2_alt_A": lambda s, k: check_yang2_alt(s, k)[1],
    "hp_alt": check_hp_alt,
    "ppw_alt": check_ppw_alt,
    "recursion": check_recursion,
    "first_gap": lambda s, k: check_first_gap(s, True)[0],
    "first_gap_ratio9": lambda s, k: check_first_gap(s, True)[1],
    "first_eig_bound": lambda s, k: check_first_eig_bound(s, True),
}


def record_for(region: Region, inequality_id: str, k: int) -> InequalityRecord:
    if inequality_id not in CHECKERS:
        raise DomainError(f"unknown inequality {inequality_id!r}; choose from {sorted(CHECKERS)}")
    if not 1 <= k <= region.N - 1:
        raise KRangeError(f"k={k} not admissible for a region of size {region.N}")
    spec = full_spectrum(assemble(region))
    return CHECKERS[inequality_id](spec, k)


def slack_objective(region: Region, inequality_id: str, k: int) -> float:
    """Slack of the chosen record; SENTINEL when infinite or vacuous."""
    rec = record_for(region, inequality_id, k)
    if not rec.precondition_met or not math.isfinite(rec.slack):
        return SENTINEL
    if rec.slack < -TOL_INEQ:
        log.critical("negative slack %.3e for %s at k=%d on %s", rec.slack, inequality_id, k, region.points)
    return rec.slack


def propose_move(region: Region, rng: SplitMix64, retries: int = 64) -> Region:
    """Add one boundary vertex, then drop an original vertex that is not a cut vertex."""
    if region.N < 2:
        raise DomainError("moves need a region of at least two vertices")
    members = set(region.points)
    frontier = sorted({q for p in region.points for q in lattice_neighbors(p) if q not in members})
    for _ in range(retries):
        added = frontier[rng.below(len(frontier))]
        grown = members | {added}
        cuts = cut_vertices(grown)
        removable = [p for p in region.points if p not in cuts]
        if not removable:
            continue
        victim = removable[rng.below(len(removable))]
        return new_region(region.n, grown - {victim})
    raise StuckError(f"no connected move found in {retries} attempts")


@dataclass
class SearchConfig:
    n: int
    region_size: int
    inequality_id: str
    k: int
    steps: int
    seed: int
    initial_temperature: float | None = None
    decay: float = 0.995

    def validate(self) -> None:
        if self.steps < 1:
            raise DomainError("steps must be >= 1")
        if not 0 < self.decay < 1:
            raise DomainError("decay must lie in (0, 1)")
        if self.region_size < 2:
            raise DomainError("region_size must be >= 2")
        if not 1 <= self.k <= self.region_size - 1:
            raise KRangeError(f"k={self.k} not admissible for size {self.region_size}")
        if self.inequality_id not in CHECKERS:
            raise DomainError(f"unknown inequality {self.inequality_id!r}")


@dataclass
class SearchTrace:
    objectives: list[float] = field(default_factory=list)
    accepted: list[bool] = field(default_factory=list)
    best_so_far: list[float] = field(default_factory=list)
    best_region: Region | None = None
    best_slack: float = SENTINEL

    def __len__(self) -> int:
        return len(self.objectives)


def anneal(config: SearchConfig) -> SearchTrace:
    """Metropolis search from a straight path; row 0 of the trace is the start state."""
    config.validate()
    rng = SplitMix64(config.seed)
    current = path_region(config.n, config.region_size)
    cur_obj = slack_objective(current, config.inequality_id, config.k)
    temp = config.initial_temperature
    if temp is None:
        temp = abs(cur_obj) if 0 < abs(cur_obj) < SENTINEL else 1.0
    trace = SearchTrace(best_region=current, best_slack=cur_obj)
    trace.objectives.append(cur_obj)
    trace.accepted.append(True)
    trace.best_so_far.append(cur_obj)
    for _ in range(config.steps - 1):
        try:
            cand = propose_move(current, rng)
        except StuckError:
            cand = None
        if cand is None:
            obj, ok = cur_obj, False
        else:
            obj = slack_objective(cand, config.inequality_id, config.k)
            delta = obj - cur_obj
            ok = delta <= 0 or (temp > 0 and rng.uniform() < math.exp(-delta / temp))
        if ok:
            current, cur_obj = cand, obj
            if obj < trace.best_slack:
                trace.best_slack, trace.best_region = obj, cand
        trace.objectives.append(obj)
        trace.accepted.append(ok)
        trace.best_so_far.append(trace.best_slack)
        temp *= config.decay
    return trace


# -- exhaustive oracle for tiny planar regions -------------------------------


def _normalize(cells: Iterable[Point]) -> tuple[Point, ...]:
    cells = list(cells)
    mx = min(c[0] for c in cells)
    my = min(c[1] for c in cells)
    return tuple(sorted((x - mx, y - my) for x, y in cells))


def enumerate_planar_regions(size: int) -> list[Region]:
    """Every connected size-`size` subset of Z^2 up to translation (fixed polyominoes)."""
    if not 1 <= size <= 8:
        raise DomainError("exhaustive enumeration is limited to sizes 1..8 in Z^2")
    level = {((0, 0),)}
    for _ in range(size - 1):
        nxt = set()
        for shape in level:
            cells = set(shape)
            for p in shape:
                for q in lattice_neighbors(p):
                    if q not in cells:
                        nxt.add(_normalize(cells | {q}))
        level = nxt
    return [new_region(2, s) for s in sorted(level)]


def exhaustive_minimum(size: int, inequality_id: str, k: int) -> tuple[float, Region]:
    best, arg = SENTINEL, None
    for region in enumerate_planar_regions(size):
        obj = slack_objective(region, inequality_id, k)
        if obj < best or arg is None:
            best, arg = obj, region
    return best, arg


# -- families ----------------------------------------------------------------

FAMILIES = ("boxes", "l1balls", "paths")


def family_member(family: str, n: int, size: int) -> tuple[str, Region]:
    """boxes: side `size` cube; l1balls: radius `size`; paths: `size` vertices."""
    if family == "boxes":
        return f"box-{'x'.join([str(size)] * n)}", box_region([size] * n)
    if family == "l1balls":
        return f"l1ball-n{n}-r{size}", ball_region(n, size, metric="l1")
    if family == "paths":
        return f"path-n{n}-{size}", path_region(n, size)
    raise DomainError(f"unknown family {family!r}; choose from {FAMILIES}")


def sweep_family(family: str, n: int, sizes: Sequence[int], inequality_ids: Sequence[str] | None = None,
                 workers: int = 1) -> list[tuple[str, InequalityRecord]]:
    members = [family_member(family, n, s) for s in sizes]

    def run(item):
        rid, region = item
        recs = full_report(full_spectrum(assemble(region)), is_connected(region))
        if inequality_ids:
            recs = [r for r in recs if r.inequality_id in inequality_ids]
        return [(rid, r) for r in recs]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(run, members))
    else:
        blocks = [run(m) for m in members]
    return [row for block in blocks for row in block]
