"""Finite vertex sets of the integer lattice Z^n.

A region is stored as a lexicographically sorted tuple of integer tuples;
that order fixes the row/column order of every matrix built on it.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CoordinateOverflowError,
    DimensionError,
    DomainError,
    EmptyRegionError,
    MembershipError,
    RegionFormatError,
)
from .rng import SplitMix64

Point = tuple[int, ...]

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1


def _check_coord(p: Point) -> None:
    for c in p:
        if not INT32_MIN <= c <= INT32_MAX:
            raise CoordinateOverflowError(f"coordinate {c} of {p} outside signed 32-bit range")


def lattice_neighbors(p: Point) -> list[Point]:
    """All 2n lattice neighbours of ``p`` as (-e_1, +e_1, -e_2, +e_2, ...)."""
    out = []
    for a in range(len(p)):
        for step in (-1, 1):
            c = p[a] + step
            if not INT32_MIN <= c <= INT32_MAX:
                raise CoordinateOverflowError(f"neighbour of {p} along axis {a} overflows int32")
            out.append(p[:a] + (c,) + p[a + 1 :])
    return out


@dataclass(frozen=True)
class Region:
    n: int
    points: tuple[Point, ...]
    index: dict[Point, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {p: i for i, p in enumerate(self.points)})

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self.index

    @property
    def N(self) -> int:
        return len(self.points)

    @property
    def degree(self) -> int:
        return 2 * self.n

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """(N, 2n) int array; column 2a is x - e_a, 2a+1 is x + e_a; -1 if outside."""
        table = np.full((self.N, 2 * self.n), -1, dtype=np.int64)
        for i, p in enumerate(self.points):
            for j, q in enumerate(lattice_neighbors(p)):
                table[i, j] = self.index.get(q, -1)
        return table

    def coords(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(self.N, self.n)


@dataclass(frozen=True)
class Boundary:
    points: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: object) -> bool:
        return p in set(self.points)


def new_region(n: int, points: Iterable[Sequence[int]]) -> Region:
    if n < 1:
        raise DimensionError(f"ambient dimension must be positive, got {n}")
    pts = set()
    for raw in points:
        p = tuple(int(c) for c in raw)
        if len(p) != n:
            raise DimensionError(f"point {p} has arity {len(p)}, expected {n}")
        _check_coord(p)
        pts.add(p)
    if not pts:
        raise EmptyRegionError("a region needs at least one point")
    return Region(n, tuple(sorted(pts)))


def box_region(dims: Sequence[int]) -> Region:
    """The box {1..m_1} x ... x {1..m_n}."""
    dims = [int(m) for m in dims]
    if not dims:
        raise DimensionError("box needs at least one side length")
    if min(dims) < 1:
        raise DomainError(f"box side lengths must be >= 1, got {dims}")
    return new_region(len(dims), itertools.product(*(range(1, m + 1) for m in dims)))


def ball_region(n: int, radius: int, center: Sequence[int] | None = None, metric: str = "l1") -> Region:
    if radius < 0:
        raise DomainError(f"radius must be nonnegative, got {radius}")
    center = tuple(center) if center is not None else (0,) * n
    if len(center) != n:
        raise DimensionError(f"center {center} has arity {len(center)}, expected {n}")
    if metric not in ("l1", "linf"):
        raise DomainError(f"unknown metric {metric!r}; use 'l1' or 'linf'")
    pts = []
    for off in itertools.product(range(-radius, radius + 1), repeat=n):
        r = sum(abs(o) for o in off) if metric == "l1" else max((abs(o) for o in off), default=0)
        if r <= radius:
            pts.append(tuple(c + o for c, o in zip(center, off)))
    return new_region(n, pts)


def path_region(n: int, length: int) -> Region:
    """Straight path of ``length`` vertices along the first axis, starting at the origin."""
    if length < 1:
        raise DomainError(f"path length must be >= 1, got {length}")
    return new_region(n, [(i,) + (0,) * (n - 1) for i in range(length)])


def random_connected_region(n: int, size: int, seed: int) -> Region:
    """Grow a connected region from the origin by uniform frontier sampling.

    At every step the current vertex boundary is sorted lexicographically and
    one entry is chosen with ``SplitMix64(seed).below(len(boundary))``.
    """
    if n < 1:
        raise DimensionError(f"ambient dimension must be positive, got {n}")
    if size < 1:
        raise DomainError(f"size must be >= 1, got {size}")
    rng = SplitMix64(seed)
    origin = (0,) * n
    members = {origin}
    frontier = set(lattice_neighbors(origin))
    while len(members) < size:
        ordered = sorted(frontier)
        p = ordered[rng.below(len(ordered))]
        members.add(p)
        frontier.discard(p)
        for q in lattice_neighbors(p):
            if q not in members:
                frontier.add(q)
    return new_region(n, members)


def boundary(region: Region) -> Boundary:
    out = set()
    for p in region.points:
        for q in lattice_neighbors(p):
            if q not in region.index:
                out.add(q)
    return Boundary(tuple(sorted(out)))


def neighbors_in(region: Region, p: Sequence[int]) -> list[Point]:
    p = tuple(p)
    if p not in region.index:
        raise MembershipError(f"{p} is not a point of the region")
    return sorted(q for q in lattice_neighbors(p) if q in region.index)


def is_connected(region: Region) -> bool:
    if region.N == 0:
        raise EmptyRegionError("connectivity of an empty region is undefined")
    return points_connected(set(region.points))


def points_connected(pts: set[Point]) -> bool:
    if not pts:
        return False
    start = next(iter(pts))
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for q in lattice_neighbors(p):
            if q in pts and q not in seen:
                seen.add(q)
                queue.append(q)
    return len(seen) == len(pts)


def cut_vertices(pts: set[Point]) -> set[Point]:
    """Points whose removal disconnects ``pts`` (iterative Tarjan low-link)."""
    if len(pts) < 3:
        return set()
    order = sorted(pts)
    disc: dict[Point, int] = {}
    low: dict[Point, int] = {}
    cuts: set[Point] = set()
    root = order[0]
    disc[root] = low[root] = 0
    root_children = 0
    stack = [(root, None, iter(lattice_neighbors(root)))]
    clock = 1
    while stack:
        p, parent, it = stack[-1]
        for q in it:
            if q not in pts or q == parent:
                continue
            if q in disc:
                low[p] = min(low[p], disc[q])
            else:
                disc[q] = low[q] = clock
                clock += 1
                stack.append((q, p, iter(lattice_neighbors(q))))
                break
        else:
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[p])
                if parent == root:
                    root_children += 1
                elif low[p] >= disc[parent]:
                    cuts.add(parent)
    if root_children > 1:
        cuts.add(root)
    return cuts


def translate_to_unit_box(region: Region) -> Region:
    """Shift so the bounding box starts at coordinate 1 along every axis."""
    lo = region.coords().min(axis=0)
    return new_region(region.n, [tuple(int(c - m + 1) for c, m in zip(p, lo)) for p in region.points])


# -- Region JSON: {"n": int, "points": [[int, ...], ...]} ------------------


def region_to_dict(region: Region) -> dict:
    return {"n": region.n, "points": [list(p) for p in region.points]}


def region_from_dict(data: object) -> Region:
    if not isinstance(data, dict) or "n" not in data or "points" not in data:
        raise RegionFormatError('region JSON must be an object with keys "n" and "points"')
    n, pts = data["n"], data["points"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise RegionFormatError(f'"n" must be an integer, got {n!r}')
    if not isinstance(pts, list) or not all(isinstance(p, list) for p in pts):
        raise RegionFormatError('"points" must be a list of integer lists')
    for p in pts:
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in p):
            raise RegionFormatError(f"non-integer coordinate in {p!r}")
    return new_region(n, pts)


def dumps_region(region: Region, **extra) -> str:
    payload = region_to_dict(region)
    payload.update(extra)
    return json.dumps(payload) + "\n"


def write_region(region: Region, path: str | Path, **extra) -> None:
    Path(path).write_text(dumps_region(region, **extra), encoding="utf-8")


def read_region(path: str | Path) -> Region:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegionFormatError(f"{path}: not valid JSON ({exc})") from exc
    return region_from_dict(data)
