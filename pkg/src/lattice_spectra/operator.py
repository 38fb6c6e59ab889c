"""The Dirichlet Laplacian on a region and the forms built from it.

Sign convention: ``DirichletOperator`` holds the matrix of -Delta_Omega,
so ``(op @ f)(x) = f(x) - (1/2n) * sum of f over lattice neighbours in Omega``.
The degree d_x = 2n is ambient (boundary neighbours count).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import EmptyRegionError, ShapeError
from .region import Region, boundary, lattice_neighbors


@dataclass(frozen=True)
class DirichletOperator:
    region: Region
    matrix: sp.csr_matrix

    @property
    def N(self) -> int:
        return self.region.N

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def inf_norm(self) -> float:
        return float(abs(self.matrix).sum(axis=1).max())

    def __matmul__(self, values: np.ndarray) -> np.ndarray:
        return self.matrix @ values


@dataclass(frozen=True)
class LatticeFunction:
    region: Region
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.region.N,):
            raise ShapeError(f"expected {self.region.N} values, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)


class ExtendedDomain:
    """Omega followed by its vertex boundary, with neighbour lookups.

    Every sum over V of a null-extended quantity reduces to a sum over this set.
    Index ``M`` (one past the end) is a padding slot that always holds 0.
    """

    def __init__(self, region: Region):
        self.region = region
        self.boundary = boundary(region)
        self.points = region.points + self.boundary.points
        self.M = len(self.points)
        index = {p: i for i, p in enumerate(self.points)}
        table = np.full((self.M, 2 * region.n), self.M, dtype=np.int64)
        for i, p in enumerate(self.points):
            for j, q in enumerate(lattice_neighbors(p)):
                table[i, j] = index.get(q, self.M)
        self.table = table

    def extend(self, values: np.ndarray) -> np.ndarray:
        """Null extension; columns of a 2-D array are extended independently."""
        values = np.asarray(values, dtype=np.float64)
        pad = np.zeros((self.M + 1 - self.region.N,) + values.shape[1:])
        return np.concatenate([values, pad])

    def laplacian(self, ext: np.ndarray) -> np.ndarray:
        """Delta applied to a null-extended function, evaluated on Omega + boundary."""
        return ext[self.table].mean(axis=1) - ext[: self.M]

    def gamma(self, f_ext: np.ndarray, g_ext: np.ndarray) -> np.ndarray:
        """Carre du champ on Omega + boundary: (1/2d) sum_y (f(y)-f(x))(g(y)-g(x))."""
        df = f_ext[self.table] - f_ext[: self.M, None]
        dg = g_ext[self.table] - g_ext[: self.M, None]
        return (df * dg).sum(axis=1) / (2 * self.table.shape[1])

    def edge_sum(self, f_ext: np.ndarray, g_ext: np.ndarray) -> float:
        """sum over ordered adjacent pairs (x, y) of grad f * grad g."""
        df = f_ext[self.table] - f_ext[: self.M, None]
        dg = g_ext[self.table] - g_ext[: self.M, None]
        return float((df * dg).sum())


def assemble(region: Region) -> DirichletOperator:
    if region.N == 0:
        raise EmptyRegionError("cannot assemble an operator on an empty region")
    table = region.neighbor_table
    rows, cols = np.nonzero(table >= 0)
    nbr = table[rows, cols]
    off = -1.0 / (2 * region.n)
    r = np.concatenate([np.arange(region.N), rows])
    c = np.concatenate([np.arange(region.N), nbr])
    v = np.concatenate([np.ones(region.N), np.full(len(rows), off)])
    mat = sp.csr_matrix((v, (r, c)), shape=(region.N, region.N))
    mat.sort_indices()
    return DirichletOperator(region, mat)


def _same_region(*funcs: LatticeFunction) -> Region:
    region = funcs[0].region
    for f in funcs[1:]:
        if f.region != region:
            raise ShapeError("lattice functions live on different regions")
    return region


def apply(op: DirichletOperator, f: LatticeFunction) -> LatticeFunction:
    if f.region != op.region:
        raise ShapeError("function and operator live on different regions")
    return LatticeFunction(op.region, op.matrix @ f.values)


def weighted_inner(f: LatticeFunction, g: LatticeFunction) -> float:
    region = _same_region(f, g)
    return float(np.dot(f.values, g.values) * region.degree)


def gamma(region: Region, f: LatticeFunction, g: LatticeFunction) -> LatticeFunction:
    """Gamma(f, g) at each point of Omega, with f and g null-extended."""
    if _same_region(f, g) != region:
        raise ShapeError("functions do not live on the given region")
    dom = ExtendedDomain(region)
    vals = dom.gamma(dom.extend(f.values), dom.extend(g.values))
    return LatticeFunction(region, vals[: region.N])


def green_residual(region: Region, f: LatticeFunction, g: LatticeFunction) -> float:
    """sum (Delta f) g d_x + (1/2) sum_{x,y} mu_xy grad f grad g, over Omega + boundary."""
    if _same_region(f, g) != region:
        raise ShapeError("functions do not live on the given region")
    dom = ExtendedDomain(region)
    fe, ge = dom.extend(f.values), dom.extend(g.values)
    lhs = float(np.dot(dom.laplacian(fe), ge[: dom.M])) * region.degree
    return lhs + 0.5 * dom.edge_sum(fe, ge)


def dirichlet_energy(region: Region, f: LatticeFunction) -> float:
    """sum over Omega + boundary of Gamma(f)(x) d_x."""
    dom = ExtendedDomain(region)
    fe = dom.extend(f.values)
    return float(dom.gamma(fe, fe).sum()) * region.degree


def dumps_coo(op: DirichletOperator) -> str:
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    lines = [f"{coo.row[i]} {coo.col[i]} {float(coo.data[i])!r}" for i in order]
    return "\n".join(lines) + "\n"


def write_coo(op: DirichletOperator, path: str | Path) -> None:
    Path(path).write_text(dumps_coo(op), encoding="utf-8")
