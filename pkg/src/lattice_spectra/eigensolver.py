"""Dense symmetric eigensolver and closed-form box spectra.

``full_spectrum`` reduces the operator to tridiagonal form with Householder
reflections, then diagonalises with the implicit-shift QL iteration
(Wilkinson-type shift, Givens chase from the bottom of the unreduced block).
Eigenvectors come back scaled so that sum_x u_i(x) u_j(x) d_x = delta_ij.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, ShapeError, SolverError
from .operator import DirichletOperator

EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column i is u_i, weighted-orthonormal
    n: int
    N: int

    def lam(self, i: int) -> float:
        """1-based eigenvalue accessor, matching the usual lambda_i indexing."""
        return float(self.eigenvalues[i - 1])


@dataclass(frozen=True)
class SpectralDiagnostics:
    max_residual: float
    max_orthonormality_defect: float
    min_eigenvalue: float
    max_eigenvalue: float
    tol_eig: float

    @property
    def passed(self) -> bool:
        return (
            self.max_residual <= self.tol_eig
            and self.max_orthonormality_defect <= 1e-10
            and self.min_eigenvalue > 0
            and self.max_eigenvalue <= 2 + self.tol_eig
        )


def default_tol_eig(op: DirichletOperator) -> float:
    return 1e-10 * op.N * op.inf_norm()


def householder_tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (diag, offdiag, Q) with Q.T @ a @ Q tridiagonal.

    ``offdiag[i]`` couples rows i and i+1; its last entry is 0.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    N = a.shape[0]
    q = np.eye(N)
    for k in range(N - 2):
        x = a[k + 1 :, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        alpha = -norm_x if x[0] >= 0 else norm_x
        v = x.copy()
        v[0] -= alpha
        norm_v = np.linalg.norm(v)
        if norm_v == 0.0:
            continue
        v /= norm_v
        sub = a[k + 1 :, k + 1 :]
        p = sub @ v
        w = p - (v @ p) * v
        sub -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        a[k + 1, k] = a[k, k + 1] = alpha
        a[k + 2 :, k] = 0.0
        a[k, k + 2 :] = 0.0
        blk = q[:, k + 1 :]
        blk -= 2.0 * np.outer(blk @ v, v)
    diag = np.diag(a).copy()
    off = np.zeros(N)
    off[: N - 1] = np.diag(a, 1)
    return diag, off, q


def tridiagonal_ql(diag: np.ndarray, off: np.ndarray, z: np.ndarray, max_iter: int | None = None):
    """Implicit-shift QL on a symmetric tridiagonal matrix.

    ``z`` holds the accumulated transform; its columns are rotated in place so
    that on return column i is the eigenvector for ``d[i]``.  Eigenvalues are
    not sorted.  Raises SolverError once the total iteration count exceeds
    ``max_iter`` (default 30 N).
    """
    N = len(diag)
    d = [float(x) for x in diag]
    e = [float(x) for x in off]
    zt = np.ascontiguousarray(z.T)  # row i is column i of z
    budget = 30 * N if max_iter is None else max_iter
    total = 0
    for l in range(N):
        while True:
            m = l
            while m < N - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > budget:
                raise SolverError(
                    f"QL iteration did not converge after {budget} sweeps (block start {l}, |e|={abs(e[l]):.3e})",
                    index=l,
                    iterations=total - 1,
                    offdiag=abs(e[l]),
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                hi = zt[i + 1].copy()
                zt[i + 1] *= c
                zt[i + 1] += s * zt[i]
                zt[i] *= c
                zt[i] -= s * hi
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    z[:, :] = zt.T
    return np.array(d), total


def _fix_signs(vecs: np.ndarray) -> None:
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        big = np.abs(col) > 1e-10 * np.abs(col).max()
        first = int(np.argmax(big))
        if col[first] < 0:
            vecs[:, j] = -col


def full_spectrum(op: DirichletOperator) -> Spectrum:
    N = op.N
    if N < 1:
        raise ShapeError("operator has no rows")
    if N == 1:
        vals = np.array([float(op.dense()[0, 0])])
        vecs = np.ones((1, 1))
    else:
        diag, off, q = householder_tridiagonalize(op.dense())
        vals, _ = tridiagonal_ql(diag, off, q)
        order = np.argsort(vals, kind="stable")
        vals = vals[order]
        vecs = q[:, order]
        vecs /= np.linalg.norm(vecs, axis=0)
        _fix_signs(vecs)
    n = op.region.n
    return Spectrum(vals, vecs / math.sqrt(2 * n), n, N)


def box_spectrum_oracle(dims: Sequence[int], n: int | None = None) -> list[float]:
    """Eigenvalues of the box {1..m_1} x ... x {1..m_n} from the product formula.

    1 - (1/n) * sum_a cos(j_a pi / (m_a + 1)),  1 <= j_a <= m_a.
    """
    dims = [int(m) for m in dims]
    if n is None:
        n = len(dims)
    if n != len(dims) or min(dims, default=0) < 1:
        raise DomainError(f"bad box dims {dims} for n={n}")
    factors = [[math.cos(j * math.pi / (m + 1)) for j in range(1, m + 1)] for m in dims]
    return sorted(1.0 - math.fsum(c) / n for c in itertools.product(*factors))


def spectral_checks(spec: Spectrum, op: DirichletOperator, tol_eig: float | None = None) -> SpectralDiagnostics:
    """Residuals use Euclidean-normalised vectors, i.e. sqrt(2n) times u_i."""
    if spec.N != op.N:
        raise ShapeError(f"spectrum has N={spec.N}, operator has N={op.N}")
    tol = default_tol_eig(op) if tol_eig is None else tol_eig
    z = spec.eigenvectors * math.sqrt(2 * spec.n)
    resid = op.matrix @ z - z * spec.eigenvalues
    gram = (spec.eigenvectors.T @ spec.eigenvectors) * (2 * spec.n)
    return SpectralDiagnostics(
        max_residual=float(np.linalg.norm(resid, axis=0).max()),
        max_orthonormality_defect=float(np.abs(gram - np.eye(spec.N)).max()),
        min_eigenvalue=float(spec.eigenvalues[0]),
        max_eigenvalue=float(spec.eigenvalues[-1]),
        tol_eig=tol,
    )


def spectrum_hash(spec: Spectrum, digits: int = 9) -> str:
    text = ",".join(f"{x:.{digits}f}" for x in spec.eigenvalues)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def spectrum_to_dict(spec: Spectrum, include_vectors: bool = False) -> dict:
    out = {"eigenvalues": [float(x) for x in spec.eigenvalues], "n": spec.n, "N": spec.N}
    if include_vectors:
        out["eigenvectors"] = [[float(x) for x in col] for col in spec.eigenvectors.T]
    return out


def write_spectrum(spec: Spectrum, path: str | Path, include_vectors: bool = False) -> None:
    Path(path).write_text(json.dumps(spectrum_to_dict(spec, include_vectors)) + "\n", encoding="utf-8")
