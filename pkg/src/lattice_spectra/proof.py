"""Trial-function quantities behind the gap inequalities, evaluated on real regions.

For a coordinate function g = x_alpha and the first k weighted-orthonormal
eigenvectors u_1..u_k (null-extended), this module builds

    a_ij = sum g u_i u_j d_x          b_ij = sum u_j Gamma(g, u_i) d_x
    phi_i = g u_i - sum_j a_ij u_j    K_g(u_i) = -2 sum Gamma(g, u_i) phi_i d_x
    I_g(u_i) = 1/4 sum_{x,y} mu_xy |grad g|^2 |grad u_i|^2

and measures how far each identity and inequality relating them is from
holding.  All sums run over Omega and its vertex boundary, outside of which
every term vanishes.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .eigensolver import Spectrum
from .errors import KRangeError, ShapeError
from .inequalities import TOL_DEGEN, InequalityRecord, make_record
from .operator import ExtendedDomain
from .region import Region

log = logging.getLogger(__name__)

PHI_ZERO = 1e-20


@dataclass(frozen=True)
class ProofData:
    k: int
    alpha: int
    n: int
    eigenvalues: np.ndarray  # lambda_1..lambda_{k+1}
    a: np.ndarray
    b: np.ndarray
    phi: np.ndarray  # N x k, column i is phi_i on Omega
    Kg: np.ndarray
    Ig: np.ndarray
    phi_sq: np.ndarray  # sum phi_i^2 d_x
    gamma_sq: np.ndarray  # sum Gamma(g, u_i)^2 d_x
    orthogonality: np.ndarray  # k x k, sum phi_i u_j d_x


def coordinate_values(region: Region, alpha: int, offset: int = 0) -> np.ndarray:
    """x_alpha on the points of ``region``, shifted so the bounding box starts at 1."""
    col = region.coords()[:, alpha - 1]
    return (col - col.min() + 1 + offset).astype(np.float64)


def _coordinate_gamma(dom: ExtendedDomain, u_ext: np.ndarray, alpha: int) -> np.ndarray:
    """Gamma(x_alpha, u) on Omega + boundary: (u(x + e) - u(x - e)) / (4n)."""
    minus = dom.table[:, 2 * (alpha - 1)]
    plus = dom.table[:, 2 * (alpha - 1) + 1]
    return (u_ext[plus] - u_ext[minus]) / (2 * dom.table.shape[1])


def _axis_energy(dom: ExtendedDomain, u_ext: np.ndarray, alpha: int) -> np.ndarray:
    """1/2 sum_{x,y} mu_xy |grad x_alpha|^2 |grad u|^2, one value per column of u."""
    here = u_ext[: dom.M]
    minus = u_ext[dom.table[:, 2 * (alpha - 1)]]
    plus = u_ext[dom.table[:, 2 * (alpha - 1) + 1]]
    return 0.5 * (((plus - here) ** 2) + ((minus - here) ** 2)).sum(axis=0)


def build_proof_data(spec: Spectrum, region: Region, k: int, alpha: int, *, offset: int = 0,
                     domain: ExtendedDomain | None = None) -> ProofData:
    if spec.N != region.N or spec.n != region.n:
        raise ShapeError("spectrum does not belong to this region")
    if not 1 <= k <= spec.N - 1:
        raise KRangeError(f"k={k} outside 1..{spec.N - 1}")
    if not 1 <= alpha <= region.n:
        raise KRangeError(f"alpha={alpha} outside 1..{region.n}")
    dom = domain if domain is not None else ExtendedDomain(region)
    d = region.degree
    N = region.N
    U = spec.eigenvectors[:, :k]
    g = coordinate_values(region, alpha, offset)

    gu = g[:, None] * U
    a = (gu.T @ U) * d
    phi = gu - U @ a.T
    u_ext = dom.extend(U)
    G = _coordinate_gamma(dom, u_ext, alpha)  # M x k
    b = (G.T @ u_ext[: dom.M]) * d
    Kg = -2.0 * d * (G[:N] * phi).sum(axis=0)
    Ig = 0.5 * _axis_energy(dom, u_ext, alpha)
    return ProofData(
        k=k,
        alpha=alpha,
        n=region.n,
        eigenvalues=np.asarray(spec.eigenvalues[: k + 1], dtype=np.float64),
        a=a,
        b=b,
        phi=phi,
        Kg=Kg,
        Ig=Ig,
        phi_sq=(phi**2).sum(axis=0) * d,
        gamma_sq=(G**2).sum(axis=0) * d,
        orthogonality=(phi.T @ U) * d,
    )


def check_ab_identity(pd: ProofData, spec: Spectrum | None = None) -> float:
    """max |2 b_ij - (lambda_i - lambda_j) a_ij|."""
    lam = pd.eigenvalues[: pd.k]
    return float(np.abs(2 * pd.b - (lam[:, None] - lam[None, :]) * pd.a).max())


def kg_identity_rhs(pd: ProofData, n: int | None = None) -> np.ndarray:
    """1/(2n) - I_g(u_i) + sum_j (lambda_i - lambda_j) a_ij^2."""
    n = pd.n if n is None else n
    lam = pd.eigenvalues[: pd.k]
    return 1.0 / (2 * n) - pd.Ig + ((lam[:, None] - lam[None, :]) * pd.a**2).sum(axis=1)


def check_kg_identity(pd: ProofData, spec: Spectrum | None = None, n: int | None = None) -> float:
    return float(np.abs(pd.Kg - kg_identity_rhs(pd, n)).max())


def check_orthogonality(pd: ProofData) -> float:
    return float(np.abs(pd.orthogonality).max())


def check_rayleigh_chain(pd: ProofData, spec: Spectrum | None = None, k: int | None = None) -> list[InequalityRecord]:
    """0 <= (lambda_{k+1} - lambda_i) sum phi_i^2 d_x <= K_g(u_i), one pair per i.

    With phi_i = 0 the upper bound says K_g(u_i) >= 0, which nothing forces;
    a violation there is logged and recorded as vacuous.
    """
    k = pd.k if k is None else k
    lam = pd.eigenvalues
    out = []
    for i in range(k):
        mid = (lam[k] - lam[i]) * pd.phi_sq[i]
        out.append(make_record("rayleigh_lower", k, mid, 0.0, geq=True))
        rec = make_record("rayleigh_upper", k, mid, pd.Kg[i])
        if not rec.passed and pd.phi_sq[i] <= PHI_ZERO:
            log.warning("K_g(u_%d) = %.3e < 0 with phi_%d = 0 (k=%d, alpha=%d)", i + 1, pd.Kg[i], i + 1, k, pd.alpha)
            rec = make_record("rayleigh_upper", k, mid, pd.Kg[i], precondition=False, note="phi_zero")
        out.append(rec)
    return out


def check_hp_claim(pd: ProofData, spec: Spectrum | None = None, k: int | None = None) -> list[InequalityRecord]:
    """K_g(u_i) <= 4 / (lambda_{k+1} - lambda_i) * sum Gamma(g, u_i)^2 d_x."""
    k = pd.k if k is None else k
    lam = pd.eigenvalues
    out = []
    for i in range(k):
        gap = lam[k] - lam[i]
        if gap <= TOL_DEGEN:
            out.append(make_record("hp_claim", k, pd.Kg[i], np.inf, precondition=False))
        else:
            out.append(make_record("hp_claim", k, pd.Kg[i], 4.0 / gap * pd.gamma_sq[i]))
    return out


@dataclass(frozen=True)
class CoordinateGradientResult:
    energy_split_residual: float  # max |sum_a 1/2 sum |grad x_a|^2 |grad u|^2 - sum Gamma(u) d|
    gamma_bound_slack: float  # min of (1/2n) sum Gamma(u) d - sum_a sum Gamma(x_a, u)^2 d
    energy_residual: float  # max |sum Gamma(u_i) d - lambda_i|


def check_coordinate_gradients(spec: Spectrum, region: Region,
                               domain: ExtendedDomain | None = None) -> CoordinateGradientResult:
    if spec.N != region.N:
        raise ShapeError("spectrum does not belong to this region")
    dom = domain if domain is not None else ExtendedDomain(region)
    d = region.degree
    u_ext = dom.extend(spec.eigenvectors)
    energy = (dom.gamma(u_ext, u_ext)).sum(axis=0) * d
    axis_total = sum(_axis_energy(dom, u_ext, a) for a in range(1, region.n + 1))
    coord_sq = sum((_coordinate_gamma(dom, u_ext, a) ** 2).sum(axis=0) * d for a in range(1, region.n + 1))
    return CoordinateGradientResult(
        energy_split_residual=float(np.abs(axis_total - energy).max()),
        gamma_bound_slack=float((energy / (2 * region.n) - coord_sq).min()),
        energy_residual=float(np.abs(energy - spec.eigenvalues).max()),
    )


def check_coordinate_harmonics(region: Region, alpha: int) -> tuple[float, float]:
    """max |Delta g| and max |Delta(g^2) - 1/n| over Omega, g the true coordinate."""
    n = region.n
    pts = region.coords().astype(np.float64)
    g = pts[:, alpha - 1] - pts[:, alpha - 1].min() + 1
    # along axis alpha the neighbours carry g +- 1; along other axes g is unchanged
    lap_g = ((g + 1) + (g - 1) + 2 * (n - 1) * g) / (2 * n) - g
    lap_g2 = ((g + 1) ** 2 + (g - 1) ** 2 + 2 * (n - 1) * g**2) / (2 * n) - g**2
    return float(np.abs(lap_g).max()), float(np.abs(lap_g2 - 1.0 / n).max())


def proof_records(spec: Spectrum, region: Region, k_max: int | None = None) -> list[InequalityRecord]:
    """All proof-internal checks as records: identities are |deviation| <= 0."""
    out: list[InequalityRecord] = []
    if spec.N < 2:
        return out
    dom = ExtendedDomain(region)
    gl = check_coordinate_gradients(spec, region, dom)
    out.append(make_record("energy_split", 0, gl.energy_split_residual, 0.0))
    out.append(make_record("coordinate_gamma_bound", 0, -gl.gamma_bound_slack, 0.0))
    out.append(make_record("gamma_energy", 0, gl.energy_residual, 0.0))
    top = spec.N - 1 if k_max is None else min(k_max, spec.N - 1)
    for k in range(1, top + 1):
        for alpha in range(1, region.n + 1):
            pd = build_proof_data(spec, region, k, alpha, domain=dom)
            out.append(make_record("ab_identity", k, check_ab_identity(pd), 0.0, note=f"alpha={alpha}"))
            out.append(make_record("kg_identity", k, check_kg_identity(pd), 0.0, note=f"alpha={alpha}"))
            out.append(make_record("orthogonality", k, check_orthogonality(pd), 0.0, note=f"alpha={alpha}"))
            out.extend(check_rayleigh_chain(pd))
            out.extend(check_hp_claim(pd))
    out.sort(key=lambda r: (r.inequality_id, r.k))
    return out


def proof_data_to_dict(pd: ProofData) -> dict:
    return {
        "k": pd.k,
        "alpha": pd.alpha,
        "a": pd.a.tolist(),
        "b": pd.b.tolist(),
        "Kg": pd.Kg.tolist(),
        "Ig": pd.Ig.tolist(),
    }


def write_proof_dump(items: list[ProofData], path: str | Path, region_id: str = "") -> None:
    payload = {"region_id": region_id, "items": [proof_data_to_dict(pd) for pd in items]}
    Path(path).write_text(json.dumps(payload) + "\n", encoding="utf-8")
