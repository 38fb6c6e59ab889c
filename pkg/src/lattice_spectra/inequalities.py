"""Universal eigenvalue inequalities for Dirichlet spectra on subsets of Z^n.

Every checker returns an :class:`InequalityRecord` whose ``slack`` is
oriented so that ``slack >= 0`` means the inequality holds, whichever side
the inequality is usually written on.  Indices ``k`` are 1-based.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .eigensolver import Spectrum
from .errors import DegenerateWeightsError, KRangeError, LatticeError, PreconditionError, ShapeError

log = logging.getLogger(__name__)

TOL_INEQ = 1e-8
TOL_INEQ_REL = 1e-10
# eigenvalue coincidences, vanishing partial sums, precondition edges
TOL_DEGEN = 1e-10
TOL_STRICT = 1e-6
DISCRIMINANT_CLAMP = 1e-10

INF = math.inf


class DiscriminantError(LatticeError, ArithmeticError):
    """Yang-2 quadratic has a clearly negative discriminant: the spectrum is wrong."""


@dataclass(frozen=True)
class InequalityRecord:
    inequality_id: str
    k: int
    lhs: float
    rhs: float
    slack: float
    precondition_met: bool
    passed: bool
    note: str = ""


def tolerance(lhs: float, rhs: float) -> float:
    finite = [abs(v) for v in (lhs, rhs) if math.isfinite(v)]
    return TOL_INEQ + TOL_INEQ_REL * max(finite, default=0.0)


def make_record(inequality_id: str, k: int, lhs: float, rhs: float, *, geq: bool = False,
                precondition: bool = True, note: str = "") -> InequalityRecord:
    """Build a record for ``lhs <= rhs`` (or ``lhs >= rhs`` when ``geq``)."""
    lhs, rhs = float(lhs), float(rhs)
    if geq:
        slack = INF if lhs == INF else lhs - rhs
    else:
        slack = INF if rhs == INF else rhs - lhs
    ok = (not precondition) or (slack >= -tolerance(lhs, rhs))
    return InequalityRecord(inequality_id, k, lhs, rhs, slack, bool(precondition), bool(ok), note)


def _eigs(spec: Spectrum) -> np.ndarray:
    return np.asarray(spec.eigenvalues, dtype=np.float64)


def _check_k(spec: Spectrum, k: int, hi: int | None = None) -> None:
    hi = spec.N - 1 if hi is None else hi
    if not 1 <= k <= hi:
        raise KRangeError(f"k={k} outside admissible range 1..{hi} (N={spec.N})")


def _head(spec: Spectrum, k: int) -> tuple[np.ndarray, float]:
    lam = _eigs(spec)
    return lam[:k], float(lam[k]) if k < len(lam) else math.nan


def _partial(lam_k: np.ndarray) -> float:
    return math.fsum(1.0 - lam_k)


# -- main theorems ---------------------------------------------------------


def check_ppw(spec: Spectrum, k: int) -> InequalityRecord:
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    s0 = _partial(lam)
    lhs = nxt - lam[-1]
    rhs = INF if s0 <= TOL_DEGEN else (4.0 / spec.n) * math.fsum(lam) / s0
    return make_record("ppw", k, lhs, rhs)


def check_first_gap(spec: Spectrum, connected: bool = True) -> tuple[InequalityRecord, InequalityRecord]:
    if spec.N < 2:
        raise KRangeError("first-gap bounds need at least two eigenvalues")
    l1, l2 = spec.lam(1), spec.lam(2)
    rhs = INF if l1 >= 1 - TOL_DEGEN else 4 * l1 / (spec.n * (1 - l1))
    gap = make_record("first_gap", 1, l2 - l1, rhs)
    ratio = make_record("first_gap_ratio9", 1, l2, 9 * l1, precondition=connected)
    return gap, ratio


def check_hp(spec: Spectrum, k: int) -> InequalityRecord:
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    if nxt - lam[-1] <= TOL_DEGEN:
        lhs = INF
    else:
        lhs = math.fsum(lam / (nxt - lam))
    rhs = spec.n / 4.0 * _partial(lam)
    return make_record("hp", k, lhs, rhs, geq=True)


def check_yang1(spec: Spectrum, k: int) -> InequalityRecord:
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    gap = nxt - lam
    lhs = math.fsum(gap**2 * (1 - lam))
    rhs = 4.0 / spec.n * math.fsum(gap * lam)
    return make_record("yang1", k, lhs, rhs)


def check_yang2(spec: Spectrum, k: int) -> InequalityRecord:
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    pre = nxt <= 1 + 4.0 / spec.n + TOL_DEGEN
    s0 = _partial(lam)
    if s0 <= TOL_DEGEN:
        rhs = INF
    else:
        rhs = ((1 + 4.0 / spec.n) * math.fsum(lam) - math.fsum(lam**2)) / s0
    return make_record("yang2", k, nxt, rhs, precondition=pre)


def check_ratio_bound(spec: Spectrum, k: int, delta: float | None = None) -> InequalityRecord:
    """lambda_{k+1} <= (1 + 4/(n g)) k^(2/(n g)) lambda_1 with g = 1 - lambda_k (or delta)."""
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    lk = float(lam[-1])
    if delta is None:
        ident, pre, gap = "ratio_bound", lk < 1 - TOL_DEGEN, 1 - lk
    else:
        if delta <= 0:
            raise PreconditionError(f"delta must be positive, got {delta}")
        ident, pre, gap = "ratio_bound_delta", lk <= 1 - delta + TOL_DEGEN, delta
    if gap <= 0:
        return make_record(ident, k, nxt, math.nan, precondition=False)
    expo = 2.0 / (spec.n * gap) * math.log(k)
    growth = math.exp(expo) if expo < 700 else INF
    rhs = (1 + 4.0 / (spec.n * gap)) * growth * spec.lam(1)
    return make_record(ident, k, nxt, rhs, precondition=pre)


def check_bipartite_symmetry(spec: Spectrum) -> float:
    lam = _eigs(spec)
    return float(np.abs(lam + lam[::-1] - 2.0).max())


def check_partial_sums(spec: Spectrum) -> list[InequalityRecord]:
    """sum_{i<=k} (1 - lambda_i) >= 0 for k < N, and = 0 at k = N.

    Near-zero sums at k < N with lambda_{k+1} < 2 are flagged in ``note`` and
    logged as warnings; they do not fail.
    """
    lam = _eigs(spec)
    sums = np.cumsum(1.0 - lam)
    out = []
    for k in range(1, spec.N):
        s = float(sums[k - 1])
        note = ""
        if s <= TOL_STRICT and lam[k] < 2 - TOL_STRICT:
            note = "strictness"
            log.warning("partial sum at k=%d is %.3e although k < N", k, s)
        out.append(make_record("partial_sum", k, s, 0.0, geq=True, note=note))
    total = math.fsum(1.0 - lam)
    out.append(make_record("partial_sum_total", spec.N, abs(total), 0.0))
    return out


def check_first_eig_bound(spec: Spectrum, connected: bool) -> InequalityRecord:
    pre = bool(connected) and spec.N >= 2
    return make_record("first_eig_bound", 1, spec.lam(1), 1 - 1 / (2 * spec.n), precondition=pre)


def check_variance(spec: Spectrum, k: int) -> InequalityRecord:
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    mean = math.fsum(lam) / k
    lhs = math.fsum((lam - mean) ** 2) / k
    pre = nxt <= 1 + 4.0 / spec.n + TOL_DEGEN
    return make_record("variance", k, lhs, 4.0 / spec.n * mean, precondition=pre)


# -- weighted variants -----------------------------------------------------


@dataclass(frozen=True)
class AltWeights:
    mu: np.ndarray
    A: float


def alt_weights(spec: Spectrum, k: int) -> AltWeights:
    _check_k(spec, k, hi=spec.N)
    lam = _eigs(spec)[:k]
    w = 1.0 - lam + 2.0 / spec.n
    mu = w / math.fsum(w)
    s0 = _partial(lam)
    if s0 <= TOL_DEGEN:
        raise DegenerateWeightsError(f"sum of (1 - lambda_i) up to k={k} is {s0:.3e}; A is undefined")
    x = 1 + 2.0 * k / (spec.n * s0)
    return AltWeights(mu, x * (1 + math.sqrt(1 - 1 / x)))


def _alt_or_inf(spec: Spectrum, k: int) -> AltWeights:
    try:
        return alt_weights(spec, k)
    except DegenerateWeightsError:
        lam = _eigs(spec)[:k]
        w = 1.0 - lam + 2.0 / spec.n
        return AltWeights(w / math.fsum(w), INF)


def check_yang2_alt(spec: Spectrum, k: int) -> tuple[InequalityRecord, InequalityRecord]:
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    n = spec.n
    s0 = _partial(lam)
    if s0 <= TOL_DEGEN:
        root = INF
    else:
        s1 = math.fsum(lam * (1 - lam + 2.0 / n))
        s2 = math.fsum(lam**2 * (1 - lam + 4.0 / n))
        disc = s1 * s1 - s0 * s2
        if disc < 0:
            if disc < -DISCRIMINANT_CLAMP:
                raise DiscriminantError(f"discriminant {disc:.3e} at k={k}")
            disc = 0.0
        root = (s1 + math.sqrt(disc)) / s0
    first = make_record("yang2_alt_root", k, nxt, root)
    w = _alt_or_inf(spec, k)
    pre = lam[-1] <= 1 + 2.0 / n + TOL_DEGEN
    rhs = w.A * math.fsum(lam * w.mu) if math.isfinite(w.A) else INF
    second = make_record("yang2_alt_A", k, nxt, rhs, precondition=pre)
    return first, second


def check_hp_alt(spec: Spectrum, k: int) -> InequalityRecord:
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    w = _alt_or_inf(spec, k)
    pre = lam[-1] <= 1 + 2.0 / spec.n + TOL_DEGEN
    if nxt - lam[-1] <= TOL_DEGEN:
        lhs = INF
    else:
        lhs = math.fsum(lam / (nxt - lam) * w.mu)
    rhs = 1.0 / (w.A - 1.0) if math.isfinite(w.A) else 0.0
    return make_record("hp_alt", k, lhs, rhs, geq=True, precondition=pre)


def check_ppw_alt(spec: Spectrum, k: int) -> InequalityRecord:
    _check_k(spec, k)
    lam, nxt = _head(spec, k)
    w = _alt_or_inf(spec, k)
    pre = lam[-1] <= 1 + 2.0 / spec.n + TOL_DEGEN
    rhs = (w.A - 1.0) * math.fsum(lam * w.mu) if math.isfinite(w.A) else INF
    return make_record("ppw_alt", k, nxt - lam[-1], rhs, precondition=pre)


# -- recursion for the lambda_{k+1} / lambda_1 bound -------------------------


@dataclass(frozen=True)
class RecursionState:
    k: int
    B: float
    Lambda_k: float
    T_k: float
    F_k: float
    F_next: float
    p_next: float
    C: float
    growth: float  # ((k+1)/k)^(4B/n)
    hypothesis_lhs: float
    hypothesis_rhs: float

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis_lhs <= self.hypothesis_rhs + tolerance(self.hypothesis_lhs, self.hypothesis_rhs)

    @property
    def bound(self) -> float:
        if self.growth == INF:
            return INF if self.F_k > 0 else 0.0
        return self.C * self.growth * self.F_k


def recursion_deficit(n: int, k: int, B: float) -> float:
    """1 - C(n, k, B), kept separate because it can fall below double resolution near 1."""
    shrink = math.exp(-4.0 * B / n * math.log1p(1.0 / k))
    return B / (3.0 * n) * shrink * (1 + 2 * B / n) * (1 + 4 * B / n) / (k + 1) ** 3


def recursion_constant(n: int, k: int, B: float) -> float:
    """C(n, k, B) = 1 - (B/3n) (k/(k+1))^(4B/n) (1+2B/n)(1+4B/n) / (k+1)^3."""
    return 1.0 - recursion_deficit(n, k, B)


def default_B(spec: Spectrum, k: int) -> float:
    lk = spec.lam(k)
    if lk >= 1 - TOL_DEGEN:
        raise PreconditionError(f"lambda_k = {lk:.6g} >= 1: default B = 1/(1 - lambda_k) undefined; pass B")
    return 1.0 / (1.0 - lk)


def recursion_state(spec: Spectrum, k: int, B: float | None = None) -> RecursionState:
    _check_k(spec, k)
    if B is None:
        B = default_B(spec, k)
    if B <= 0:
        raise PreconditionError(f"B must be positive, got {B}")
    if spec.lam(1) <= 0:
        raise PreconditionError("recursion needs lambda_1 > 0")
    n = spec.n
    lam_all = _eigs(spec)
    lam, nxt = lam_all[:k], float(lam_all[k])
    lam1 = lam_all[: k + 1]
    c2 = 1 + 2 * B / n
    Lk, Tk = math.fsum(lam) / k, math.fsum(lam**2) / k
    Ln, Tn = math.fsum(lam1) / (k + 1), math.fsum(lam1**2) / (k + 1)
    expo = 4.0 * B / n * math.log1p(1.0 / k)
    return RecursionState(
        k=k,
        B=B,
        Lambda_k=Lk,
        T_k=Tk,
        F_k=c2 * Lk**2 - Tk,
        F_next=c2 * Ln**2 - Tn,
        p_next=Ln - (1 + 2 * B / n / (k + 1)) * Lk,
        C=recursion_constant(n, k, B),
        growth=math.exp(expo) if expo < 700 else INF,
        hypothesis_lhs=math.fsum((nxt - lam) ** 2),
        hypothesis_rhs=4 * B / n * math.fsum(lam * (nxt - lam)),
    )


def check_recursion(spec: Spectrum, k: int, B: float | None = None) -> InequalityRecord:
    """F_{k+1} <= C(n,k,B) ((k+1)/k)^(4B/n) F_k, vacuous unless the hypothesis holds."""
    st = recursion_state(spec, k, B)
    return make_record("recursion", k, st.F_next, st.bound, precondition=st.hypothesis_holds)


def check_recursion_constant(spec: Spectrum, k: int, B: float | None = None) -> InequalityRecord:
    st = recursion_state(spec, k, B)
    return make_record("recursion_C", k, st.C, 1.0)


# -- sweep -----------------------------------------------------------------


def _vacuous(ident: str, k: int, note: str) -> InequalityRecord:
    return InequalityRecord(ident, k, math.nan, math.nan, math.nan, False, True, note)


def full_report(spec: Spectrum, connected: bool) -> list[InequalityRecord]:
    recs: list[InequalityRecord] = []
    N = spec.N
    recs.extend(check_partial_sums(spec))
    recs.append(make_record("bipartite_symmetry", 0, check_bipartite_symmetry(spec), 0.0))
    if N >= 2:
        recs.extend(check_first_gap(spec, connected))
    recs.append(check_first_eig_bound(spec, connected))
    for k in range(1, N):
        recs.append(check_ppw(spec, k))
        recs.append(check_hp(spec, k))
        recs.append(check_yang1(spec, k))
        recs.append(check_yang2(spec, k))
        recs.append(check_ratio_bound(spec, k))
        recs.append(check_variance(spec, k))
        recs.extend(check_yang2_alt(spec, k))
        recs.append(check_hp_alt(spec, k))
        recs.append(check_ppw_alt(spec, k))
        try:
            recs.append(check_recursion(spec, k))
            recs.append(check_recursion_constant(spec, k))
        except PreconditionError as exc:
            recs.append(_vacuous("recursion", k, str(exc)))
    recs.sort(key=lambda r: (r.inequality_id, r.k))
    return recs


def spectrum_from_values(eigenvalues, n: int) -> Spectrum:
    """A vector-free Spectrum for feeding hand-made eigenvalue lists to the checkers."""
    lam = np.sort(np.asarray(eigenvalues, dtype=np.float64))
    if lam.ndim != 1 or lam.size == 0:
        raise ShapeError("need a nonempty 1-D list of eigenvalues")
    return Spectrum(lam, np.empty((lam.size, 0)), n, lam.size)
