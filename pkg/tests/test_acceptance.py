"""End-to-end gates, one test per gate; the terminal summary lists each as PASS/FAIL."""

import itertools
import math
import time

import numpy as np
import pytest

from lattice_spectra.cli import main
from lattice_spectra.eigensolver import box_spectrum_oracle, full_spectrum, spectral_checks
from lattice_spectra.inequalities import (
    alt_weights,
    check_bipartite_symmetry,
    check_hp,
    check_ppw,
    check_variance,
    check_yang1,
    check_yang2,
    full_report,
    recursion_state,
)
from lattice_spectra.operator import assemble
from lattice_spectra.proof import (
    build_proof_data,
    check_ab_identity,
    check_coordinate_gradients,
    check_hp_claim,
    check_kg_identity,
    check_orthogonality,
    check_rayleigh_chain,
)
from lattice_spectra.region import box_region, is_connected, new_region, random_connected_region

pytestmark = pytest.mark.acceptance

FUZZ_SEEDS = range(200)
PROOF_SEEDS = range(1000, 1030)


def fuzz_params(seed):
    return 1 + seed % 3, 2 + (seed * 37) % 119


@pytest.fixture(scope="module")
def fuzz():
    """(region, op, spectrum) for the 200 seeded regions, plus the time spent solving them."""
    t0 = time.perf_counter()
    items = []
    for seed in FUZZ_SEEDS:
        n, size = fuzz_params(seed)
        region = random_connected_region(n, size, seed)
        op = assemble(region)
        items.append((region, op, full_spectrum(op)))
    return items, time.perf_counter() - t0


def test_box_spectra_match_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for n in (1, 2, 3):
        for dims in itertools.product(range(1, 6), repeat=n):
            spec = full_spectrum(assemble(box_region(list(dims))))
            worst = max(worst, float(np.abs(spec.eigenvalues - box_spectrum_oracle(dims)).max()))
            count += 1
    elapsed = time.perf_counter() - t0
    print(f"{count} boxes, max deviation {worst:.2e}, {elapsed:.1f}s")
    assert count == 5 + 25 + 125
    assert worst <= 1e-9
    assert elapsed < 30


def test_two_vertex_values():
    for n in range(1, 6):
        region = new_region(n, [(0,) * n, (1,) + (0,) * (n - 1)])
        spec = full_spectrum(assemble(region))
        assert abs(spec.lam(1) - (1 - 1 / (2 * n))) <= 1e-12
        assert abs(spec.lam(2) - (2 - spec.lam(1))) <= 1e-12


def test_random_regions_satisfy_every_inequality(fuzz):
    items, solve_time = fuzz
    t0 = time.perf_counter()
    failures = []
    worst = math.inf
    for region, _, spec in items:
        for rec in full_report(spec, is_connected(region)):
            if not rec.precondition_met:
                continue
            worst = min(worst, rec.slack)
            if rec.slack < -1e-8:
                failures.append((region.n, region.N, rec))
    elapsed = solve_time + time.perf_counter() - t0
    print(f"{len(items)} regions, min slack {worst:.3e}, {elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed < 300


def test_bipartite_symmetry(fuzz):
    items, _ = fuzz
    worst = max(check_bipartite_symmetry(spec) for _, _, spec in items)
    print(f"max |lambda_k + lambda_(N+1-k) - 2| = {worst:.2e}")
    assert worst <= 1e-9


def test_proof_identities():
    stats = dict(ab_identity=0.0, kg=0.0, orth=0.0, energy_split=0.0, energy=0.0, coordinate_gamma_bound=math.inf)
    chain_failures = []
    for seed in PROOF_SEEDS:
        n = 1 + seed % 3
        region = random_connected_region(n, 2 + (seed * 13) % 59, seed)
        assert region.N <= 60
        spec = full_spectrum(assemble(region))
        gl = check_coordinate_gradients(spec, region)
        stats["energy_split"] = max(stats["energy_split"], gl.energy_split_residual)
        stats["coordinate_gamma_bound"] = min(stats["coordinate_gamma_bound"], gl.gamma_bound_slack)
        stats["energy"] = max(stats["energy"], gl.energy_residual)
        for k in range(1, min(10, region.N - 1) + 1):
            for alpha in range(1, n + 1):
                pd = build_proof_data(spec, region, k, alpha)
                stats["ab_identity"] = max(stats["ab_identity"], check_ab_identity(pd))
                stats["kg"] = max(stats["kg"], check_kg_identity(pd))
                stats["orth"] = max(stats["orth"], check_orthogonality(pd))
                for rec in check_rayleigh_chain(pd) + check_hp_claim(pd):
                    if rec.precondition_met and rec.slack < -1e-8:
                        chain_failures.append((seed, k, alpha, rec))
    print(", ".join(f"{key}={val:.2e}" for key, val in stats.items()))
    assert stats["ab_identity"] <= 1e-9
    assert stats["kg"] <= 1e-9
    assert stats["orth"] <= 1e-10
    assert stats["energy_split"] <= 1e-10
    assert stats["coordinate_gamma_bound"] >= -1e-10
    assert stats["energy"] <= 1e-10
    assert not chain_failures, chain_failures[:5]


def test_solver_quality(fuzz):
    items, _ = fuzz
    extra = [box_region(list(d)) for d in ([5, 5, 5], [12, 10], [40])]
    ops = [(op, spec) for _, op, spec in items]
    ops += [(assemble(r), full_spectrum(assemble(r))) for r in extra]
    bad = []
    for op, spec in ops:
        diag = spectral_checks(spec, op)
        if not diag.passed:
            bad.append((op.N, diag))
    assert not bad, bad[:3]


def test_seeded_outputs_are_byte_identical(tmp_path):
    blobs = {"gen": [], "search": [], "best": []}
    for _ in range(2):
        region, trace, best = tmp_path / "r.json", tmp_path / "t.csv", tmp_path / "b.json"
        assert main(["gen", "--shape", "random", "--n", "3", "--size", "50", "--seed", "1", "--out", str(region)]) == 0
        assert main(["search", "--ineq", "ppw", "--k", "1", "--size", "10", "--n", "2", "--steps", "100",
                     "--seed", "3", "--out", str(trace), "--best-out", str(best)]) == 0
        blobs["gen"].append(region.read_bytes())
        blobs["search"].append(trace.read_bytes())
        blobs["best"].append(best.read_bytes())
    for name, (a, b) in blobs.items():
        assert a == b, name


def test_worked_examples():
    pair = full_spectrum(assemble(new_region(1, [(0,), (1,)])))
    square = full_spectrum(assemble(box_region([2, 2])))
    tol = 1e-9

    def close(rec, lhs, rhs):
        assert abs(rec.lhs - lhs) <= tol and abs(rec.rhs - rhs) <= tol and rec.passed

    close(check_ppw(pair, 1), 1.0, 4.0)
    close(check_hp(pair, 1), 0.5, 0.125)
    close(check_yang1(pair, 1), 0.5, 2.0)
    close(check_yang1(square, 3), 0.5, 3.0)
    close(check_yang2(pair, 1), 1.5, 4.5)
    close(check_yang2(square, 1), 1.0, 2.5)
    close(check_variance(square, 3), 1 / 18, 5 / 3)
    assert abs(alt_weights(pair, 1).A - 5 * (1 + math.sqrt(0.8))) <= tol
    rs = recursion_state(pair, 1, B=2.0)
    assert abs(rs.F_k - 1.0) <= tol and abs(rs.F_next - 3.75) <= tol
