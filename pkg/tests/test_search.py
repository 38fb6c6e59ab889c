import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_spectra import search
from lattice_spectra.errors import DomainError, KRangeError, StuckError
from lattice_spectra.region import box_region, is_connected, new_region, path_region, random_connected_region
from lattice_spectra.rng import SplitMix64
from lattice_spectra.search import (
    SENTINEL,
    SearchConfig,
    anneal,
    enumerate_planar_regions,
    exhaustive_minimum,
    family_member,
    propose_move,
    slack_objective,
    sweep_family,
)

from conftest import two_vertex

# fixed polyomino counts, OEIS A001168
POLYOMINO_COUNTS = [1, 2, 6, 19, 63, 216, 760, 2725]


def test_slack_objective_examples():
    assert slack_objective(two_vertex(1), "ppw", 1) == pytest.approx(3.0, abs=1e-12)
    assert slack_objective(box_region([2, 2]), "yang1", 3) == pytest.approx(2.5, abs=1e-12)
    # lambda_3 = lambda_2 on the square: hp lhs is infinite
    assert slack_objective(box_region([2, 2]), "hp", 2) == SENTINEL


def test_slack_objective_vacuous_is_sentinel():
    # lambda_2 = 1 on the square, so ratio_bound at k=2 is vacuous
    assert slack_objective(box_region([2, 2]), "ratio_bound", 2) == SENTINEL


def test_slack_objective_errors():
    with pytest.raises(KRangeError):
        slack_objective(two_vertex(1), "ppw", 2)
    with pytest.raises(DomainError):
        slack_objective(two_vertex(1), "nope", 1)


def test_sentinel_orders_after_finite():
    assert SENTINEL > 1e299 and SENTINEL < float("inf")


def test_propose_move_pair():
    rng = SplitMix64(0)
    region = path_region(1, 2)
    for _ in range(20):
        region = propose_move(region, rng)
        assert region.N == 2 and is_connected(region)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 3), size=st.integers(2, 30), seed=st.integers(0, 2**64 - 1))
def test_propose_move_properties(n, size, seed):
    region = random_connected_region(n, size, seed)
    a = propose_move(region, SplitMix64(seed))
    b = propose_move(region, SplitMix64(seed))
    assert a == b
    assert a.N == size and a.n == n and is_connected(a)
    assert len(set(a.points) ^ set(region.points)) in (0, 2)


def test_propose_move_stuck():
    with pytest.raises(StuckError):
        propose_move(path_region(2, 5), SplitMix64(1), retries=0)
    with pytest.raises(DomainError):
        propose_move(new_region(2, [(0, 0)]), SplitMix64(1))


def test_config_validation():
    good = dict(n=2, region_size=6, inequality_id="ppw", k=2, steps=5, seed=1)
    SearchConfig(**good).validate()
    for bad in ({"steps": 0}, {"decay": 1.0}, {"decay": 0.0}, {"region_size": 1}, {"inequality_id": "x"}):
        with pytest.raises((DomainError, KRangeError)):
            SearchConfig(**{**good, **bad}).validate()
    with pytest.raises(KRangeError):
        SearchConfig(**{**good, "k": 6}).validate()


def test_anneal_single_step():
    cfg = SearchConfig(n=1, region_size=5, inequality_id="ppw", k=2, steps=1, seed=3)
    trace = anneal(cfg)
    assert len(trace) == 1
    assert trace.best_region == path_region(1, 5)
    assert trace.best_slack == trace.objectives[0] == slack_objective(path_region(1, 5), "ppw", 2)


def test_anneal_deterministic_and_monotone():
    cfg = SearchConfig(n=2, region_size=7, inequality_id="yang1", k=3, steps=60, seed=11)
    t1, t2 = anneal(cfg), anneal(cfg)
    assert t1.objectives == t2.objectives and t1.accepted == t2.accepted
    assert t1.best_region == t2.best_region
    assert len(t1) == 60
    assert all(b2 <= b1 for b1, b2 in zip(t1.best_so_far, t1.best_so_far[1:]))
    accepted = [o for o, ok in zip(t1.objectives, t1.accepted) if ok]
    assert t1.best_slack == min(accepted)
    assert t1.best_slack <= slack_objective(path_region(2, 7), "yang1", 3)
    assert slack_objective(t1.best_region, "yang1", 3) == pytest.approx(t1.best_slack, abs=1e-12)


def test_anneal_evaluates_only_valid_regions(monkeypatch):
    seen = []
    real = search.slack_objective

    def spy(region, ineq, k):
        seen.append(region)
        return real(region, ineq, k)

    monkeypatch.setattr(search, "slack_objective", spy)
    anneal(SearchConfig(n=3, region_size=6, inequality_id="ppw", k=2, steps=40, seed=5))
    assert len(seen) == 40
    assert all(r.N == 6 and r.n == 3 and is_connected(r) for r in seen)


def test_anneal_path_baseline_in_z1():
    # in Z^1 every connected region is a path, so the best equals the start
    cfg = SearchConfig(n=1, region_size=6, inequality_id="ppw", k=3, steps=30, seed=2)
    trace = anneal(cfg)
    assert trace.best_slack == pytest.approx(slack_objective(path_region(1, 6), "ppw", 3), abs=1e-12)


def test_different_seeds_differ():
    base = dict(n=2, region_size=8, inequality_id="ppw", k=3, steps=30)
    a = anneal(SearchConfig(**base, seed=1))
    b = anneal(SearchConfig(**base, seed=2))
    assert a.objectives != b.objectives


@pytest.mark.parametrize("size", range(1, 9))
def test_polyomino_counts(size):
    regions = enumerate_planar_regions(size)
    assert len(regions) == POLYOMINO_COUNTS[size - 1]
    assert len({r.points for r in regions}) == len(regions)
    assert all(r.N == size and is_connected(r) for r in regions)


def test_enumeration_limits():
    with pytest.raises(DomainError):
        enumerate_planar_regions(9)


@pytest.mark.parametrize("ineq, k", [("ppw", 2), ("yang1", 3), ("hp", 1)])
def test_annealer_never_beats_exhaustive(ineq, k):
    best, arg = exhaustive_minimum(6, ineq, k)
    assert is_connected(arg) and arg.N == 6
    trace = anneal(SearchConfig(n=2, region_size=6, inequality_id=ineq, k=k, steps=150, seed=7))
    assert trace.best_slack >= best - 1e-12


def test_family_members():
    assert family_member("boxes", 2, 3)[1] == box_region([3, 3])
    rid, ball = family_member("l1balls", 2, 1)
    assert ball.N == 5 and rid == "l1ball-n2-r1"
    rid, path = family_member("paths", 1, 5)
    assert path.N == 5 and rid == "path-n1-5"
    with pytest.raises(DomainError):
        family_member("stars", 2, 3)


def test_sweep_paths_cardinality():
    rows = sweep_family("paths", 1, range(2, 11))
    assert len({rid for rid, _ in rows}) == 9


def test_sweep_boxes_all_pass():
    rows = sweep_family("boxes", 2, range(2, 6))
    assert rows and all(r.passed for _, r in rows)


def test_sweep_empty_range():
    assert sweep_family("boxes", 2, []) == []


def test_sweep_filter_and_threads():
    one = sweep_family("l1balls", 2, [1, 2, 3], ["ppw", "hp"])
    many = sweep_family("l1balls", 2, [1, 2, 3], ["ppw", "hp"], workers=3)
    assert one == many
    assert {r.inequality_id for _, r in one} == {"ppw", "hp"}
