import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_spectra.errors import EmptyRegionError, ShapeError
from lattice_spectra.operator import (
    LatticeFunction,
    apply,
    assemble,
    dirichlet_energy,
    dumps_coo,
    gamma,
    green_residual,
    weighted_inner,
)
from lattice_spectra.region import Region, box_region, new_region, random_connected_region

from conftest import two_vertex


def stencil(region, values):
    """f(x) - (1/2n) sum of f over in-region lattice neighbours, by dictionary lookup."""
    f = dict(zip(region.points, values))
    out = []
    for p in region.points:
        s = 0.0
        for a in range(region.n):
            for step in (-1, 1):
                q = p[:a] + (p[a] + step,) + p[a + 1 :]
                s += f.get(q, 0.0)
        out.append(f[p] - s / (2 * region.n))
    return np.array(out)


def test_assemble_two_vertex():
    for n in (1, 2, 3):
        m = assemble(two_vertex(n)).dense()
        off = -1 / (2 * n)
        np.testing.assert_array_equal(m, [[1, off], [off, 1]])


def test_assemble_single_and_path():
    assert assemble(new_region(2, [(0, 0)])).dense().tolist() == [[1.0]]
    m = assemble(box_region([3])).dense()
    np.testing.assert_array_equal(m, [[1, -0.5, 0], [-0.5, 1, -0.5], [0, -0.5, 1]])


def test_assemble_empty():
    with pytest.raises(EmptyRegionError):
        assemble(Region(2, ()))


@pytest.mark.parametrize("region", [box_region([3, 4]), random_connected_region(3, 40, 2)], ids=["box", "random"])
def test_operator_invariants(region):
    m = assemble(region).dense()
    n = region.n
    assert np.array_equal(m, m.T)
    assert np.all(np.diag(m) == 1.0)
    off = m[~np.eye(region.N, dtype=bool)]
    assert set(np.unique(off)) <= {0.0, -1 / (2 * n)}
    # Gershgorin discs lie inside [0, 2]
    radius = np.abs(m).sum(axis=1) - 1
    assert np.all(1 - radius >= 0) and np.all(1 + radius <= 2)


def test_apply_examples():
    r = two_vertex(1)
    op = assemble(r)
    f = LatticeFunction(r, np.array([1.0, 1.0]) / 2)
    np.testing.assert_allclose(apply(op, f).values, 0.5 * f.values, atol=1e-15)
    assert np.all(apply(op, LatticeFunction(r, np.zeros(2))).values == 0)
    np.testing.assert_array_equal(apply(op, LatticeFunction(r, [1.0, 0.0])).values, [1.0, -0.5])


def test_apply_region_mismatch():
    op = assemble(two_vertex(1))
    with pytest.raises(ShapeError):
        apply(op, LatticeFunction(box_region([3]), np.ones(3)))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 3), size=st.integers(1, 40), seed=st.integers(0, 10**6))
def test_apply_matches_stencil_and_is_self_adjoint(n, size, seed):
    region = random_connected_region(n, size, seed)
    op = assemble(region)
    rng = np.random.default_rng(seed)
    f = LatticeFunction(region, rng.standard_normal(region.N))
    g = LatticeFunction(region, rng.standard_normal(region.N))
    direct = stencil(region, f.values)
    np.testing.assert_allclose(apply(op, f).values, direct, rtol=1e-14, atol=1e-14 * np.abs(direct).max())
    lhs = weighted_inner(apply(op, f), g)
    rhs = weighted_inner(f, apply(op, g))
    scale = np.linalg.norm(f.values) * np.linalg.norm(g.values)
    assert abs(lhs - rhs) <= 1e-12 * scale
    # <-Delta f, f> equals the Gamma energy summed over Omega and its boundary
    energy = dirichlet_energy(region, f)
    assert abs(weighted_inner(apply(op, f), f) - energy) <= 1e-12 * max(1.0, abs(energy))
    assert abs(green_residual(region, f, g)) <= 1e-12 * max(1.0, scale * 2 * n)


def test_weighted_inner_examples():
    r1 = two_vertex(1)
    assert weighted_inner(LatticeFunction(r1, [1, 0]), LatticeFunction(r1, [1, 0])) == 2
    r2 = two_vertex(2)
    assert weighted_inner(LatticeFunction(r2, [1, 1]), LatticeFunction(r2, [1, -1])) == 0
    u = LatticeFunction(r1, np.array([1.0, 1.0]) / 2)
    assert weighted_inner(u, u) == pytest.approx(1.0, abs=1e-15)


def test_gamma_interior_coordinate():
    # interior of a 5x5 box, g = x_1: two unit differences along axis 1
    r = box_region([5, 5])
    g = LatticeFunction(r, r.coords()[:, 0].astype(float))
    centre = r.index[(3, 3)]
    assert gamma(r, g, g).values[centre] == pytest.approx(1 / 4, abs=1e-15)


def test_gamma_two_vertex_and_zero():
    r = two_vertex(1)
    f = LatticeFunction(r, [1.0, 0.0])
    assert gamma(r, f, f).values[0] == pytest.approx(0.5, abs=1e-15)
    z = LatticeFunction(r, [0.0, 0.0])
    assert np.all(gamma(r, z, z).values == 0)


def test_gamma_matches_definition_via_laplacian():
    # Gamma(f,g) = 1/2 (Delta(fg) - f Delta g - g Delta f) on Omega
    region = random_connected_region(2, 30, 3)
    rng = np.random.default_rng(0)
    f, g = rng.standard_normal(region.N), rng.standard_normal(region.N)
    lap = lambda v: -stencil(region, v)  # noqa: E731
    expected = 0.5 * (lap(f * g) - f * lap(g) - g * lap(f))
    got = gamma(region, LatticeFunction(region, f), LatticeFunction(region, g)).values
    np.testing.assert_allclose(got, expected, atol=1e-14)


def test_green_examples():
    for n in (1, 2, 3):
        r = new_region(n, [(0,) * n])
        one = LatticeFunction(r, [1.0])
        assert green_residual(r, one, one) == pytest.approx(0.0, abs=1e-15)
    r = box_region([3])
    zero = LatticeFunction(r, np.zeros(3))
    assert green_residual(r, zero, zero) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=4))
def test_elementary_pair_identity(vals):
    fx, fy, gx, gy = vals
    lhs = fx * gx + fy * gy
    rhs = 0.5 * ((fx + fy) * (gx + gy) + (fy - fx) * (gy - gx))
    assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(fx) + abs(fy)) * max(1.0, abs(gx) + abs(gy))


def test_coo_dump():
    text = dumps_coo(assemble(two_vertex(1)))
    assert text.splitlines() == ["0 0 1.0", "0 1 -0.5", "1 0 -0.5", "1 1 1.0"]
