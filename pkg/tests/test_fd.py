import numpy as np
import pytest

from clampedsign import (
    FourthOrderCoeffs,
    Grid,
    InvalidInput,
    Profile,
    assemble_1d,
    assemble_radial,
    boundary_second_derivatives,
    clamped_operator,
    green_matrix,
    solve,
)
from clampedsign.banded import BandedMatrix
from oracles import dense_fourth_order


def beam(n, a=0.0, lam=0.0):
    g = Grid.interval(n)
    return assemble_1d(FourthOrderCoeffs.constant(1.0, a, lam, 0.0, 0.0, n), g), g


def test_first_row_carries_the_ghost_reflection():
    m, g = beam(4)
    assert m.diagonal()[0] * g.h ** 4 == pytest.approx(7.0, rel=1e-14)
    assert m.diagonal()[-1] * g.h ** 4 == pytest.approx(7.0, rel=1e-14)
    assert m.diagonal()[1] * g.h ** 4 == pytest.approx(6.0, rel=1e-14)


@pytest.mark.parametrize("a,lam", [(0.0, 0.0), (1.5, -2.0), (-2.0, 4.0)])
def test_assembly_matches_the_dense_oracle(a, lam):
    n = 12
    m, g = beam(n, a, lam)
    ref = dense_fourth_order(*(np.full(n, v) for v in (1.0, a, lam, 0.0, 0.0)), g.h)
    np.testing.assert_allclose(m.to_dense(), ref, rtol=1e-13, atol=1e-13 * np.abs(ref).max())


def test_variable_coefficients_match_the_dense_oracle():
    n = 10
    g = Grid.interval(n)
    x = g.nodes
    co = (2 + x, np.sin(x), -x ** 2, np.cos(x), 0.5 * x)
    m = assemble_1d(FourthOrderCoeffs(*co), g)
    ref = dense_fourth_order(*co, g.h)
    np.testing.assert_allclose(m.to_dense(), ref, rtol=1e-13, atol=1e-13 * np.abs(ref).max())


def test_too_few_nodes():
    with pytest.raises(InvalidInput):
        beam(3)


def test_quartic_on_the_interval():
    errs = []
    for n in (32, 64, 128):
        m, g = beam(n)
        u = solve(m, Profile.constant(g, -24.0))
        errs.append(np.max(np.abs(u.values + (1 - g.nodes ** 2) ** 2)))
    assert all(3.6 <= e0 / e1 <= 4.4 for e0, e1 in zip(errs, errs[1:]))


@pytest.mark.parametrize("d,load", [(2, -64.0), (3, -120.0)])
def test_quartic_on_the_ball(d, load):
    errs = []
    for n in (32, 64, 128, 256):
        g = Grid.ball(n, d)
        u = solve(assemble_radial(1.0, 0.0, g), Profile.constant(g, load))
        errs.append(np.max(np.abs(u.values + (1 - g.nodes ** 2) ** 2)))
    assert all(3.6 <= e0 / e1 <= 4.4 for e0, e1 in zip(errs, errs[1:]))


def test_zero_load_gives_zero():
    m, g = beam(20)
    assert np.all(solve(m, Profile.constant(g, 0.0)).values == 0.0)


def test_ball_of_dimension_one_is_the_beam():
    g = Grid.interval(16)
    radial = assemble_radial(2.0, 3.0, g).to_dense()
    direct = assemble_1d(FourthOrderCoeffs.constant(2.0, 0.0, -3.0, 0.0, 0.0, g.n), g).to_dense()
    np.testing.assert_allclose(radial, direct, rtol=1e-14, atol=1e-14 * np.abs(direct).max())


def test_annulus_with_coarse_grid_near_origin_rejected():
    with pytest.raises(InvalidInput):
        assemble_radial(1.0, 0.0, Grid.annulus(4, 0.01))


def test_solve_residual_bound():
    for g in (Grid.interval(64), Grid.ball(64, 2), Grid.annulus(64, 0.3)):
        m = clamped_operator(1.0, 1.0, g)
        f = np.cos(3 * g.nodes) - 2
        u = m.solve(f)
        res = np.max(np.abs(m @ u - f))
        assert res <= 1e-10 * (m.norm_inf() * np.max(np.abs(u)) + np.max(np.abs(f)))


def test_linearity():
    m, g = beam(50, 1.0, 2.0)
    f1, f2 = np.sin(g.nodes), g.nodes ** 2 - 1
    u = m.solve(2.5 * f1 - 0.5 * f2)
    ref = 2.5 * m.solve(f1) - 0.5 * m.solve(f2)
    assert np.max(np.abs(u - ref)) <= 1e-10 * np.max(np.abs(ref))


def test_green_matrix_reproduces_solutions():
    for g in (Grid.interval(40), Grid.ball(40, 2), Grid.annulus(40, 0.3)):
        m = clamped_operator(1.0, 0.5, g)
        G = green_matrix(m, g)
        f = np.exp(g.nodes) - 3
        u = m.solve(f)
        assert np.max(np.abs(G @ (g.h * f) - u)) <= 1e-9 * np.max(np.abs(u))


def test_green_matrix_of_self_adjoint_beam_is_symmetric():
    m, g = beam(60, 0.0, 5.0)
    G = green_matrix(m, g)
    assert np.max(np.abs(G - G.T)) <= 1e-8 * np.max(np.abs(G))


def test_boggio_positivity():
    m, g = beam(64)
    assert np.min(green_matrix(m, g)) > 0


def test_green_matrix_of_a_single_node():
    m = BandedMatrix.from_dense(np.array([[4.0]]), 2, 2)
    g = Grid.interval(1)
    G = green_matrix(m, g)
    assert G.shape == (1, 1)
    assert G[0, 0] == pytest.approx(1.0 / (4.0 * g.h))


def test_boundary_second_derivatives_of_the_quartic():
    errs = []
    for n in (64, 128, 256):
        m, g = beam(n)
        u = solve(m, Profile.constant(g, -24.0))
        left, right = boundary_second_derivatives(u)
        assert left == pytest.approx(right, rel=1e-9)
        errs.append(abs(left + 8.0))
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_ball_boundary_second_derivative():
    errs = []
    for n in (64, 128, 256):
        g = Grid.ball(n, 2)
        u = solve(assemble_radial(1.0, 0.0, g), Profile.constant(g, -64.0))
        origin, wall = boundary_second_derivatives(u)
        assert np.isnan(origin)
        errs.append(abs(wall + 8.0))
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_profiles_in_and_out():
    m, g = beam(8)
    with pytest.raises(InvalidInput):
        solve(m, Profile.constant(Grid.interval(9), 1.0))
    assert isinstance(solve(m, Profile.constant(g, 1.0)), Profile)
    assert isinstance(solve(m, np.ones(8)), np.ndarray)
