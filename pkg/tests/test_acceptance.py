"""Acceptance gate: one PASS/FAIL line per criterion.

Each ``criterion_k`` returns ``(ok, detail)``.  Under pytest the lines are
collected into the terminal summary; run this file directly to print them
without pytest.  Tolerances here are fixed and must not be loosened.
"""
import math

import numpy as np
import pytest

from clampedsign import (
    EnergyInnerProduct,
    FourthOrderCoeffs,
    Grid,
    Profile,
    SecondOrderCoeffs,
    SemilinearProblem,
    Verdict,
    WillmoreProblem,
    assemble_1d,
    assemble_radial,
    auto_factor,
    boundary_second_derivatives,
    branch_sweep,
    check_sign_preserving,
    clamped_operator,
    compose,
    euler_substitution_residual,
    factor_anti_diffusive,
    gamma_structure,
    green_matrix,
    lambda_star_bound,
    lambda_star_bracket,
    mems_g,
    principal_eigenpair,
    project_cone,
    region_map,
    solve,
    theorem_lambda_max,
    willmore_solve,
)
from clampedsign.operators import weight
from clampedsign.semilinear import willmore_residual
from oracles import clamped_beam_root, exhaustive_projection

RESULTS = {}


def _ratios(errs):
    return [e0 / e1 for e0, e1 in zip(errs, errs[1:])]


def criterion_1():
    """Quartic exactness and second-order convergence."""
    cases = [("interval", lambda n: Grid.interval(n), -24.0),
             ("ball d=2", lambda n: Grid.ball(n, 2), -64.0),
             ("ball d=3", lambda n: Grid.ball(n, 3), -120.0)]
    parts, ok = [], True
    for name, make, load in cases:
        errs = []
        for n in (32, 64, 128, 256):
            g = make(n)
            u = solve(assemble_radial(1.0, 0.0, g), Profile.constant(g, load))
            errs.append(float(np.max(np.abs(u.values + (1 - g.nodes ** 2) ** 2))))
        r = _ratios(errs)
        ok &= all(3.6 <= x <= 4.4 for x in r)
        parts.append(f"{name} ratios " + "/".join(f"{x:.3f}" for x in r))
    return ok, "; ".join(parts)


def criterion_2():
    """Anti-diffusive factorization composes back to (1, a, lam, 0, 0)."""
    g = Grid.interval(128)
    worst_rt = worst_ode = 0.0
    for a in (-2.0, 0.0, 2.0):
        lam = 0.9 * theorem_lambda_max(a)
        c = compose(factor_anti_diffusive(a, lam, g), g)
        worst_rt = max(worst_rt, float(np.max(np.abs(c.as_array() - [1.0, a, lam, 0.0, 0.0]))))
        p, dp, ddp, _ = weight(a, lam, g.nodes)
        worst_ode = max(worst_ode, float(np.max(np.abs(ddp + a * dp + lam * p) / np.maximum(np.abs(p), 1.0))))
    ok = worst_rt <= 1e-8 and worst_ode <= 1e-9
    return ok, f"max round-trip error {worst_rt:.2e} (<=1e-8), max ODE residual {worst_ode:.2e} (<=1e-9)"


def criterion_3():
    """No violated cell inside the theorem region on a 21 x 21 lattice."""
    cells = region_map((-3.0, 3.0), lambda a: (-10.0, 0.98 * theorem_lambda_max(a)), 21, 128)
    bad = [c for c in cells if c.verdict is not Verdict.SIGN_PRESERVING]
    worst = min(c.min_green for c in cells)
    return not bad, f"{len(cells)} cells, {len(bad)} not SignPreserving, min normalized entry {worst:.3e}"


def criterion_4():
    """f = -1: u < 0, u''(+-1) < 0, single positive arc of gamma with gamma(+-1) < 0."""
    ok, parts = True, []
    for a, lam in ((0.0, 0.0), (2.0, 1.0), (0.0, 9.0)):
        g = Grid.interval(256)
        u = solve(assemble_1d(FourthOrderCoeffs.constant(1.0, a, lam, 0.0, 0.0, g.n), g), Profile.constant(g, -1.0))
        if lam < theorem_lambda_max(a):
            l1 = auto_factor(a, lam, g)
        else:  # no admissible split: inspect gamma = u''
            l1 = SecondOrderCoeffs.constant(1.0, 0.0, 0.0, g.n)
        r = gamma_structure(u, l1)
        upp = boundary_second_derivatives(u)
        this = bool(np.all(u.values < 0) and max(upp) < 0 and r.pattern_valid and r.positive_arcs == 1)
        ok &= this
        parts.append(f"({a:g},{lam:g}): u''(+-1)=({upp[0]:.4f},{upp[1]:.4f}) arc=({r.y0:.4f},{r.y1:.4f})")
    return ok, "; ".join(parts)


def criterion_5():
    """Clamped beam eigenvalue against the characteristic root, and exact scaling."""
    k4 = clamped_beam_root() ** 4
    g = Grid.interval(256)
    e = principal_eigenpair(clamped_operator(1.0, 0.0, g), g)
    s = principal_eigenpair(clamped_operator(3.7, 0.0, g), g)
    rel = abs(e.mu1 - k4) / k4
    scale = abs(s.mu1 / (3.7 * e.mu1) - 1)
    return rel <= 0.005 and scale <= 1e-9, (
        f"mu1={e.mu1:.6f} vs k^4={k4:.6f} (rel {rel:.2e} <= 5e-3); scaling error {scale:.2e} (<=1e-9)")


def criterion_6():
    """MEMS: monotone iterates, decreasing branch, lambda* bracket below the bound."""
    ok, parts = True, []
    for d in (1, 2):
        g = Grid.ball(128, d)
        tpl = SemilinearProblem(1.0, 1.0, g)
        m = clamped_operator(1.0, 1.0, g)
        # node-wise monotone iterates at lambda = 0.4
        u, rise = np.zeros(g.n), -math.inf
        for _ in range(200):
            new = m.solve(-0.4 * mems_g(u))
            rise = max(rise, float(np.max(new - u)))
            if np.max(np.abs(new - u)) < 1e-13:
                break
            u = new
        p1, p2 = branch_sweep(tpl, [0.2, 0.4])
        lo, hi = lambda_star_bracket(tpl, 1.0, 1e-4)
        bound = lambda_star_bound(tpl)
        this = (rise <= 1e-12 and p1.converged and p2.converged and p2.ordered
                and max(p1.max_increase, p2.max_increase) <= 1e-12
                and hi - lo <= 1e-4 and hi <= bound + 1e-6)
        ok &= bool(this)
        parts.append(f"d={d}: max rise {rise:.1e}, bracket [{lo:.5f},{hi:.5f}] <= bound {bound:.4f}")
    return ok, "; ".join(parts)


def criterion_7():
    """Willmore: Newton residual, linearization, negativity, Euler form."""
    g = Grid.interval(128)
    eps = 1e-4
    p = WillmoreProblem(1.0, 0.0, 2.5, Profile.constant(g, -eps))
    u = willmore_solve(p, tol=1e-10)
    res = float(np.max(np.abs(willmore_residual(u.values, p))))
    lin = float(np.max(np.abs(u.values + eps / 24 * (1 - g.nodes ** 2) ** 2)))
    euler = float(np.max(np.abs(euler_substitution_residual(u, p))))
    # order of the Euler form at a load where the nonlinearity is visible
    errs = []
    for n in (64, 128, 256):
        gn = Grid.interval(n)
        pn = WillmoreProblem(1.0, 0.0, 2.5, Profile.constant(gn, -5.0))
        errs.append(float(np.max(np.abs(euler_substitution_residual(willmore_solve(pn, tol=1e-7), pn)))))
    ratio = errs[1] / errs[2]
    ok = (res < 1e-10 and lin <= 1e-6 and np.all(u.values < 0)
          and euler <= g.h ** 2 * eps and 3.0 <= ratio <= 5.0)
    return ok, (f"residual {res:.1e}, |u - linear| {lin:.1e}, Euler residual {euler:.1e}, "
                f"Euler O(h^2) ratio {ratio:.2f} at f=-5")


def criterion_8():
    """Moreau split: exhaustive oracle at n=8 and invariants at n=128."""
    rng = np.random.default_rng(2024)
    g8 = Grid.interval(8)
    ip8 = EnergyInnerProduct(1.0, 1.0, g8)
    matches = 0
    for _ in range(20):
        u = rng.normal(size=8)
        s = project_cone(Profile(g8, u), ip8)
        found = exhaustive_projection(ip8.gram, u)
        if len(found) == 1 and found[0][1] == s.active and np.allclose(s.v.values, found[0][0], rtol=0, atol=1e-12):
            matches += 1
    g = Grid.interval(128)
    ip = EnergyInnerProduct(1.0, 1.0, g)
    worst_v, worst_w, worst_gap = 0.0, -math.inf, 0.0
    for _ in range(5):
        u = Profile(g, np.cumsum(rng.normal(size=g.n)) * np.sin(np.pi * (g.nodes + 1) / 2))
        s = project_cone(u, ip)
        worst_v = min(worst_v, float(s.v.values.min()))
        worst_w = max(worst_w, float(s.w.values.max()))
        worst_gap = max(worst_gap, abs(s.gap) / ip(u, u))
    ok = matches == 20 and worst_v >= -1e-10 and worst_w <= 1e-10 and worst_gap <= 1e-8
    return ok, f"{matches}/20 oracle matches; min v {worst_v:.1e}, max w {worst_w:.1e}, gap/|u|^2 {worst_gap:.1e}"


def criterion_9():
    """Annulus: negative solution, clamped at both radii, positive Green matrix."""
    g = Grid.annulus(128, 0.3, 2)
    m = clamped_operator(1.0, 1.0, g)
    u = solve(m, Profile.constant(g, -1.0))
    G = green_matrix(m, g)
    normalized = float(G.min() / np.abs(G).max())
    # clamped traces: the solution and its one-sided slope vanish at both radii
    h = g.h
    v = u.values
    slopes = ((4 * v[0] - v[1]) / (2 * h), (4 * v[-1] - v[-2]) / (2 * h))
    scale = np.max(np.abs(v)) / (1 - 0.3)
    rep = check_sign_preserving(m, g)
    ok = (np.all(v < 0) and normalized >= -1e-8 and rep.verdict is Verdict.SIGN_PRESERVING
          and max(abs(x) for x in slopes) <= 0.05 * scale)
    return ok, (f"max u {v.max():.2e} < 0, min G/max G {normalized:.2e}, "
                f"wall slopes ({slopes[0]:.1e},{slopes[1]:.1e}) vs scale {scale:.1e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(k, ok, detail):
    return f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k):
    try:
        ok, detail = CRITERIA[k - 1]()
    except Exception as exc:  # a crash is a failure of the criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    RESULTS[k] = _line(k, ok, detail)
    print(RESULTS[k])
    assert ok, RESULTS[k]


if __name__ == "__main__":
    for k, crit in enumerate(CRITERIA, 1):
        print(_line(k, *crit()))
