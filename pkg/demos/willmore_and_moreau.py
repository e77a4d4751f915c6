"""Two nonlinear companions of the clamped beam.

1. A Willmore-type graph equation
       B (u''/w^a)'' + a B (u' u''^2 / w^(a+1))' - T (u'/sqrt(w))' = f,  w = 1 + u'^2,
   solved by damped Newton.  For a downward load the graph stays below the axis.

2. The Moreau split of a profile into a non-negative part and a part from the
   polar cone, orthogonal in the energy  B int u''v'' + T int u'v'.  Because the
   clamped operator preserves sign, the polar part is never positive.

Run:  python3 demos/willmore_and_moreau.py
"""
import numpy as np

from clampedsign import (
    EnergyInnerProduct,
    Grid,
    NumericalFailure,
    Profile,
    WillmoreProblem,
    euler_substitution_residual,
    project_cone,
    willmore_solve,
)

g = Grid.interval(128)
print("Willmore graph, alpha = 5/2, B = 1, T = 1")
print("The Euler-form column is a consistency check; it shrinks like h^2.")
print("   load     min u       max u      Euler-form residual")
# Continue in the load, starting each Newton solve from the previous graph.
# The deflection grows faster and faster: near load -7.4 the branch folds and
# past it Newton finds no graph solution at all.
u = None
for load in (-1e-3, -1.0, -3.0, -5.0, -7.0, -7.3, -7.4, -7.6):
    p = WillmoreProblem(1.0, 1.0, 2.5, Profile.constant(g, load))
    try:
        u = willmore_solve(p, tol=1e-7, start=u)
    except NumericalFailure as exc:
        print(f"{load:8.3f}  no solution: {exc}")
        break
    print(f"{load:8.3f}  {u.values.min():+.5f}  {u.values.max():+.2e}  "
          f"{np.abs(euler_substitution_residual(u, p)).max():.2e}")

print("\nMoreau split of (1 - x^2)^2 sin(3x) in the energy of B = 1, T = 1")
ip = EnergyInnerProduct(1.0, 1.0, g)
u = Profile.from_function(g, lambda x: (1 - x ** 2) ** 2 * np.sin(3 * x))
s = project_cone(u, ip)
print(f"  min v = {s.v.values.min():.2e}, max w = {s.w.values.max():.2e}, <v, w> = {s.gap:.2e}")
print(f"  |u|^2 = {ip(u, u):.5f} = |v|^2 + |w|^2 = {ip(s.v, s.v) + ip(s.w, s.w):.5f}")
print(f"  active nodes: {len(s.active)} of {g.n}, active-set steps: {s.iterations}")
