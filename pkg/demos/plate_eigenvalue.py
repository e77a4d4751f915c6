"""Principal eigenvalue of the clamped plate  B Delta^2 phi - T Delta phi = mu phi.

For the clamped disc (d = 2, B = 1, T = 0) the exact value is k^4 with k the
first root of  J0(k) I1(k) + I0(k) J1(k) = 0.  The radial discretization uses
a staggered grid that never puts a node at the origin.

Run:  python3 demos/plate_eigenvalue.py
"""
from scipy.optimize import brentq
from scipy.special import i0, i1, j0, j1

from clampedsign import Grid, clamped_operator, principal_eigenpair

k = brentq(lambda k: j0(k) * i1(k) + i0(k) * j1(k), 2.5, 3.5, xtol=1e-15)
exact = k ** 4
print(f"clamped disc: k = {k:.12f}, mu1 = k^4 = {exact:.8f}\n")
print("   n        mu1           error     ratio   iterations")
prev = None
for n in (16, 32, 64, 128, 256):
    g = Grid.ball(n, 2)
    e = principal_eigenpair(clamped_operator(1.0, 0.0, g), g)
    err = abs(e.mu1 - exact)
    ratio = f"{prev / err:6.2f}" if prev else "      "
    print(f"{n:4d}  {e.mu1:14.8f}  {err:10.3e}  {ratio}   {e.iterations}")
    prev = err

# Tension raises the eigenvalue; the eigenfunction stays positive and radially
# decreasing throughout.
print("\nd = 3, n = 128")
g = Grid.ball(128, 3)
for T in (0.0, 1.0, 10.0, 100.0):
    e = principal_eigenpair(clamped_operator(1.0, T, g), g)
    phi = e.phi1.values
    print(f"  T = {T:6.1f}   mu1 = {e.mu1:12.5f}   min phi = {phi.min():.2e}   "
          f"decreasing: {bool((phi[1:] < phi[:-1]).all())}")
