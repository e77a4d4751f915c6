"""Where does the clamped beam keep the sign of its load?

We look at  u'''' + a u''' + lam u'' = f  on (-1, 1) with u = u' = 0 at both
ends.  A negative load should give a negative deflection.  On the grid this
holds exactly when every entry of the discrete Green matrix is positive.

Run:  python3 demos/beam_sign_region.py
"""
import math

import numpy as np

from clampedsign import Verdict, region_map, theorem_lambda_max

# First, the line a = 0.  The compressive load lam u'' softens the beam, and
# at lam = pi^2 the clamped beam buckles.  Positivity should hold right up to
# there and break just after.
print("a = 0, n = 128")
rows = region_map((0.0, 0.0), (9.0, 10.5), 16, 128)
for r in rows:
    print(f"  lam = {r.lam:6.3f}   min G / max G = {r.min_green:+.3e}   {r.verdict}")
print(f"  (pi^2 = {math.pi ** 2:.4f})\n")

# The factorization argument guarantees positivity for lam < (a^2 + pi^2)/4.
# Sweep a coarse lattice reaching well past that curve and count what we find.
cells = region_map((-3.0, 3.0), lambda a: (-10.0, 3.0 * theorem_lambda_max(a)), 13, 96)
inside = [c for c in cells if c.in_theorem_region]
outside = [c for c in cells if not c.in_theorem_region]
print(f"{len(inside)} cells inside the guaranteed region, "
      f"{sum(c.verdict is Verdict.VIOLATED for c in inside)} violated")
print(f"{len(outside)} cells beyond it, "
      f"{sum(c.verdict is Verdict.SIGN_PRESERVING for c in outside)} still sign preserving")

# For each a, report the largest lattice lambda that still preserves sign.
print("\n   a    (a^2+pi^2)/4   largest preserving lam on the lattice")
for a in np.unique([c.a for c in cells]):
    col = [c for c in cells if c.a == a and c.verdict is Verdict.SIGN_PRESERVING]
    print(f"{a:+5.1f}   {theorem_lambda_max(a):10.3f}   {max(c.lam for c in col):10.3f}")
