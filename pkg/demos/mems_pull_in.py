"""Pull-in of an electrostatically actuated plate.

The deflection solves  B Delta^2 u - T Delta u = -lam / (1 + u)^2  with clamped
edges.  Starting from u = 0 and solving the linear problem with the previous
iterate on the right gives a decreasing sequence, as long as the linear
operator preserves sign.  Beyond a critical voltage lam* the sequence leaves
(-1, 1), meaning the plate touches the ground plate.

Run:  python3 demos/mems_pull_in.py
"""
from clampedsign import Grid, SemilinearProblem, branch_sweep, lambda_star_bound, lambda_star_bracket

for d in (1, 2):
    tpl = SemilinearProblem(bigB=1.0, bigT=1.0, grid=Grid.ball(128, d))
    lo, hi = lambda_star_bracket(tpl, lambda_hi0=1.0, tol_lambda=1e-5)
    bound = lambda_star_bound(tpl)
    print(f"d = {d}: lam* in [{lo:.5f}, {hi:.5f}], eigenvalue bound {bound:.4f}")
    lams = [f * lo for f in (0.2, 0.4, 0.6, 0.8, 0.95, 0.999)] + [1.01 * hi]
    print("      lam      converged  iterations    min u    below previous")
    for p in branch_sweep(tpl, lams):
        print(f"  {p.lam:9.5f}   {str(p.converged):5}   {p.iterations:8d}   {p.min_u:+.5f}   {p.ordered}")
    print()

# The iteration slows down near lam*: the linearization there has an
# eigenvalue approaching one, which the iteration counts above make visible.
