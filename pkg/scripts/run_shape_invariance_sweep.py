"""Sweep random in-class constants through every superpotential family and
report the worst shape-invariance residual per family."""

import numpy as np

from liesys import SuperpotentialFamily, shape_invariance_residual

rng = np.random.default_rng(0)
GRIDS = {
    1: np.linspace(0.3, 6.0, 2001),
    0: np.linspace(0.3, 3.0, 2001),
    -1: np.linspace(0.05, 0.4, 2001),   # clear of the trig-class poles
}

def draw_A(sign):
    # negative classes keep A in [0, 0.1] so the trig poles stay past the grid
    return rng.uniform(0.0, 0.1) if sign < 0 else rng.uniform(-0.2, 0.2)


print(f"{'family':34s}{'worst residual':>16s}")
for kind in ("linear_in_m", "inverse_m"):
    for a in (1.7, 0.0, -1.3):
        worst = 0.0
        for _ in range(200):
            fam = SuperpotentialFamily(
                kind, a=a, b=rng.uniform(-1, 1), A=draw_A(np.sign(a)),
                B=rng.uniform(1.2, 3.0), D=rng.uniform(-1, 1), q=rng.uniform(0.5, 2))
            m = rng.uniform(1.5, 3.5)
            worst = max(worst, shape_invariance_residual(fam, m, GRIDS[np.sign(a)]))
        print(f"{kind + f' (a={a:+.1f})':34s}{worst:16.3e}")

for n in (2, 3, 4):
    worst = 0.0
    for _ in range(200):
        sign = rng.choice([-1.0, 1.0])
        cs = tuple(sign * rng.uniform(0.2, 1.0, n))
        fam = SuperpotentialFamily(
            "nparam_linear", cs=cs, c0=rng.uniform(-0.5, 0.5),
            A=draw_A(sign), B=rng.uniform(1.2, 3.0), D=rng.uniform(-1, 1))
        m = tuple(rng.uniform(1.5, 3.0, n))
        worst = max(worst, shape_invariance_residual(fam, m, GRIDS[int(sign)]))
    print(f"{f'nparam_linear (n={n})':34s}{worst:16.3e}")
