"""
Jungck iteration on a piecewise pair
====================================

f(x) = x/3 on [0, 2] and 2x - 3/2 beyond, g(x) = x/2, on [0, inf).
alpha is 1 on [0, 1]^2 and 0 elsewhere, psi(t) = 4t/5.
"""
import numpy as np

from alphapsi import (
    BoxAlpha,
    ComparisonFunction,
    IntervalSpace,
    MappingPair,
    check_alpha_admissible_wrt_g,
    check_contractive,
    check_g_range_closed,
    check_range_inclusion,
    jungck_iterate,
    parse_map,
    sample_pairs,
    verify_cauchy_certificate,
)

space = IntervalSpace(0.0, np.inf)
pair = MappingPair(space, parse_map("piecewise 2 : scale 1/3 | affine 2 -1.5"), parse_map("scale 1/2"))
alpha = BoxAlpha(0.0, 1.0)
psi = ComparisonFunction.linear(0.8)

# hypotheses, on a grid over [0, 3]^2 plus seeded random pairs
pairs = sample_pairs(space, box=(0.0, 3.0), seed=0)
for res in (
    check_contractive(pair, alpha, psi, pairs),
    check_alpha_admissible_wrt_g(pair, alpha, pairs),
    check_range_inclusion(pair, box=(0.0, 3.0)),
    check_g_range_closed(pair),
):
    print(res.line())

# the iteration: g x_{n+1} = f x_n, i.e. x_{n+1} = 2 x_n / 3 from x0 = 1
trace = jungck_iterate(pair, alpha, psi, 1.0)
print(trace.outcome.value, "after", trace.iterations, "steps, z =", trace.coincidence)
print("f(z) - g(z) =", pair.f(trace.coincidence) - pair.g(trace.coincidence))

# every later f-value stays within the psi tail of the current one
print(verify_cauchy_certificate(trace, psi).line())
for n, x, gx, fx, step, a, cert in list(trace.rows())[:5]:
    print(f"n={n:2d} x={x:.6f} fx={fx:.6f} tail bound={cert:.6f}")

# f(X) = [0, 2/3] u (5/2, inf) is not closed; g(X) = [0, inf) is
print("f(X) =", pair.f.image(0, np.inf), " g(X) =", pair.g.image(0, np.inf))
