"""
Admissible, but only with respect to g
======================================

f(x) = 1/x and g(x) = exp(-x) on [1, inf); alpha = 2 when x > y, else 1/3.
f reverses order, so it is not alpha-admissible on its own, but g reverses
order too, and alpha(gx, gy) >= 1 already forces alpha(fx, fy) >= 1.
"""
import numpy as np

from alphapsi import (
    IntervalSpace,
    MappingPair,
    ThresholdAlpha,
    check_alpha_admissible,
    check_alpha_admissible_wrt_g,
    parse_map,
    sample_pairs,
)

pair = MappingPair(IntervalSpace(1.0, np.inf), parse_map("reciprocal"), parse_map("exp_decay"))
alpha = ThresholdAlpha(2.0, 1.0 / 3.0)
pairs = sample_pairs(pair.space, box=(1.0, 100.0), step=0, n_random=10_000, seed=0)

plain = check_alpha_admissible(pair.f, alpha, pairs)
print(plain.line())
x, y = plain.witness
print(f"alpha({x:.3f}, {y:.3f}) = {alpha(x, y)},  alpha(f x, f y) = {alpha(pair.f(x), pair.f(y)):.3f}")

# the textbook witness
print(check_alpha_admissible(pair.f, alpha, (np.array([2.0]), np.array([1.0]))).line())

print(check_alpha_admissible_wrt_g(pair, alpha, pairs).line())
