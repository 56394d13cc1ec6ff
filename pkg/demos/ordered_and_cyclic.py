"""
Partial orders and cyclic maps as alpha functions
=================================================

A partial order gives alpha = 1 on comparable pairs; a two-set cyclic cover
gives alpha = 1 across the g-images of the two sets.
"""
from alphapsi import (
    ComparisonFunction,
    CyclicPartition,
    IntervalSpace,
    MappingPair,
    PartialOrder,
    TableMap,
    alpha_from_cyclic,
    alpha_from_order,
    check_cyclic_conditions,
    check_g_nondecreasing,
    jungck_iterate,
    line_space,
    parse_map,
    run_theorem_suite,
)

# diamond: bottom < left, right < top; left and right are incomparable
order = PartialOrder.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
alpha = alpha_from_order(order)
print(alpha.matrix)

space = line_space([0, 5, 5.5, 6], labels=["bottom", "left", "right", "top"])
pair = MappingPair(space, TableMap([1, 3, 3, 3]), TableMap([0, 1, 2, 3]))
print(check_g_nondecreasing(pair, order).line())
print(run_theorem_suite(pair, alpha, ComparisonFunction.linear(0.5)).summary())

# f(x) = -x/4 sends [-1, 0] into [0, 1] and back
cyc = MappingPair(IntervalSpace(-1, 1), parse_map("scale -1/4"), parse_map("identity"))
part = CyclicPartition.interval((-1, 0), (0, 1))
psi = ComparisonFunction.linear(0.25)
res = check_cyclic_conditions(cyc, part, psi)
for sub in res.details.values():
    print(sub.line())
trace = jungck_iterate(cyc, alpha_from_cyclic(part, cyc.g), psi, 1.0)
print("z =", trace.coincidence, "in both parts:", bool(part.in_a1(0.0) and part.in_a2(0.0)))
