"""
Exhaustive checks on finite spaces
==================================

On a finite space every hypothesis is a finite statement. The oracle decides
all of them, then compares the theorems' conclusions with a table scan.
"""
from collections import Counter

from alphapsi import (
    ComparisonFunction,
    ConstantAlpha,
    MappingPair,
    TableMap,
    falsification_search,
    line_space,
    run_theorem_suite,
)

# a Banach-type pair: four points on the line, everything pulled onto point 2
space = line_space([0, 1, 1.5, 2.5])
pair = MappingPair(space, TableMap([1, 2, 2, 2]), TableMap([0, 1, 2, 3]))
report = run_theorem_suite(pair, ConstantAlpha(1), ComparisonFunction.linear(0.5))
print(report.summary())

# a permutation preserves distances and so cannot be contractive
perm = MappingPair(line_space([0, 1, 2]), TableMap([1, 2, 0]), TableMap([0, 1, 2]))
print(run_theorem_suite(perm, ConstantAlpha(1), ComparisonFunction.linear(0.9)).failed)

# random configurations; a CONTRADICTION would be a counterexample to the theorems
reports = falsification_search(seed=42, trials=1000, space_size_max=6)
print(Counter(r.verdict.value for r in reports))
passing = [r for r in reports if r.existence_hypotheses_hold]
print(len(passing), "configurations satisfy the coincidence-theorem hypotheses;",
      "all have coincidence points:", all(r.coincidence_points for r in passing))
