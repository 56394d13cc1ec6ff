"""
Classical contractions as special cases
=======================================

Each classical inequality bounds d(fx, fy) by a multiple of M(gx, gy):
Banach and Ciric with their own lambda, Kannan and Chatterjea with 2 lambda,
Hardy-Rogers with A + 2B + 2C.
"""
import numpy as np

from alphapsi import CorollaryConfig, IntervalSpace, MappingPair, parse_map, reduce_corollary, sample_pairs

space = IntervalSpace(-5, 5)
pair = MappingPair(space, parse_map("scale 0.2"), parse_map("identity"))
pairs = sample_pairs(space, step=0, n_random=10_000, seed=6)

for cfg in (
    CorollaryConfig.banach(0.5),
    CorollaryConfig.kannan(0.3),
    CorollaryConfig.chatterjea(0.3),
    CorollaryConfig.ciric(0.9),
    CorollaryConfig.hardy_rogers(0.2, 0.1, 0.1),
):
    red = reduce_corollary(cfg)
    gap = np.max(red.dominance_gap(pair, pairs))
    print(f"{cfg.kind:12s} lambda_eff={red.psi.lam:<4} direct={red.check_direct(pair, pairs).passed!s:5} "
          f"generalized={red.check_generalized(pair, pairs).passed!s:5} max gap={gap:.2e}")
